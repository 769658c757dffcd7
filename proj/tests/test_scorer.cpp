#include <doctest.h>

#include "adaptsel/scorer.hpp"
