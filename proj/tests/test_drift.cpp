#include <doctest.h>

#include "adaptsel/drift.hpp"
