#include <doctest.h>

#include "adaptsel/bandit.hpp"
