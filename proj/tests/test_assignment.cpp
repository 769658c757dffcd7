#include <doctest.h>

#include "adaptsel/assignment.hpp"
