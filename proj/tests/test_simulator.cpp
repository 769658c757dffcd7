#include <doctest.h>

#include "adaptsel/simulator.hpp"
