#include <doctest.h>

#include "adaptsel/config.hpp"
