#include <doctest.h>

#include "adaptsel/controller.hpp"
