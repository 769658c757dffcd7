#include <doctest.h>

#include "adaptsel/select.hpp"
