#include <doctest.h>

#include "adaptsel/metrics.hpp"
