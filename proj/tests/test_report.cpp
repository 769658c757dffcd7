#include <doctest.h>

#include "adaptsel/report.hpp"
