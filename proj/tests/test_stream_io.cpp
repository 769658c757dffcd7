#include <doctest.h>

#include "adaptsel/stream_io.hpp"
