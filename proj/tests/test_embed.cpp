#include <doctest.h>

#include "adaptsel/embed.hpp"
