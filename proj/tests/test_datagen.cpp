#include <doctest.h>

#include "adaptsel/datagen.hpp"
