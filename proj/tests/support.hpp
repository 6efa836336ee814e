#pragma once

#include "umbra/random.hpp"

namespace umbra::testing {

using umbra::Rng;

}  // namespace umbra::testing
