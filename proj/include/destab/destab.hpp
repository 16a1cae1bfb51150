#pragma once

#include "destab/errors.hpp"
#include "destab/rational.hpp"
#include "destab/matrix.hpp"
#include "destab/group.hpp"
#include "destab/polynomial.hpp"
#include "destab/representation.hpp"
#include "destab/rparabolic.hpp"
#include "destab/convex.hpp"
#include "destab/parallel.hpp"
#include "destab/instability.hpp"
#include "destab/gcr.hpp"

namespace destab {

inline constexpr const char* version = "0.1.0";

}  // namespace destab
