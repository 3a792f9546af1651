#include "dualiv/bounds.hpp"

#include <cmath>
#include <sstream>

#include "dualiv/error.hpp"

namespace dualiv {
namespace {

void check_caps(const HeterogeneityCaps& caps) {
  if (!(caps.k1 >= 0.0) || !(caps.k0 >= 0.0) || !std::isfinite(caps.k1) ||
      !std::isfinite(caps.k0)) {
    std::ostringstream msg;
    msg << "heterogeneity caps must be finite and non-negative, got k1=" << caps.k1
        << " k0=" << caps.k0;
    throw Error(ErrorCode::NegativeCap, msg.str());
  }
}

}  // namespace

BoundsResult late_bounds(const LateComponents& fit, const HeterogeneityCaps& caps) {
  check_caps(caps);
  BoundsResult b;
  b.center = fit.late;
  b.half_width = caps.k1 * (1.0 - fit.z_bar) + caps.k0 * fit.z_bar;
  b.lower = b.center - b.half_width;
  b.upper = b.center + b.half_width;
  return b;
}

BoundsResult late_bounds(const Sample& sample, const HeterogeneityCaps& caps,
                         const EstimatorOptions& options) {
  check_caps(caps);
  return late_bounds(late_estimate(sample, options), caps);
}

}  // namespace dualiv
