#pragma once

#include "dualiv/estimators.hpp"
#include "dualiv/sample.hpp"

namespace dualiv {

// Caps on how far the compliers' direct effects may differ from those of
// always takers (k1, treated outcome) and never takers (k0, untreated outcome).
struct HeterogeneityCaps {
  double k1 = 0.0;
  double k0 = 0.0;
};

struct BoundsResult {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
  double half_width = 0.0;
};

// Sharp interval for the LATE: center +/- (k1 * P(Z=0) + k0 * P(Z=1)), with
// the center equal to the point estimate obtained under homogeneous direct
// effects and P(Z=z) replaced by sample shares. Throws NegativeCap.
BoundsResult late_bounds(const LateComponents& fit, const HeterogeneityCaps& caps);
BoundsResult late_bounds(const Sample& sample, const HeterogeneityCaps& caps,
                         const EstimatorOptions& options = {});

}  // namespace dualiv
