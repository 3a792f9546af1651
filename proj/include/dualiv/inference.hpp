#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dualiv/estimators.hpp"
#include "dualiv/sample.hpp"

namespace dualiv {

// Per-observation influence functions, each of length n and with sample
// mean zero up to rounding. phi_iv belongs to the single-instrument Wald
// ratio and is the usual delta-method linearization.
struct InfluenceSet {
  std::vector<double> phi_iv1;
  std::vector<double> phi_w1;
  std::vector<double> phi_w0;
  std::vector<double> phi_rho1;
  std::vector<double> phi_rho0;
  std::vector<double> phi_late;
  std::vector<double> phi_iv;

  std::size_t size() const noexcept { return phi_late.size(); }
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct InferenceResult {
  double level = 0.95;
  double se_late = 0.0;
  double se_rho1 = 0.0;
  double se_rho0 = 0.0;
  double se_iv1 = 0.0;
  double se_iv = 0.0;
  Interval ci_late;
  Interval ci_rho1;
  Interval ci_rho0;
  Interval ci_iv1;
  Interval ci_iv;
};

// `fit` must come from late_estimate on the same sample. Throws WeakRelevance
// if a denominator of the linearization is not above `relevance_tol`.
InfluenceSet influence_set(const Sample& sample, const LateComponents& fit,
                           double relevance_tol = kDefaultRelevanceTol);

// Standard deviation with 1/n normalization, divided by sqrt(n).
double influence_standard_error(std::span<const double> phi);

// Throws InvalidLevel unless 0 < level < 1.
InferenceResult standard_errors(const InfluenceSet& influences, const LateComponents& fit,
                                double level = 0.95);

inline InferenceResult infer(const Sample& sample, const LateComponents& fit,
                             double level = 0.95) {
  return standard_errors(influence_set(sample, fit), fit, level);
}

}  // namespace dualiv
