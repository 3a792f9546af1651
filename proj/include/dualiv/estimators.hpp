#pragma once

#include <array>
#include <cstddef>

#include "dualiv/sample.hpp"

namespace dualiv {

inline constexpr double kDefaultRelevanceTol = 1e-6;

// Which W cell the conditional IV, the weights and the complier means use.
// The W0 variant is the mirror image of the W1 formulas and is meant for
// samples where the complier share given W=1 is weak.
enum class ConditionOn { W1, W0 };

constexpr int conditioning_value(ConditionOn c) noexcept { return c == ConditionOn::W1 ? 1 : 0; }

struct EstimatorOptions {
  double relevance_tol = kDefaultRelevanceTol;
  ConditionOn condition_on = ConditionOn::W1;
};

// Compensated per-cell sums, indexed [z][w]. Every estimator in this library
// is a function of these twenty numbers.
struct CellMoments {
  std::array<std::array<double, 2>, 2> count{};
  std::array<std::array<double, 2>, 2> treated{};
  std::array<std::array<double, 2>, 2> sum_y{};
  std::array<std::array<double, 2>, 2> sum_y_treated{};    // sum of Y*D
  std::array<std::array<double, 2>, 2> sum_y_untreated{};  // sum of Y*(1-D)
  double n = 0.0;

  // Throws EmptyCell if cell (z, w) has no observations.
  void require_cell(int z, int w) const;
};

CellMoments cell_moments(const Sample& sample);

// Conditional subgroup shares given W = w. p_cp may be negative in finite
// samples (a symptom of a monotonicity failure); that is not an error.
struct SubgroupProbs {
  double p_at = 0.0;
  double p_nt = 0.0;
  double p_cp = 0.0;
  int w = 1;
};

struct DirectEffects {
  double rho1 = 0.0;  // direct effect of Z on the treated outcome
  double rho0 = 0.0;  // direct effect of Z on the untreated outcome
};

struct LateWeights {
  double w1 = 0.0;
  double w0 = 0.0;
};

// Complier means of the outcome at (D, Z) = (1, 1) and (0, 0).
struct ComplierMeans {
  double treated = 0.0;
  double untreated = 0.0;
};

// Magnitudes compared against the relevance threshold, kept for diagnostics.
struct Denominators {
  double iv = 0.0;          // E[D|Z=1] - E[D|Z=0]
  double iv_cond = 0.0;     // same contrast within the conditioning cell
  double at_cross = 0.0;    // AT(1)CP(0) - AT(0)CP(1)
  double nt_cross = 0.0;    // NT(1)CP(0) - NT(0)CP(1)
};

struct LateComponents {
  double iv = 0.0;
  double iv1 = 0.0;  // conditional IV in the conditioning cell
  DirectEffects rho;
  double w1 = 0.0;
  double w0 = 0.0;
  double late = 0.0;
  SubgroupProbs probs_w1;
  SubgroupProbs probs_w0;
  double z_bar = 0.0;
  std::array<double, 2> r1{};  // indexed by w
  std::array<double, 2> r0{};  // indexed by w
  ConditionOn condition_on = ConditionOn::W1;
  Denominators denominators;
  std::size_t n = 0;

  const SubgroupProbs& probs(int w) const noexcept { return w == 1 ? probs_w1 : probs_w0; }
  const SubgroupProbs& conditioning_probs() const noexcept {
    return probs(conditioning_value(condition_on));
  }
};

SubgroupProbs subgroup_probs(const CellMoments& m, int w);
SubgroupProbs subgroup_probs(const Sample& sample, int w);

// Wald ratio over the whole sample.
double iv_estimand(const CellMoments& m, double relevance_tol = kDefaultRelevanceTol);
double iv_estimand(const Sample& sample, double relevance_tol = kDefaultRelevanceTol);

// Wald ratio within W = w, in product-moment form.
double conditional_iv_estimand(const CellMoments& m, int w,
                               double relevance_tol = kDefaultRelevanceTol);
double iv1_estimand(const Sample& sample, double relevance_tol = kDefaultRelevanceTol);

// d = 1: E[YD|Z=1,w] - E[YD|Z=0,w];  d = 0: the same contrast of Y(1-D).
double r_moment(const CellMoments& m, int d, int w);
double r_moment(const Sample& sample, int d, int w);

// Throws WeakRelevance with component "at" or "nt" naming the failing denominator.
DirectEffects direct_effects(const CellMoments& m, double relevance_tol = kDefaultRelevanceTol);
DirectEffects direct_effects(const Sample& sample, double relevance_tol = kDefaultRelevanceTol);

LateWeights late_weights(const CellMoments& m, const EstimatorOptions& options = {});
LateWeights late_weights(const Sample& sample, const EstimatorOptions& options = {});

// The corrected LATE: iv1 - rho1 * w1 - rho0 * w0.
LateComponents late_estimate(const CellMoments& m, const EstimatorOptions& options = {});
LateComponents late_estimate(const Sample& sample, const EstimatorOptions& options = {});

ComplierMeans complier_means(const LateComponents& fit,
                             double relevance_tol = kDefaultRelevanceTol);

}  // namespace dualiv
