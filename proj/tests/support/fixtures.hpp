#pragma once

// Fixtures and independent oracles shared by the test binaries. Nothing here
// calls into the estimators; the oracles use textbook formulas and their own
// random number generation.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dualiv/sample.hpp"

namespace dualiv::testing {

// Eight rows (z, w, d) populating every cell needed by the W=1 estimands:
// (0,1,1) (0,1,0) (1,1,1) (1,1,1) (1,1,1) (1,1,0) (1,0,1) (0,0,0).
inline constexpr int kE1[8][3] = {{0, 1, 1}, {0, 1, 0}, {1, 1, 1}, {1, 1, 1},
                                  {1, 1, 1}, {1, 1, 0}, {1, 0, 1}, {0, 0, 0}};

inline Sample e1_sample(const std::vector<double>& y) {
  std::vector<int> d, z, w;
  for (const auto& row : kE1) {
    z.push_back(row[0]);
    w.push_back(row[1]);
    d.push_back(row[2]);
  }
  return Sample::validate(y, d, z, w);
}

// E1 with y = d.
inline Sample e1_y_equals_d() {
  std::vector<double> y;
  for (const auto& row : kE1) y.push_back(row[2]);
  return e1_sample(y);
}

// Generic heterogeneous population for property tests: cell-specific
// treatment rates drawn per sample, outcomes with a Z-dependent shift and
// heavy-ish noise. Uses std distributions, not the library's sampler.
inline Sample random_sample(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double rate[2][2];
  for (auto& r : rate) {
    for (double& v : r) v = 0.05 + 0.9 * unif(gen);
  }
  const double pz = 0.2 + 0.6 * unif(gen);
  const double pw = 0.2 + 0.6 * unif(gen);
  const double shift = 4.0 * unif(gen) - 2.0;
  std::vector<double> y(n);
  std::vector<int> d(n), z(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Force every cell to be populated by cycling the first four rows.
    z[i] = i < 4 ? static_cast<int>(i & 1) : (unif(gen) < pz);
    w[i] = i < 4 ? static_cast<int>(i >> 1) : (unif(gen) < pw);
    d[i] = unif(gen) < rate[z[i]][w[i]];
    y[i] = 3.0 * gauss(gen) + 1.5 * d[i] + shift * z[i] + 0.7 * w[i] * d[i];
  }
  return Sample::validate(y, d, z, w);
}

// erf by its Maclaurin series in long double; accurate to ~1e-18 for |x| <= 3.
inline double series_erf(double xd) {
  const long double x = xd;
  long double term = x;  // x^(2k+1) (-1)^k / k!
  long double sum = x;
  for (int k = 1; k < 200; ++k) {
    term *= -x * x / k;
    const long double add = term / (2 * k + 1);
    sum += add;
    if (std::fabs(static_cast<double>(add)) < 1e-22) break;
  }
  return static_cast<double>(sum * 2.0L / std::sqrt(3.14159265358979323846264338327950288L));
}

inline double oracle_cdf(double x) { return 0.5 * (1.0 + series_erf(x / std::sqrt(2.0))); }

inline double oracle_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

// Type shares and P(W=1 | type) of the threshold design with lower threshold l:
// AT = {eps <= l}, CP = {l < eps <= 1}, NT = {eps > 1}; W = 1{v <= D1 + D0}.
struct TypeOracle {
  double at, cp, nt;
  double w_at, w_cp, w_nt;

  explicit TypeOracle(double lower)
      : at(oracle_cdf(lower)),
        cp(oracle_cdf(1.0) - oracle_cdf(lower)),
        nt(1.0 - oracle_cdf(1.0)),
        w_at(oracle_cdf(2.0)),
        w_cp(oracle_cdf(1.0)),
        w_nt(oracle_cdf(0.0)) {}

  // P(type | W = w) by Bayes' rule.
  double given_w(double share, double w_share, int w) const {
    const double pw1 = at * w_at + cp * w_cp + nt * w_nt;
    return w == 1 ? share * w_share / pw1 : share * (1.0 - w_share) / (1.0 - pw1);
  }
  double at_given(int w) const { return given_w(at, w_at, w); }
  double cp_given(int w) const { return given_w(cp, w_cp, w); }
  double nt_given(int w) const { return given_w(nt, w_nt, w); }
};

}  // namespace dualiv::testing
