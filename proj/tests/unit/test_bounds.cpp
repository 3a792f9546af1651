#include "doctest.h"

#include <cmath>
#include <limits>

#include "dualiv/bounds.hpp"
#include "dualiv/error.hpp"
#include "dualiv/simulation.hpp"
#include "support/fixtures.hpp"

using namespace dualiv;
using doctest::Approx;

TEST_CASE("bounds are centred on the point estimate") {
  const Sample s = testing::e1_y_equals_d();
  const LateComponents fit = late_estimate(s);
  // zbar = 5/8: half width = 0.4 * 3/8 + 0.8 * 5/8 = 0.65
  const BoundsResult b = late_bounds(fit, {0.4, 0.8});
  CHECK(b.center == Approx(fit.late));
  CHECK(b.half_width == Approx(0.65));
  CHECK(b.lower == Approx(fit.late - 0.65));
  CHECK(b.upper == Approx(fit.late + 0.65));

  const BoundsResult via_sample = late_bounds(s, {0.4, 0.8});
  CHECK(via_sample.lower == b.lower);
  CHECK(via_sample.upper == b.upper);
}

TEST_CASE("zero caps collapse to the point estimate") {
  const Sample s = testing::random_sample(4, 1000);
  const LateComponents fit = late_estimate(s);
  const BoundsResult b = late_bounds(fit, {});
  CHECK(b.lower == fit.late);
  CHECK(b.upper == fit.late);
  CHECK(b.half_width == 0.0);
}

TEST_CASE("width grows linearly in each cap") {
  const Sample s = testing::random_sample(6, 1000);
  const LateComponents fit = late_estimate(s);
  const double w1 = late_bounds(fit, {1.0, 0.0}).half_width;
  const double w0 = late_bounds(fit, {0.0, 1.0}).half_width;
  CHECK(w1 == Approx(1.0 - fit.z_bar));
  CHECK(w0 == Approx(fit.z_bar));
  CHECK(late_bounds(fit, {2.5, 3.0}).half_width == Approx(2.5 * w1 + 3.0 * w0));
}

TEST_CASE("negative or non-finite caps are rejected") {
  const Sample s = testing::e1_y_equals_d();
  const LateComponents fit = late_estimate(s);
  const double inf = std::numeric_limits<double>::infinity();
  for (const HeterogeneityCaps caps :
       {HeterogeneityCaps{-0.1, 0.0}, HeterogeneityCaps{0.0, -1.0},
        HeterogeneityCaps{std::nan(""), 0.0}, HeterogeneityCaps{0.0, inf}}) {
    try {
      late_bounds(fit, caps);
      FAIL("expected NegativeCap");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NegativeCap);
      CHECK(exit_status(e.category()) == 4);
    }
  }
}

TEST_CASE("equal caps give a half width independent of zbar") {
  SimConfig c;
  c.n = 4000;
  const LateComponents fit = late_estimate(generate_sample(c, 0));
  CHECK(late_bounds(fit, {0.2, 0.2}).half_width == Approx(0.2).epsilon(1e-14));
}

TEST_CASE("intervals nest in the caps") {
  const Sample s = testing::random_sample(10, 1000);
  const LateComponents fit = late_estimate(s);
  const HeterogeneityCaps caps[] = {{0.0, 0.0}, {0.1, 0.0}, {0.1, 0.3}, {0.5, 0.3}, {0.5, 2.0}};
  for (std::size_t i = 1; i < std::size(caps); ++i) {
    const BoundsResult inner = late_bounds(fit, caps[i - 1]);
    const BoundsResult outer = late_bounds(fit, caps[i]);
    CHECK(outer.lower <= inner.lower);
    CHECK(outer.upper >= inner.upper);
    CHECK(inner.lower <= inner.center);
    CHECK(inner.center <= inner.upper);
  }
}

TEST_CASE("the lower endpoint is attained when compliers carry an extra direct effect") {
  // Compliers get direct effect rho + k on the treated outcome, always-takers
  // rho. Then the true LATE equals the centre minus k * P(Z=0) in the limit.
  SimConfig c;
  c.n = 1000000;
  c.rho1 = c.rho0 = 1.0;
  c.complier_shift1 = 0.5;
  c.seed = 8;
  double lower = 0.0;
  const int reps = 8;
  for (int r = 0; r < reps; ++r) {
    const LateComponents fit = late_estimate(generate_sample(c, r));
    lower += late_bounds(fit, {c.complier_shift1, 0.0}).lower / reps;
  }
  CHECK(std::abs(lower - true_late(c)) < 0.02);
  // The centre itself misses by k * P(Z=0).
  const double center = lower + 0.5 * (1 - c.p_z);
  CHECK(std::abs(center - true_late(c) - 0.5 * (1 - c.p_z)) < 0.02);
}
