#pragma once

namespace dualiv::normal {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double pdf(double x) noexcept;
double cdf(double x) noexcept;

// Inverse of cdf on (0, 1). Returns -inf / +inf at 0 / 1 and NaN outside.
double quantile(double p) noexcept;

// Two-sided critical value: quantile(1 - (1 - level) / 2).
double critical_value(double level) noexcept;

// E[X | lo < X < hi] for standard normal X; NaN when the interval has no mass.
double truncated_mean(double lo, double hi) noexcept;

}  // namespace dualiv::normal
