#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dualiv {

// Observations (Y, D, Z, W): outcome, treatment, the instrument allowed to
// violate exclusion, and the instrument allowed to violate monotonicity.
// Immutable once constructed; construction validates every invariant.
class Sample {
 public:
  // Throws Error{LengthMismatch | NonBinary | NonFinite | Empty}.
  static Sample validate(std::vector<double> y, std::vector<int> d,
                         std::vector<int> z, std::vector<int> w);

  std::size_t size() const noexcept { return y_.size(); }

  std::span<const double> y() const noexcept { return y_; }
  std::span<const std::uint8_t> d() const noexcept { return d_; }
  std::span<const std::uint8_t> z() const noexcept { return z_; }
  std::span<const std::uint8_t> w() const noexcept { return w_; }

  // Rows with W == w_value, in original order. The result may be invalid
  // (empty), in which case Error{Empty} is thrown.
  Sample restrict_to_w(int w_value) const;

  // Rows at the given indices (with repetition), for resampling.
  Sample take(std::span<const std::size_t> rows) const;

  // Same design with every outcome replaced by f(y).
  template <typename F>
  Sample map_outcome(F&& f) const {
    Sample out = *this;
    for (double& v : out.y_) v = f(v);
    out.check_finite();
    return out;
  }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  Sample() = default;
  void check_finite() const;

  std::vector<double> y_;
  std::vector<std::uint8_t> d_;
  std::vector<std::uint8_t> z_;
  std::vector<std::uint8_t> w_;
};

// Contingency counts indexed [z][w].
struct CellCounts {
  std::array<std::array<std::size_t, 2>, 2> count{};
  std::array<std::array<std::size_t, 2>, 2> treated_count{};

  std::size_t total() const noexcept;
  std::size_t total_treated() const noexcept;
};

CellCounts cell_counts(const Sample& sample) noexcept;

}  // namespace dualiv
