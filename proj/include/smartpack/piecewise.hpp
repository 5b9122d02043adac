#pragma once

#include <utility>
#include <vector>

namespace smartpack {

/// Piecewise-linear map through sorted (x, y) knots. Outside the knot range
/// the end values are held; `in_range` tells callers when that happened.
class PiecewiseLinear {
public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;
  bool in_range(double x) const;
  bool empty() const noexcept { return knots_.empty(); }
  double x_min() const;
  double x_max() const;
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

private:
  std::vector<std::pair<double, double>> knots_;
};

}  // namespace smartpack
