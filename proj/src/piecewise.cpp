#include "smartpack/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smartpack/errors.hpp"

namespace smartpack {

namespace detail {
void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidInput(std::string(what) + " must be finite");
  }
}
}  // namespace detail

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  std::sort(knots_.begin(), knots_.end());
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].first == knots_[i - 1].first) {
      throw InvalidInput("piecewise table has duplicate knot x = " + std::to_string(knots_[i].first));
    }
  }
}

double PiecewiseLinear::operator()(double x) const {
  if (knots_.empty()) return 0.0;
  if (x <= knots_.front().first) return knots_.front().second;
  if (x >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const auto& k) { return v < k.first; });
  auto lo = hi - 1;
  if (x == lo->first) return lo->second;
  const double w = (x - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

bool PiecewiseLinear::in_range(double x) const {
  return knots_.empty() || (x >= knots_.front().first && x <= knots_.back().first);
}

double PiecewiseLinear::x_min() const { return knots_.empty() ? 0.0 : knots_.front().first; }
double PiecewiseLinear::x_max() const { return knots_.empty() ? 0.0 : knots_.back().first; }

}  // namespace smartpack
