#include "smartpack/release.hpp"

#include <algorithm>
#include <string>

#include "smartpack/errors.hpp"

namespace smartpack {

using detail::require_finite;

void CompoundParams::validate(const char* which) const {
  const std::string name(which);
  require_finite(total_load, "total_load");
  require_finite(rate_constant, "rate_constant");
  require_finite(headspace_yield, "headspace_yield");
  require_finite(headspace_loss, "headspace_loss");
  if (!(total_load > 0.0)) throw InvalidInput(name + ": total_load must be > 0");
  if (!(rate_constant > 0.0)) throw InvalidInput(name + ": rate_constant must be > 0");
  if (headspace_yield < 0.0 || headspace_loss < 0.0) {
    throw InvalidInput(name + ": headspace yield and loss must be >= 0");
  }
}

void ReleaseParams::validate() const {
  require_finite(lcst_c, "lcst_c");
  ca.validate("ca");
  eg.validate("eg");
}

ReleaseState ReleaseState::loaded(const ReleaseParams& params) {
  ReleaseState s;
  s.ca.remaining = params.ca.total_load;
  s.eg.remaining = params.eg.total_load;
  return s;
}

bool gate_open(double mat_temp_c, const ReleaseParams& params) {
  require_finite(mat_temp_c, "mat temperature");
  return mat_temp_c >= params.lcst_c;
}

namespace {

CompoundState advance(CompoundState s, bool gate, double dt_h, const CompoundParams& p) {
  const double loss = p.headspace_loss * dt_h * s.headspace_ppm;
  if (!gate) {
    s.headspace_ppm = std::max(0.0, s.headspace_ppm - loss);
    return s;
  }
  const double delta = std::min(s.remaining, p.rate_constant * dt_h * s.remaining);
  s.remaining -= delta;
  s.released += delta;
  s.headspace_ppm =
      std::max(0.0, s.headspace_ppm + p.headspace_yield * delta / p.total_load - loss);
  return s;
}

}  // namespace

ReleaseState step_release(const ReleaseState& state, bool gate, double dt_h,
                          const ReleaseParams& params) {
  require_finite(dt_h, "dt");
  if (dt_h <= 0.0) throw InvalidInput("dt must be > 0");
  ReleaseState next;
  next.ca = advance(state.ca, gate, dt_h, params.ca);
  next.eg = advance(state.eg, gate, dt_h, params.eg);
  next.gate_open = gate;
  return next;
}

std::pair<double, double> headspace_concentrations(const ReleaseState& state) {
  return {state.ca.headspace_ppm, state.eg.headspace_ppm};
}

}  // namespace smartpack
