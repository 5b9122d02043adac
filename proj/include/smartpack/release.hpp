#pragma once

#include <utility>

namespace smartpack {

enum class Compound { CA, EG };

struct CompoundParams {
  double total_load = 1.0;     // normalized mass
  double rate_constant = 0.0;  // 1/h while the gate is open
  double headspace_yield = 0.0;  // ppm per unit of released fraction
  double headspace_loss = 0.0;   // 1/h

  void validate(const char* which) const;
};

struct ReleaseParams {
  double lcst_c = 32.0;
  CompoundParams ca;
  CompoundParams eg;

  void validate() const;
  const CompoundParams& operator[](Compound c) const { return c == Compound::CA ? ca : eg; }
};

/// Released and remaining mass are tracked separately so that a closed gate
/// never touches either of them.
struct CompoundState {
  double released = 0.0;
  double remaining = 1.0;
  double headspace_ppm = 0.0;

  double released_fraction(double total_load) const { return released / total_load; }
};

struct ReleaseState {
  CompoundState ca;
  CompoundState eg;
  bool gate_open = false;

  static ReleaseState loaded(const ReleaseParams& params);
};

/// PNIPAM gate: open at and above the LCST, no hysteresis.
bool gate_open(double mat_temp_c, const ReleaseParams& params);

/// Advances release and headspace by `dt_h` hours. With the gate closed the
/// released/remaining masses are returned bit-identical; headspace still
/// decays.
ReleaseState step_release(const ReleaseState& state, bool gate, double dt_h,
                          const ReleaseParams& params);

/// (CA ppm, EG ppm).
std::pair<double, double> headspace_concentrations(const ReleaseState& state);

}  // namespace smartpack
