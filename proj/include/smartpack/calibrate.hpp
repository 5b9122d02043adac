#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smartpack/params.hpp"

namespace smartpack {

/// One measured value the models must reproduce. `input` carries the model
/// query; an optional "bound": "upper" | "lower" turns the anchor into a
/// one-sided hinge.
struct Anchor {
  std::string model_id;
  nlohmann::json input;
  double observed = 0.0;
  double tolerance = 1.0;
  std::string provenance;
};

using AnchorSet = std::vector<Anchor>;

/// CSV with columns model_id,input_json,observed,tolerance,provenance
/// (RFC 4180 quoting). Throws IoError / ConfigError.
AnchorSet read_anchors_csv(const std::filesystem::path& path);
AnchorSet parse_anchors_csv(std::istream& in, const std::string& source = "<stream>");
AnchorSet select_anchors(const AnchorSet& anchors, std::string_view model_id);

struct ParamSpec {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;
};

using ParamBox = std::vector<ParamSpec>;

/// Evaluates the model output an anchor compares against.
using AnchorModel = std::function<double(std::span<const double> params, const Anchor& anchor)>;

/// Normalized residual (model - observed) / tolerance; zero for a satisfied
/// hinge.
double anchor_residual(double model_value, const Anchor& anchor);

/// Sum of squared normalized residuals. Parameters outside the box return a
/// large finite penalty instead of throwing.
double objective(std::span<const double> params, const AnchorSet& anchors,
                 const AnchorModel& model, const ParamBox& box);

struct FitOptions {
  double diameter_tol = 1e-8;  // in box-normalized coordinates
  int max_iterations = 2000;
};

struct FitResult {
  std::vector<double> params;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> anchor_residuals;
  std::vector<double> model_values;
  std::vector<std::string> at_bound;  // parameters that ended on their box edge
};

/// Nelder-Mead downhill simplex in box-normalized coordinates. Stops when
/// the simplex diameter falls below `diameter_tol` or after
/// `max_iterations`; non-convergence is reported, never thrown.
FitResult fit(const AnchorModel& model, const AnchorSet& anchors, std::vector<double> init,
              const ParamBox& box, FitOptions options = {});

/// Exhaustive search over a `resolution`-per-axis grid spanning the box
/// (endpoints included). Dimension above 4 throws Unsupported.
FitResult grid_oracle(const AnchorModel& model, const AnchorSet& anchors, const ParamBox& box,
                      int resolution);

/// A bundled calibration problem: which anchors, which parameters, and how
/// the fitted vector is written back into ModelParams.
struct CalibrationProblem {
  std::string model_id;
  ParamBox box;
  std::vector<double> init;
  AnchorModel model;
  std::function<void(ModelParams&, std::span<const double>)> apply;
};

/// Model ids in dependency order: sensor -> rf link -> thermal -> release ->
/// spoilage. Each is fitted with everything upstream frozen.
const std::vector<std::string>& calibration_order();

/// Builds a problem against the current upstream parameters. The returned
/// model captures a copy of `upstream`.
CalibrationProblem make_problem(std::string_view model_id, const ModelParams& upstream);

/// Installs "table:*" anchors (environment shift knots, electrode
/// resistance, coupling factors) into the RF model.
void apply_table_anchors(const AnchorSet& anchors, RfLinkModel& rf);

struct CalibrationStage {
  std::string model_id;
  FitResult result;
  AnchorSet anchors;
};

struct CalibrationReport {
  ModelParams params;
  std::vector<CalibrationStage> stages;
};

/// Runs every bundled problem in order. `base` supplies the parameters no
/// anchor constrains (heater resistance, time constant, ...).
CalibrationReport calibrate_all(const AnchorSet& anchors, const ModelParams& base);

void write_residual_report(std::ostream& out, const CalibrationReport& report);

}  // namespace smartpack
