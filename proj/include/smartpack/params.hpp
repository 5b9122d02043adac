#pragma once

#include <string>

#include "smartpack/release.hpp"
#include "smartpack/rf_link.hpp"
#include "smartpack/sensor.hpp"
#include "smartpack/spoilage.hpp"
#include "smartpack/thermal.hpp"

namespace smartpack {

struct DeviceParams {
  SensorModel sensor;
  RfLinkModel rf;
  ThermalParams thermal;
  ReleaseParams release;
};

/// Everything the calibration produces; the base layer of every scenario.
struct ModelParams {
  SpoilageParams food;
  DeviceParams device;
};

/// Calibrated values fitted to the bundled anchor set (see
/// calibration/params.json, which `smartpack calibrate` regenerates).
ModelParams builtin_params();

/// Position of the device in the validation package.
inline const std::string kValidationPosition = "validation_box@5";
inline const std::string kOptimalPosition = "inner_edge@5";

}  // namespace smartpack
