#pragma once

#include <map>
#include <optional>
#include <string>

#include "stagflow/harness.hpp"

namespace stagflow {
namespace harness {

/// Flat sectioned key=value text (# starts a comment). Recognized entries:
///   [case]   preset, final_time, dt, snapshots, nx, ny, steady_tol
///   [scheme] type (upwind|centered|muscl), xi_plus, xi_minus, nu,
///            mass_type, energy_type, correction (on|off)
///   [model]  mu, time_stepping (forward_euler|heun)
/// Unknown sections or keys are rejected.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

ConfigMap parse_config_file(const std::string& path);

/// Scalar overrides shared by the config file and the CLI flags (the flags
/// win). A preset name must come from either source.
struct Overrides {
    std::optional<std::string> scheme;
    std::optional<double> xi_plus, xi_minus, nu, dt, final_time;
    std::optional<int> snapshots, nx, ny;
};

Case load_case(const std::optional<std::string>& config_path,
               const std::optional<std::string>& preset, const Overrides& cli);

ConvectionScheme parse_scheme(const std::string& s);

} // namespace harness
} // namespace stagflow
