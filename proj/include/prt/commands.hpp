#pragma once

#include "prt/envlight.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace prt {

inline constexpr const char *kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitUsage = 2 };

/// Parses argv-style arguments (without the program name) and runs the
/// selected subcommand. Never throws; failures map to the exit-code contract.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Yaw, pitch, roll in degrees from "y,p,r" or "yaw=..,pitch=..,roll=..".
Vec3 parse_rotation(const std::string &s);

/// Light from a light text file, a Radiance/PFM map or a procedural name.
/// Maps are projected at `degree` and normalized to `target`.
LightCoeffs load_light_source(const std::string &source, ShDegree degree, double target);

/// Rebuilds the argument list stored in a manifest.
std::vector<std::string> manifest_args(const nlohmann::json &manifest);

}  // namespace prt
