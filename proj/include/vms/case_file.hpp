#pragma once

#include "vms/cases.hpp"

#include <filesystem>
#include <istream>

namespace vms {

/// Reads an ini-style case description:
///
///   [case]      name, viscosity | reynolds, body_force, convection, dt, steps
///   [mesh]      box = 2|3 with divisions = n or nx,ny[,nz]; or file, format
///   [bc TAG]    kind = dirichlet_velocity | traction | pressure_pin,
///               value = comma-separated expressions over x, y, z, t,
///               point = x,y[,z] (pressure_pin only; otherwise pins on TAG)
///   [centerline] axis = x|y|z, through = x,y,z, samples
///
/// Relative mesh paths resolve against `base_dir`. Throws ConfigError.
[[nodiscard]] CaseDefinition parse_case_file(std::istream& in, const std::filesystem::path& base_dir = {});
[[nodiscard]] CaseDefinition load_case_file(const std::filesystem::path& path);

}  // namespace vms
