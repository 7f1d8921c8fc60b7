#pragma once

#include "vms/cases.hpp"
#include "vms/solver.hpp"

namespace vms {

struct TangentCheck {
    double max_relative_error = 0.0;
    Index worst_element = -1;
    std::string worst_block;
    int states = 0;
};

/// Compares element_tangent against central differences of element_residual
/// on `n_states` random element states (entries uniform in [-1, 1]).
/// Block errors are ||K - K_fd||_F / ||K_fd||_F, absolute for zero blocks.
[[nodiscard]] TangentCheck check_tangent(const Mesh& mesh, const TabulatedBasis& basis, const CaseData& data,
                                         int n_states, unsigned seed = 1, double step = 1e-6);

struct PathComparison {
    int iterations = 0;
    double max_difference = 0.0;  // max abs over all unknowns and iterations
    bool converged = false;
};

/// Runs Newton on both solve paths from the zero start and compares the
/// iterates after every update.
[[nodiscard]] PathComparison compare_paths(const CaseDefinition& c, const NewtonConfig& cfg);

struct ManufacturedLevel {
    int divisions = 0;
    double h = 0.0;
    ErrorNorms errors;
    int newton_iterations = 0;
};

struct ManufacturedStudy {
    std::vector<ManufacturedLevel> levels;
    double velocity_order = 0.0;  // over the last two levels
    double pressure_order = 0.0;
};

[[nodiscard]] ManufacturedStudy manufactured_study(int dim, const std::vector<int>& divisions, double viscosity,
                                                   const NewtonConfig& cfg);

}  // namespace vms
