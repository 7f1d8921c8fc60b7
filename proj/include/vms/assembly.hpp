#pragma once

#include "vms/linalg.hpp"
#include "vms/state.hpp"

#include <optional>
#include <span>
#include <vector>

namespace vms {

enum class SolvePath { monolithic, condensed };

[[nodiscard]] SolvePath parse_solve_path(const std::string& name);
[[nodiscard]] std::string to_string(SolvePath path);

struct DirichletCondition {
    std::string tag;
    VectorField value;
};

struct TractionCondition {
    std::string tag;
    VectorField value;  // t^n; empty means traction free
};

/// Single pressure constraint: at the lowest-numbered node of `tag` when a
/// tag is given, otherwise at the node nearest `point`.
struct PressurePin {
    std::string tag;
    Vec3 point = Vec3::Zero();
    double value = 0.0;
};

/// Later Dirichlet conditions win at nodes shared between tags.
struct BoundaryConditions {
    std::vector<DirichletCondition> dirichlet;
    std::vector<TractionCondition> tractions;
    std::optional<PressurePin> pressure_pin;
};

struct DofCounts {
    Index coarse = 0;  // (dim + 1) * n_nodes
    Index fine = 0;    // dim * n_elements
    [[nodiscard]] Index total() const noexcept { return coarse + fine; }
    [[nodiscard]] double fine_fraction() const noexcept
    {
        return total() == 0 ? 0.0 : static_cast<double>(fine) / static_cast<double>(total());
    }
};

[[nodiscard]] DofCounts dof_counts(const Mesh& mesh);

/// Interleaved node-major numbering: node n owns dofs n*(dim+1) + [0, dim)
/// for velocity and n*(dim+1) + dim for pressure. On the monolithic path
/// element e's fine dofs follow all coarse dofs.
class DofMap {
public:
    struct Constraint {
        Index dof;
        Index node;
        int component;  // velocity component, or dim for pressure
        int source;     // index into BoundaryConditions::dirichlet, -1 for the pin
    };

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] SolvePath path() const noexcept { return path_; }
    [[nodiscard]] Index velocity_dof(Index node, int comp) const noexcept { return node * (dim_ + 1) + comp; }
    [[nodiscard]] Index pressure_dof(Index node) const noexcept { return node * (dim_ + 1) + dim_; }
    [[nodiscard]] Index fine_dof(Index e, int comp) const noexcept { return num_coarse() + e * dim_ + comp; }
    [[nodiscard]] Index num_coarse() const noexcept { return n_nodes_ * (dim_ + 1); }
    [[nodiscard]] Index num_fine() const noexcept
    {
        return path_ == SolvePath::monolithic ? n_elements_ * dim_ : 0;
    }
    [[nodiscard]] Index num_total() const noexcept { return num_coarse() + num_fine(); }
    [[nodiscard]] Index num_free() const noexcept { return static_cast<Index>(free_dofs_.size()); }

    [[nodiscard]] bool constrained(Index dof) const { return free_index_[static_cast<std::size_t>(dof)] < 0; }
    /// Row of `dof` in the global system, -1 when constrained.
    [[nodiscard]] Index free_index(Index dof) const { return free_index_[static_cast<std::size_t>(dof)]; }
    /// Global dof of each system row.
    [[nodiscard]] const std::vector<Index>& free_dofs() const noexcept { return free_dofs_; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    [[nodiscard]] std::optional<Index> pinned_pressure_node() const noexcept { return pinned_node_; }

    /// Global dofs of element e in local order (interleaved coarse, then fine
    /// on the monolithic path).
    [[nodiscard]] std::vector<Index> element_dofs(const Mesh& mesh, Index e) const;

private:
    friend DofMap build_dofmap(const Mesh& mesh, const BoundaryConditions& bcs, SolvePath path);

    int dim_ = 0;
    Index n_nodes_ = 0;
    Index n_elements_ = 0;
    SolvePath path_ = SolvePath::condensed;
    std::vector<Index> free_index_;
    std::vector<Index> free_dofs_;
    std::vector<Constraint> constraints_;
    std::optional<Index> pinned_node_;
};

/// Throws ConfigError for unknown tags or an enclosed flow without a
/// pressure constraint.
[[nodiscard]] DofMap build_dofmap(const Mesh& mesh, const BoundaryConditions& bcs, SolvePath path);

/// Node receiving the pressure pin.
[[nodiscard]] Index resolve_pin_node(const Mesh& mesh, const PressurePin& pin);

/// Sets prescribed coarse velocities at time t and the pinned pressure.
void apply_dirichlet(const Mesh& mesh, const BoundaryConditions& bcs, double t, State& state);

/// Per-element dense contribution in DofMap::element_dofs order.
struct ElementContribution {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd residual;
};

struct GlobalSystem {
    linalg::CsrMatrix matrix;  // over free dofs
    Eigen::VectorXd rhs;       // -R_free - A_fc * du_c
    Eigen::VectorXd residual;  // R over free dofs
    std::vector<Index> ordering;  // global dof of each row
};

/// Sparsity pattern and scatter map for one DofMap.
class Assembler {
public:
    Assembler(const Mesh& mesh, const DofMap& dofs);

    [[nodiscard]] const DofMap& dofs() const noexcept { return *dofs_; }
    [[nodiscard]] const linalg::CsrMatrix& pattern() const noexcept { return pattern_; }

    /// Scatters element contributions in element order. `prescribed` holds
    /// increments of constrained dofs (global numbering); null means zero.
    [[nodiscard]] GlobalSystem assemble(std::span<const ElementContribution> elements,
                                        const Eigen::VectorXd* prescribed = nullptr) const;

    /// Full-length residual with constrained rows set to zero.
    [[nodiscard]] Eigen::VectorXd assemble_residual(std::span<const ElementContribution> elements) const;

    void scatter_matrix(Index e, const Eigen::MatrixXd& local, linalg::CsrMatrix& global) const;

private:
    const Mesh* mesh_;
    const DofMap* dofs_;
    linalg::CsrMatrix pattern_;
    std::vector<Index> local_offsets_;   // per-element start into positions_
    std::vector<Index> positions_;       // CSR slot per local (i, j), -1 if constrained
    std::vector<std::vector<Index>> element_dofs_;
};

[[nodiscard]] GlobalSystem assemble(const Mesh& mesh, const DofMap& dofs,
                                    std::span<const ElementContribution> elements);

}  // namespace vms
