#include "vms/assembly.hpp"

#include <algorithm>
#include <set>

namespace vms {

SolvePath parse_solve_path(const std::string& name)
{
    if (name == "condensed") return SolvePath::condensed;
    if (name == "monolithic") return SolvePath::monolithic;
    throw ConfigError("unknown solve path '" + name + "' (expected condensed or monolithic)");
}

std::string to_string(SolvePath path)
{
    return path == SolvePath::condensed ? "condensed" : "monolithic";
}

DofCounts dof_counts(const Mesh& mesh)
{
    return {mesh.num_nodes() * (mesh.dim() + 1), mesh.num_elements() * mesh.dim()};
}

Index resolve_pin_node(const Mesh& mesh, const PressurePin& pin)
{
    if (!pin.tag.empty()) {
        if (!mesh.has_tag(pin.tag)) throw ConfigError("pressure pin tag '" + pin.tag + "' not found in mesh");
        return mesh.nodes_with_tag(pin.tag).front();
    }
    Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index n = 0; n < mesh.num_nodes(); ++n) {
        const double d = (mesh.point(n) - pin.point).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = n;
        }
    }
    if (best < 0) throw ConfigError("cannot pin pressure on an empty mesh");
    return best;
}

DofMap build_dofmap(const Mesh& mesh, const BoundaryConditions& bcs, SolvePath path)
{
    const int dim = mesh.dim();
    DofMap map;
    map.dim_ = dim;
    map.n_nodes_ = mesh.num_nodes();
    map.n_elements_ = mesh.num_elements();
    map.path_ = path;

    std::set<std::string> dirichlet_tags;
    for (const auto& bc : bcs.dirichlet) {
        if (!mesh.has_tag(bc.tag)) throw ConfigError("Dirichlet boundary tag '" + bc.tag + "' not found in mesh");
        dirichlet_tags.insert(bc.tag);
    }
    for (const auto& bc : bcs.tractions) {
        if (!mesh.has_tag(bc.tag)) throw ConfigError("traction boundary tag '" + bc.tag + "' not found in mesh");
    }

    // Later conditions override earlier ones on shared nodes.
    std::vector<int> node_source(static_cast<std::size_t>(mesh.num_nodes()), -1);
    for (std::size_t s = 0; s < bcs.dirichlet.size(); ++s) {
        for (Index n : mesh.nodes_with_tag(bcs.dirichlet[s].tag)) node_source[static_cast<std::size_t>(n)] = static_cast<int>(s);
    }
    for (Index n = 0; n < mesh.num_nodes(); ++n) {
        const int s = node_source[static_cast<std::size_t>(n)];
        if (s < 0) continue;
        for (int i = 0; i < dim; ++i) map.constraints_.push_back({map.velocity_dof(n, i), n, i, s});
    }

    const bool enclosed = std::all_of(mesh.faces().begin(), mesh.faces().end(),
                                      [&](const BoundaryFace& f) { return dirichlet_tags.count(f.tag) > 0; });
    if (bcs.pressure_pin) {
        const Index node = resolve_pin_node(mesh, *bcs.pressure_pin);
        map.pinned_node_ = node;
        map.constraints_.push_back({map.pressure_dof(node), node, dim, -1});
    } else if (enclosed) {
        throw ConfigError("enclosed flow (velocity prescribed on the whole boundary) requires a pressure pin");
    }

    map.free_index_.assign(static_cast<std::size_t>(map.num_total()), 0);
    for (const auto& c : map.constraints_) map.free_index_[static_cast<std::size_t>(c.dof)] = -1;
    for (Index d = 0; d < map.num_total(); ++d) {
        if (map.free_index_[static_cast<std::size_t>(d)] < 0) continue;
        map.free_index_[static_cast<std::size_t>(d)] = static_cast<Index>(map.free_dofs_.size());
        map.free_dofs_.push_back(d);
    }
    return map;
}

std::vector<Index> DofMap::element_dofs(const Mesh& mesh, Index e) const
{
    std::vector<Index> dofs;
    dofs.reserve(static_cast<std::size_t>((dim_ + 1) * (dim_ + 1) + dim_));
    for (Index n : mesh.element(e)) {
        for (int i = 0; i < dim_; ++i) dofs.push_back(velocity_dof(n, i));
        dofs.push_back(pressure_dof(n));
    }
    if (path_ == SolvePath::monolithic) {
        for (int i = 0; i < dim_; ++i) dofs.push_back(fine_dof(e, i));
    }
    return dofs;
}

void apply_dirichlet(const Mesh& mesh, const BoundaryConditions& bcs, double t, State& state)
{
    const int dim = mesh.dim();
    for (const auto& bc : bcs.dirichlet) {
        if (!mesh.has_tag(bc.tag)) throw ConfigError("Dirichlet boundary tag '" + bc.tag + "' not found in mesh");
        for (Index n : mesh.nodes_with_tag(bc.tag)) {
            const Vec3 v = bc.value ? bc.value(mesh.point(n), t) : Vec3::Zero();
            for (int i = 0; i < dim; ++i) state.velocity[n * dim + i] = v[i];
        }
    }
    if (bcs.pressure_pin) {
        state.pressure[resolve_pin_node(mesh, *bcs.pressure_pin)] = bcs.pressure_pin->value;
    }
}

Assembler::Assembler(const Mesh& mesh, const DofMap& dofs) : mesh_(&mesh), dofs_(&dofs)
{
    const Index nfree = dofs.num_free();
    std::vector<std::vector<Index>> rows(static_cast<std::size_t>(nfree));
    element_dofs_.resize(static_cast<std::size_t>(mesh.num_elements()));
    for (Index e = 0; e < mesh.num_elements(); ++e) {
        auto& ed = element_dofs_[static_cast<std::size_t>(e)];
        ed = dofs.element_dofs(mesh, e);
        for (Index r : ed) {
            const Index fr = dofs.free_index(r);
            if (fr < 0) continue;
            for (Index c : ed) {
                const Index fc = dofs.free_index(c);
                if (fc >= 0) rows[static_cast<std::size_t>(fr)].push_back(fc);
            }
        }
    }
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    pattern_ = linalg::CsrMatrix::from_pattern(nfree, nfree, rows);

    local_offsets_.assign(static_cast<std::size_t>(mesh.num_elements()) + 1, 0);
    for (Index e = 0; e < mesh.num_elements(); ++e) {
        const auto& ed = element_dofs_[static_cast<std::size_t>(e)];
        for (Index r : ed) {
            const Index fr = dofs.free_index(r);
            for (Index c : ed) {
                const Index fc = dofs.free_index(c);
                positions_.push_back(fr >= 0 && fc >= 0 ? pattern_.find(fr, fc) : -1);
            }
        }
        local_offsets_[static_cast<std::size_t>(e) + 1] = static_cast<Index>(positions_.size());
    }
}

void Assembler::scatter_matrix(Index e, const Eigen::MatrixXd& local, linalg::CsrMatrix& global) const
{
    const auto n = static_cast<Index>(element_dofs_[static_cast<std::size_t>(e)].size());
    if (local.rows() != n || local.cols() != n) throw Error("element contribution has wrong size");
    const Index* pos = positions_.data() + local_offsets_[static_cast<std::size_t>(e)];
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const Index p = pos[i * n + j];
            if (p >= 0) global.values[static_cast<std::size_t>(p)] += local(i, j);
        }
    }
}

GlobalSystem Assembler::assemble(std::span<const ElementContribution> elements, const Eigen::VectorXd* prescribed) const
{
    if (static_cast<Index>(elements.size()) != mesh_->num_elements()) {
        throw Error("assemble: expected one contribution per element");
    }
    GlobalSystem sys;
    sys.matrix = pattern_;
    sys.residual = Eigen::VectorXd::Zero(dofs_->num_free());
    sys.ordering = dofs_->free_dofs();
    Eigen::VectorXd lifted = Eigen::VectorXd::Zero(dofs_->num_free());
    for (Index e = 0; e < mesh_->num_elements(); ++e) {
        const auto& contrib = elements[static_cast<std::size_t>(e)];
        const auto& ed = element_dofs_[static_cast<std::size_t>(e)];
        scatter_matrix(e, contrib.matrix, sys.matrix);
        for (std::size_t i = 0; i < ed.size(); ++i) {
            const Index fr = dofs_->free_index(ed[i]);
            if (fr < 0) continue;
            sys.residual[fr] += contrib.residual[static_cast<Index>(i)];
            if (prescribed != nullptr) {
                for (std::size_t j = 0; j < ed.size(); ++j) {
                    if (dofs_->constrained(ed[j])) {
                        lifted[fr] += contrib.matrix(static_cast<Index>(i), static_cast<Index>(j)) * (*prescribed)[ed[j]];
                    }
                }
            }
        }
    }
    sys.rhs = -sys.residual - lifted;
    return sys;
}

Eigen::VectorXd Assembler::assemble_residual(std::span<const ElementContribution> elements) const
{
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dofs_->num_total());
    for (Index e = 0; e < mesh_->num_elements(); ++e) {
        const auto& ed = element_dofs_[static_cast<std::size_t>(e)];
        for (std::size_t i = 0; i < ed.size(); ++i) {
            if (!dofs_->constrained(ed[i])) r[ed[i]] += elements[static_cast<std::size_t>(e)].residual[static_cast<Index>(i)];
        }
    }
    return r;
}

GlobalSystem assemble(const Mesh& mesh, const DofMap& dofs, std::span<const ElementContribution> elements)
{
    return Assembler(mesh, dofs).assemble(elements);
}

}  // namespace vms
