#pragma once

#include "vms/mesh.hpp"

namespace vms {

/// Discrete solution: coarse nodal velocity, nodal pressure and one
/// fine-scale coefficient vector per element.
struct State {
    int dim = 0;
    Eigen::VectorXd velocity;  // n_nodes * dim, node-major
    Eigen::VectorXd pressure;  // n_nodes
    Eigen::VectorXd fine;      // n_elements * dim

    [[nodiscard]] static State zero(const Mesh& mesh)
    {
        State s;
        s.dim = mesh.dim();
        s.velocity = Eigen::VectorXd::Zero(mesh.num_nodes() * mesh.dim());
        s.pressure = Eigen::VectorXd::Zero(mesh.num_nodes());
        s.fine = Eigen::VectorXd::Zero(mesh.num_elements() * mesh.dim());
        return s;
    }

    [[nodiscard]] Vec3 node_velocity(Index node) const
    {
        Vec3 v = Vec3::Zero();
        for (int d = 0; d < dim; ++d) v[d] = velocity[node * dim + d];
        return v;
    }
    [[nodiscard]] Vec3 element_fine(Index e) const
    {
        Vec3 v = Vec3::Zero();
        for (int d = 0; d < dim; ++d) v[d] = fine[e * dim + d];
        return v;
    }
};

}  // namespace vms
