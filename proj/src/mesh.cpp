#include "vms/mesh.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace vms {

void log_notice(const std::string& message)
{
    std::clog << "notice: " << message << '\n';
}

namespace {

using FaceKey = std::array<Index, 3>;

FaceKey make_key(std::span<const Index> nodes)
{
    FaceKey key{-1, -1, -1};
    std::copy(nodes.begin(), nodes.end(), key.begin());
    std::sort(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(nodes.size()));
    return key;
}

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

}  // namespace

Mesh::Mesh(int dim, std::vector<double> coordinates, std::vector<Index> connectivity,
           std::vector<BoundaryFace> faces)
    : dim_(dim),
      coordinates_(std::move(coordinates)),
      connectivity_(std::move(connectivity)),
      faces_(std::move(faces))
{
    if (dim_ != 2 && dim_ != 3) {
        throw MeshError("mesh dimension must be 2 or 3, got " + std::to_string(dim_));
    }
    if (coordinates_.size() % static_cast<std::size_t>(dim_) != 0) {
        throw MeshError("coordinate array length is not a multiple of the dimension");
    }
    if (connectivity_.size() % static_cast<std::size_t>(dim_ + 1) != 0) {
        throw MeshError("connectivity length is not a multiple of nodes per element");
    }
    index_faces();
}

void Mesh::index_faces()
{
    const int nen = dim_ + 1;
    std::map<FaceKey, std::vector<Index>> element_faces;
    std::vector<Index> local(static_cast<std::size_t>(dim_));
    for (Index e = 0; e < num_elements(); ++e) {
        auto nodes = element(e);
        for (int k = 0; k < nen; ++k) {
            int m = 0;
            for (int a = 0; a < nen; ++a) {
                if (a != k) local[static_cast<std::size_t>(m++)] = nodes[static_cast<std::size_t>(a)];
            }
            element_faces[make_key(local)].push_back(e);
        }
    }

    face_owner_.assign(faces_.size(), -1);
    face_matches_.assign(faces_.size(), 0);
    std::vector<std::vector<Index>> per_element(static_cast<std::size_t>(num_elements()));
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        if (faces_[f].nodes.size() != static_cast<std::size_t>(dim_)) {
            continue;
        }
        auto it = element_faces.find(make_key(faces_[f].nodes));
        if (it == element_faces.end()) {
            continue;
        }
        face_matches_[f] = static_cast<int>(it->second.size());
        if (it->second.size() == 1) {
            face_owner_[f] = it->second.front();
            per_element[static_cast<std::size_t>(it->second.front())].push_back(static_cast<Index>(f));
        }
    }
    element_face_offsets_.assign(per_element.size() + 1, 0);
    element_faces_.clear();
    for (std::size_t e = 0; e < per_element.size(); ++e) {
        element_faces_.insert(element_faces_.end(), per_element[e].begin(), per_element[e].end());
        element_face_offsets_[e + 1] = static_cast<Index>(element_faces_.size());
    }
}

Vec3 Mesh::point(Index i) const
{
    Vec3 x = Vec3::Zero();
    auto c = node(i);
    for (int d = 0; d < dim_; ++d) {
        x[d] = c[static_cast<std::size_t>(d)];
    }
    return x;
}

std::span<const Index> Mesh::faces_of_element(Index e) const
{
    const auto begin = element_face_offsets_[static_cast<std::size_t>(e)];
    const auto end = element_face_offsets_[static_cast<std::size_t>(e) + 1];
    return {element_faces_.data() + begin, static_cast<std::size_t>(end - begin)};
}

bool Mesh::has_tag(const std::string& tag) const
{
    return std::any_of(faces_.begin(), faces_.end(), [&](const auto& f) { return f.tag == tag; });
}

std::vector<std::string> Mesh::tag_names() const
{
    std::set<std::string> names;
    for (const auto& f : faces_) {
        names.insert(f.tag);
    }
    return {names.begin(), names.end()};
}

std::vector<Index> Mesh::nodes_with_tag(const std::string& tag) const
{
    std::vector<Index> nodes;
    for (const auto& f : faces_) {
        if (f.tag == tag) nodes.insert(nodes.end(), f.nodes.begin(), f.nodes.end());
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

std::vector<bool> Mesh::boundary_node_mask() const
{
    std::vector<bool> mask(static_cast<std::size_t>(num_nodes()), false);
    for (const auto& f : faces_) {
        for (Index n : f.nodes) {
            if (n >= 0 && n < num_nodes()) mask[static_cast<std::size_t>(n)] = true;
        }
    }
    return mask;
}

double Mesh::signed_volume(Index e) const
{
    auto nodes = element(e);
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    const Vec3 x0 = point(nodes[0]);
    for (int k = 1; k <= dim_; ++k) {
        m.col(k - 1).head(dim_) = (point(nodes[static_cast<std::size_t>(k)]) - x0).head(dim_);
    }
    const double det = dim_ == 2 ? m.topLeftCorner<2, 2>().determinant() : m.determinant();
    return det / factorial(dim_);
}

std::pair<Vec3, Vec3> Mesh::bounding_box() const
{
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (Index i = 0; i < num_nodes(); ++i) {
        lo = lo.cwiseMin(point(i));
        hi = hi.cwiseMax(point(i));
    }
    if (dim_ == 2) {
        lo.z() = hi.z() = 0.0;
    }
    return {lo, hi};
}

std::vector<Index> Mesh::repair_orientation()
{
    std::vector<Index> repaired;
    const auto nen = static_cast<std::size_t>(dim_ + 1);
    for (Index e = 0; e < num_elements(); ++e) {
        if (signed_volume(e) < 0.0) {
            auto base = connectivity_.begin() + static_cast<std::ptrdiff_t>(e * static_cast<Index>(nen));
            std::iter_swap(base + static_cast<std::ptrdiff_t>(nen - 2), base + static_cast<std::ptrdiff_t>(nen - 1));
            repaired.push_back(e);
        }
    }
    if (!repaired.empty()) {
        index_faces();
    }
    return repaired;
}

bool operator==(const Mesh& a, const Mesh& b)
{
    if (a.dim_ != b.dim_ || a.coordinates_ != b.coordinates_ || a.connectivity_ != b.connectivity_ ||
        a.faces_.size() != b.faces_.size()) {
        return false;
    }
    for (std::size_t f = 0; f < a.faces_.size(); ++f) {
        if (a.faces_[f].nodes != b.faces_[f].nodes || a.faces_[f].tag != b.faces_[f].tag) return false;
    }
    return true;
}

std::vector<MeshViolation> validate(const Mesh& mesh)
{
    using Kind = MeshViolation::Kind;
    std::vector<MeshViolation> violations;
    const Index n_nodes = mesh.num_nodes();
    for (Index e = 0; e < mesh.num_elements(); ++e) {
        auto nodes = mesh.element(e);
        bool in_range = true;
        for (Index n : nodes) {
            if (n < 0 || n >= n_nodes) {
                violations.push_back({Kind::node_out_of_range, e,
                                      "element " + std::to_string(e) + " references node " +
                                          std::to_string(n) + " outside [0, " + std::to_string(n_nodes) + ")"});
                in_range = false;
            }
        }
        std::vector<Index> sorted(nodes.begin(), nodes.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            violations.push_back({Kind::duplicate_node, e,
                                  "element " + std::to_string(e) + " repeats a node index"});
            continue;
        }
        if (in_range) {
            const double vol = mesh.signed_volume(e);
            if (!(vol > 0.0)) {
                std::ostringstream msg;
                msg << "element " << e << " has non-positive signed volume " << vol;
                violations.push_back({Kind::nonpositive_volume, e, msg.str()});
            }
        }
    }
    for (Index f = 0; f < mesh.num_faces(); ++f) {
        const auto& face = mesh.face(f);
        if (face.nodes.size() != static_cast<std::size_t>(mesh.dim())) {
            violations.push_back({Kind::bad_face, f,
                                  "face " + std::to_string(f) + " has " + std::to_string(face.nodes.size()) +
                                      " nodes, expected " + std::to_string(mesh.dim())});
            continue;
        }
        const int matches = mesh.face_match_count(f);
        if (matches == 0) {
            violations.push_back({Kind::dangling_face, f,
                                  "face " + std::to_string(f) + " (tag '" + face.tag +
                                      "') is not a face of any element"});
        } else if (matches > 1) {
            violations.push_back({Kind::shared_face, f,
                                  "face " + std::to_string(f) + " (tag '" + face.tag + "') is shared by " +
                                      std::to_string(matches) + " elements"});
        }
    }
    return violations;
}

Mesh generate_box_mesh(int dim, std::array<int, 3> divisions, const BoxTags& tags)
{
    if (dim != 2 && dim != 3) {
        throw MeshError("box mesh dimension must be 2 or 3");
    }
    for (int d = 0; d < dim; ++d) {
        if (divisions[static_cast<std::size_t>(d)] < 1) {
            throw MeshError("box mesh divisions must be >= 1 along every axis");
        }
    }
    const int nx = divisions[0];
    const int ny = divisions[1];
    const int nz = dim == 3 ? divisions[2] : 0;
    const Index sx = nx + 1;
    const Index sy = ny + 1;
    auto node_id = [&](Index i, Index j, Index k) { return i + sx * (j + sy * k); };

    std::vector<double> coords;
    for (Index k = 0; k <= nz; ++k) {
        for (Index j = 0; j <= ny; ++j) {
            for (Index i = 0; i <= nx; ++i) {
                coords.push_back(static_cast<double>(i) / nx);
                coords.push_back(static_cast<double>(j) / ny);
                if (dim == 3) coords.push_back(static_cast<double>(k) / nz);
            }
        }
    }

    std::vector<Index> conn;
    if (dim == 2) {
        for (Index j = 0; j < ny; ++j) {
            for (Index i = 0; i < nx; ++i) {
                const Index n00 = node_id(i, j, 0);
                const Index n10 = node_id(i + 1, j, 0);
                const Index n11 = node_id(i + 1, j + 1, 0);
                const Index n01 = node_id(i, j + 1, 0);
                conn.insert(conn.end(), {n00, n10, n11, n00, n11, n01});
            }
        }
    } else {
        std::array<int, 3> perm{0, 1, 2};
        std::vector<std::array<int, 3>> perms;
        do {
            perms.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (Index k = 0; k < nz; ++k) {
            for (Index j = 0; j < ny; ++j) {
                for (Index i = 0; i < nx; ++i) {
                    for (const auto& p : perms) {
                        std::array<Index, 3> c{i, j, k};
                        conn.push_back(node_id(c[0], c[1], c[2]));
                        for (int axis : p) {
                            ++c[static_cast<std::size_t>(axis)];
                            conn.push_back(node_id(c[0], c[1], c[2]));
                        }
                    }
                }
            }
        }
    }

    Mesh oriented(dim, coords, conn, {});
    oriented.repair_orientation();

    // Boundary faces: element faces whose nodes all lie on one box side.
    const int nen = dim + 1;
    std::vector<BoundaryFace> faces;
    for (Index e = 0; e < oriented.num_elements(); ++e) {
        auto nodes = oriented.element(e);
        for (int skip = 0; skip < nen; ++skip) {
            std::vector<Index> fn;
            for (int a = 0; a < nen; ++a) {
                if (a != skip) fn.push_back(nodes[static_cast<std::size_t>(a)]);
            }
            for (int side = 0; side < 2 * dim; ++side) {
                const int axis = side / 2;
                const double target = side % 2 == 0 ? 0.0 : 1.0;
                const bool on_side = std::all_of(fn.begin(), fn.end(), [&](Index n) {
                    return oriented.node(n)[static_cast<std::size_t>(axis)] == target;
                });
                if (on_side) {
                    faces.push_back({fn, tags.names[static_cast<std::size_t>(side)]});
                    break;
                }
            }
        }
    }
    return Mesh(dim, oriented.coordinates(), oriented.connectivity(), std::move(faces));
}

}  // namespace vms
