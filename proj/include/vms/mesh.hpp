#pragma once

#include "vms/common.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vms {

enum class BoundaryKind { dirichlet_velocity, traction, pressure_pin };

struct BoundaryTag {
    std::string name;
    BoundaryKind kind = BoundaryKind::dirichlet_velocity;
};

struct BoundaryFace {
    std::vector<Index> nodes;  // dim nodes
    std::string tag;
};

/// Location, with line number, of a malformed mesh file.
class MeshParseError : public Error {
public:
    MeshParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

/// A mesh that fails validation after loading or construction.
class MeshError : public Error {
public:
    using Error::Error;
};

struct MeshViolation {
    enum class Kind {
        node_out_of_range,
        duplicate_node,
        nonpositive_volume,
        dangling_face,
        shared_face,
        bad_face,
    };
    Kind kind;
    Index item;  // element or face id
    std::string message;
};

/// Linear simplex mesh (triangles in 2D, tetrahedra in 3D) with tagged
/// boundary faces. Immutable once built.
class Mesh {
public:
    Mesh() = default;
    Mesh(int dim, std::vector<double> coordinates, std::vector<Index> connectivity,
         std::vector<BoundaryFace> faces);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int nodes_per_element() const noexcept { return dim_ + 1; }
    [[nodiscard]] Index num_nodes() const noexcept
    {
        return dim_ == 0 ? 0 : static_cast<Index>(coordinates_.size()) / dim_;
    }
    [[nodiscard]] Index num_elements() const noexcept
    {
        return dim_ == 0 ? 0 : static_cast<Index>(connectivity_.size()) / (dim_ + 1);
    }
    [[nodiscard]] Index num_faces() const noexcept { return static_cast<Index>(faces_.size()); }

    [[nodiscard]] std::span<const double> node(Index i) const
    {
        return {coordinates_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    /// Node coordinates padded to a 3-vector.
    [[nodiscard]] Vec3 point(Index i) const;
    [[nodiscard]] std::span<const Index> element(Index e) const
    {
        return {connectivity_.data() + e * (dim_ + 1), static_cast<std::size_t>(dim_ + 1)};
    }
    [[nodiscard]] const BoundaryFace& face(Index f) const { return faces_[static_cast<std::size_t>(f)]; }
    [[nodiscard]] const std::vector<BoundaryFace>& faces() const noexcept { return faces_; }
    [[nodiscard]] const std::vector<double>& coordinates() const noexcept { return coordinates_; }
    [[nodiscard]] const std::vector<Index>& connectivity() const noexcept { return connectivity_; }

    /// Element owning boundary face f, or -1 when the face matches no element
    /// (or more than one).
    [[nodiscard]] Index face_owner(Index f) const { return face_owner_[static_cast<std::size_t>(f)]; }
    /// Number of elements having boundary face f as one of their faces.
    [[nodiscard]] int face_match_count(Index f) const { return face_matches_[static_cast<std::size_t>(f)]; }
    /// Boundary faces owned by element e.
    [[nodiscard]] std::span<const Index> faces_of_element(Index e) const;

    [[nodiscard]] bool has_tag(const std::string& tag) const;
    [[nodiscard]] std::vector<std::string> tag_names() const;
    /// Sorted, unique node ids lying on faces with the given tag.
    [[nodiscard]] std::vector<Index> nodes_with_tag(const std::string& tag) const;
    /// Nodes lying on any boundary face.
    [[nodiscard]] std::vector<bool> boundary_node_mask() const;

    [[nodiscard]] double signed_volume(Index e) const;
    [[nodiscard]] double volume(Index e) const { return signed_volume(e); }

    /// Physical bounding box, padded to 3 components.
    [[nodiscard]] std::pair<Vec3, Vec3> bounding_box() const;

    /// Swaps the last two nodes of every element with negative signed volume;
    /// returns the repaired element ids.
    std::vector<Index> repair_orientation();

    friend bool operator==(const Mesh& a, const Mesh& b);

private:
    void index_faces();

    int dim_ = 0;
    std::vector<double> coordinates_;
    std::vector<Index> connectivity_;
    std::vector<BoundaryFace> faces_;
    std::vector<Index> face_owner_;
    std::vector<int> face_matches_;
    std::vector<Index> element_face_offsets_;
    std::vector<Index> element_faces_;
};

[[nodiscard]] std::vector<MeshViolation> validate(const Mesh& mesh);

/// Box faces in the order xmin, xmax, ymin, ymax, zmin, zmax.
struct BoxTags {
    std::array<std::string, 6> names{"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
};

/// Structured simplex subdivision of the unit box: two triangles per square
/// in 2D, six Kuhn tetrahedra per cube in 3D. Only the first `dim` entries of
/// `divisions` are read.
[[nodiscard]] Mesh generate_box_mesh(int dim, std::array<int, 3> divisions, const BoxTags& tags = {});

enum class MeshFormat { native, gmsh_v2 };

[[nodiscard]] Mesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::native);
[[nodiscard]] Mesh parse_native_mesh(std::istream& in);
[[nodiscard]] Mesh parse_gmsh_v2(std::istream& in);
void write_native(const Mesh& mesh, std::ostream& out);
void write_native(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace vms
