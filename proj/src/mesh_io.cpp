#include "vms/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

namespace vms {

namespace {

/// Line reader that strips `#` comments and skips blank lines.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line)
    {
        while (std::getline(in_, line)) {
            ++number_;
            if (strip_comments_) {
                if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            }
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    }

    std::string expect(const char* what)
    {
        std::string line;
        if (!next(line)) throw MeshParseError(number_ + 1, std::string("unexpected end of file, expected ") + what);
        return line;
    }

    [[nodiscard]] int number() const noexcept { return number_; }
    void set_strip_comments(bool on) { strip_comments_ = on; }

private:
    std::istream& in_;
    int number_ = 0;
    bool strip_comments_ = true;
};

template <class T>
T parse_number(const std::string& token, int line)
{
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if constexpr (std::is_floating_point_v<T>) {
        // strtod keeps full round-trip precision and accepts the usual spellings.
        char* end = nullptr;
        value = std::strtod(first, &end);
        if (end != last || token.empty()) throw MeshParseError(line, "invalid number '" + token + "'");
    } else {
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) throw MeshParseError(line, "invalid integer '" + token + "'");
    }
    return value;
}

std::vector<std::string> tokens(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Mesh parse_native_mesh(std::istream& in)
{
    LineReader reader(in);
    auto header = tokens(reader.expect("header"));
    if (header.size() != 3 || header[0] != "vmsmesh" || header[1] != "1") {
        throw MeshParseError(reader.number(), "expected header 'vmsmesh 1 <dim>'");
    }
    const int dim = parse_number<int>(header[2], reader.number());
    if (dim != 2 && dim != 3) throw MeshParseError(reader.number(), "dimension must be 2 or 3");

    auto counts = tokens(reader.expect("counts"));
    if (counts.size() != 3) throw MeshParseError(reader.number(), "expected '<n_nodes> <n_elements> <n_faces>'");
    const auto n_nodes = parse_number<Index>(counts[0], reader.number());
    const auto n_elements = parse_number<Index>(counts[1], reader.number());
    const auto n_faces = parse_number<Index>(counts[2], reader.number());

    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(n_nodes * dim));
    for (Index i = 0; i < n_nodes; ++i) {
        auto t = tokens(reader.expect("node coordinates"));
        if (t.size() != static_cast<std::size_t>(dim)) {
            throw MeshParseError(reader.number(), "node line must have " + std::to_string(dim) + " coordinates");
        }
        for (const auto& tok : t) coords.push_back(parse_number<double>(tok, reader.number()));
    }

    std::vector<Index> conn;
    conn.reserve(static_cast<std::size_t>(n_elements * (dim + 1)));
    for (Index e = 0; e < n_elements; ++e) {
        auto t = tokens(reader.expect("element connectivity"));
        if (t.size() != static_cast<std::size_t>(dim + 1)) {
            throw MeshParseError(reader.number(),
                                 "element line must have " + std::to_string(dim + 1) + " node indices");
        }
        for (const auto& tok : t) {
            const auto n = parse_number<Index>(tok, reader.number());
            if (n < 0 || n >= n_nodes) {
                throw MeshParseError(reader.number(), "node index " + tok + " out of range");
            }
            conn.push_back(n);
        }
    }

    std::vector<BoundaryFace> faces;
    faces.reserve(static_cast<std::size_t>(n_faces));
    for (Index f = 0; f < n_faces; ++f) {
        auto t = tokens(reader.expect("boundary face"));
        if (t.size() != static_cast<std::size_t>(dim + 1)) {
            throw MeshParseError(reader.number(),
                                 "face line must have " + std::to_string(dim) + " node indices and a tag");
        }
        BoundaryFace face;
        for (int k = 0; k < dim; ++k) {
            const auto n = parse_number<Index>(t[static_cast<std::size_t>(k)], reader.number());
            if (n < 0 || n >= n_nodes) {
                throw MeshParseError(reader.number(), "node index " + t[static_cast<std::size_t>(k)] + " out of range");
            }
            face.nodes.push_back(n);
        }
        face.tag = t.back();
        faces.push_back(std::move(face));
    }
    std::string extra;
    if (reader.next(extra)) throw MeshParseError(reader.number(), "trailing content after boundary faces");
    return Mesh(dim, std::move(coords), std::move(conn), std::move(faces));
}

Mesh parse_gmsh_v2(std::istream& in)
{
    LineReader reader(in);
    reader.set_strip_comments(false);
    std::map<int, std::string> physical_names;
    std::unordered_map<long, Index> node_index;
    std::vector<Vec3> points;
    struct RawElement {
        int type;
        int physical;
        std::vector<long> nodes;
        int line;
    };
    std::vector<RawElement> raw;
    bool have_format = false;
    bool have_nodes = false;
    bool have_elements = false;

    std::string line;
    while (reader.next(line)) {
        auto t = tokens(line);
        if (t.empty()) continue;
        const std::string& section = t[0];
        if (section == "$MeshFormat") {
            auto f = tokens(reader.expect("mesh format"));
            if (f.size() < 3 || f[0].rfind("2", 0) != 0) throw MeshParseError(reader.number(), "only gmsh format 2.x is supported");
            if (f[1] != "0") throw MeshParseError(reader.number(), "only ASCII gmsh files are supported");
            if (tokens(reader.expect("$EndMeshFormat")) != std::vector<std::string>{"$EndMeshFormat"}) {
                throw MeshParseError(reader.number(), "expected $EndMeshFormat");
            }
            have_format = true;
        } else if (section == "$PhysicalNames") {
            const int n = parse_number<int>(tokens(reader.expect("physical name count")).at(0), reader.number());
            for (int i = 0; i < n; ++i) {
                auto p = reader.expect("physical name");
                auto pt = tokens(p);
                if (pt.size() < 3) throw MeshParseError(reader.number(), "malformed physical name");
                const int tag = parse_number<int>(pt[1], reader.number());
                auto q1 = p.find('"');
                auto q2 = p.rfind('"');
                if (q1 == std::string::npos || q2 == q1) throw MeshParseError(reader.number(), "physical name must be quoted");
                physical_names[tag] = p.substr(q1 + 1, q2 - q1 - 1);
            }
            if (tokens(reader.expect("$EndPhysicalNames")).at(0) != "$EndPhysicalNames") {
                throw MeshParseError(reader.number(), "expected $EndPhysicalNames");
            }
        } else if (section == "$Nodes") {
            const auto n = parse_number<long>(tokens(reader.expect("node count")).at(0), reader.number());
            for (long i = 0; i < n; ++i) {
                auto nt = tokens(reader.expect("node"));
                if (nt.size() != 4) throw MeshParseError(reader.number(), "node line must be '<id> <x> <y> <z>'");
                const long id = parse_number<long>(nt[0], reader.number());
                if (node_index.count(id)) throw MeshParseError(reader.number(), "duplicate node id " + nt[0]);
                node_index[id] = static_cast<Index>(points.size());
                points.emplace_back(parse_number<double>(nt[1], reader.number()),
                                    parse_number<double>(nt[2], reader.number()),
                                    parse_number<double>(nt[3], reader.number()));
            }
            if (tokens(reader.expect("$EndNodes")).at(0) != "$EndNodes") throw MeshParseError(reader.number(), "expected $EndNodes");
            have_nodes = true;
        } else if (section == "$Elements") {
            const auto n = parse_number<long>(tokens(reader.expect("element count")).at(0), reader.number());
            for (long i = 0; i < n; ++i) {
                auto et = tokens(reader.expect("element"));
                if (et.size() < 3) throw MeshParseError(reader.number(), "malformed element line");
                const int type = parse_number<int>(et[1], reader.number());
                const int ntags = parse_number<int>(et[2], reader.number());
                int nn = 0;
                if (type == 2) {
                    nn = 3;
                } else if (type == 4) {
                    nn = 4;
                } else {
                    throw MeshParseError(reader.number(), "unsupported gmsh element type " + et[1] +
                                                              " (only 2 = triangle and 4 = tetrahedron)");
                }
                if (et.size() != static_cast<std::size_t>(3 + ntags + nn)) {
                    throw MeshParseError(reader.number(), "element line has wrong number of entries");
                }
                RawElement r{type, ntags > 0 ? parse_number<int>(et[3], reader.number()) : 0, {}, reader.number()};
                for (int k = 0; k < nn; ++k) {
                    r.nodes.push_back(parse_number<long>(et[static_cast<std::size_t>(3 + ntags + k)], reader.number()));
                }
                raw.push_back(std::move(r));
            }
            if (tokens(reader.expect("$EndElements")).at(0) != "$EndElements") {
                throw MeshParseError(reader.number(), "expected $EndElements");
            }
            have_elements = true;
        } else if (section.front() == '$') {
            throw MeshParseError(reader.number(), "unsupported gmsh section " + section);
        } else {
            throw MeshParseError(reader.number(), "unexpected content outside a section");
        }
    }
    if (!have_format || !have_nodes || !have_elements) {
        throw MeshParseError(reader.number(), "gmsh file must contain $MeshFormat, $Nodes and $Elements");
    }

    const bool has_tets = std::any_of(raw.begin(), raw.end(), [](const RawElement& r) { return r.type == 4; });
    const int dim = has_tets ? 3 : 2;
    std::vector<double> coords;
    for (const auto& p : points) {
        for (int d = 0; d < dim; ++d) coords.push_back(p[d]);
    }
    auto lookup = [&](long id, int ln) {
        auto it = node_index.find(id);
        if (it == node_index.end()) throw MeshParseError(ln, "element references unknown node " + std::to_string(id));
        return it->second;
    };
    std::vector<Index> conn;
    std::vector<BoundaryFace> faces;
    const int cell_type = dim == 3 ? 4 : 2;
    for (const auto& r : raw) {
        if (r.type == cell_type) {
            for (long id : r.nodes) conn.push_back(lookup(id, r.line));
        } else {
            BoundaryFace face;
            for (long id : r.nodes) face.nodes.push_back(lookup(id, r.line));
            auto it = physical_names.find(r.physical);
            face.tag = it != physical_names.end() ? it->second : std::to_string(r.physical);
            faces.push_back(std::move(face));
        }
    }
    return Mesh(dim, std::move(coords), std::move(conn), std::move(faces));
}

Mesh load_mesh(const std::filesystem::path& path, MeshFormat format)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open mesh file " + path.string());
    Mesh mesh = format == MeshFormat::native ? parse_native_mesh(in) : parse_gmsh_v2(in);
    const auto repaired = mesh.repair_orientation();
    if (!repaired.empty()) {
        log_notice(path.string() + ": swapped the last two nodes of " + std::to_string(repaired.size()) +
                   " negatively oriented element(s), first " + std::to_string(repaired.front()));
    }
    auto violations = validate(mesh);
    if (!violations.empty()) {
        throw MeshError(path.string() + ": " + violations.front().message);
    }
    return mesh;
}

void write_native(const Mesh& mesh, std::ostream& out)
{
    const int dim = mesh.dim();
    out << "vmsmesh 1 " << dim << '\n';
    out << mesh.num_nodes() << ' ' << mesh.num_elements() << ' ' << mesh.num_faces() << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Index i = 0; i < mesh.num_nodes(); ++i) {
        auto c = mesh.node(i);
        for (int d = 0; d < dim; ++d) out << (d ? " " : "") << c[static_cast<std::size_t>(d)];
        out << '\n';
    }
    for (Index e = 0; e < mesh.num_elements(); ++e) {
        auto n = mesh.element(e);
        for (std::size_t a = 0; a < n.size(); ++a) out << (a ? " " : "") << n[a];
        out << '\n';
    }
    for (const auto& f : mesh.faces()) {
        for (Index n : f.nodes) out << n << ' ';
        out << f.tag << '\n';
    }
}

void write_native(const Mesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write mesh file " + path.string());
    write_native(mesh, out);
}

}  // namespace vms
