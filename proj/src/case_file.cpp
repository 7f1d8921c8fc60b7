#include "vms/case_file.hpp"

#include "vms/expression.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <sstream>

namespace vms {

namespace {

namespace pt = boost::property_tree;

std::vector<double> number_list(const std::string& text, const std::string& key)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(Expression::parse(item)(0.0, 0.0, 0.0, 0.0));
        } catch (const ExpressionError& e) {
            throw ConfigError("'" + key + "': " + e.what());
        }
    }
    return out;
}

double number(const pt::ptree& section, const std::string& key, double fallback)
{
    const auto v = section.get_optional<std::string>(key);
    if (!v) return fallback;
    const auto list = number_list(*v, key);
    if (list.size() != 1) throw ConfigError("'" + key + "' expects one number");
    return list.front();
}

void check_keys(const pt::ptree& section, const std::string& name, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : section) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
    }
}

std::shared_ptr<const Mesh> read_mesh(const pt::ptree& section, const std::filesystem::path& base_dir)
{
    check_keys(section, "mesh", {"box", "divisions", "file", "format"});
    if (const auto file = section.get_optional<std::string>("file")) {
        std::filesystem::path path(*file);
        if (path.is_relative()) path = base_dir / path;
        const std::string format = section.get<std::string>("format", "native");
        MeshFormat f = MeshFormat::native;
        if (format == "gmsh") f = MeshFormat::gmsh_v2;
        else if (format != "native") throw ConfigError("unknown mesh format '" + format + "'");
        return std::make_shared<const Mesh>(load_mesh(path, f));
    }
    const int dim = static_cast<int>(number(section, "box", 0.0));
    if (dim != 2 && dim != 3) throw ConfigError("[mesh] needs box = 2 or 3, or a file");
    const auto div = number_list(section.get<std::string>("divisions", "4"), "divisions");
    std::array<int, 3> d{1, 1, 1};
    if (div.size() == 1) {
        d = {static_cast<int>(div[0]), static_cast<int>(div[0]), static_cast<int>(div[0])};
    } else if (static_cast<int>(div.size()) == dim) {
        for (int i = 0; i < dim; ++i) d[static_cast<std::size_t>(i)] = static_cast<int>(div[static_cast<std::size_t>(i)]);
    } else {
        throw ConfigError("divisions needs 1 or " + std::to_string(dim) + " entries");
    }
    for (int i = 0; i < dim; ++i) {
        if (d[static_cast<std::size_t>(i)] < 1) throw ConfigError("divisions must be at least 1");
    }
    return std::make_shared<const Mesh>(generate_box_mesh(dim, d));
}

VectorField field(const std::string& text, const std::string& where)
{
    try {
        return parse_vector_field(text);
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

Vec3 point(const std::string& text, const std::string& key)
{
    const auto v = number_list(text, key);
    if (v.empty() || v.size() > 3) throw ConfigError("'" + key + "' expects up to three numbers");
    Vec3 p = Vec3::Zero();
    for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Index>(i)] = v[i];
    return p;
}

}  // namespace

CaseDefinition parse_case_file(std::istream& in, const std::filesystem::path& base_dir)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("case file line " + std::to_string(e.line()) + ": " + e.message());
    }

    CaseDefinition c;
    c.name = "custom";
    const auto mesh_section = tree.get_child_optional("mesh");
    if (!mesh_section) throw ConfigError("case file has no [mesh] section");
    c.mesh = read_mesh(*mesh_section, base_dir);

    for (const auto& [name, section] : tree) {
        if (!section.data().empty()) throw ConfigError("key '" + name + "' outside a section");
        if (name == "mesh") continue;
        if (name == "case") {
            check_keys(section, name, {"name", "viscosity", "reynolds", "body_force", "convection", "dt", "steps"});
            c.name = section.get<std::string>("name", c.name);
            if (section.count("viscosity") && section.count("reynolds")) {
                throw ConfigError("give either viscosity or reynolds, not both");
            }
            c.viscosity = section.count("reynolds") ? 1.0 / number(section, "reynolds", 1.0)
                                                     : number(section, "viscosity", 1.0);
            if (!(c.viscosity > 0.0) || !std::isfinite(c.viscosity)) throw ConfigError("viscosity must be positive");
            if (const auto b = section.get_optional<std::string>("body_force")) c.body_force = field(*b, "body_force");
            const std::string conv = section.get<std::string>("convection", "true");
            if (conv != "true" && conv != "false") throw ConfigError("convection must be true or false");
            c.convection = conv == "true";
            c.dt = number(section, "dt", 0.0);
            c.n_steps = static_cast<int>(number(section, "steps", 0.0));
            if (c.dt < 0.0 || c.n_steps < 0) throw ConfigError("dt and steps must be nonnegative");
        } else if (name.rfind("bc ", 0) == 0) {
            const std::string tag = name.substr(3);
            check_keys(section, name, {"kind", "value", "point"});
            const auto kind = section.get_optional<std::string>("kind");
            if (!kind) throw ConfigError("[" + name + "] needs a kind");
            const std::string value = section.get<std::string>("value", "");
            if (*kind == "dirichlet_velocity") {
                if (!c.mesh->has_tag(tag)) throw ConfigError("boundary tag '" + tag + "' not found in mesh");
                c.bcs.dirichlet.push_back({tag, value.empty() ? VectorField{} : field(value, name)});
            } else if (*kind == "traction") {
                if (!c.mesh->has_tag(tag)) throw ConfigError("boundary tag '" + tag + "' not found in mesh");
                c.bcs.tractions.push_back({tag, value.empty() ? VectorField{} : field(value, name)});
            } else if (*kind == "pressure_pin") {
                if (c.bcs.pressure_pin) throw ConfigError("only one pressure_pin is allowed");
                PressurePin pin;
                pin.value = number(section, "value", 0.0);
                if (const auto p = section.get_optional<std::string>("point")) {
                    pin.point = point(*p, "point");
                } else {
                    if (!c.mesh->has_tag(tag)) throw ConfigError("pressure pin tag '" + tag + "' not found in mesh");
                    pin.tag = tag;
                }
                c.bcs.pressure_pin = pin;
            } else {
                throw ConfigError("unknown boundary kind '" + *kind + "' in [" + name + "]");
            }
        } else if (name == "centerline") {
            check_keys(section, name, {"axis", "through", "samples"});
            CenterlineSpec spec;
            const std::string axis = section.get<std::string>("axis", "z");
            if (axis == "x") spec.axis = 0;
            else if (axis == "y") spec.axis = 1;
            else if (axis == "z") spec.axis = 2;
            else throw ConfigError("centerline axis must be x, y or z");
            if (spec.axis >= c.mesh->dim()) throw ConfigError("centerline axis exceeds mesh dimension");
            if (const auto p = section.get_optional<std::string>("through")) spec.through = point(*p, "through");
            spec.samples = static_cast<int>(number(section, "samples", 101.0));
            if (spec.samples < 2) throw ConfigError("centerline needs at least 2 samples");
            c.centerline = spec;
        } else {
            throw ConfigError("unknown section [" + name + "]");
        }
    }
    // validates tags and the enclosed-flow pin requirement
    (void)build_dofmap(*c.mesh, c.bcs, SolvePath::condensed);
    return c;
}

CaseDefinition load_case_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open case file '" + path.string() + "'");
    return parse_case_file(in, path.parent_path());
}

}  // namespace vms
