#include "vms/cli.hpp"

#include "vms/case_file.hpp"
#include "vms/output.hpp"
#include "vms/perf.hpp"
#include "vms/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace vms::cli {

namespace {

struct Options {
    std::string case_name = "lid3d";
    int divisions = 0;
    int dim = 3;
    double reynolds = 100.0;
    double viscosity = 0.0;
    bool stokes = false;
    std::string path = "condensed";
    std::string solver = "gmres";
    std::string preconditioner = "ilu0";
    double atol = 1e-10;
    double rtol = 1e-8;
    int max_newton = 25;
    double krylov_rtol = 1e-12;
    int restart = 50;
    int max_cycles = 50;
    int workers = 0;
    int quadrature = 0;
    std::string out_dir = "vmsflow_out";

    double dt = 0.0;
    int steps = -1;
    int vtk_every = 0;

    std::string schedule = "100,400,800";

    std::string levels;
    int fd_states = 100;

    std::string workers_list = "1,2,4";
    int repeats = 3;

    int box = 0;
    std::string input;
    std::string format = "native";
    std::string mesh_out;
};

struct Flags {
    CLI::Option* reynolds = nullptr;
    CLI::Option* viscosity = nullptr;
    CLI::Option* workers = nullptr;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& what)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::stringstream is(item);
        T v{};
        if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError("malformed " + what + " entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(what + " is empty");
    return out;
}

int resolve_workers(const Options& o, const Flags& f)
{
    int w = 1;
    if (f.workers != nullptr && f.workers->count() > 0) {
        w = o.workers;
    } else if (const char* env = std::getenv("VMS_WORKERS"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            w = std::stoi(env, &used);
            if (env[used] != '\0') throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string("VMS_WORKERS is not an integer: '") + env + "'");
        }
    }
    if (w < 1) throw ConfigError("worker count must be positive");
    return w;
}

NewtonConfig newton_config(const Options& o, int workers)
{
    NewtonConfig cfg;
    cfg.atol = o.atol;
    cfg.rtol = o.rtol;
    cfg.max_newton = o.max_newton;
    cfg.linear_solver = parse_linear_solver(o.solver);
    cfg.krylov.rtol = o.krylov_rtol;
    cfg.krylov.restart = o.restart;
    cfg.krylov.max_iters = o.max_cycles;
    cfg.krylov.preconditioner = linalg::parse_preconditioner(o.preconditioner);
    cfg.workers = workers;
    if (!(cfg.atol > 0.0) || !(cfg.rtol > 0.0) || !(cfg.krylov.rtol > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    if (cfg.max_newton < 0 || cfg.krylov.restart < 1 || cfg.krylov.max_iters < 1) {
        throw ConfigError("iteration limits must be positive");
    }
    return cfg;
}

CaseDefinition make_case(const Options& o, const Flags& f)
{
    const bool nu_given = f.viscosity != nullptr && f.viscosity->count() > 0;
    const bool re_given = f.reynolds != nullptr && f.reynolds->count() > 0;
    if (nu_given && re_given) throw ConfigError("give either --nu or --re, not both");
    if (nu_given && !(o.viscosity > 0.0)) throw ConfigError("--nu must be positive");
    if (o.divisions < 0) throw ConfigError("--div must be positive");
    CaseDefinition c;
    if (o.case_name == "lid3d") {
        c = case_lid_cavity_3d(o.divisions > 0 ? o.divisions : 6, o.reynolds);
    } else if (o.case_name == "bodyforce") {
        c = case_body_force_cavity(o.dim, o.divisions > 0 ? o.divisions : 8,
                                   nu_given ? o.viscosity : (re_given ? 1.0 / o.reynolds : 1.0));
    } else if (o.case_name == "jet") {
        c = case_jet_orifice_3d(o.divisions > 0 ? o.divisions : 8, nu_given ? o.viscosity : 0.001);
    } else {
        c = load_case_file(o.case_name);
        if (re_given) c.viscosity = 1.0 / o.reynolds;
    }
    if (nu_given) c.viscosity = o.viscosity;
    if (o.stokes) c.convection = false;
    return c;
}

Manifest base_manifest(const std::string& command, const Options& o, const CaseDefinition& c, const NewtonConfig& cfg)
{
    const auto counts = dof_counts(*c.mesh);
    auto num = [](double v) {
        std::ostringstream s;
        s << std::setprecision(17) << v;
        return s.str();
    };
    return {
        {"command", command},
        {"case", c.name},
        {"case_source", o.case_name},
        {"dim", std::to_string(c.mesh->dim())},
        {"nodes", std::to_string(c.mesh->num_nodes())},
        {"elements", std::to_string(c.mesh->num_elements())},
        {"coarse_dofs", std::to_string(counts.coarse)},
        {"fine_dofs", std::to_string(counts.fine)},
        {"viscosity", num(c.viscosity)},
        {"reynolds", num(1.0 / c.viscosity)},
        {"convection", c.convection ? "true" : "false"},
        {"path", o.path},
        {"linear_solver", to_string(cfg.linear_solver)},
        {"preconditioner", linalg::to_string(cfg.krylov.preconditioner)},
        {"newton_atol", num(cfg.atol)},
        {"newton_rtol", num(cfg.rtol)},
        {"max_newton", std::to_string(cfg.max_newton)},
        {"divergence_factor", num(cfg.divergence_factor)},
        {"krylov_rtol", num(cfg.krylov.rtol)},
        {"krylov_restart", std::to_string(cfg.krylov.restart)},
        {"krylov_max_cycles", std::to_string(cfg.krylov.max_iters)},
        {"quadrature_degree",
         std::to_string(o.quadrature > 0 ? o.quadrature : default_quadrature_degree(c.mesh->dim()))},
        {"workers", std::to_string(cfg.workers)},
    };
}

void print_iteration(std::ostream& out, const IterationRecord& r)
{
    out << "  newton " << std::setw(2) << r.iteration << "  residual " << std::scientific << std::setprecision(3)
        << r.residual_norm << "  continuity " << r.continuity_norm << std::defaultfloat;
    if (r.linear_iterations > 0) out << "  linear " << r.linear_iterations;
    out << '\n';
}

void print_trace_tail(std::ostream& err, const ConvergenceTrace& trace)
{
    err << "convergence trace (last " << std::min<std::size_t>(trace.iterations.size(), 5) << " of "
        << trace.iterations.size() << " records):\n";
    const std::size_t start = trace.iterations.size() > 5 ? trace.iterations.size() - 5 : 0;
    for (std::size_t i = start; i < trace.iterations.size(); ++i) print_iteration(err, trace.iterations[i]);
}

int cmd_solve(const Options& o, const Flags& f, std::ostream& out)
{
    const int workers = resolve_workers(o, f);
    const CaseDefinition c = make_case(o, f);
    const NewtonConfig cfg = newton_config(o, workers);
    const Discretization disc(*c.mesh, c.bcs, parse_solve_path(o.path), o.quadrature);
    out << "solve " << c.name << ": " << c.mesh->num_elements() << " elements, " << disc.dofs().num_free()
        << " unknowns, nu = " << c.viscosity << '\n';
    const auto result = newton_solve(disc, c.case_data(), State::zero(*c.mesh), cfg);
    for (const auto& r : result.trace.iterations) print_iteration(out, r);
    out << "converged in " << result.trace.newton_iterations() << " Newton iterations\n";

    const std::filesystem::path dir(o.out_dir);
    write_vtk(*c.mesh, result.state, dir / "solution.vtk");
    write_trace_csv(result.trace, dir / "trace.csv");
    Manifest m = base_manifest("solve", o, c, cfg);
    if (c.centerline) {
        const auto line =
            extract_centerline(*c.mesh, result.state, c.centerline->axis, c.centerline->through, c.centerline->samples);
        write_centerline_csv(line, dir / "centerline.csv");
        m.emplace_back("centerline_axis", std::to_string(c.centerline->axis));
        m.emplace_back("centerline_samples", std::to_string(c.centerline->samples));
    }
    m.emplace_back("newton_iterations", std::to_string(result.trace.newton_iterations()));
    write_manifest(m, dir / "manifest.txt");
    out << "wrote " << (dir / "solution.vtk").string() << '\n';
    return 0;
}

int cmd_transient(const Options& o, const Flags& f, std::ostream& out)
{
    const int workers = resolve_workers(o, f);
    const CaseDefinition c = make_case(o, f);
    const NewtonConfig cfg = newton_config(o, workers);
    const double dt = o.dt > 0.0 ? o.dt : (c.dt > 0.0 ? c.dt : 0.01);
    const int steps = o.steps >= 0 ? o.steps : (c.n_steps > 0 ? c.n_steps : 10);
    const Discretization disc(*c.mesh, c.bcs, parse_solve_path(o.path), o.quadrature);
    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream steps_csv(dir / "steps.csv");
    if (!steps_csv) throw Error("cannot write " + (dir / "steps.csv").string());
    steps_csv << std::setprecision(17) << "step,time,newton_iterations,residual,p_min,p_min_x,p_min_y,p_min_z\n";
    out << "transient " << c.name << ": dt = " << dt << ", " << steps << " steps, nu = " << c.viscosity << '\n';

    const auto on_step = [&](int step, double t, const State& s, const ConvergenceTrace& trace) {
        Index argmin = 0;
        s.pressure.minCoeff(&argmin);
        const Vec3 x = c.mesh->point(argmin);
        out << "  step " << std::setw(4) << step << "  t = " << std::fixed << std::setprecision(4) << t
            << std::defaultfloat << "  newton " << trace.newton_iterations() << "  residual " << std::scientific
            << std::setprecision(3) << trace.final_residual() << "  p_min " << s.pressure[argmin]
            << std::defaultfloat << '\n';
        steps_csv << step << ',' << t << ',' << trace.newton_iterations() << ',' << trace.final_residual() << ','
                  << s.pressure[argmin] << ',' << x[0] << ',' << x[1] << ',' << x[2] << '\n';
        if (o.vtk_every > 0 && step % o.vtk_every == 0) {
            std::ostringstream name;
            name << "solution_" << std::setw(5) << std::setfill('0') << step << ".vtk";
            write_vtk(*c.mesh, s, dir / name.str());
        }
    };
    CaseData data = c.case_data();
    const auto result = timestep_drive(disc, data, State::zero(*c.mesh), dt, steps, cfg, on_step);
    write_vtk(*c.mesh, result.states.back(), dir / "solution.vtk");
    Manifest m = base_manifest("transient", o, c, cfg);
    m.emplace_back("dt", std::to_string(dt));
    m.emplace_back("steps", std::to_string(steps));
    if (c.centerline) {
        const auto line = extract_centerline(*c.mesh, result.states.back(), c.centerline->axis,
                                             c.centerline->through, c.centerline->samples);
        write_centerline_csv(line, dir / "centerline.csv");
    }
    write_manifest(m, dir / "manifest.txt");
    out << "completed " << steps << " steps\n";
    return 0;
}

int cmd_continue(const Options& o, const Flags& f, std::ostream& out, std::ostream& err)
{
    const int workers = resolve_workers(o, f);
    const auto schedule = parse_list<double>(o.schedule, "schedule");
    Options local = o;
    if (local.divisions == 0) local.divisions = 10;
    Flags no_re = f;
    no_re.reynolds = nullptr;
    CaseDefinition c = make_case(local, no_re);
    const NewtonConfig cfg = newton_config(o, workers);
    const Discretization disc(*c.mesh, c.bcs, parse_solve_path(o.path), o.quadrature);
    out << "continue " << c.name << ": " << c.mesh->num_elements() << " elements, schedule " << o.schedule << '\n';
    const auto result = continue_reynolds(disc, c.case_data(), schedule, State::zero(*c.mesh), cfg);

    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "continuation.csv");
    csv << std::setprecision(17) << "reynolds,converged,newton_iterations,final_residual\n";
    for (const auto& s : result.stages) {
        out << "  Re " << std::setw(6) << s.reynolds << "  " << (s.converged ? "converged" : "FAILED") << " after "
            << s.trace.newton_iterations() << " Newton iterations, residual " << std::scientific
            << std::setprecision(3) << s.trace.final_residual() << std::defaultfloat << '\n';
        csv << s.reynolds << ',' << (s.converged ? 1 : 0) << ',' << s.trace.newton_iterations() << ','
            << s.trace.final_residual() << '\n';
    }
    Manifest m = base_manifest("continue", o, c, cfg);
    m.emplace_back("schedule", o.schedule);
    m.emplace_back("last_converged_reynolds", result.last_converged ? std::to_string(*result.last_converged) : "none");
    write_manifest(m, dir / "manifest.txt");
    if (result.last_converged) {
        write_vtk(*c.mesh, result.state, dir / "solution.vtk");
        out << "last converged Re = " << *result.last_converged << '\n';
    } else {
        out << "no Reynolds number converged\n";
    }
    if (!result.completed()) {
        err << "continuation stopped at Re = " << result.stages.back().reynolds << ": "
            << result.stages.back().trace.message << '\n';
        print_trace_tail(err, result.stages.back().trace);
        return 1;
    }
    return 0;
}

int cmd_verify(const Options& o, const Flags& f, std::ostream& out)
{
    const int workers = resolve_workers(o, f);
    NewtonConfig cfg = newton_config(o, workers);
    bool all = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        all = all && pass;
    };

    {
        const std::vector<int> levels = o.levels.empty() ? (o.dim == 2 ? std::vector<int>{4, 8, 16}
                                                                       : std::vector<int>{2, 4, 8})
                                                         : parse_list<int>(o.levels, "levels");
        NewtonConfig direct = cfg;
        direct.linear_solver = LinearSolverKind::sparse_direct;
        const auto study = manufactured_study(o.dim, levels, o.viscosity > 0.0 ? o.viscosity : 0.1, direct);
        for (const auto& l : study.levels) {
            out << "  div " << std::setw(3) << l.divisions << "  |e_v| " << std::scientific << std::setprecision(4)
                << l.errors.velocity_l2 << "  |e_p| " << l.errors.pressure_l2 << std::defaultfloat << '\n';
        }
        std::ostringstream d;
        d << "velocity order " << std::fixed << std::setprecision(3) << study.velocity_order << " (>= 1.9), pressure order "
          << study.pressure_order << " (>= 0.9)";
        report("manufactured convergence", study.velocity_order >= 1.9 && study.pressure_order >= 0.9, d.str());
    }
    {
        const auto c = case_lid_cavity_3d(2, 100.0);
        CaseData data = c.case_data();
        data.dt = 0.1;
        State prev = State::zero(*c.mesh);
        data.previous = &prev;
        const auto basis = TabulatedBasis::build(3, default_quadrature_degree(3));
        const auto check = check_tangent(*c.mesh, basis, data, o.fd_states);
        std::ostringstream d;
        d << check.states << " random states, worst relative error " << std::scientific << std::setprecision(3)
          << check.max_relative_error << " in " << check.worst_block << " (<= 1e-6)";
        report("tangent finite differences", check.max_relative_error <= 1e-6, d.str());
    }
    {
        const auto c = case_lid_cavity_3d(3, 100.0);
        NewtonConfig direct = cfg;
        direct.linear_solver = LinearSolverKind::dense_direct;
        const auto cmp = compare_paths(c, direct);
        std::ostringstream d;
        d << cmp.iterations << " iterates, max difference " << std::scientific << std::setprecision(3)
          << cmp.max_difference << " (<= 1e-8)";
        report("condensed vs monolithic", cmp.converged && cmp.max_difference <= 1e-8, d.str());
    }
    return all ? 0 : 1;
}

int cmd_perf(const Options& o, const Flags& f, std::ostream& out)
{
    const auto workers = parse_list<int>(o.workers_list, "workers list");
    Options local = o;
    if (local.divisions == 0) local.divisions = 10;
    const CaseDefinition c = make_case(local, f);
    const Discretization disc(*c.mesh, c.bcs, parse_solve_path(o.path), o.quadrature);
    State state = State::zero(*c.mesh);
    apply_dirichlet(*c.mesh, c.bcs, 0.0, state);
    std::vector<linalg::CsrMatrix> matrices;
    const auto record = measure_assembly(disc, state, c.case_data(), workers, o.repeats, &matrices);
    double mismatch = 0.0;
    for (const auto& m : matrices) mismatch = std::max(mismatch, linalg::max_abs_difference(m, matrices.front()));

    write_perf_table(record, out);
    const auto& serial = record.samples.front();
    const double s = serial.phases.total() > 0.0 ? serial.phases.assemble / serial.phases.total() : 0.0;
    out << "serial fraction estimate (scatter / total) " << std::setprecision(4) << s << ", Amdahl bound "
        << amdahl_speedup(s, std::numeric_limits<double>::infinity()) << '\n';
    out << "max matrix difference across worker counts " << mismatch << '\n';

    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream table(dir / "perf.txt");
    write_perf_table(record, table);
    std::ofstream csv(dir / "perf.csv");
    write_perf_csv(record, csv);
    Manifest m = base_manifest("perf", o, c, newton_config(o, 1));
    m.emplace_back("workers_list", o.workers_list);
    m.emplace_back("repeats", std::to_string(o.repeats));
    write_manifest(m, dir / "manifest.txt");
    return mismatch <= 1e-14 ? 0 : 1;
}

int cmd_mesh(const Options& o, std::ostream& out)
{
    Mesh mesh = [&] {
        if (!o.input.empty()) {
            MeshFormat format = MeshFormat::native;
            if (o.format == "gmsh") format = MeshFormat::gmsh_v2;
            else if (o.format != "native") throw ConfigError("unknown mesh format '" + o.format + "'");
            return load_mesh(o.input, format);
        }
        if (o.box != 2 && o.box != 3) throw ConfigError("mesh needs --box 2|3 or --in FILE");
        const int d = o.divisions > 0 ? o.divisions : 4;
        return generate_box_mesh(o.box, {d, d, d});
    }();
    const auto violations = validate(mesh);
    const auto counts = dof_counts(mesh);
    out << "dim " << mesh.dim() << ", " << mesh.num_nodes() << " nodes, " << mesh.num_elements() << " elements, "
        << mesh.num_faces() << " boundary faces\n";
    out << "dofs: coarse " << counts.coarse << ", fine " << counts.fine << ", fine fraction " << std::fixed
        << std::setprecision(4) << counts.fine_fraction() << std::defaultfloat << '\n';
    for (const auto& v : violations) out << "violation: " << v.message << '\n';
    if (!o.mesh_out.empty()) {
        write_native(mesh, std::filesystem::path(o.mesh_out));
        out << "wrote " << o.mesh_out << '\n';
    }
    return violations.empty() ? 0 : 1;
}

void add_case_options(CLI::App* app, Options& o, Flags& f)
{
    app->add_option("--case", o.case_name, "lid3d, bodyforce, jet or a case file");
    app->add_option("--div", o.divisions, "divisions per axis");
    app->add_option("--dim", o.dim, "dimension for bodyforce")->check(CLI::IsMember({2, 3}));
    f.reynolds = app->add_option("--re", o.reynolds, "Reynolds number (nu = 1/Re)");
    f.viscosity = app->add_option("--nu", o.viscosity, "kinematic viscosity");
    app->add_flag("--stokes", o.stokes, "drop the convective term");
}

void add_solver_options(CLI::App* app, Options& o, Flags& f)
{
    app->add_option("--path", o.path, "condensed or monolithic")->check(CLI::IsMember({"condensed", "monolithic"}));
    app->add_option("--solver", o.solver, "gmres, direct or dense");
    app->add_option("--precond", o.preconditioner, "ilu0, jacobi or none");
    app->add_option("--atol", o.atol, "Newton absolute tolerance");
    app->add_option("--rtol", o.rtol, "Newton relative tolerance");
    app->add_option("--max-newton", o.max_newton, "Newton iteration limit");
    app->add_option("--krylov-rtol", o.krylov_rtol, "GMRES relative residual");
    app->add_option("--restart", o.restart, "GMRES restart length");
    app->add_option("--max-cycles", o.max_cycles, "GMRES restart cycles");
    app->add_option("--quadrature", o.quadrature, "element quadrature degree");
    f.workers = app->add_option("--workers", o.workers, "worker threads (default: VMS_WORKERS or 1)");
    app->add_option("--out", o.out_dir, "output directory");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"VMS bubble-stabilized incompressible Navier-Stokes solver", "vmsflow"};
    app.require_subcommand(1);
    Options o;
    Flags f;

    auto* solve = app.add_subcommand("solve", "steady solve");
    add_case_options(solve, o, f);
    add_solver_options(solve, o, f);

    Flags ft;
    auto* transient = app.add_subcommand("transient", "backward Euler time stepping");
    Options to;
    to.case_name = "jet";
    add_case_options(transient, to, ft);
    add_solver_options(transient, to, ft);
    transient->add_option("--dt", to.dt, "time step");
    transient->add_option("--steps", to.steps, "number of steps");
    transient->add_option("--vtk-every", to.vtk_every, "write a VTK file every N steps");

    auto* cont = app.add_subcommand("continue", "Reynolds continuation");
    Flags fc;
    add_case_options(cont, o, fc);
    add_solver_options(cont, o, fc);
    cont->add_option("--schedule", o.schedule, "comma-separated increasing Reynolds numbers");

    auto* verify = app.add_subcommand("verify", "manufactured convergence, tangent and condensation checks");
    Options vo;
    vo.dim = 2;
    Flags fv;
    add_solver_options(verify, vo, fv);
    verify->add_option("--dim", vo.dim, "manufactured study dimension")->check(CLI::IsMember({2, 3}));
    verify->add_option("--levels", vo.levels, "comma-separated divisions");
    verify->add_option("--nu", vo.viscosity, "manufactured study viscosity (default 0.1)");
    verify->add_option("--fd-states", vo.fd_states, "random states for the tangent check");

    auto* perf = app.add_subcommand("perf", "assembly timing across worker counts");
    Flags fp;
    add_case_options(perf, o, fp);
    add_solver_options(perf, o, fp);
    perf->add_option("--workers-list", o.workers_list, "comma-separated worker counts");
    perf->add_option("--repeats", o.repeats, "timing repeats per worker count");

    auto* mesh = app.add_subcommand("mesh", "generate, validate or convert meshes");
    mesh->add_option("--box", o.box, "generate the unit box of this dimension");
    mesh->add_option("--div", o.divisions, "divisions per axis");
    mesh->add_option("--in", o.input, "mesh file to load");
    mesh->add_option("--format", o.format, "native or gmsh");
    mesh->add_option("--out", o.mesh_out, "native mesh file to write");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(o, f, out);
        if (transient->parsed()) return cmd_transient(to, ft, out);
        if (cont->parsed()) return cmd_continue(o, fc, out, err);
        if (verify->parsed()) return cmd_verify(vo, fv, out);
        if (perf->parsed()) return cmd_perf(o, fp, out);
        if (mesh->parsed()) return cmd_mesh(o, out);
    } catch (const TimeStepError& e) {
        err << "error: " << e.what() << '\n';
        print_trace_tail(err, e.trace());
        return 1;
    } catch (const NewtonError& e) {
        err << "error: " << e.what() << '\n';
        print_trace_tail(err, e.trace());
        return 1;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const MeshParseError& e) {
        err << "mesh error: " << e.what() << '\n';
        return 2;
    } catch (const MeshError& e) {
        err << "mesh error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int run(int argc, char** argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace vms::cli
