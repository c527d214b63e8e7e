#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "floatwave/audits.hpp"
#include "floatwave/coupled.hpp"
#include "floatwave/io.hpp"

using json = nlohmann::json;
using namespace floatwave;

namespace {

struct Options {
    std::string body_path;
    double omega_min = 1.0;
    double omega_max = 0.0; // default: omega_min
    int n_omega = 1;
    double k = 0.0;
    double depth = -1.0; // <0: keep body file setting; 0: infinite; >0: finite
    double hmesh = 0.1;
    double xt = 0.0; // 0: automatic
    int modes = 12;
    std::string restriction = "full";
    std::string parity = "any";
    std::string out_dir;
    bool force = false;
};

MotionRestriction parse_restriction(const std::string& s) {
    if (s == "full") return MotionRestriction::Full;
    if (s == "sway") return MotionRestriction::Sway;
    if (s == "heave") return MotionRestriction::Heave;
    if (s == "roll") return MotionRestriction::Roll;
    throw Error(ErrorCode::BadConfig, "unknown restriction " + s);
}

Parity parse_parity(const std::string& s) {
    if (s == "any") return Parity::Any;
    if (s == "odd") return Parity::Odd;
    if (s == "even") return Parity::Even;
    throw Error(ErrorCode::BadConfig, "unknown parity " + s);
}

std::string canonical_config(const std::string& cmd, const Options& o) {
    std::ostringstream os;
    os << cmd << ";body=" << o.body_path << ";omega=" << format_number(o.omega_min) << ","
       << format_number(o.omega_max) << "," << o.n_omega << ";k=" << format_number(o.k)
       << ";depth=" << format_number(o.depth) << ";hmesh=" << format_number(o.hmesh)
       << ";xt=" << format_number(o.xt) << ";modes=" << o.modes << ";restriction="
       << o.restriction << ";parity=" << o.parity;
    return os.str();
}

std::vector<double> omega_grid(const Options& o) {
    if (o.omega_min <= 0) throw Error(ErrorCode::BadConfig, "omega-min must be positive");
    if (o.n_omega < 1) throw Error(ErrorCode::BadConfig, "n-omega must be at least 1");
    const double hi = o.omega_max > 0 ? o.omega_max : o.omega_min;
    std::vector<double> grid(static_cast<std::size_t>(o.n_omega));
    for (int i = 0; i < o.n_omega; ++i)
        grid[static_cast<std::size_t>(i)] =
            o.n_omega == 1 ? o.omega_min
                           : o.omega_min + (hi - o.omega_min) * i / (o.n_omega - 1);
    return grid;
}

BodyFile load_body(const Options& o) {
    if (o.body_path.empty()) throw Error(ErrorCode::BadConfig, "--body is required");
    BodyFile bf = read_body_file(o.body_path);
    if (o.depth == 0) {
        bf.water.infinite_depth = true;
    } else if (o.depth > 0) {
        bf.water.infinite_depth = false;
        bf.water.depth = o.depth;
    }
    return bf;
}

MeshConfig mesh_config(const Options& o, bool symmetric) {
    MeshConfig mc;
    mc.h_mesh = o.hmesh;
    mc.x_trunc = o.xt;
    mc.symmetric = symmetric;
    if (mc.h_mesh <= 0) throw Error(ErrorCode::BadConfig, "hmesh must be positive");
    return mc;
}

void emit(const Options& o, const std::string& name, const std::string& text) {
    if (o.out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(o.out_dir);
    write_file((std::filesystem::path(o.out_dir) / name).string(), text, o.force);
}

json matrix_json(const Eigen::Matrix3d& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
    return rows;
}

int run_check_geometry(const Options& o) {
    BodyFile bf = load_body(o);
    validate_body(bf.body);
    Decomposition dec = split_at_waterline(bf.body);
    JohnReport jr = check_john_condition(dec);

    json j;
    j["version"] = version();
    j["n_parts"] = dec.parts.size();
    j["max_draft"] = dec.max_draft;
    j["body_diameter"] = dec.body_diameter;
    j["centroid"] = {dec.centroid_of_mass.x, dec.centroid_of_mass.y};
    j["symmetric"] = check_symmetry(bf.body);
    j["john_condition"] = {{"all", jr.all}, {"per_part", jr.per_part}};
    json parts = json::array();
    for (const auto& p : dec.parts)
        parts.push_back({{"waterplane", {p.waterplane.lo, p.waterplane.hi}},
                         {"area", polygon_area(p.polygon)},
                         {"wetted_segments", p.wetted.size()}});
    j["parts"] = parts;
    if (auto b = inner_half_spacing(dec)) j["inner_half_spacing"] = *b;
    emit(o, "geometry.json", j.dump(2) + "\n");
    return 0;
}

int run_hydrostatics(const Options& o) {
    BodyFile bf = load_body(o);
    validate_body(bf.body);
    Decomposition dec = split_at_waterline(bf.body);
    HydrostaticModel model = compute_matrices(bf.body, dec);
    model.report = check_equilibrium(model, bf.body, dec);

    json j;
    j["version"] = version();
    j["E"] = matrix_json(model.E);
    j["K"] = matrix_json(model.K);
    j["moments"] = {{"IM", model.IM},   {"IM2", model.IM2}, {"ID", model.ID},
                    {"IDx", model.IDx}, {"IDxx", model.IDxx}, {"IBy", model.IBy}};
    j["immersed_area"] = model.immersed_area;
    j["equilibrium"] = {{"archimedes_residual", model.report.archimedes_residual},
                        {"alignment_residual", model.report.alignment_residual},
                        {"in_equilibrium", model.report.in_equilibrium},
                        {"stable", model.report.stable}};
    try {
        j["lambda0"] = lambda0(model, bf.water.gravity);
    } catch (const Error& e) {
        j["lambda0_error"] = e.what();
    }
    emit(o, "hydrostatics.json", j.dump(2) + "\n");

    std::ostringstream tab;
    tab << "I^M    = " << format_number(model.IM) << "\n"
        << "I^M_2  = " << format_number(model.IM2) << "\n"
        << "I^D    = " << format_number(model.ID) << "\n"
        << "I^D_x  = " << format_number(model.IDx) << "\n"
        << "I^D_xx = " << format_number(model.IDxx) << "\n"
        << "I^B_y  = " << format_number(model.IBy) << "\n"
        << "equilibrium: " << (model.report.in_equilibrium ? "yes" : "no")
        << ", stable: " << (model.report.stable ? "yes" : "no") << "\n";
    if (!o.out_dir.empty()) std::cout << tab.str();
    return 0;
}

int run_bands(const Options& o) {
    BodyFile bf = load_body(o);
    validate_body(bf.body);
    Decomposition dec = split_at_waterline(bf.body);
    auto b = inner_half_spacing(dec);
    if (!b)
        throw Error(ErrorCode::BadConfig,
                    "band classification needs a symmetric two-part body");

    CsvWriter csv(config_hash(canonical_config("bands", o)));
    csv.comment("half spacing b = " + format_number(*b));
    csv.columns({"omega", "nu", "ell", "ell0", "lb", "omega_minus", "omega_plus", "m"});
    for (double w : omega_grid(o)) {
        const double nu = w * w / bf.water.gravity;
        const double depth = bf.water.infinite_depth ? effective_depth(nu, dec.max_draft)
                                                     : bf.water.depth;
        WaveParameters p =
            make_wave_parameters(w, o.k, bf.water.gravity, depth, bf.water.infinite_depth);
        BandClassification band = band_classifier(p, *b);
        const double l = p.infinite_depth ? p.ell : p.ell0;
        csv.cell(w);
        csv.cell(p.nu);
        csv.cell(p.ell);
        csv.cell(p.ell0);
        csv.cell(l * *b);
        csv.cell(static_cast<long long>(band.omega_minus));
        csv.cell(static_cast<long long>(band.omega_plus));
        csv.cell(static_cast<long long>(band.m));
        csv.end_row();
    }
    emit(o, "bands.csv", csv.str());
    return 0;
}

struct Setup {
    BodyFile bf;
    Decomposition dec;
    HydrostaticModel model;
    Mesh mesh;
    WaveParameters params;
};

Setup make_setup(const Options& o, double omega) {
    Setup s{load_body(o), {}, {}, {}, {}};
    validate_body(s.bf.body);
    s.dec = split_at_waterline(s.bf.body);
    s.model = compute_matrices(s.bf.body, s.dec);
    s.model.report = check_equilibrium(s.model, s.bf.body, s.dec);

    const double nu = omega * omega / s.bf.water.gravity;
    const double depth = s.bf.water.infinite_depth ? effective_depth(nu, s.dec.max_draft)
                                                   : s.bf.water.depth;
    s.params = make_wave_parameters(omega, o.k, s.bf.water.gravity, depth,
                                    s.bf.water.infinite_depth);
    s.mesh = generate_mesh(&s.dec, depth, mesh_config(o, check_symmetry(s.bf.body)));
    return s;
}

int run_solve(const Options& o) {
    const double omega = o.omega_min;
    Setup s = make_setup(o, omega);
    SolverConfig sc;
    sc.n_modes = o.modes;
    FieldProblem problem(s.mesh, s.params, sc, parse_parity(o.parity));
    RadiationSet rad = radiation_set(problem, s.dec, parse_restriction(o.restriction));

    const std::string hash = config_hash(canonical_config("solve", o));
    static const char* comp[3] = {"sway", "heave", "roll"};
    json summary;
    summary["version"] = version();
    summary["omega"] = omega;
    summary["k"] = o.k;
    summary["depth_used"] = s.params.depth;
    summary["ell0"] = s.params.ell0;
    summary["ell0_paper"] = s.params.ell0_paper;
    summary["added_mass"] = matrix_json(rad.added_mass);
    summary["damping"] = matrix_json(rad.damping);

    for (std::size_t idx = 0; idx < rad.active.size(); ++idx) {
        const int jm = rad.active[idx];
        const FieldSolution& sol = rad.phi[idx];
        CsvWriter csv(hash);
        csv.comment(std::string("radiation potential, ") + comp[jm]);
        csv.columns({"node", "x", "y", "re_phi", "im_phi"});
        for (std::size_t n = 0; n < s.mesh.nodes.size(); ++n) {
            csv.cell(static_cast<long long>(n));
            csv.cell(s.mesh.nodes[n].x);
            csv.cell(s.mesh.nodes[n].y);
            csv.cell(sol.phi(static_cast<long>(n)).real());
            csv.cell(sol.phi(static_cast<long>(n)).imag());
            csv.end_row();
        }
        emit(o, std::string("field_") + comp[jm] + ".csv", csv.str());

        Eigen::Vector3cd z = Eigen::Vector3cd::Zero();
        z(jm) = 1.0;
        AuditReport rep = audit_solution(sol, z, s.model, false, true);
        json js;
        js["a_plus"] = {sol.farfield.a_plus.real(), sol.farfield.a_plus.imag()};
        js["a_minus"] = {sol.farfield.a_minus.real(), sol.farfield.a_minus.imag()};
        js["kinetic"] = sol.kinetic;
        js["potential_fs"] = sol.potential_fs;
        js["energy_flux_residual"] = rep.energy_flux_residual;
        js["equipartition_residual"] = rep.equipartition_residual;
        summary[comp[jm]] = js;
    }
    emit(o, "solve.json", summary.dump(2) + "\n");
    return 0;
}

int run_scan(const Options& o) {
    BodyFile bf = load_body(o);
    validate_body(bf.body);
    Decomposition dec = split_at_waterline(bf.body);
    HydrostaticModel model = compute_matrices(bf.body, dec);
    model.report = check_equilibrium(model, bf.body, dec);

    ScanOptions so;
    so.restriction = parse_restriction(o.restriction);
    so.parity = parse_parity(o.parity);
    so.n_modes = o.modes;
    so.mesh = mesh_config(o, check_symmetry(bf.body));
    ScanGrid grid;
    grid.omegas = omega_grid(o);
    grid.k = o.k;

    std::vector<ScanRow> rows = trapped_mode_scan(bf.body, dec, model, bf.water, grid, so);

    bool contradiction = false;
    CsvWriter csv(config_hash(canonical_config("scan", o)));
    csv.comment("restriction " + o.restriction + ", parity " + o.parity);
    csv.columns({"omega", "nu", "ell", "ell0", "sigma_ratio", "flux_ratio", "flagged",
                 "certificate", "error"});
    for (ScanRow& row : rows) {
        if (row.error.empty()) {
            WaveParameters p = make_wave_parameters(
                row.omega, o.k, bf.water.gravity,
                bf.water.infinite_depth ? effective_depth(row.nu, dec.max_draft)
                                        : bf.water.depth,
                bf.water.infinite_depth);
            row.certificate =
                certify(make_certify_input(bf.body, dec, model, p, so.restriction, so.parity))
                    .applicable_statement;
            if (row.flagged && row.certificate != "none") contradiction = true;
        }
        csv.cell(row.omega);
        csv.cell(row.nu);
        csv.cell(row.ell);
        csv.cell(row.ell0);
        csv.cell(row.sigma_ratio);
        csv.cell(row.flux_ratio);
        csv.cell(static_cast<long long>(row.flagged));
        csv.cell(row.certificate.empty() ? "none" : row.certificate);
        csv.cell(row.error);
        csv.end_row();
    }
    emit(o, "scan.csv", csv.str());
    return contradiction ? 4 : 0;
}

int run_scatter(const Options& o) {
    CsvWriter csv(config_hash(canonical_config("scatter", o)));
    csv.columns({"omega", "nu", "ell0", "re_R", "im_R", "re_T", "im_T", "abs_R", "abs_T",
                 "energy_defect", "error"});
    for (double w : omega_grid(o)) {
        csv.cell(w);
        try {
            Setup s = make_setup(o, w);
            SolverConfig sc;
            sc.n_modes = o.modes;
            FieldProblem problem(s.mesh, s.params, sc, Parity::Any);
            ScatterResult res = solve_scattering(problem, s.dec, s.model);
            csv.cell(s.params.nu);
            csv.cell(s.params.ell0);
            csv.cell(res.reflection.real());
            csv.cell(res.reflection.imag());
            csv.cell(res.transmission.real());
            csv.cell(res.transmission.imag());
            csv.cell(std::abs(res.reflection));
            csv.cell(std::abs(res.transmission));
            csv.cell(res.energy_defect);
            csv.cell(std::string());
        } catch (const Error& e) {
            for (int i = 0; i < 9; ++i) csv.cell(std::string("nan"));
            csv.cell(std::string(e.what()));
        }
        csv.end_row();
    }
    emit(o, "scatter.csv", csv.str());
    return 0;
}

int run_audit(const Options& o) {
    const double omega = o.omega_min;
    Setup s = make_setup(o, omega);
    SolverConfig sc;
    sc.n_modes = o.modes;
    FieldProblem problem(s.mesh, s.params, sc, parse_parity(o.parity));
    RadiationSet rad = radiation_set(problem, s.dec, parse_restriction(o.restriction));

    static const char* comp[3] = {"sway", "heave", "roll"};
    json j;
    j["version"] = version();
    j["omega"] = omega;
    j["k"] = o.k;
    for (std::size_t idx = 0; idx < rad.active.size(); ++idx) {
        const int jm = rad.active[idx];
        Eigen::Vector3cd z = Eigen::Vector3cd::Zero();
        z(jm) = 1.0;
        AuditReport rep = audit_solution(rad.phi[idx], z, s.model, false, true);
        json rj;
        rj["energy_flux_residual"] = rep.energy_flux_residual;
        rj["transposed_identity_residual"] = rep.transposed_identity_residual;
        rj["combined_identity_residual"] = rep.combined_identity_residual;
        rj["equipartition_residual"] = rep.equipartition_residual;
        rj["ineq_margin"] = rep.ineq_margin;
        if (s.bf.water.infinite_depth) {
            try {
                rj["john_transform_residual"] =
                    john_transform_residual(s.mesh, rad.phi[idx]);
            } catch (const Error& e) {
                rj["john_transform_error"] = e.what();
            }
        }
        j[comp[jm]] = rj;
    }
    UniquenessCertificate cert = certify(make_certify_input(
        s.bf.body, s.dec, s.model, s.params, parse_restriction(o.restriction),
        parse_parity(o.parity)));
    json cj;
    cj["applicable_statement"] = cert.applicable_statement;
    cj["finite_depth_analogue"] = cert.finite_depth_analogue;
    for (const auto& [name, ok] : cert.conditions_checked) cj["conditions"][name] = ok;
    j["certificate"] = cj;
    emit(o, "audit.json", j.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a cylinder floating freely in oblique waves"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--body", o.body_path, "body cross-section JSON file");
        cmd->add_option("--omega-min", o.omega_min, "lowest radian frequency");
        cmd->add_option("--omega-max", o.omega_max, "highest radian frequency");
        cmd->add_option("--n-omega", o.n_omega, "number of frequency grid points");
        cmd->add_option("--k", o.k, "axial wavenumber");
        cmd->add_option("--depth", o.depth, "water depth override (0 = infinite)");
        cmd->add_option("--hmesh", o.hmesh, "target mesh edge length");
        cmd->add_option("--xt", o.xt, "truncation half-width (0 = automatic)");
        cmd->add_option("--modes", o.modes, "evanescent modes in the radiation closure");
        cmd->add_option("--restriction", o.restriction, "sway|heave|roll|full");
        cmd->add_option("--parity", o.parity, "odd|even|any");
        cmd->add_option("--out", o.out_dir, "output directory (default: stdout)");
        cmd->add_flag("--force", o.force, "overwrite existing output files");
        return cmd;
    };

    CLI::App* c_geom = add_common(app.add_subcommand("check-geometry", "validate and decompose the body"));
    CLI::App* c_hydro = add_common(app.add_subcommand("hydrostatics", "mass and restoring matrices"));
    CLI::App* c_bands = add_common(app.add_subcommand("bands", "frequency band classification"));
    CLI::App* c_solve = add_common(app.add_subcommand("solve", "radiation solve at one frequency"));
    CLI::App* c_scan = add_common(app.add_subcommand("scan", "trapped-mode sweep with certificates"));
    CLI::App* c_scatter = add_common(app.add_subcommand("scatter", "reflection/transmission sweep"));
    CLI::App* c_audit = add_common(app.add_subcommand("audit", "energy identity residuals"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_geom->parsed()) return run_check_geometry(o);
        if (c_hydro->parsed()) return run_hydrostatics(o);
        if (c_bands->parsed()) return run_bands(o);
        if (c_solve->parsed()) return run_solve(o);
        if (c_scan->parsed()) return run_scan(o);
        if (c_scatter->parsed()) return run_scatter(o);
        if (c_audit->parsed()) return run_audit(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::BadConfig:
            case ErrorCode::IoError:
            case ErrorCode::InvalidBody:
            case ErrorCode::NotSurfacePiercing:
            case ErrorCode::DegenerateImmersedPart:
            case ErrorCode::ObliqueAngleTooLarge:
                return 2;
            default:
                return 3;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
