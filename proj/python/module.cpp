#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floatwave/audits.hpp"
#include "floatwave/coupled.hpp"
#include "floatwave/io.hpp"

namespace py = pybind11;
using namespace floatwave;

namespace {

struct Session {
    BodyFile bf;
    Decomposition dec;
    HydrostaticModel model;

    explicit Session(const std::string& json_text) : bf(parse_body_json(json_text)) {
        validate_body(bf.body);
        dec = split_at_waterline(bf.body);
        model = compute_matrices(bf.body, dec);
        model.report = check_equilibrium(model, bf.body, dec);
    }

    py::dict geometry() const {
        py::dict d;
        d["n_parts"] = dec.parts.size();
        d["max_draft"] = dec.max_draft;
        d["centroid"] = py::make_tuple(dec.centroid_of_mass.x, dec.centroid_of_mass.y);
        d["symmetric"] = check_symmetry(bf.body);
        d["john_condition"] = check_john_condition(dec).all;
        auto b = inner_half_spacing(dec);
        d["inner_half_spacing"] = b ? py::cast(*b) : py::none();
        return d;
    }

    py::dict hydrostatics() const {
        py::dict d;
        d["E"] = model.E;
        d["K"] = model.K;
        d["IM"] = model.IM;
        d["IM2"] = model.IM2;
        d["ID"] = model.ID;
        d["IDx"] = model.IDx;
        d["IDxx"] = model.IDxx;
        d["IBy"] = model.IBy;
        d["in_equilibrium"] = model.report.in_equilibrium;
        d["stable"] = model.report.stable;
        try {
            d["lambda0"] = lambda0(model, bf.water.gravity);
        } catch (const Error&) {
            d["lambda0"] = py::none();
        }
        return d;
    }

    WaveParameters waves(double omega, double k) const {
        const double nu = omega * omega / bf.water.gravity;
        const double depth = bf.water.infinite_depth ? effective_depth(nu, dec.max_draft)
                                                     : bf.water.depth;
        return make_wave_parameters(omega, k, bf.water.gravity, depth,
                                    bf.water.infinite_depth);
    }

    py::dict bands(double omega, double k) const {
        auto b = inner_half_spacing(dec);
        if (!b)
            throw Error(ErrorCode::BadConfig,
                        "band classification needs a symmetric two-part body");
        WaveParameters p = waves(omega, k);
        BandClassification c = band_classifier(p, *b);
        py::dict d;
        d["lb"] = (p.infinite_depth ? p.ell : p.ell0) * *b;
        d["omega_minus"] = c.omega_minus;
        d["omega_plus"] = c.omega_plus;
        d["m"] = c.m;
        return d;
    }

    py::dict radiation(double omega, double k, double hmesh, int n_modes) const {
        WaveParameters p = waves(omega, k);
        MeshConfig mc;
        mc.h_mesh = hmesh;
        mc.symmetric = check_symmetry(bf.body);
        Mesh mesh = generate_mesh(&dec, p.depth, mc);
        SolverConfig sc;
        sc.n_modes = n_modes;
        FieldProblem problem(mesh, p, sc);
        RadiationSet rad = radiation_set(problem, dec);
        py::dict d;
        d["added_mass"] = rad.added_mass;
        d["damping"] = rad.damping;
        py::list flux;
        for (const auto& sol : rad.phi)
            flux.append(p.ell0 * (std::norm(sol.farfield.a_plus) +
                                  std::norm(sol.farfield.a_minus)));
        d["radiated_flux"] = flux;
        return d;
    }

    py::dict scatter(double omega, double k, double hmesh, int n_modes) const {
        WaveParameters p = waves(omega, k);
        MeshConfig mc;
        mc.h_mesh = hmesh;
        mc.symmetric = check_symmetry(bf.body);
        Mesh mesh = generate_mesh(&dec, p.depth, mc);
        SolverConfig sc;
        sc.n_modes = n_modes;
        FieldProblem problem(mesh, p, sc);
        ScatterResult res = solve_scattering(problem, dec, model);
        py::dict d;
        d["reflection"] = res.reflection;
        d["transmission"] = res.transmission;
        d["energy_defect"] = res.energy_defect;
        d["z"] = res.z;
        return d;
    }

    py::dict certificate(double omega, double k, const std::string& restriction,
                         const std::string& parity) const {
        MotionRestriction mr = MotionRestriction::Full;
        if (restriction == "sway") mr = MotionRestriction::Sway;
        else if (restriction == "heave") mr = MotionRestriction::Heave;
        else if (restriction == "roll") mr = MotionRestriction::Roll;
        else if (restriction != "full")
            throw Error(ErrorCode::BadConfig, "unknown restriction " + restriction);
        Parity pa = Parity::Any;
        if (parity == "odd") pa = Parity::Odd;
        else if (parity == "even") pa = Parity::Even;
        else if (parity != "any")
            throw Error(ErrorCode::BadConfig, "unknown parity " + parity);

        WaveParameters p = waves(omega, k);
        UniquenessCertificate cert =
            certify(make_certify_input(bf.body, dec, model, p, mr, pa));
        py::dict d;
        d["applicable_statement"] = cert.applicable_statement;
        d["finite_depth_analogue"] = cert.finite_depth_analogue;
        py::dict cc;
        for (const auto& [name, ok] : cert.conditions_checked) cc[name.c_str()] = ok;
        d["conditions"] = cc;
        return d;
    }
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectral problem of a cylinder floating freely in oblique waves";
    m.attr("__version__") = version();

    py::register_exception<Error>(m, "FloatwaveError");

    m.def("dispersion_root", &solve_dispersion, py::arg("nu"), py::arg("h"),
          "positive root of kappa tanh(kappa h) = nu");
    m.def(
        "band_classifier",
        [](double lb) {
            BandClassification c = band_classifier(lb);
            py::dict d;
            d["omega_minus"] = c.omega_minus;
            d["omega_plus"] = c.omega_plus;
            d["m"] = c.m;
            return d;
        },
        py::arg("lb"));

    py::class_<Session>(m, "Session")
        .def(py::init<const std::string&>(), py::arg("body_json"))
        .def("geometry", &Session::geometry)
        .def("hydrostatics", &Session::hydrostatics)
        .def("bands", &Session::bands, py::arg("omega"), py::arg("k") = 0.0)
        .def("radiation", &Session::radiation, py::arg("omega"), py::arg("k") = 0.0,
             py::arg("hmesh") = 0.1, py::arg("n_modes") = 12)
        .def("scatter", &Session::scatter, py::arg("omega"), py::arg("k") = 0.0,
             py::arg("hmesh") = 0.1, py::arg("n_modes") = 12)
        .def("certificate", &Session::certificate, py::arg("omega"), py::arg("k") = 0.0,
             py::arg("restriction") = "full", py::arg("parity") = "any");
}
