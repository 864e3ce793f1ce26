#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epicurv/cli.hpp"
#include "epicurv/dynamics.hpp"
#include "epicurv/errors.hpp"
#include "epicurv/field.hpp"
#include "epicurv/geometry.hpp"
#include "epicurv/reduction.hpp"
#include "epicurv/spectral.hpp"

namespace py = pybind11;
using namespace epicurv;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral solver for bounded epicyclic orbits in a radial magnetic field";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<PeriodicScalar>(m, "PeriodicScalar")
        .def(py::init<int>(), py::arg("mode_count"))
        .def(py::init<double, std::vector<double>, std::vector<double>>(), py::arg("a0"),
             py::arg("a"), py::arg("b"))
        .def_readwrite("a0", &PeriodicScalar::a0)
        .def_readwrite("a", &PeriodicScalar::a)
        .def_readwrite("b", &PeriodicScalar::b)
        .def_property_readonly("mode_count", &PeriodicScalar::mode_count)
        .def("eval", &PeriodicScalar::eval, py::arg("t"))
        .def("__repr__", [](const PeriodicScalar& f) {
            return "<PeriodicScalar with " + std::to_string(f.mode_count()) + " modes>";
        });

    py::class_<UniformGrid>(m, "UniformGrid")
        .def(py::init<int>(), py::arg("node_count"))
        .def_property_readonly("size", &UniformGrid::size)
        .def("node", &UniformGrid::node, py::arg("j"));

    m.def("synthesize", &synthesize, py::arg("f"), py::arg("grid"));
    m.def("analyze", &analyze, py::arg("samples"), py::arg("mode_count"));
    m.def("differentiate", &differentiate, py::arg("f"), py::arg("order") = 1);
    m.def("l0_apply", &l0_apply, py::arg("f"));
    m.def("l0_invert", &l0_invert, py::arg("f"), py::arg("tol") = 1e-12);
    m.def("norms", [](const PeriodicScalar& f) {
        const Norms n = norms(f);
        return py::make_tuple(n.sup, n.c2);
    });

    py::class_<FieldModel>(m, "FieldModel")
        .def(py::init<double, double, double, double>(), py::arg("A"), py::arg("gamma"),
             py::arg("A1") = 0.0, py::arg("gamma1") = 0.0)
        .def_readonly("A", &FieldModel::A)
        .def_readonly("gamma", &FieldModel::gamma)
        .def_readonly("A1", &FieldModel::A1)
        .def_readonly("gamma1", &FieldModel::gamma1)
        .def("beta", &FieldModel::beta);

    m.def("eval_B", &eval_B, py::arg("model"), py::arg("v"));
    m.def("grad_B", &grad_B, py::arg("model"), py::arg("v"));
    m.def("eval_Q", &eval_Q, py::arg("model"), py::arg("v"));
    m.def("rotation_equivariance_check", &rotation_equivariance_check, py::arg("model"),
          py::arg("v"), py::arg("theta"));

    py::class_<AnsatzParams>(m, "AnsatzParams")
        .def(py::init<double, double>(), py::arg("eps"), py::arg("rho"))
        .def_readwrite("eps", &AnsatzParams::eps)
        .def_readwrite("rho", &AnsatzParams::rho);

    m.def("ansatz_curvature",
          [](const AnsatzParams& p, double t) {
              const PointJet j = ansatz_point(p, t);
              const double s = std::abs(j.du);
              return cross(j.du, j.d2u) / (s * s * s);
          },
          py::arg("params"), py::arg("t"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("mode_count", &SolverConfig::mode_count)
        .def_readwrite("grid_count", &SolverConfig::grid_count)
        .def_readwrite("fix_tol", &SolverConfig::fix_tol)
        .def_readwrite("max_iter", &SolverConfig::max_iter)
        .def_readwrite("root_tol", &SolverConfig::root_tol)
        .def_readwrite("a1_factor", &SolverConfig::a1_factor)
        .def_readwrite("a2_factor", &SolverConfig::a2_factor)
        .def_readwrite("delta", &SolverConfig::delta);

    py::class_<ReducedSolution>(m, "ReducedSolution")
        .def_readonly("params", &ReducedSolution::params)
        .def_readonly("phi", &ReducedSolution::phi)
        .def_readonly("lambda1", &ReducedSolution::lambda1)
        .def_readonly("lambda2", &ReducedSolution::lambda2)
        .def_readonly("iterations", &ReducedSolution::iterations)
        .def_readonly("fix_residual", &ReducedSolution::fix_residual)
        .def_readonly("eq_residual", &ReducedSolution::eq_residual)
        .def_readonly("phi_c2", &ReducedSolution::phi_c2);

    py::class_<RhoResult>(m, "RhoResult")
        .def_readonly("rho_eps", &RhoResult::rho_eps)
        .def_readonly("sol", &RhoResult::sol)
        .def_readonly("lambda_lo", &RhoResult::lambda_lo)
        .def_readonly("lambda_hi", &RhoResult::lambda_hi)
        .def_readonly("bisection_steps", &RhoResult::bisection_steps)
        .def_property_readonly("window", [](const RhoResult& r) {
            return py::make_tuple(r.window.lo, r.window.hi);
        });

    py::class_<ScalingReport>(m, "ScalingReport")
        .def_readonly("eps_values", &ScalingReport::eps_values)
        .def_readonly("rho_values", &ScalingReport::rho_values)
        .def_readonly("phi_norms", &ScalingReport::phi_norms)
        .def_readonly("lambda1_values", &ScalingReport::lambda1_values)
        .def_readonly("lambda2_values", &ScalingReport::lambda2_values)
        .def_readonly("eq_residuals", &ScalingReport::eq_residuals)
        .def_readonly("fitted_rho_slope", &ScalingReport::fitted_rho_slope)
        .def_readonly("fitted_phi_slope", &ScalingReport::fitted_phi_slope);

    m.def("F_operator", &F_operator, py::arg("model"), py::arg("params"), py::arg("phi"),
          py::arg("grid"), py::arg("mode_count") = 0);
    m.def(
        "fixed_point_solve",
        [](const FieldModel& m_, const AnsatzParams& p, const SolverConfig& cfg) {
            return fixed_point_solve(m_, p, cfg);
        },
        py::arg("model"), py::arg("params"), py::arg("config") = SolverConfig{});
    m.def("leading_order_rho", &leading_order_rho, py::arg("model"), py::arg("eps"));
    m.def("solve_rho", &solve_rho, py::arg("model"), py::arg("eps"),
          py::arg("config") = SolverConfig{});
    m.def("sweep_scaling", &sweep_scaling, py::arg("model"), py::arg("eps_list"),
          py::arg("config") = SolverConfig{}, py::arg("jobs") = 1);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("method", &SimConfig::method)
        .def_readwrite("step", &SimConfig::step)
        .def_readwrite("rel_tol", &SimConfig::rel_tol)
        .def_readwrite("abs_tol", &SimConfig::abs_tol)
        .def_readwrite("duration", &SimConfig::duration);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("dim", &Trajectory::dim)
        .def_readonly("times", &Trajectory::times)
        .def_readonly("positions", &Trajectory::positions)
        .def_readonly("velocities", &Trajectory::velocities);

    m.def("integrate_planar", &integrate_planar, py::arg("model"), py::arg("v0"), py::arg("w0"),
          py::arg("config"));
    m.def("integrate_lorentz3d", &integrate_lorentz3d, py::arg("model"), py::arg("q0"),
          py::arg("qd0"), py::arg("mass"), py::arg("charge"), py::arg("config"));

    py::class_<VerifyReport>(m, "VerifyReport")
        .def_readonly("curve_time_span", &VerifyReport::curve_time_span)
        .def_readonly("arclength_span", &VerifyReport::arclength_span)
        .def_readonly("max_deviation", &VerifyReport::max_deviation)
        .def_readonly("speed_drift", &VerifyReport::speed_drift)
        .def_readonly("min_radius", &VerifyReport::min_radius)
        .def_readonly("max_radius", &VerifyReport::max_radius)
        .def_readonly("annulus_margin_inner", &VerifyReport::annulus_margin_inner)
        .def_readonly("annulus_margin_outer", &VerifyReport::annulus_margin_outer);

    m.def(
        "verify_solution",
        [](const FieldModel& m_, const ReducedSolution& sol, const SimConfig& sim,
           double curve_time_span, bool compute_deviation) {
            VerifyOptions opts;
            opts.curve_time_span = curve_time_span;
            opts.compute_deviation = compute_deviation;
            return verify_solution(m_, sol, sim, opts);
        },
        py::arg("model"), py::arg("solution"), py::arg("sim") = SimConfig{},
        py::arg("curve_time_span") = 0.0, py::arg("compute_deviation") = true);

    py::class_<ClosureReport>(m, "ClosureReport")
        .def_readonly("closure_err", &ClosureReport::closure_err)
        .def_readonly("symmetry_err", &ClosureReport::symmetry_err)
        .def_readonly("symmetry_order", &ClosureReport::symmetry_order)
        .def_readonly("symmetry_angle", &ClosureReport::symmetry_angle);

    m.def("closure_check", &closure_check, py::arg("params"), py::arg("m"), py::arg("n"));
    m.def("closure_check_solved", &closure_check_solved, py::arg("params"), py::arg("phi"),
          py::arg("m"), py::arg("n"));

    m.def(
        "run_config",
        [](const std::string& text) { return run(parse_config_text(text)); },
        py::arg("config_json"), "Run a CLI command from a JSON configuration string");
}
