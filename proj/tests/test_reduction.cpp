#include <cmath>

#include "doctest.h"
#include "epicurv/dynamics.hpp"
#include "epicurv/errors.hpp"
#include "epicurv/reduction.hpp"
#include "test_util.hpp"

using namespace epicurv;
using epicurv::testing::adaptive_quadrature;

namespace {

const FieldModel& model12() {
    static const FieldModel m(1.0, 2.0, 0.0, 3.0);
    return m;
}

}  // namespace

TEST_CASE("F_operator: near-circle cancellation in the constant-field limit") {
    const FieldModel flat(1e-300, 2.0);
    const UniformGrid g(128);
    const PeriodicScalar f = F_operator(flat, AnsatzParams(1e-9, 3.0), PeriodicScalar(16), g);
    CHECK(norms(f).sup <= 1e-8);  // B - K = O(eps rho) here
}

TEST_CASE("F_operator: size of F(0) against the reduced-equation exponent") {
    // gamma_hat = min(gamma delta, 1 - delta) = 1/2 at delta = 1/(gamma+2) = 1/4
    const AnsatzParams p(0.02, 5.0);
    const UniformGrid g(256);
    const PeriodicScalar f = F_operator(model12(), p, PeriodicScalar(64), g);
    const double measured = norms(f).sup / std::sqrt(0.02);
    CHECK(measured < 10.0);
    CHECK(measured > 0.01);  // the bound is not vacuous
}

TEST_CASE("F_operator is pure: identical output on identical input") {
    const AnsatzParams p(0.02, 5.0);
    const UniformGrid g(128);
    PeriodicScalar phi = epicurv::testing::random_periodic(16, 5, 0.4);
    phi *= 0.01;
    const PeriodicScalar f1 = F_operator(model12(), p, phi, g);
    const PeriodicScalar f2 = F_operator(model12(), p, phi, g);
    CHECK(f1.a0 == f2.a0);
    for (int k = 0; k < f1.mode_count(); ++k) {
        CHECK(f1.a[k] == f2.a[k]);
        CHECK(f1.b[k] == f2.b[k]);
    }
}

TEST_CASE("fixed_point_solve: convergence, residual audit, X-perp membership") {
    SolverConfig cfg;
    const double eps = 0.005;
    const AnsatzParams p(eps, leading_order_rho(model12(), eps));
    const ReducedSolution sol = fixed_point_solve(model12(), p, cfg);

    CHECK(sol.iterations <= 30);
    CHECK(sol.eq_residual <= 1e-10);
    CHECK(sol.fix_residual < cfg.fix_tol);
    CHECK(sol.phi.a[0] == 0.0);  // exactly in X-perp
    CHECK(sol.phi.b[0] == 0.0);

    // geometric contraction after the first step
    for (size_t k = 2; k < sol.increments.size(); ++k)
        CHECK(sol.increments[k] < 0.5 * sol.increments[k - 1]);
}

TEST_CASE("fixed_point_solve: perturbation size scales like eps^{1/2}") {
    SolverConfig cfg;
    std::vector<double> eps_values, phi_norms;
    for (double eps : {0.02, 0.01, 0.005, 0.0025}) {
        const AnsatzParams p(eps, leading_order_rho(model12(), eps));
        eps_values.push_back(eps);
        phi_norms.push_back(fixed_point_solve(model12(), p, cfg).phi_c2);
    }
    const double slope = fit_loglog_slope(eps_values, phi_norms);
    CHECK(slope == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("fixed_point_solve: warm start converges to the same fixed point") {
    SolverConfig cfg;
    const AnsatzParams p(0.005, 3.9);
    const ReducedSolution cold = fixed_point_solve(model12(), p, cfg);
    const ReducedSolution seed = fixed_point_solve(model12(), AnsatzParams(0.005, 3.8), cfg);
    const ReducedSolution warm = fixed_point_solve(model12(), p, cfg, &seed.phi);
    CHECK(warm.iterations <= cold.iterations);
    CHECK(norms(warm.phi - cold.phi).c2 <= 50.0 * cfg.fix_tol);
}

TEST_CASE("fixed_point_solve reports non-contraction") {
    SolverConfig cfg;
    cfg.max_iter = 2;
    const AnsatzParams p(0.005, leading_order_rho(model12(), 0.005));
    CHECK_THROWS_AS((void)fixed_point_solve(model12(), p, cfg), NonContractionError);
}

TEST_CASE("leading_order_rho") {
    CHECK(leading_order_rho(model12(), 0.001) == doctest::Approx(std::pow(1000.0, 0.25)).epsilon(1e-12));
    CHECK_THROWS_AS((void)leading_order_rho(model12(), -0.001), WrongSignError);
    // power law: rho*(eps/16)/rho*(eps) = 2 for gamma = 2
    CHECK(leading_order_rho(model12(), 0.001 / 16.0) / leading_order_rho(model12(), 0.001) ==
          doctest::Approx(2.0).epsilon(1e-13));
    // A < 0 pairs with eps < 0
    const FieldModel neg(-1.0, 2.0);
    CHECK_NOTHROW((void)leading_order_rho(neg, -0.001));
    CHECK_THROWS_AS((void)leading_order_rho(neg, 0.001), WrongSignError);
}

TEST_CASE("solve_rho: root inside the window, lambda2 vanishes unforced") {
    SolverConfig cfg;
    const RhoResult r = solve_rho(model12(), 0.002, cfg);
    CHECK(r.rho_eps > r.window.lo);
    CHECK(r.rho_eps < r.window.hi);
    const double rho_star = leading_order_rho(model12(), 0.002);
    CHECK(std::abs(r.rho_eps - rho_star) / rho_star < 0.10);
    CHECK(std::abs(r.sol.lambda1) <= 1e-9);
    CHECK(std::abs(r.sol.lambda2) <= 1e-9);
    CHECK(r.lambda_lo * r.lambda_hi < 0.0);  // endpoints bracket a sign change
}

TEST_CASE("solve_rho: wrong sign is rejected with the sign rule named") {
    SolverConfig cfg;
    CHECK_THROWS_WITH_AS((void)solve_rho(model12(), -0.002, cfg),
                         doctest::Contains("same sign as A"), WrongSignError);
}

TEST_CASE("solve_rho: A < 0 mirror case") {
    SolverConfig cfg;
    cfg.root_tol = 1e-8;
    const FieldModel neg(-1.0, 2.0, 0.0, 3.0);
    const RhoResult r = solve_rho(neg, -0.002, cfg);
    CHECK(std::abs(r.sol.lambda1) <= 1e-8);
    CHECK(std::abs(r.sol.lambda2) <= 1e-9);
}

TEST_CASE("solve_rho: slow field decay and a two-term profile") {
    SolverConfig cfg;
    cfg.root_tol = 1e-8;

    // gamma close to the lower admissibility bound
    const FieldModel slow(1.0, 1.2, 0.0, 2.2);
    const RhoResult r1 = solve_rho(slow, 0.002, cfg);
    CHECK(std::abs(r1.sol.lambda1) <= 1e-8);
    CHECK(r1.sol.eq_residual <= 1e-9);

    // a second decay term shifts the root but not the mechanism
    const FieldModel two(1.0, 2.0, 0.5, 3.0);
    const RhoResult r2 = solve_rho(two, 0.002, cfg);
    CHECK(std::abs(r2.sol.lambda1) <= 1e-8);
    CHECK(std::abs(r2.sol.lambda2) <= 1e-9);
    CHECK(r2.sol.eq_residual <= 1e-9);
    // the A1 > 0 tail strengthens B, so the balancing radius moves out
    const RhoResult base = solve_rho(FieldModel(1.0, 2.0, 0.0, 3.0), 0.002, cfg);
    CHECK(r2.rho_eps > base.rho_eps);
}

TEST_CASE("lambda1 changes sign exactly once across the window") {
    SolverConfig cfg;
    const double eps = 0.002;
    const RhoWindow w = compute_window(model12(), eps, cfg);
    std::vector<double> lambdas;
    for (int i = 0; i <= 6; ++i) {
        const double rho = w.lo + (w.hi - w.lo) * i / 6.0;
        lambdas.push_back(fixed_point_solve(model12(), AnsatzParams(eps, rho), cfg).lambda1);
    }
    int sign_changes = 0;
    for (size_t i = 1; i < lambdas.size(); ++i)
        if ((lambdas[i] > 0) != (lambdas[i - 1] > 0)) ++sign_changes;
    CHECK(sign_changes == 1);
    CHECK(lambdas.front() > 0.0);  // A > 0: positive at the inner endpoint
    CHECK(lambdas.back() < 0.0);
}

TEST_CASE("energy: circles and quadrature oracle") {
    const UniformGrid g(256);
    auto circle = [&](double radius) {
        return sample_curve(g, [radius](double t) {
            const Vec2 e = std::polar(1.0, t);
            return PointJet{radius * e, radius * rot90(e), -radius * e, -radius * rot90(e)};
        });
    };
    // E0 = 2 pi R + (1/2) \int u . i du = 2 pi R - pi R^2 for a CCW circle
    CHECK(energy0(circle(1.0)) == doctest::Approx(kTwoPi - kTwoPi / 2.0).epsilon(1e-13));
    CHECK(energy0(circle(2.0)) == doctest::Approx(2.0 * kTwoPi - 2.0 * kTwoPi).epsilon(1e-13));

    // the flat model reproduces E0 through the general functional
    const FieldModel flat(1e-300, 2.0);
    CHECK(energy(flat, circle(1.5)) == doctest::Approx(energy0(circle(1.5))).epsilon(1e-13));

    // ansatz energy against an adaptive quadrature oracle
    const AnsatzParams p(0.1, 3.0);
    const CurveJet c = ansatz_curve(p, g);
    const auto integrand = [&p](double t) {
        const PointJet j = ansatz_point(p, t);
        return std::abs(j.du) + 0.5 * dot(j.u, rot90(j.du));
    };
    CHECK(energy0(c) == doctest::Approx(adaptive_quadrature(integrand, 0.0, kTwoPi)).epsilon(1e-10));
}

TEST_CASE("energy derivative in rho: exact identity and leading term") {
    const EnergyRhoReport rep = energy_rho_derivative_check(AnsatzParams(0.01, 5.0));
    CHECK(rep.rel_mismatch <= 1e-7);
    CHECK(rep.lhs == doctest::Approx(rep.leading).epsilon(0.05));

    // remainder exponent >= 2 - delta - 0.1 with delta = 1/4
    std::vector<double> eps_values, remainders;
    for (double eps : {0.04, 0.02, 0.01, 0.005, 0.0025}) {
        const double rho = leading_order_rho(model12(), eps);
        const EnergyRhoReport r = energy_rho_derivative_check(AnsatzParams(eps, rho));
        eps_values.push_back(eps);
        remainders.push_back(std::abs(r.remainder));
    }
    CHECK(fit_loglog_slope(eps_values, remainders) >= 2.0 - 0.25 - 0.1);
}

TEST_CASE("auxiliary length integrals: G and G1 oracles") {
    // G(r) = \int sqrt(1 + 2 r cos t + r^2) dt: G(0) = 2 pi, G'(0) = 0, G''(0) = pi
    const auto G = [](double r) {
        return adaptive_quadrature(
            [r](double t) { return std::sqrt(1.0 + 2.0 * r * std::cos(t) + r * r); }, 0.0,
            kTwoPi);
    };
    const double h = 1e-3, h1 = 1e-4;
    CHECK(G(0.0) == doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(std::abs((G(h1) - G(-h1)) / (2.0 * h1)) <= 1e-6);
    CHECK((G(h) - 2.0 * G(0.0) + G(-h)) / (h * h) ==
          doctest::Approx(kTwoPi / 2.0).epsilon(1e-6));

    // G1(r) = \int cos t (1 + 2 r cos t + r^2)^{-gamma/2} dt at gamma = 2:
    // G1(0) = 0, G1'(0) = -gamma pi = -2 pi
    const auto G1 = [](double r) {
        return adaptive_quadrature(
            [r](double t) {
                return std::cos(t) / (1.0 + 2.0 * r * std::cos(t) + r * r);
            },
            0.0, kTwoPi);
    };
    CHECK(std::abs(G1(0.0)) <= 1e-12);
    CHECK((G1(h1) - G1(-h1)) / (2.0 * h1) == doctest::Approx(-kTwoPi).epsilon(1e-6));
}

TEST_CASE("forcing integral decomposes through the energy derivative") {
    // \int K(0) cos t dt = \int (K(0)-1)(eps rho + cos t) dt - eps rho \int (K(0)-1) dt,
    // and the first term is (1-eps) d/drho E0.
    const AnsatzParams p(0.01, 5.0);
    const UniformGrid g(256);
    const ForcingReport f = first_harmonic_forcing_check(FieldModel(1.0, 2.0), p, PeriodicScalar(8));
    const EnergyRhoReport e = energy_rho_derivative_check(p);
    const auto curv = curvature_samples(ansatz_curve(p, g));
    double mean_dev = 0.0;
    for (double k : curv) mean_dev += k - 1.0;
    mean_dev *= kTwoPi / g.size();
    CHECK(f.lhs == doctest::Approx(e.rhs - p.eps * p.rho * mean_dev).epsilon(1e-6));
}

TEST_CASE("first-harmonic forcing balance at the solved radius") {
    SolverConfig cfg;
    const RhoResult r = solve_rho(model12(), 0.002, cfg);
    const ForcingReport rep =
        first_harmonic_forcing_check(model12(), r.sol.params, r.sol.phi);
    CHECK(rep.lhs == doctest::Approx(rep.lhs_leading).epsilon(0.10));
    CHECK(rep.rhs == doctest::Approx(rep.rhs_leading).epsilon(0.10));
    // lhs - rhs = pi lambda1 by definition of the multiplier
    CHECK(std::abs(rep.lhs - rep.rhs) <= (kTwoPi / 2.0) * 1e-8);
}

TEST_CASE("lambda2 identity: dominance of the rho term") {
    const AnsatzParams p(0.002, 4.7);
    const Lambda2Report base = lambda2_identity_check(p, PeriodicScalar(8));
    CHECK(base.integral == doctest::Approx(kTwoPi * p.rho).epsilon(1e-12));
    CHECK(base.margin > 0.0);

    SolverConfig cfg;
    const RhoResult r = solve_rho(model12(), 0.002, cfg);
    const Lambda2Report solved = lambda2_identity_check(r.sol.params, r.sol.phi);
    CHECK(solved.integral ==
          doctest::Approx(kTwoPi * r.sol.params.rho).epsilon(0.05));
    CHECK(solved.margin > 0.0);

    // a large injected first harmonic shrinks the dominance margin
    PeriodicScalar huge(8);
    huge.a[0] = 0.5;
    const Lambda2Report stressed = lambda2_identity_check(p, huge);
    CHECK(stressed.margin < base.margin);
}

TEST_CASE("sweep_scaling: slopes, determinism under jobs, input validation") {
    SolverConfig cfg;
    cfg.root_tol = 1e-9;
    const std::vector<double> eps{0.002, 0.001, 0.0005};
    const ScalingReport serial = sweep_scaling(model12(), eps, cfg, 1);
    CHECK(serial.eps_values.size() == 3);
    CHECK(serial.fitted_rho_slope == doctest::Approx(-0.25).epsilon(0.35));
    CHECK(serial.fitted_phi_slope == doctest::Approx(0.5).epsilon(0.35));

    const ScalingReport parallel = sweep_scaling(model12(), eps, cfg, 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(parallel.rho_values[i] == serial.rho_values[i]);
        CHECK(parallel.phi_norms[i] == serial.phi_norms[i]);
    }

    CHECK_THROWS_AS((void)sweep_scaling(model12(), {0.002, 0.001}, cfg, 1), ConfigError);
    CHECK_THROWS_AS((void)sweep_scaling(model12(), {0.001, 0.002, 0.0005}, cfg, 1), ConfigError);
}

TEST_CASE("sweep_scaling: failure carries a partial report") {
    SolverConfig cfg;
    cfg.max_iter = 2;  // forces non-contraction at the first eps
    try {
        (void)sweep_scaling(model12(), {0.002, 0.001, 0.0005}, cfg, 1);
        FAIL("expected SweepAborted");
    } catch (const SweepAborted& e) {
        CHECK(e.partial.eps_values.empty());
        CHECK(std::string(e.what()).find("eps=") != std::string::npos);
    }
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.grid_count = 100;  // < 2N+1 for N = 64
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SolverConfig{};
    cfg.a1_factor = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SolverConfig{};
    cfg.delta = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
