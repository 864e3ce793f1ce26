#pragma once

#include <string>
#include <vector>

#include "epicurv/errors.hpp"
#include "epicurv/field.hpp"
#include "epicurv/geometry.hpp"
#include "epicurv/spectral.hpp"

namespace epicurv {

struct SolverConfig {
    int mode_count = 64;
    int grid_count = 256;
    double fix_tol = 1e-12;   // fixed-point increment threshold, C2 norm
    int max_iter = 200;
    double root_tol = 1e-10;  // relative bisection width on rho
    double a1_factor = 0.5;   // window endpoints scale (|A| gamma / 2)^{1/(gamma+2)}
    double a2_factor = 2.0;
    double delta = 0.0;       // 0 selects the default 1/(gamma+2)

    void validate() const;
};

struct ReducedSolution {
    AnsatzParams params;
    PeriodicScalar phi;
    // Multipliers of the equation K(phi) - B(u + phi n) = lambda1 cos t + lambda2 sin t.
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    int iterations = 0;
    double fix_residual = 0.0;  // C2 norm of the last increment
    double eq_residual = 0.0;   // sup |K - B - lambda1 cos - lambda2 sin|, recomputed from scratch
    double phi_c2 = 0.0;
    std::vector<double> increments;  // C2 increment per iteration
};

struct RhoWindow {
    double lo = 0.0, hi = 0.0;
    double delta = 0.0;
};

struct RhoResult {
    double rho_eps = 0.0;
    ReducedSolution sol;
    RhoWindow window;
    double lambda_lo = 0.0, lambda_hi = 0.0;  // lambda1 at the window endpoints
    int bisection_steps = 0;
};

struct ScalingReport {
    std::vector<double> eps_values, rho_values, phi_norms;
    std::vector<double> lambda1_values, lambda2_values, eq_residuals;
    std::vector<ReducedSolution> solutions;
    double fitted_rho_slope = 0.0;
    double fitted_phi_slope = 0.0;
};

struct SweepAborted : SolverError {
    SweepAborted(const std::string& what, ScalingReport partial_)
        : SolverError(what), partial(std::move(partial_)) {}
    ScalingReport partial;
};

// F(phi) = B(u + phi n) - K(phi) + L0 phi, analyzed to mode_count harmonics.
PeriodicScalar F_operator(const FieldModel& m, const AnsatzParams& p, const PeriodicScalar& phi,
                          const UniformGrid& grid, int mode_count = 0);

// Iterates phi_{k+1} = L0^{-1}(F(phi_k) projected onto the range of L0) from
// phi = 0 (or the warm start) until the C2 increment drops below fix_tol.
// The returned multipliers and residual come from a from-scratch audit of the
// assembled curve, not from the iteration's cached values.
ReducedSolution fixed_point_solve(const FieldModel& m, const AnsatzParams& p,
                                  const SolverConfig& cfg,
                                  const PeriodicScalar* warm_start = nullptr);

// rho* = (A gamma / (2 eps))^{1/(gamma+2)}, the root of the leading-order
// reduced equation 2 - A gamma/(eps rho^{gamma+2}) = 0. Requires
// sign(eps) == sign(A).
double leading_order_rho(const FieldModel& m, double eps);

RhoWindow compute_window(const FieldModel& m, double eps, const SolverConfig& cfg);

// Bisection on rho -> lambda1 over the admissible window; returns the
// solution at rho_eps where lambda1 vanishes. lambda2 must come out zero on
// its own (it is measured, not enforced).
RhoResult solve_rho(const FieldModel& m, double eps, const SolverConfig& cfg);

// E(u) = \int (|du| + Q(u) . i du) dt on the grid.
double energy(const FieldModel& m, const CurveJet& c);

// The B == 1 functional with Q(v) = v/2 used by the variational argument.
double energy0(const CurveJet& c);

struct EnergyRhoReport {
    double lhs = 0.0;           // (1-eps) d/drho E0(u_{eps,rho}) by central differences
    double rhs = 0.0;           // \int (K(u) - 1)(eps rho + cos t) dt
    double rel_mismatch = 0.0;  // |lhs - rhs| / max(1e-300, |rhs|)
    double leading = 0.0;       // -2 pi eps rho
    double remainder = 0.0;     // lhs - leading
};

EnergyRhoReport energy_rho_derivative_check(const AnsatzParams& p, int grid_count = 256);

struct ForcingReport {
    double lhs = 0.0;          // \int K(phi) cos t dt
    double rhs = 0.0;          // \int B(u + phi n) cos t dt
    double lhs_leading = 0.0;  // -2 pi eps rho
    double rhs_leading = 0.0;  // -A gamma pi rho^{-gamma-1}
};

ForcingReport first_harmonic_forcing_check(const FieldModel& m, const AnsatzParams& p,
                                           const PeriodicScalar& phi, int grid_count = 256);

struct Lambda2Report {
    double integral = 0.0;   // \int |u|^2 cos t dt
    double reference = 0.0;  // 2 pi rho, the unperturbed value
    double margin = 0.0;     // |integral| - pi rho; positive forces lambda2 = 0
};

Lambda2Report lambda2_identity_check(const AnsatzParams& p, const PeriodicScalar& phi,
                                     int grid_count = 256);

// Runs solve_rho for each eps (all the same sign as A, decreasing) and fits
// log-log slopes of rho_eps and |phi|_C2 against |eps|. jobs > 1 runs the
// per-eps solves concurrently.
ScalingReport sweep_scaling(const FieldModel& m, const std::vector<double>& eps_list,
                            const SolverConfig& cfg, int jobs = 1);

// Least-squares slope of log|y| against log|x|.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace epicurv
