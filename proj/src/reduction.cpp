#include "epicurv/reduction.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <string>

#include "epicurv/errors.hpp"

namespace epicurv {

void SolverConfig::validate() const {
    if (mode_count < 4) throw ConfigError("SolverConfig: mode_count must be at least 4");
    if (grid_count < 2 * mode_count + 1)
        throw ConfigError("SolverConfig: grid_count must be at least 2*mode_count+1");
    if (grid_count % 2 != 0) throw ConfigError("SolverConfig: grid_count must be even");
    if (!(fix_tol > 0.0)) throw ConfigError("SolverConfig: fix_tol must be positive");
    if (!(root_tol > 0.0)) throw ConfigError("SolverConfig: root_tol must be positive");
    if (max_iter < 1) throw ConfigError("SolverConfig: max_iter must be at least 1");
    if (!(a1_factor > 0.0 && a1_factor < 1.0 && a2_factor > 1.0))
        throw ConfigError("SolverConfig: need 0 < a1_factor < 1 < a2_factor");
    if (delta != 0.0 && !(delta > 0.0 && delta < 1.0))
        throw ConfigError("SolverConfig: delta must lie in (0, 1)");
}

namespace {

// Residual samples K - B of the assembled curve; the audit path.
std::vector<double> residual_samples(const FieldModel& m, const CurveJet& c) {
    auto r = curvature_samples(c);
    for (size_t j = 0; j < r.size(); ++j) r[j] -= eval_B(m, c.u[j]);
    return r;
}

struct FirstHarmonics {
    double c = 0.0, s = 0.0;
};

FirstHarmonics first_harmonics(const std::vector<double>& samples, const UniformGrid& g) {
    FirstHarmonics fh;
    for (int j = 0; j < g.size(); ++j) {
        fh.c += samples[j] * g.cos_kj(1, j);
        fh.s += samples[j] * g.sin_kj(1, j);
    }
    fh.c *= 2.0 / g.size();
    fh.s *= 2.0 / g.size();
    return fh;
}

}  // namespace

PeriodicScalar F_operator(const FieldModel& m, const AnsatzParams& p, const PeriodicScalar& phi,
                          const UniformGrid& grid, int mode_count) {
    if (mode_count <= 0) mode_count = grid.size() / 4;
    const CurveJet c = perturbed_curve(p, phi, grid);
    const auto curv = curvature_samples(c);
    const auto l0phi = synthesize(l0_apply(phi), grid);
    std::vector<double> f(curv.size());
    for (size_t j = 0; j < f.size(); ++j)
        f[j] = eval_B(m, c.u[j]) - curv[j] + l0phi[j];
    return analyze(f, mode_count);
}

ReducedSolution fixed_point_solve(const FieldModel& m, const AnsatzParams& p,
                                  const SolverConfig& cfg, const PeriodicScalar* warm_start) {
    cfg.validate();
    p.validate();
    const UniformGrid grid(cfg.grid_count);
    const int n = cfg.mode_count;

    PeriodicScalar phi(n);
    if (warm_start) {
        phi = *warm_start;
        phi.a.resize(n, 0.0);
        phi.b.resize(n, 0.0);
    }

    double increment = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> increments;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        const PeriodicScalar f = F_operator(m, p, phi, grid, n);
        const PeriodicScalar next = l0_invert(project_out_first_harmonics(f).f_perp);
        increment = norms(next - phi).c2;
        increments.push_back(increment);
        phi = next;
        iterations = k;
        if (increment < cfg.fix_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NonContractionError("fixed_point_solve: no contraction after " +
                                  std::to_string(cfg.max_iter) + " iterations (last C2 increment " +
                                  std::to_string(increment) + ") at eps=" + std::to_string(p.eps) +
                                  " rho=" + std::to_string(p.rho));

    // From-scratch audit on the assembled curve.
    const CurveJet curve = perturbed_curve(p, phi, grid);
    const auto resid = residual_samples(m, curve);
    const FirstHarmonics fh = first_harmonics(resid, grid);
    double worst = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
        const double r = resid[j] - fh.c * grid.cos_kj(1, j) - fh.s * grid.sin_kj(1, j);
        worst = std::max(worst, std::abs(r));
    }

    ReducedSolution sol;
    sol.params = p;
    sol.phi = phi;
    sol.lambda1 = fh.c;
    sol.lambda2 = fh.s;
    sol.iterations = iterations;
    sol.fix_residual = increment;
    sol.eq_residual = worst;
    sol.phi_c2 = norms(phi).c2;
    sol.increments = std::move(increments);
    if (sol.eq_residual > 100.0 * cfg.fix_tol)
        throw SolverError("fixed_point_solve: residual audit failed (eq_residual " +
                          std::to_string(sol.eq_residual) + " > 100*fix_tol)");
    return sol;
}

double leading_order_rho(const FieldModel& m, double eps) {
    if (eps == 0.0) throw ConfigError("leading_order_rho: eps must be nonzero");
    if (eps * m.A <= 0.0)
        throw WrongSignError("leading_order_rho: eps must have the same sign as A (A=" +
                             std::to_string(m.A) + ", eps=" + std::to_string(eps) + ")");
    return std::pow(m.A * m.gamma / (2.0 * eps), 1.0 / (m.gamma + 2.0));
}

RhoWindow compute_window(const FieldModel& m, double eps, const SolverConfig& cfg) {
    RhoWindow w;
    w.delta = (cfg.delta > 0.0) ? cfg.delta : 1.0 / (m.gamma + 2.0);
    const double base = std::pow(std::abs(m.A) * m.gamma / 2.0, 1.0 / (m.gamma + 2.0));
    const double scale = std::pow(std::abs(eps), -w.delta);
    w.lo = cfg.a1_factor * base * scale;
    w.hi = cfg.a2_factor * base * scale;
    return w;
}

RhoResult solve_rho(const FieldModel& m, double eps, const SolverConfig& cfg) {
    cfg.validate();
    if (eps == 0.0) throw ConfigError("solve_rho: eps must be nonzero");
    if (eps * m.A <= 0.0)
        throw WrongSignError("solve_rho: eps must have the same sign as A (A=" +
                             std::to_string(m.A) + ", eps=" + std::to_string(eps) + ")");

    RhoResult res;
    res.window = compute_window(m, eps, cfg);
    if (res.window.lo <= 2.0 || std::abs(eps) * res.window.hi >= 1.0)
        throw ConfigError("solve_rho: rho window [" + std::to_string(res.window.lo) + ", " +
                          std::to_string(res.window.hi) +
                          "] leaves the admissible region 2 < rho < 1/|eps|; |eps| is too "
                          "large for this field");

    ReducedSolution lo_sol = fixed_point_solve(m, AnsatzParams(eps, res.window.lo), cfg);
    ReducedSolution hi_sol = fixed_point_solve(m, AnsatzParams(eps, res.window.hi), cfg);
    res.lambda_lo = lo_sol.lambda1;
    res.lambda_hi = hi_sol.lambda1;
    if (res.lambda_lo == 0.0) {
        res.rho_eps = res.window.lo;
        res.sol = lo_sol;
        return res;
    }
    if (res.lambda_hi == 0.0) {
        res.rho_eps = res.window.hi;
        res.sol = hi_sol;
        return res;
    }
    if (res.lambda_lo * res.lambda_hi > 0.0)
        throw WindowError("solve_rho: lambda1 does not change sign across the rho window [" +
                          std::to_string(res.window.lo) + ", " + std::to_string(res.window.hi) +
                          "]: endpoint values " + std::to_string(res.lambda_lo) + " and " +
                          std::to_string(res.lambda_hi) + "; try a smaller |eps|");

    double lo = res.window.lo, hi = res.window.hi;
    double lambda_at_lo = res.lambda_lo;
    PeriodicScalar warm = lo_sol.phi;
    ReducedSolution mid_sol = lo_sol;
    double mid = lo;
    while ((hi - lo) > cfg.root_tol * 0.5 * (hi + lo)) {
        mid = 0.5 * (lo + hi);
        mid_sol = fixed_point_solve(m, AnsatzParams(eps, mid), cfg, &warm);
        warm = mid_sol.phi;
        ++res.bisection_steps;
        if (mid_sol.lambda1 == 0.0) break;
        if ((mid_sol.lambda1 > 0.0) == (lambda_at_lo > 0.0)) {
            lo = mid;
            lambda_at_lo = mid_sol.lambda1;
        } else {
            hi = mid;
        }
    }
    res.rho_eps = mid;
    res.sol = mid_sol;
    if (std::abs(res.sol.lambda2) > 100.0 * cfg.fix_tol)
        throw SolverError("solve_rho: lambda2 = " + std::to_string(res.sol.lambda2) +
                          " did not vanish at rho_eps; rotational invariance is broken");
    return res;
}

double energy(const FieldModel& m, const CurveJet& c) {
    double sum = 0.0;
    for (size_t j = 0; j < c.u.size(); ++j)
        sum += std::abs(c.du[j]) + dot(eval_Q(m, c.u[j]), rot90(c.du[j]));
    return sum * kTwoPi / static_cast<double>(c.u.size());
}

double energy0(const CurveJet& c) {
    double sum = 0.0;
    for (size_t j = 0; j < c.u.size(); ++j)
        sum += std::abs(c.du[j]) + 0.5 * dot(c.u[j], rot90(c.du[j]));
    return sum * kTwoPi / static_cast<double>(c.u.size());
}

EnergyRhoReport energy_rho_derivative_check(const AnsatzParams& p, int grid_count) {
    p.validate();
    const UniformGrid grid(grid_count);
    const double h = 1e-3 * p.rho;

    const double e_plus = energy0(ansatz_curve(AnsatzParams(p.eps, p.rho + h), grid));
    const double e_minus = energy0(ansatz_curve(AnsatzParams(p.eps, p.rho - h), grid));

    EnergyRhoReport rep;
    rep.lhs = (1.0 - p.eps) * (e_plus - e_minus) / (2.0 * h);

    const CurveJet c = ansatz_curve(p, grid);
    const auto curv = curvature_samples(c);
    double sum = 0.0;
    for (int j = 0; j < grid.size(); ++j)
        sum += (curv[j] - 1.0) * (p.eps * p.rho + grid.cos_kj(1, j));
    rep.rhs = sum * kTwoPi / grid_count;

    rep.rel_mismatch = std::abs(rep.lhs - rep.rhs) / std::max(1e-300, std::abs(rep.rhs));
    rep.leading = -kTwoPi * p.eps * p.rho;
    rep.remainder = rep.lhs - rep.leading;
    return rep;
}

ForcingReport first_harmonic_forcing_check(const FieldModel& m, const AnsatzParams& p,
                                           const PeriodicScalar& phi, int grid_count) {
    const UniformGrid grid(grid_count);
    const CurveJet c = perturbed_curve(p, phi, grid);
    const auto curv = curvature_samples(c);
    ForcingReport rep;
    double lhs = 0.0, rhs = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
        lhs += curv[j] * grid.cos_kj(1, j);
        rhs += eval_B(m, c.u[j]) * grid.cos_kj(1, j);
    }
    rep.lhs = lhs * kTwoPi / grid_count;
    rep.rhs = rhs * kTwoPi / grid_count;
    rep.lhs_leading = -kTwoPi * p.eps * p.rho;
    rep.rhs_leading = -m.A * m.gamma * (kTwoPi / 2.0) * std::pow(p.rho, -m.gamma - 1.0);
    return rep;
}

Lambda2Report lambda2_identity_check(const AnsatzParams& p, const PeriodicScalar& phi,
                                     int grid_count) {
    const UniformGrid grid(grid_count);
    const CurveJet c = perturbed_curve(p, phi, grid);
    double sum = 0.0;
    for (int j = 0; j < grid.size(); ++j)
        sum += dot(c.u[j], c.u[j]) * grid.cos_kj(1, j);
    Lambda2Report rep;
    rep.integral = sum * kTwoPi / grid_count;
    rep.reference = kTwoPi * p.rho;
    rep.margin = std::abs(rep.integral) - 0.5 * kTwoPi * p.rho;
    return rep;
}

ScalingReport sweep_scaling(const FieldModel& m, const std::vector<double>& eps_list,
                            const SolverConfig& cfg, int jobs) {
    if (eps_list.size() < 3)
        throw ConfigError("sweep_scaling: need at least 3 eps values");
    for (size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (std::abs(eps_list[i + 1]) >= std::abs(eps_list[i]))
            throw ConfigError("sweep_scaling: eps values must decrease in magnitude");

    const size_t count = eps_list.size();
    std::vector<std::optional<RhoResult>> results(count);
    std::string failure;

    if (jobs > 1) {
        std::vector<std::future<RhoResult>> futures;
        futures.reserve(count);
        for (double eps : eps_list)
            futures.push_back(std::async(std::launch::async,
                                         [&m, eps, &cfg] { return solve_rho(m, eps, cfg); }));
        for (size_t i = 0; i < count; ++i) {
            try {
                results[i] = futures[i].get();
            } catch (const std::exception& e) {
                if (failure.empty())
                    failure = "eps=" + std::to_string(eps_list[i]) + ": " + e.what();
            }
        }
    } else {
        for (size_t i = 0; i < count; ++i) {
            try {
                results[i] = solve_rho(m, eps_list[i], cfg);
            } catch (const std::exception& e) {
                failure = "eps=" + std::to_string(eps_list[i]) + ": " + e.what();
                break;
            }
        }
    }

    ScalingReport rep;
    for (size_t i = 0; i < count && results[i].has_value(); ++i) {
        const RhoResult& r = *results[i];
        rep.eps_values.push_back(eps_list[i]);
        rep.rho_values.push_back(r.rho_eps);
        rep.phi_norms.push_back(r.sol.phi_c2);
        rep.lambda1_values.push_back(r.sol.lambda1);
        rep.lambda2_values.push_back(r.sol.lambda2);
        rep.eq_residuals.push_back(r.sol.eq_residual);
        rep.solutions.push_back(r.sol);
    }
    if (rep.eps_values.size() >= 3) {
        rep.fitted_rho_slope = fit_loglog_slope(rep.eps_values, rep.rho_values);
        rep.fitted_phi_slope = fit_loglog_slope(rep.eps_values, rep.phi_norms);
    } else {
        rep.fitted_rho_slope = rep.fitted_phi_slope =
            std::numeric_limits<double>::quiet_NaN();
    }
    if (!failure.empty())
        throw SweepAborted("sweep_scaling: solve failed at " + failure, rep);
    return rep;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("fit_loglog_slope: need two matched samples at least");
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(std::abs(x[i]));
        ly[i] = std::log(std::abs(y[i]));
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

}  // namespace epicurv
