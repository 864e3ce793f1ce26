#include "epicurv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "epicurv/errors.hpp"

namespace epicurv {

void SimConfig::validate() const {
    if (method != "rk4" && method != "dp45")
        throw ConfigError("SimConfig: method must be 'rk4' or 'dp45', got '" + method + "'");
    if (!(step > 0.0)) throw ConfigError("SimConfig: step must be positive");
    if (!(rel_tol > 0.0 && abs_tol > 0.0))
        throw ConfigError("SimConfig: tolerances must be positive");
    if (!(duration > 0.0)) throw ConfigError("SimConfig: duration must be positive");
}

namespace {

template <size_t N>
using State = std::array<double, N>;

template <size_t N>
State<N> axpy(const State<N>& y, double h, const State<N>& d) {
    State<N> out;
    for (size_t i = 0; i < N; ++i) out[i] = y[i] + h * d[i];
    return out;
}

template <size_t N, class F, class Obs>
void run_rk4(const F& f, State<N> y, double duration, double dt, Obs&& obs) {
    double t = 0.0;
    obs(t, y);
    while (t < duration) {
        const double h = std::min(dt, duration - t);
        const State<N> k1 = f(y);
        const State<N> k2 = f(axpy(y, 0.5 * h, k1));
        const State<N> k3 = f(axpy(y, 0.5 * h, k2));
        const State<N> k4 = f(axpy(y, h, k3));
        for (size_t i = 0; i < N; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
        obs(t, y);
    }
}

// Dormand-Prince 5(4) embedded pair with FSAL.
template <size_t N, class F, class Obs>
void run_dp45(const F& f, State<N> y, double duration, double rtol, double atol, Obs&& obs) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = 0.0;
    double dt = std::min(1e-2, duration);
    obs(t, y);
    State<N> k1 = f(y);
    while (t < duration) {
        dt = std::min(dt, duration - t);
        State<N> tmp;
        for (size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * a21 * k1[i];
        const State<N> k2 = f(tmp);
        for (size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * (a31 * k1[i] + a32 * k2[i]);
        const State<N> k3 = f(tmp);
        for (size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + dt * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State<N> k4 = f(tmp);
        for (size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + dt * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State<N> k5 = f(tmp);
        for (size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + dt * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        const State<N> k6 = f(tmp);
        State<N> ynew;
        for (size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const State<N> k7 = f(ynew);

        double err = 0.0;
        for (size_t i = 0; i < N; ++i) {
            const double ei = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / scale) * (ei / scale);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            t += dt;
            y = ynew;
            k1 = k7;
            obs(t, y);
        }
        const double factor = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
        dt *= std::clamp(factor, 0.2, 5.0);
        if (dt < 1e-14 * std::max(1.0, t))
            throw SolverError("dp45: step size underflow at t=" + std::to_string(t));
    }
}

template <size_t N, class F, class Obs>
void integrate(const F& f, const State<N>& y0, const SimConfig& cfg, Obs&& obs) {
    cfg.validate();
    if (cfg.method == "rk4")
        run_rk4<N>(f, y0, cfg.duration, cfg.step, obs);
    else
        run_dp45<N>(f, y0, cfg.duration, cfg.rel_tol, cfg.abs_tol, obs);
}

template <class Obs>
void integrate_planar_observe(const FieldModel& m, Vec2 v0, Vec2 w0, const SimConfig& cfg,
                              Obs&& obs) {
    if (std::abs(std::abs(w0) - 1.0) > 1e-9)
        throw ConfigError("integrate_planar: initial velocity must have unit length");
    const auto deriv = [&m](const State<4>& y) {
        const double b = eval_B(m, Vec2(y[0], y[1]));
        return State<4>{y[2], y[3], -b * y[3], b * y[2]};
    };
    integrate<4>(deriv, State<4>{v0.real(), v0.imag(), w0.real(), w0.imag()}, cfg, obs);
}

}  // namespace

Trajectory integrate_planar(const FieldModel& m, Vec2 v0, Vec2 w0, const SimConfig& cfg) {
    Trajectory tr;
    tr.dim = 2;
    integrate_planar_observe(m, v0, w0, cfg, [&tr](double t, const State<4>& y) {
        tr.times.push_back(t);
        tr.positions.push_back({y[0], y[1], 0.0});
        tr.velocities.push_back({y[2], y[3], 0.0});
    });
    return tr;
}

Trajectory integrate_lorentz3d(const FieldModel& m, std::array<double, 3> q0,
                               std::array<double, 3> qd0, double mass, double charge,
                               const SimConfig& cfg) {
    if (!(mass > 0.0)) throw ConfigError("integrate_lorentz3d: mass must be positive");
    if (charge == 0.0) throw ConfigError("integrate_lorentz3d: charge must be nonzero");
    const double em = charge / mass;
    const auto deriv = [&m, em](const State<6>& y) {
        const double b = eval_B(m, Vec2(y[0], y[1]));
        return State<6>{y[3], y[4], y[5], em * b * y[4], -em * b * y[3], 0.0};
    };
    Trajectory tr;
    tr.dim = 3;
    integrate<6>(deriv, State<6>{q0[0], q0[1], q0[2], qd0[0], qd0[1], qd0[2]}, cfg,
                 [&tr](double t, const State<6>& y) {
                     tr.times.push_back(t);
                     tr.positions.push_back({y[0], y[1], y[2]});
                     tr.velocities.push_back({y[3], y[4], y[5]});
                 });
    return tr;
}

namespace {

// Distance from p to the curve, given dense nodes table[lo..hi] at spacing
// dtau plus an exact evaluator. Every local valley of the node distances is
// refined by a parabola fit on the squared distances and one exact
// evaluation; the worked-loop curves self-intersect, so a single global
// refinement could land on the wrong branch.
double refined_set_distance(Vec2 p, const std::vector<Vec2>& table, long lo, long hi, double dtau,
                            const std::function<Vec2(double)>& exact) {
    double best = std::numeric_limits<double>::infinity();
    const long last = static_cast<long>(table.size()) - 1;
    for (long i = lo; i <= hi; ++i) {
        const double d2 = std::norm(p - table[i]);
        const double d2m = (i > 0) ? std::norm(p - table[i - 1]) : std::numeric_limits<double>::infinity();
        const double d2p = (i < last) ? std::norm(p - table[i + 1]) : std::numeric_limits<double>::infinity();
        const bool valley = d2 <= d2m && d2 <= d2p;
        const bool edge = (i == lo || i == hi);
        if (!valley && !edge) continue;

        double dist = std::sqrt(d2);
        if (i > 0 && i < last) {
            const double denom = d2m - 2.0 * d2 + d2p;
            if (denom > 0.0) {
                const double shift = std::clamp(0.5 * (d2m - d2p) / denom, -1.0, 1.0);
                dist = std::min(dist, std::abs(p - exact((i + shift) * dtau)));
            }
        }
        best = std::min(best, dist);
    }
    return best;
}

// Fritsch-Carlson monotone cubic slopes for strictly increasing data.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1), d(n);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    };
    d[0] = edge(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    return d;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& d, double xq) {
    const size_t n = x.size();
    size_t i = std::upper_bound(x.begin(), x.end(), xq) - x.begin();
    i = std::clamp<size_t>(i, 1, n - 1) - 1;
    const double h = x[i + 1] - x[i];
    const double s = (xq - x[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return y[i] * (2 * s3 - 3 * s2 + 1) + h * d[i] * (s3 - 2 * s2 + s) +
           y[i + 1] * (-2 * s3 + 3 * s2) + h * d[i + 1] * (s3 - s2);
}

}  // namespace

ArcLength::ArcLength(const CurveJet& c) {
    if (c.min_speed() <= kImmersionFloor)
        throw DegenerateCurveError("ArcLength: degenerate curve");
    const int m = c.grid.size();
    std::vector<double> speed(m);
    for (int j = 0; j < m; ++j) speed[j] = std::abs(c.du[j]);
    speed_series_ = analyze(speed, m / 4);
    mean_speed_ = speed_series_.a0;
    anti_ = PeriodicScalar(speed_series_.mode_count());
    for (int k = 1; k <= speed_series_.mode_count(); ++k) {
        anti_.a[k - 1] = -speed_series_.b[k - 1] / k;
        anti_.b[k - 1] = speed_series_.a[k - 1] / k;
    }
    anti0_ = anti_.eval(0.0);
    period_length_ = mean_speed_ * kTwoPi;

    const int table_n = 4 * m;
    table_t_.resize(table_n + 1);
    table_s_.resize(table_n + 1);
    for (int i = 0; i <= table_n; ++i) {
        table_t_[i] = kTwoPi * i / table_n;
        table_s_[i] = length(table_t_[i]);
    }
    table_slope_ = pchip_slopes(table_s_, table_t_);
}

double ArcLength::length(double t) const { return mean_speed_ * t + anti_.eval(t) - anti0_; }

double ArcLength::speed(double t) const { return speed_series_.eval(t); }

double ArcLength::invert(double s) const {
    const double turns = std::floor(s / period_length_);
    const double s_res = s - turns * period_length_;
    double t = pchip_eval(table_s_, table_t_, table_slope_, s_res) + kTwoPi * turns;
    for (int it = 0; it < 3; ++it) t -= (length(t) - s) / speed(t);
    return t;
}

Trajectory arclength_reparametrize(const CurveJet& c, int sample_count) {
    if (!c.eval)
        throw ConfigError("arclength_reparametrize: curve lacks an off-grid evaluator");
    const ArcLength arc(c);
    const int ns = sample_count > 0 ? sample_count : c.grid.size();
    const double total = arc.period_length();
    Trajectory tr;
    tr.dim = 2;
    tr.times.reserve(ns + 1);
    for (int k = 0; k <= ns; ++k) {
        const double s = total * k / ns;
        const double t = arc.invert(s);
        const PointJet pt = c.eval(t);
        const Vec2 w = pt.du / std::abs(pt.du);
        tr.times.push_back(s);
        tr.positions.push_back({pt.u.real(), pt.u.imag(), 0.0});
        tr.velocities.push_back({w.real(), w.imag(), 0.0});
    }
    return tr;
}

VerifyReport verify_solution(const FieldModel& m, const ReducedSolution& sol,
                             const SimConfig& cfg, const VerifyOptions& opts) {
    const AnsatzParams p = sol.params;
    const UniformGrid grid(opts.grid_count);
    const CurveJet curve = perturbed_curve(p, sol.phi, grid);
    const ArcLength arc(curve);

    VerifyReport rep;
    rep.curve_time_span = opts.curve_time_span > 0.0
                              ? opts.curve_time_span
                              : kTwoPi * (1.0 - p.eps) / std::abs(p.eps);
    rep.arclength_span = arc.length(rep.curve_time_span);

    const PointJet start = curve.eval(0.0);
    const Vec2 w0 = start.du / std::abs(start.du);

    SimConfig run = cfg;
    run.duration = rep.arclength_span;

    // Streaming observer: radii and speed drift at every accepted step,
    // decimated states kept for the deviation scan.
    std::vector<std::pair<double, Vec2>> kept;
    size_t stride = 1, seen = 0;
    double drift = 0.0;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    integrate_planar_observe(m, start.u, w0, run, [&](double t, const std::array<double, 4>& y) {
        const Vec2 v(y[0], y[1]);
        const double r = std::abs(v);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        drift = std::max(drift, std::abs(std::hypot(y[2], y[3]) - 1.0));
        if (seen++ % stride == 0) {
            kept.emplace_back(t, v);
            if (kept.size() > 2 * static_cast<size_t>(opts.sample_cap)) {
                std::vector<std::pair<double, Vec2>> thin;
                thin.reserve(kept.size() / 2 + 1);
                for (size_t i = 0; i < kept.size(); i += 2) thin.push_back(kept[i]);
                kept.swap(thin);
                stride *= 2;
            }
        }
    });

    rep.speed_drift = drift;
    rep.min_radius = rmin;
    rep.max_radius = rmax;
    rep.annulus_margin_inner = rmin - (p.rho - 1.0);
    rep.annulus_margin_outer = (p.rho + 1.0) - rmax;
    rep.max_deviation = std::numeric_limits<double>::quiet_NaN();

    if (!opts.compute_deviation) return rep;

    const double span = rep.curve_time_span;
    const double per_period = 16.0 * grid.size();
    const size_t table_n = static_cast<size_t>(std::ceil(per_period * span / kTwoPi));
    if (table_n > 8'000'000) return rep;  // deviation scan not feasible at this span

    std::vector<Vec2> table(table_n + 1);
    const double dtau = span / table_n;
    for (size_t i = 0; i <= table_n; ++i) table[i] = curve.eval(i * dtau).u;
    const long window = static_cast<long>(std::ceil(kTwoPi / dtau));
    const auto exact = [&curve](double tau) { return curve.eval(tau).u; };

    double worst = 0.0;
    for (const auto& [s, v] : kept) {
        const double tau_pred = arc.invert(s);
        const long center = std::lround(tau_pred / dtau);
        const long lo = std::max<long>(0, center - window);
        const long hi = std::min<long>(table_n, center + window);
        worst = std::max(worst, refined_set_distance(v, table, lo, hi, dtau, exact));
    }
    rep.max_deviation = worst;
    return rep;
}

namespace {

long gcd_long(long a, long b) { return std::gcd(a, b); }

long mod_inverse(long a, long n) {
    long t = 0, new_t = 1;
    long r = n, new_r = ((a % n) + n) % n;
    while (new_r != 0) {
        const long q = r / new_r;
        long tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    return ((t % n) + n) % n;
}

ClosureReport closure_core(const std::function<Vec2(double)>& fast_curve, long m_int, long n_int) {
    if (m_int <= 0 || n_int <= 0 || m_int >= n_int)
        throw ConfigError("closure_check: need 0 < m < n");
    const long g = gcd_long(m_int, n_int);
    const long m = m_int / g, n = n_int / g;

    ClosureReport rep;
    const double period = kTwoPi * n;
    rep.closure_err = std::abs(fast_curve(period) - fast_curve(0.0));
    rep.symmetry_order = n - m;
    rep.symmetry_angle = kTwoPi / rep.symmetry_order;

    double shift;
    Vec2 rot;
    if (rep.symmetry_order == 1) {
        shift = period;  // only the trivial symmetry: a full turn
        rot = Vec2(1.0, 0.0);
    } else {
        const long j0 = mod_inverse(m, rep.symmetry_order);
        shift = j0 * kTwoPi * n / rep.symmetry_order;
        rot = std::polar(1.0, rep.symmetry_angle);
    }
    const int probes = 1024;
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        const double tau = period * k / probes;
        worst = std::max(worst, std::abs(fast_curve(tau + shift) - rot * fast_curve(tau)));
    }
    rep.symmetry_err = worst;
    return rep;
}

}  // namespace

ClosureReport closure_check(const AnsatzParams& p, long m_int, long n_int) {
    const double eps = static_cast<double>(m_int) / static_cast<double>(n_int);
    if (std::abs(p.eps - eps) > 1e-12)
        throw ConfigError("closure_check: p.eps does not match m/n");
    const double rho = p.rho;
    return closure_core(
        [rho, eps](double tau) { return std::polar(rho, eps * tau) + std::polar(1.0, tau); },
        m_int, n_int);
}

ClosureReport closure_check_solved(const AnsatzParams& p, const PeriodicScalar& phi, long m_int,
                                   long n_int) {
    const double eps = static_cast<double>(m_int) / static_cast<double>(n_int);
    if (std::abs(p.eps - eps) > 1e-12)
        throw ConfigError("closure_check_solved: p.eps does not match m/n");
    const ScalarJet sj(phi);
    const double slow_rate = 1.0 - p.eps;
    return closure_core(
        [p, sj, slow_rate](double tau) { return perturbed_point(p, sj, slow_rate * tau).u; },
        m_int, n_int);
}

double rotation_set_distance(const std::function<Vec2(double)>& curve, double span, double theta,
                             int probe_count, int table_count) {
    std::vector<Vec2> table(table_count + 1);
    for (int i = 0; i <= table_count; ++i) table[i] = curve(span * i / table_count);
    const Vec2 rot = std::polar(1.0, theta);
    const double dtau = span / table_count;

    double worst = 0.0;
    for (int k = 0; k < probe_count; ++k) {
        const Vec2 p = rot * curve(span * k / probe_count);
        worst = std::max(worst, refined_set_distance(p, table, 0, table_count, dtau, curve));
    }
    return worst;
}

}  // namespace epicurv
