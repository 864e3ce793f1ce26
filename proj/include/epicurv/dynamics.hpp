#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "epicurv/field.hpp"
#include "epicurv/geometry.hpp"
#include "epicurv/reduction.hpp"

namespace epicurv {

struct SimConfig {
    std::string method = "dp45";  // "rk4" fixed step or "dp45" adaptive
    double step = 1e-3;           // rk4 step size
    double rel_tol = 1e-12;       // dp45 tolerances
    double abs_tol = 1e-12;
    double duration = kTwoPi;

    void validate() const;
};

struct Trajectory {
    int dim = 2;
    std::vector<double> times;
    std::vector<std::array<double, 3>> positions;
    std::vector<std::array<double, 3>> velocities;
};

// Integrates v' = w, w' = i B(v) w from a unit-speed start. Speed is a
// conserved quantity of the flow; the integrator does not renormalize it,
// so the measured drift is a diagnostic of integration error.
Trajectory integrate_planar(const FieldModel& m, Vec2 v0, Vec2 w0, const SimConfig& cfg);

// Full Newton-Lorentz system: q1'' = (e/m) B q2', q2'' = -(e/m) B q1', q3'' = 0.
Trajectory integrate_lorentz3d(const FieldModel& m, std::array<double, 3> q0,
                               std::array<double, 3> qd0, double mass, double charge,
                               const SimConfig& cfg);

// Arc length of a curve jet as a spectrally exact antiderivative of |du|
// (the speed is 2 pi-periodic even though the curve itself is not), valid
// for any t. The inverse is seeded by a monotone cubic table and polished
// by Newton steps.
class ArcLength {
  public:
    explicit ArcLength(const CurveJet& c);

    double length(double t) const;          // ell(t) = int_0^t |du|
    double speed(double t) const;
    double invert(double s) const;          // g(s): ell(g(s)) = s
    double period_length() const { return period_length_; }

  private:
    double mean_speed_ = 0.0;
    PeriodicScalar speed_series_, anti_;
    double anti0_ = 0.0;
    double period_length_ = 0.0;
    std::vector<double> table_s_, table_t_, table_slope_;
};

// Resamples the curve at unit speed: v(s) = u(g(s)) on a uniform s-grid over
// one parameter period, sample_count+1 points including both endpoints.
// Requires an evaluatable curve.
Trajectory arclength_reparametrize(const CurveJet& c, int sample_count = 0);

struct VerifyOptions {
    double curve_time_span = 0.0;   // 0 selects one slow revolution 2 pi (1-eps)/|eps|
    bool compute_deviation = true;
    int sample_cap = 2048;          // trajectory states kept for the deviation scan
    int grid_count = 256;
};

struct VerifyReport {
    double curve_time_span = 0.0;
    double arclength_span = 0.0;
    double max_deviation = 0.0;   // ODE state vs nearest point of the resampled curve
    double speed_drift = 0.0;     // max | |w| - 1 |
    double min_radius = 0.0;
    double max_radius = 0.0;
    double annulus_margin_inner = 0.0;  // min|v| - (rho - 1); positive means inside
    double annulus_margin_outer = 0.0;  // (rho + 1) - max|v|
};

// Seeds the planar system on the reparametrized solved curve and measures
// how far direct time integration drifts from it.
VerifyReport verify_solution(const FieldModel& m, const ReducedSolution& sol,
                             const SimConfig& cfg, const VerifyOptions& opts = {});

struct ClosureReport {
    double closure_err = 0.0;
    double symmetry_err = 0.0;
    long symmetry_order = 0;     // n - m after reduction to lowest terms
    double symmetry_angle = 0.0; // 2 pi / (n - m)
};

// Closure and discrete rotational symmetry of the fast-time curve
// v(tau) = rho e^{i m/n tau} + e^{i tau} (period 2 n pi, n - m curls).
// A non-reduced fraction is normalized first; p.eps must equal m/n.
ClosureReport closure_check(const AnsatzParams& p, long m_int, long n_int);

// Same checks on a solved curve u = u_{eps,rho} + phi n evaluated in fast time.
ClosureReport closure_check_solved(const AnsatzParams& p, const PeriodicScalar& phi, long m_int,
                                   long n_int);

// Max over probes of the distance between the curve rotated by theta and the
// curve itself (dense resampling plus local quadratic refinement). Used as a
// negative control for wrong symmetry angles.
double rotation_set_distance(const std::function<Vec2(double)>& curve, double span, double theta,
                             int probe_count = 256, int table_count = 16384);

}  // namespace epicurv
