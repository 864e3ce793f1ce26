#pragma once

#include <functional>
#include <vector>

#include "epicurv/field.hpp"
#include "epicurv/spectral.hpp"

namespace epicurv {

// Parameters of the ansatz curve u(t) = rho e^{i eps c t} + e^{i c t},
// c = 1/(1-eps): a unit-radius fast rotation about a guiding center that
// moves on a circle of radius rho with slow angular speed eps.
struct AnsatzParams {
    double eps = 0.0;
    double rho = 0.0;

    AnsatzParams() = default;
    AnsatzParams(double eps_, double rho_) : eps(eps_), rho(rho_) { validate(); }

    void validate() const;
    double speed_factor() const { return 1.0 / (1.0 - eps); }
};

struct PointJet {
    Vec2 u, du, d2u, d3u;
};

struct NormalPoint {
    Vec2 n, dn, d2n, d3n;
};

// A sampled planar curve with derivatives up to third order on a uniform
// grid. `eval` gives the closed-form jet at arbitrary t for curves that have
// one (ansatz and perturbed curves always do); it may be empty for curves
// assembled from raw samples.
struct CurveJet {
    UniformGrid grid;
    std::vector<Vec2> u, du, d2u, d3u;
    std::function<PointJet(double)> eval;

    explicit CurveJet(UniformGrid g) : grid(std::move(g)) {}

    double min_speed() const;
};

struct NormalJet {
    std::vector<Vec2> n, dn, d2n;
};

// Minimum |du| below which a curve is treated as degenerate (outside N).
inline constexpr double kImmersionFloor = 1e-8;

// Closed-form jets of the ansatz curve and of its unit normal
// n = i du/|du| (derivatives of n need the fourth curve derivative).
PointJet ansatz_point(const AnsatzParams& p, double t);
Vec2 ansatz_d4(const AnsatzParams& p, double t);
NormalPoint normal_point(const AnsatzParams& p, double t);

// Derivatives of phi bundled for off-grid evaluation of perturbed curves.
struct ScalarJet {
    PeriodicScalar f, d1, d2, d3;
    explicit ScalarJet(const PeriodicScalar& phi);
    void eval(double t, double& v, double& v1, double& v2, double& v3) const;
};

PointJet perturbed_point(const AnsatzParams& p, const ScalarJet& phi, double t);

CurveJet ansatz_curve(const AnsatzParams& p, const UniformGrid& grid);

// Sample an arbitrary closed-form jet on a grid (used for perturbed curves
// and for synthetic test curves).
CurveJet sample_curve(const UniformGrid& grid, std::function<PointJet(double)> eval);

// Unit normal field of an immersed curve, evaluated pointwise from the jets.
NormalJet normal_field(const CurveJet& c);

// u = u_ansatz + phi * n_ansatz, with derivatives assembled by the product
// rule. Throws DegenerateCurveError if the result leaves the admissible set.
CurveJet perturbed_curve(const AnsatzParams& p, const PeriodicScalar& phi, const UniformGrid& grid);

// Signed curvature K = cross(du, d2u)/|du|^3, sampled at the nodes.
std::vector<double> curvature_samples(const CurveJet& c);

// Curvature analyzed to mode_count harmonics (defaults to grid size / 4).
PeriodicScalar curvature(const CurveJet& c, int mode_count = 0);

// Curvature of the perturbed curve as an operator on phi.
PeriodicScalar curvature_operator(const AnsatzParams& p, const PeriodicScalar& phi,
                                  const UniformGrid& grid, int mode_count = 0);

// Frechet derivative of the curvature operator at phi:
//   K'(phi)[psi] = a psi'' + b psi' + c psi,
// with coefficients evaluated pointwise from the perturbed-curve jets and
// the ansatz normal.
struct LinearizationCoeffs {
    UniformGrid grid;
    std::vector<double> a_samples, b_samples, c_samples;
    PeriodicScalar a, b, c;

    PeriodicScalar apply(const PeriodicScalar& psi) const;
    std::vector<double> apply_samples(const PeriodicScalar& psi) const;
};

LinearizationCoeffs curvature_linearization(const AnsatzParams& p, const PeriodicScalar& phi,
                                            const UniformGrid& grid, int mode_count = 0);

// max_j |u(t_j + 2 pi) - e^{2 pi i/(1-eps)} u(t_j)|. Requires an evaluatable
// curve; zero up to rounding for curves built from 2 pi-periodic phi.
double rotation_residual(const CurveJet& c, double eps);

}  // namespace epicurv
