#include "epicurv/geometry.hpp"

#include <cmath>
#include <string>

#include "epicurv/errors.hpp"

namespace epicurv {

void AnsatzParams::validate() const {
    if (eps == 0.0) throw ConfigError("AnsatzParams: eps must be nonzero");
    if (!(std::abs(eps) < 0.5)) throw ConfigError("AnsatzParams: |eps| must be below 1/2");
    if (!(rho > 2.0)) throw ConfigError("AnsatzParams: rho must exceed 2");
    if (!(std::abs(eps) * rho < 1.0))
        throw ConfigError("AnsatzParams: |eps|*rho must stay below 1 (got " +
                          std::to_string(std::abs(eps) * rho) + ")");
}

double CurveJet::min_speed() const {
    double m = std::abs(du.empty() ? Vec2(0, 0) : du[0]);
    for (const Vec2& v : du) m = std::min(m, std::abs(v));
    return m;
}

PointJet ansatz_point(const AnsatzParams& p, double t) {
    const double c = p.speed_factor();
    const Vec2 slow = std::polar(p.rho, p.eps * c * t);
    const Vec2 fast = std::polar(1.0, c * t);
    const double ec = p.eps * c;
    PointJet j;
    j.u = slow + fast;
    j.du = Vec2(0, 1) * (ec * slow + c * fast);
    j.d2u = -(ec * ec * slow + c * c * fast);
    j.d3u = Vec2(0, -1) * (ec * ec * ec * slow + c * c * c * fast);
    return j;
}

Vec2 ansatz_d4(const AnsatzParams& p, double t) {
    const double c = p.speed_factor();
    const double ec = p.eps * c;
    return std::pow(ec, 4) * std::polar(p.rho, ec * t) + std::pow(c, 4) * std::polar(1.0, c * t);
}

NormalPoint normal_point(const AnsatzParams& p, double t) {
    const PointJet j = ansatz_point(p, t);
    const Vec2 d4 = ansatz_d4(p, t);

    // derivatives of s = |du| via h = du.du, then of q = 1/s
    const double h = dot(j.du, j.du);
    const double h1 = 2.0 * dot(j.du, j.d2u);
    const double h2 = 2.0 * (dot(j.d2u, j.d2u) + dot(j.du, j.d3u));
    const double h3 = 2.0 * (3.0 * dot(j.d2u, j.d3u) + dot(j.du, d4));
    const double s = std::sqrt(h);
    const double s1 = h1 / (2.0 * s);
    const double s2 = (h2 - 2.0 * s1 * s1) / (2.0 * s);
    const double s3 = (h3 - 6.0 * s1 * s2) / (2.0 * s);
    const double q = 1.0 / s;
    const double q1 = -s1 * q * q;
    const double q2 = -s2 * q * q + 2.0 * s1 * s1 * q * q * q;
    const double q3 = -s3 * q * q + 6.0 * s1 * s2 * q * q * q - 6.0 * s1 * s1 * s1 * q * q * q * q;

    NormalPoint n;
    n.n = rot90(j.du * q);
    n.dn = rot90(j.d2u * q + j.du * q1);
    n.d2n = rot90(j.d3u * q + 2.0 * j.d2u * q1 + j.du * q2);
    n.d3n = rot90(d4 * q + 3.0 * j.d3u * q1 + 3.0 * j.d2u * q2 + j.du * q3);
    return n;
}

ScalarJet::ScalarJet(const PeriodicScalar& phi)
    : f(phi), d1(differentiate(phi, 1)), d2(differentiate(phi, 2)), d3(differentiate(phi, 3)) {}

void ScalarJet::eval(double t, double& v, double& v1, double& v2, double& v3) const {
    v = v1 = v2 = v3 = 0.0;
    v = f.a0;
    for (int k = 1; k <= f.mode_count(); ++k) {
        const double ck = std::cos(k * t), sk = std::sin(k * t);
        v += f.a[k - 1] * ck + f.b[k - 1] * sk;
        v1 += d1.a[k - 1] * ck + d1.b[k - 1] * sk;
        v2 += d2.a[k - 1] * ck + d2.b[k - 1] * sk;
        v3 += d3.a[k - 1] * ck + d3.b[k - 1] * sk;
    }
}

PointJet perturbed_point(const AnsatzParams& p, const ScalarJet& phi, double t) {
    const PointJet base = ansatz_point(p, t);
    const NormalPoint nrm = normal_point(p, t);
    double f, f1, f2, f3;
    phi.eval(t, f, f1, f2, f3);
    PointJet j;
    j.u = base.u + f * nrm.n;
    j.du = base.du + f1 * nrm.n + f * nrm.dn;
    j.d2u = base.d2u + f2 * nrm.n + 2.0 * f1 * nrm.dn + f * nrm.d2n;
    j.d3u = base.d3u + f3 * nrm.n + 3.0 * f2 * nrm.dn + 3.0 * f1 * nrm.d2n + f * nrm.d3n;
    return j;
}

CurveJet sample_curve(const UniformGrid& grid, std::function<PointJet(double)> eval) {
    CurveJet c(grid);
    const int m = grid.size();
    c.u.resize(m);
    c.du.resize(m);
    c.d2u.resize(m);
    c.d3u.resize(m);
    for (int j = 0; j < m; ++j) {
        const PointJet pt = eval(grid.node(j));
        c.u[j] = pt.u;
        c.du[j] = pt.du;
        c.d2u[j] = pt.d2u;
        c.d3u[j] = pt.d3u;
    }
    c.eval = std::move(eval);
    return c;
}

CurveJet ansatz_curve(const AnsatzParams& p, const UniformGrid& grid) {
    p.validate();
    return sample_curve(grid, [p](double t) { return ansatz_point(p, t); });
}

NormalJet normal_field(const CurveJet& c) {
    if (c.min_speed() <= kImmersionFloor)
        throw DegenerateCurveError("normal_field: curve speed vanishes (min |du| = " +
                                   std::to_string(c.min_speed()) + ")");
    const size_t m = c.u.size();
    NormalJet nj;
    nj.n.resize(m);
    nj.dn.resize(m);
    nj.d2n.resize(m);
    for (size_t j = 0; j < m; ++j) {
        const Vec2 du = c.du[j], d2u = c.d2u[j], d3u = c.d3u[j];
        const double s = std::abs(du);
        const double s3 = s * s * s, s5 = s3 * s * s;
        const double ud = dot(du, d2u);
        nj.n[j] = rot90(du) / s;
        nj.dn[j] = rot90(d2u) / s - ud * rot90(du) / s3;
        nj.d2n[j] = rot90(d3u) / s -
                    (dot(d2u, d2u) + dot(du, d3u)) * rot90(du) / s3 -
                    2.0 * ud * rot90(d2u) / s3 + 3.0 * ud * ud * rot90(du) / s5;
    }
    return nj;
}

CurveJet perturbed_curve(const AnsatzParams& p, const PeriodicScalar& phi, const UniformGrid& grid) {
    p.validate();
    const ScalarJet sj(phi);
    // grid samples of phi come from the table-based transform; the attached
    // evaluator recomputes the same jet at arbitrary t
    const auto s0 = synthesize(sj.f, grid);
    const auto s1 = synthesize(sj.d1, grid);
    const auto s2 = synthesize(sj.d2, grid);
    const auto s3 = synthesize(sj.d3, grid);
    CurveJet c(grid);
    const int m = grid.size();
    c.u.resize(m);
    c.du.resize(m);
    c.d2u.resize(m);
    c.d3u.resize(m);
    for (int j = 0; j < m; ++j) {
        const double t = grid.node(j);
        const PointJet base = ansatz_point(p, t);
        const NormalPoint nrm = normal_point(p, t);
        c.u[j] = base.u + s0[j] * nrm.n;
        c.du[j] = base.du + s1[j] * nrm.n + s0[j] * nrm.dn;
        c.d2u[j] = base.d2u + s2[j] * nrm.n + 2.0 * s1[j] * nrm.dn + s0[j] * nrm.d2n;
        c.d3u[j] = base.d3u + s3[j] * nrm.n + 3.0 * s2[j] * nrm.dn + 3.0 * s1[j] * nrm.d2n +
                   s0[j] * nrm.d3n;
    }
    c.eval = [p, sj](double t) { return perturbed_point(p, sj, t); };
    if (c.min_speed() <= kImmersionFloor)
        throw DegenerateCurveError("perturbed_curve: phi pushes the curve out of the admissible "
                                   "set (min |du| = " + std::to_string(c.min_speed()) + ")");
    return c;
}

std::vector<double> curvature_samples(const CurveJet& c) {
    if (c.min_speed() <= kImmersionFloor)
        throw DegenerateCurveError("curvature: degenerate curve (min |du| = " +
                                   std::to_string(c.min_speed()) + ")");
    std::vector<double> k(c.u.size());
    for (size_t j = 0; j < k.size(); ++j) {
        const double s = std::abs(c.du[j]);
        k[j] = cross(c.du[j], c.d2u[j]) / (s * s * s);
    }
    return k;
}

PeriodicScalar curvature(const CurveJet& c, int mode_count) {
    if (mode_count <= 0) mode_count = c.grid.size() / 4;
    return analyze(curvature_samples(c), mode_count);
}

PeriodicScalar curvature_operator(const AnsatzParams& p, const PeriodicScalar& phi,
                                  const UniformGrid& grid, int mode_count) {
    return curvature(perturbed_curve(p, phi, grid), mode_count);
}

PeriodicScalar LinearizationCoeffs::apply(const PeriodicScalar& psi) const {
    return analyze(apply_samples(psi), a.mode_count());
}

std::vector<double> LinearizationCoeffs::apply_samples(const PeriodicScalar& psi) const {
    const auto p0 = synthesize(psi, grid);
    const auto p1 = synthesize(differentiate(psi, 1), grid);
    const auto p2 = synthesize(differentiate(psi, 2), grid);
    std::vector<double> out(p0.size());
    for (size_t j = 0; j < out.size(); ++j)
        out[j] = a_samples[j] * p2[j] + b_samples[j] * p1[j] + c_samples[j] * p0[j];
    return out;
}

LinearizationCoeffs curvature_linearization(const AnsatzParams& p, const PeriodicScalar& phi,
                                            const UniformGrid& grid, int mode_count) {
    if (mode_count <= 0) mode_count = grid.size() / 4;
    const CurveJet c = perturbed_curve(p, phi, grid);
    const int m = grid.size();
    LinearizationCoeffs lin{grid, {}, {}, {}, {}, {}, {}};
    lin.a_samples.resize(m);
    lin.b_samples.resize(m);
    lin.c_samples.resize(m);
    for (int j = 0; j < m; ++j) {
        const NormalPoint nrm = normal_point(p, grid.node(j));
        const Vec2 du = c.du[j], d2u = c.d2u[j];
        const double s = std::abs(du);
        const double s3 = s * s * s, s5 = s3 * s * s;
        const double w = cross(du, d2u);
        lin.a_samples[j] = cross(du, nrm.n) / s3;
        lin.b_samples[j] = (2.0 * cross(du, nrm.dn) - cross(d2u, nrm.n)) / s3 -
                           3.0 * w * dot(du, nrm.n) / s5;
        lin.c_samples[j] = (cross(du, nrm.d2n) - cross(d2u, nrm.dn)) / s3 -
                           3.0 * w * dot(du, nrm.dn) / s5;
    }
    lin.a = analyze(lin.a_samples, mode_count);
    lin.b = analyze(lin.b_samples, mode_count);
    lin.c = analyze(lin.c_samples, mode_count);
    return lin;
}

double rotation_residual(const CurveJet& c, double eps) {
    if (!c.eval)
        throw ConfigError("rotation_residual: curve lacks an off-grid evaluator");
    const Vec2 rot = std::polar(1.0, kTwoPi / (1.0 - eps));
    double worst = 0.0;
    for (int j = 0; j < c.grid.size(); ++j) {
        const Vec2 shifted = c.eval(c.grid.node(j) + kTwoPi).u;
        worst = std::max(worst, std::abs(shifted - rot * c.u[j]));
    }
    return worst;
}

}  // namespace epicurv
