#include "epicurv/field.hpp"

#include <cmath>
#include <string>

#include "epicurv/errors.hpp"

namespace epicurv {

namespace {

// \int_0^r A s (1+s^2)^{-g/2} ds, with the logarithmic branch at g == 2.
double moment_term(double amplitude, double g, double r) {
    const double r2 = r * r;
    if (std::abs(g - 2.0) < 1e-9) return amplitude * 0.5 * std::log1p(r2);
    return amplitude * (1.0 - std::pow(1.0 + r2, 1.0 - 0.5 * g)) / (g - 2.0);
}

}  // namespace

BuiltinProfile::BuiltinProfile(double A, double gamma, double A1, double gamma1)
    : A_(A), gamma_(gamma), A1_(A1), gamma1_(gamma1) {}

double BuiltinProfile::b(double r) const {
    const double r2 = r * r;
    return 1.0 + A_ * std::pow(1.0 + r2, -0.5 * gamma_) + A1_ * std::pow(1.0 + r2, -0.5 * gamma1_);
}

double BuiltinProfile::db(double r) const {
    const double r2 = r * r;
    return -gamma_ * A_ * r * std::pow(1.0 + r2, -0.5 * gamma_ - 1.0) -
           gamma1_ * A1_ * r * std::pow(1.0 + r2, -0.5 * gamma1_ - 1.0);
}

double BuiltinProfile::moment(double r) const {
    return 0.5 * r * r + moment_term(A_, gamma_, r) + moment_term(A1_, gamma1_, r);
}

FieldModel::FieldModel(double A_in, double gamma_in, double A1_in, double gamma1_in) {
    A = A_in;
    gamma = gamma_in;
    A1 = A1_in;
    gamma1 = (gamma1_in == 0.0) ? gamma_in + 1.0 : gamma1_in;
    if (A == 0.0) throw ConfigError("FieldModel: A must be nonzero");
    if (!(gamma > 1.0)) throw ConfigError("FieldModel: gamma must exceed 1");
    if (!(gamma1 > gamma)) throw ConfigError("FieldModel: gamma1 must exceed gamma");
    profile = std::make_shared<BuiltinProfile>(A, gamma, A1, gamma1);
}

FieldModel FieldModel::with_profile(std::shared_ptr<const RadialProfile> p, double A_in,
                                    double gamma_in, double A1_in, double gamma1_in) {
    if (!p) throw ConfigError("FieldModel::with_profile: null profile");
    FieldModel m;
    m.A = A_in;
    m.gamma = gamma_in;
    m.A1 = A1_in;
    m.gamma1 = (gamma1_in == 0.0) ? gamma_in + 1.0 : gamma1_in;
    m.profile = std::move(p);
    return m;
}

double FieldModel::beta() const { return std::min(1.0, gamma1 - gamma); }

double FieldModel::remainder_b1(Vec2 v) const {
    const double r = std::abs(v);
    return (eval_B(*this, v) - 1.0 - A * std::pow(r, -gamma)) * std::pow(r, gamma + beta());
}

double FieldModel::remainder_b2(Vec2 v) const {
    const double r = std::abs(v);
    return (remainder_b1(v) - A1) * std::pow(r, 1.0 - beta());
}

double eval_B(const FieldModel& m, Vec2 v) { return m.profile->b(std::abs(v)); }

Vec2 grad_B(const FieldModel& m, Vec2 v) {
    const double r = std::abs(v);
    if (r == 0.0) return Vec2(0.0, 0.0);
    return v * (m.profile->db(r) / r);
}

Vec2 eval_Q(const FieldModel& m, Vec2 v) {
    const double r = std::abs(v);
    // moment(r)/r^2 -> b(0)/2 as r -> 0
    if (r < 1e-150) return v * (0.5 * m.profile->b(0.0));
    return v * (m.profile->moment(r) / (r * r));
}

double rotation_equivariance_check(const FieldModel& m, Vec2 v, double theta) {
    const Vec2 w = std::polar(1.0, theta);
    return std::abs(eval_Q(m, w * v) - w * eval_Q(m, v));
}

}  // namespace epicurv
