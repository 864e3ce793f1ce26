#pragma once

#include <complex>
#include <memory>

namespace epicurv {

using Vec2 = std::complex<double>;

inline double dot(Vec2 v, Vec2 w) { return v.real() * w.real() + v.imag() * w.imag(); }
// cross(v, w) = (iv) . w, the scalar 2D cross product.
inline double cross(Vec2 v, Vec2 w) { return v.real() * w.imag() - v.imag() * w.real(); }
inline Vec2 rot90(Vec2 v) { return Vec2(-v.imag(), v.real()); }

// Radial magnetic profile: B(v) = b(|v|). Implementations supply the profile,
// its derivative and the moment integral \int_0^r b(s) s ds used by the
// vector potential.
class RadialProfile {
  public:
    virtual ~RadialProfile() = default;
    virtual double b(double r) const = 0;
    virtual double db(double r) const = 0;
    virtual double moment(double r) const = 0;
};

// Built-in regularized two-term family
//   b(r) = 1 + A (1+r^2)^{-gamma/2} + A1 (1+r^2)^{-gamma1/2},
// smooth on the whole plane, equal to 1 + A r^{-gamma} + A1 r^{-gamma1}
// + O(r^{-gamma-2}) at infinity, with closed-form moment.
class BuiltinProfile final : public RadialProfile {
  public:
    BuiltinProfile(double A, double gamma, double A1, double gamma1);
    double b(double r) const override;
    double db(double r) const override;
    double moment(double r) const override;

  private:
    double A_, gamma_, A1_, gamma1_;
};

// Field parameters plus the radial profile used for evaluation. The
// validated constructor builds the closed-form family above; with_profile
// wires in a user-supplied profile (no closed-form guarantees).
struct FieldModel {
    double A = 1.0;
    double gamma = 2.0;
    double A1 = 0.0;
    double gamma1 = 3.0;
    std::shared_ptr<const RadialProfile> profile;

    FieldModel(double A, double gamma, double A1 = 0.0, double gamma1 = 0.0);

    static FieldModel with_profile(std::shared_ptr<const RadialProfile> p, double A, double gamma,
                                   double A1 = 0.0, double gamma1 = 0.0);

    // Decomposition exponent beta = min{1, gamma1 - gamma} and the remainder
    // profiles of B(v) = 1 + A/|v|^gamma + B1(v)/|v|^{gamma+beta},
    // B1(v) = A1 + |v|^{beta-1} B2(v). Diagnostics only.
    double beta() const;
    double remainder_b1(Vec2 v) const;
    double remainder_b2(Vec2 v) const;

  private:
    FieldModel() = default;
};

double eval_B(const FieldModel& m, Vec2 v);
Vec2 grad_B(const FieldModel& m, Vec2 v);

// Vector potential Q(v) = (v/|v|^2) \int_0^{|v|} b(s) s ds, continuously
// extended by Q(0) = 0. Satisfies div Q = B.
Vec2 eval_Q(const FieldModel& m, Vec2 v);

// |Q(e^{i theta} v) - e^{i theta} Q(v)|; zero up to rounding for radial models.
double rotation_equivariance_check(const FieldModel& m, Vec2 v, double theta);

}  // namespace epicurv
