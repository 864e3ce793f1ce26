#pragma once

#include <vector>

namespace epicurv {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform grid t_j = 2*pi*j/M on [0, 2*pi). M must be even and >= 4.
// The constructor tabulates the M-th roots of unity so transforms can look up
// cos(k t_j) = table[(k*j) mod M] instead of re-evaluating transcendentals.
class UniformGrid {
  public:
    explicit UniformGrid(int node_count);

    int size() const { return m_; }
    double node(int j) const { return kTwoPi * j / m_; }
    double cos_kj(long k, long j) const { return cos_[index(k * j)]; }
    double sin_kj(long k, long j) const { return sin_[index(k * j)]; }

  private:
    long index(long kj) const { return ((kj % m_) + m_) % m_; }

    int m_;
    std::vector<double> cos_, sin_;
};

// Real 2*pi-periodic function stored as the truncated Fourier series
//   f(t) = a0 + sum_{k=1..N} a[k-1] cos(kt) + b[k-1] sin(kt).
struct PeriodicScalar {
    double a0 = 0.0;
    std::vector<double> a, b;

    PeriodicScalar() = default;
    explicit PeriodicScalar(int mode_count) : a(mode_count, 0.0), b(mode_count, 0.0) {}
    PeriodicScalar(double a0_, std::vector<double> a_, std::vector<double> b_);

    int mode_count() const { return static_cast<int>(a.size()); }

    // Direct trigonometric sum; valid for any t, not just grid nodes.
    double eval(double t) const;

    PeriodicScalar& operator+=(const PeriodicScalar& g);
    PeriodicScalar& operator-=(const PeriodicScalar& g);
    PeriodicScalar& operator*=(double s);
};

PeriodicScalar operator+(PeriodicScalar f, const PeriodicScalar& g);
PeriodicScalar operator-(PeriodicScalar f, const PeriodicScalar& g);
PeriodicScalar operator*(PeriodicScalar f, double s);

// Pointwise evaluation at the grid nodes. Requires g.size() >= 2N+1.
std::vector<double> synthesize(const PeriodicScalar& f, const UniformGrid& g);

// Coefficients of the trigonometric interpolant truncated at harmonic
// mode_count. Inverse of synthesize on band-limited input.
// Requires samples.size() even and >= 2*mode_count + 1.
PeriodicScalar analyze(const std::vector<double>& samples, int mode_count);

// Mode-wise derivative of the given order (1, 2 or 3).
PeriodicScalar differentiate(const PeriodicScalar& f, int order = 1);

// L0 f = f'' + f: mode k scales by (1 - k^2); the first harmonics vanish.
PeriodicScalar l0_apply(const PeriodicScalar& f);

// Solve L0 phi = f for phi with zero first harmonics. The input must be
// numerically orthogonal to cos t and sin t: |a1|, |b1| <= tol * max(1, |f|_inf),
// otherwise NotInRangeError is thrown (a projection bug upstream).
PeriodicScalar l0_invert(const PeriodicScalar& f, double tol = 1e-12);

struct FirstHarmonicSplit {
    PeriodicScalar f_perp;  // f with the first harmonics removed (exactly)
    double c = 0.0;         // (1/pi) \int f cos t dt  == a1
    double s = 0.0;         // (1/pi) \int f sin t dt  == b1
};

FirstHarmonicSplit project_out_first_harmonics(const PeriodicScalar& f);

// Trapezoidal rule over the uniform grid, (2*pi/M) * sum f_j g_j.
// Exact for band-limited integrands of combined bandwidth < M.
double integrate_product(const std::vector<double>& f, const std::vector<double>& g);
double integrate_product(const PeriodicScalar& f, const PeriodicScalar& g, const UniformGrid& grid);

struct Norms {
    double sup = 0.0;  // max |f| on a refined grid
    double c2 = 0.0;   // sup|f| + sup|f'| + sup|f''| on the same grid
};

// Norms measured on a refined power-of-two grid with at least 4*(2N+1) nodes.
Norms norms(const PeriodicScalar& f);

double sup_norm(const std::vector<double>& samples);

}  // namespace epicurv
