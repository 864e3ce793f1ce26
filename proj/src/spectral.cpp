#include "epicurv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epicurv/errors.hpp"

namespace epicurv {

UniformGrid::UniformGrid(int node_count) : m_(node_count) {
    if (node_count < 4 || node_count % 2 != 0)
        throw ConfigError("UniformGrid: node count must be even and >= 4, got " +
                          std::to_string(node_count));
    cos_.resize(m_);
    sin_.resize(m_);
    for (int j = 0; j < m_; ++j) {
        cos_[j] = std::cos(kTwoPi * j / m_);
        sin_[j] = std::sin(kTwoPi * j / m_);
    }
}

PeriodicScalar::PeriodicScalar(double a0_, std::vector<double> a_, std::vector<double> b_)
    : a0(a0_), a(std::move(a_)), b(std::move(b_)) {
    if (a.size() != b.size())
        throw ConfigError("PeriodicScalar: cosine/sine coefficient counts differ");
}

double PeriodicScalar::eval(double t) const {
    double s = a0;
    for (int k = 1; k <= mode_count(); ++k)
        s += a[k - 1] * std::cos(k * t) + b[k - 1] * std::sin(k * t);
    return s;
}

PeriodicScalar& PeriodicScalar::operator+=(const PeriodicScalar& g) {
    if (g.mode_count() > mode_count()) {
        a.resize(g.a.size(), 0.0);
        b.resize(g.b.size(), 0.0);
    }
    a0 += g.a0;
    for (size_t k = 0; k < g.a.size(); ++k) {
        a[k] += g.a[k];
        b[k] += g.b[k];
    }
    return *this;
}

PeriodicScalar& PeriodicScalar::operator-=(const PeriodicScalar& g) {
    PeriodicScalar neg = g;
    neg *= -1.0;
    return *this += neg;
}

PeriodicScalar& PeriodicScalar::operator*=(double s) {
    a0 *= s;
    for (auto& v : a) v *= s;
    for (auto& v : b) v *= s;
    return *this;
}

PeriodicScalar operator+(PeriodicScalar f, const PeriodicScalar& g) { return f += g; }
PeriodicScalar operator-(PeriodicScalar f, const PeriodicScalar& g) { return f -= g; }
PeriodicScalar operator*(PeriodicScalar f, double s) { return f *= s; }

std::vector<double> synthesize(const PeriodicScalar& f, const UniformGrid& g) {
    const int m = g.size();
    const int n = f.mode_count();
    if (m < 2 * n + 1)
        throw ConfigError("synthesize: grid with " + std::to_string(m) +
                          " nodes cannot carry " + std::to_string(n) + " modes");
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) {
        double s = f.a0;
        for (int k = 1; k <= n; ++k)
            s += f.a[k - 1] * g.cos_kj(k, j) + f.b[k - 1] * g.sin_kj(k, j);
        out[j] = s;
    }
    return out;
}

PeriodicScalar analyze(const std::vector<double>& samples, int mode_count) {
    const int m = static_cast<int>(samples.size());
    if (m < 2 * mode_count + 1)
        throw ConfigError("analyze: " + std::to_string(m) + " samples cannot resolve " +
                          std::to_string(mode_count) + " modes (need M >= 2N+1)");
    UniformGrid g(m);
    PeriodicScalar f(mode_count);
    double mean = 0.0;
    for (double v : samples) mean += v;
    f.a0 = mean / m;
    for (int k = 1; k <= mode_count; ++k) {
        double ca = 0.0, cb = 0.0;
        for (int j = 0; j < m; ++j) {
            ca += samples[j] * g.cos_kj(k, j);
            cb += samples[j] * g.sin_kj(k, j);
        }
        f.a[k - 1] = 2.0 * ca / m;
        f.b[k - 1] = 2.0 * cb / m;
    }
    return f;
}

PeriodicScalar differentiate(const PeriodicScalar& f, int order) {
    if (order < 1 || order > 3)
        throw ConfigError("differentiate: order must be 1, 2 or 3");
    PeriodicScalar d(f.mode_count());
    for (int k = 1; k <= f.mode_count(); ++k) {
        const double ak = f.a[k - 1], bk = f.b[k - 1];
        const double kk = k;
        switch (order) {
            case 1:  // (a cos + b sin)' = k b cos - k a sin
                d.a[k - 1] = kk * bk;
                d.b[k - 1] = -kk * ak;
                break;
            case 2:
                d.a[k - 1] = -kk * kk * ak;
                d.b[k - 1] = -kk * kk * bk;
                break;
            case 3:
                d.a[k - 1] = -kk * kk * kk * bk;
                d.b[k - 1] = kk * kk * kk * ak;
                break;
        }
    }
    return d;
}

PeriodicScalar l0_apply(const PeriodicScalar& f) {
    PeriodicScalar out = f;
    for (int k = 1; k <= f.mode_count(); ++k) {
        const double factor = 1.0 - static_cast<double>(k) * k;
        out.a[k - 1] = factor * f.a[k - 1];
        out.b[k - 1] = factor * f.b[k - 1];
    }
    return out;
}

PeriodicScalar l0_invert(const PeriodicScalar& f, double tol) {
    if (f.mode_count() >= 1) {
        const Norms nf = norms(f);
        const double bound = tol * std::max(1.0, nf.sup);
        if (std::abs(f.a[0]) > bound || std::abs(f.b[0]) > bound)
            throw NotInRangeError(
                "l0_invert: first-harmonic content (" + std::to_string(f.a[0]) + ", " +
                std::to_string(f.b[0]) + ") exceeds tolerance; input is not in the range of L0");
    }
    PeriodicScalar out = f;
    for (int k = 1; k <= f.mode_count(); ++k) {
        if (k == 1) {
            out.a[0] = 0.0;
            out.b[0] = 0.0;
            continue;
        }
        const double factor = 1.0 - static_cast<double>(k) * k;
        out.a[k - 1] = f.a[k - 1] / factor;
        out.b[k - 1] = f.b[k - 1] / factor;
    }
    return out;
}

FirstHarmonicSplit project_out_first_harmonics(const PeriodicScalar& f) {
    FirstHarmonicSplit split;
    split.f_perp = f;
    if (f.mode_count() >= 1) {
        split.c = f.a[0];
        split.s = f.b[0];
        split.f_perp.a[0] = 0.0;
        split.f_perp.b[0] = 0.0;
    }
    return split;
}

double integrate_product(const std::vector<double>& f, const std::vector<double>& g) {
    if (f.size() != g.size() || f.empty())
        throw ConfigError("integrate_product: sample arrays must have equal nonzero length");
    double s = 0.0;
    for (size_t j = 0; j < f.size(); ++j) s += f[j] * g[j];
    return s * kTwoPi / static_cast<double>(f.size());
}

double integrate_product(const PeriodicScalar& f, const PeriodicScalar& g, const UniformGrid& grid) {
    return integrate_product(synthesize(f, grid), synthesize(g, grid));
}

namespace {

int refined_grid_size(int mode_count) {
    int need = std::max(256, 4 * (2 * mode_count + 1));
    int m = 256;
    while (m < need) m *= 2;
    return m;
}

}  // namespace

Norms norms(const PeriodicScalar& f) {
    const UniformGrid g(refined_grid_size(f.mode_count()));
    const auto s0 = synthesize(f, g);
    const auto s1 = synthesize(differentiate(f, 1), g);
    const auto s2 = synthesize(differentiate(f, 2), g);
    Norms n;
    n.sup = sup_norm(s0);
    n.c2 = n.sup + sup_norm(s1) + sup_norm(s2);
    return n;
}

double sup_norm(const std::vector<double>& samples) {
    double m = 0.0;
    for (double v : samples) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace epicurv
