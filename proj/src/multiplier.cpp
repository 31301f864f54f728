#include "hfb/multiplier.hpp"
#include "hfb/errors.hpp"
#include "hfb/fft.hpp"

#include <cmath>

namespace hfb {

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
Vec3 add3(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub3(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

FourierMultiplier on_axes(Axes a, std::function<cplx(const Vec3&)> s) {
    FourierMultiplier m;
    m.axes = a;
    switch (a) {
        case Axes::x:
            m.symbol = [s](const Vec3& xi, const Vec3&) { return s(xi); };
            break;
        case Axes::y:
            m.symbol = [s](const Vec3&, const Vec3& eta) { return s(eta); };
            break;
        case Axes::x_minus_y:
            m.symbol = [s](const Vec3& xi, const Vec3& eta) { return s(sub3(xi, eta)); };
            break;
        case Axes::x_plus_y:
            m.symbol = [s](const Vec3& xi, const Vec3& eta) { return s(add3(xi, eta)); };
            break;
        case Axes::both:
            throw validation_error("on_axes: a one-variable symbol needs a single axis block");
    }
    return m;
}

FourierMultiplier bracket(double alpha, Axes a) {
    return on_axes(a, [alpha](const Vec3& z) {
        double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
        return cplx(std::pow(1.0 + r2, 0.5 * alpha), 0.0);
    });
}

FourierMultiplier identity_multiplier(Axes a) {
    return FourierMultiplier{a, [](const Vec3&, const Vec3&) { return cplx(1.0, 0.0); }};
}

FourierMultiplier operator*(const FourierMultiplier& a, const FourierMultiplier& b) {
    FourierMultiplier m;
    m.axes = (a.axes == b.axes && (a.axes == Axes::x || a.axes == Axes::y)) ? a.axes : Axes::both;
    auto sa = a.symbol, sb = b.symbol;
    m.symbol = [sa, sb](const Vec3& xi, const Vec3& eta) { return sa(xi, eta) * sb(xi, eta); };
    return m;
}

VectorXcd symbol_table(const GridSpec& g, const FourierMultiplier& m) {
    if (m.axes != Axes::x)
        throw validation_error("multiplier axis block not applicable to a one-body field");
    const Vec3 zero{0.0, 0.0, 0.0};
    VectorXcd t(g.size());
    for (Index i = 0; i < g.size(); ++i) t[i] = m.symbol(g.freq(i), zero);
    return t;
}

MatrixXcd symbol_table_pair(const GridSpec& g, const FourierMultiplier& m) {
    const Index n = g.size();
    std::vector<Vec3> f(n);
    for (Index i = 0; i < n; ++i) f[i] = g.freq(i);
    MatrixXcd t(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) t(i, j) = m.symbol(f[i], f[j]);
    return t;
}

double max_modulus(const GridSpec& g, const FourierMultiplier& m, bool pair) {
    if (pair) return symbol_table_pair(g, m).cwiseAbs().maxCoeff();
    return symbol_table(g, m).cwiseAbs().maxCoeff();
}

namespace {

void require_bounded(double sup) {
    if (!std::isfinite(sup)) throw validation_error("multiplier is unbounded on the lattice");
}

}  // namespace

Field apply_multiplier(const Field& f, const FourierMultiplier& m) {
    VectorXcd t = symbol_table(f.grid, m);
    require_bounded(t.cwiseAbs().maxCoeff());
    VectorXcd hat = fft(f.values, f.grid);
    return Field{f.grid, ifft(hat.cwiseProduct(t), f.grid)};
}

MatrixXcd apply_multiplier(const MatrixXcd& k, const GridSpec& g, const FourierMultiplier& m) {
    const Index n = g.size();
    const Vec3 zero{0.0, 0.0, 0.0};
    if (m.axes == Axes::x || m.axes == Axes::y) {
        VectorXcd t(n);
        for (Index i = 0; i < n; ++i)
            t[i] = m.axes == Axes::x ? m.symbol(g.freq(i), zero) : m.symbol(zero, g.freq(i));
        require_bounded(t.cwiseAbs().maxCoeff());
        if (m.axes == Axes::x) {
            MatrixXcd hat = fft_x(k, g);
            hat = t.asDiagonal() * hat;
            return fft_x(hat, g, true);
        }
        MatrixXcd hat = fft_y(k, g);
        hat = hat * t.asDiagonal();
        return fft_y(hat, g, true);
    }
    MatrixXcd t = symbol_table_pair(g, m);
    require_bounded(t.cwiseAbs().maxCoeff());
    MatrixXcd hat = fft_xy(k, g);
    hat.array() *= t.array();
    return fft_xy(hat, g, true);
}

PairKernel apply_multiplier(const PairKernel& k, const FourierMultiplier& m) {
    return PairKernel{k.grid, apply_multiplier(k.values, k.grid, m), Symmetry::none};
}

}  // namespace hfb
