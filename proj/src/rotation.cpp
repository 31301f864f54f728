#include "hfb/rotation.hpp"

#include <cmath>
#include <vector>

namespace hfb {

namespace {

// shifted[u][s] = flat index of (u + s) mod M per axis
std::vector<Index> sum_table(const GridSpec& g) {
    const Index n = g.size();
    std::vector<Index> t(n * n);
    for (Index s = 0; s < n; ++s) {
        auto is = g.unflatten(s);
        for (Index u = 0; u < n; ++u) {
            auto iu = g.unflatten(u);
            std::array<int, 3> x{0, 0, 0};
            for (int a = 0; a < g.dim; ++a) x[a] = (iu[a] + is[a]) % g.points;
            t[s * n + u] = g.flatten(x);
        }
    }
    return t;
}

}  // namespace

MatrixXcd rotate_pair_coords(const MatrixXcd& k, const GridSpec& g, RotationDirection dir) {
    const Index n = g.size();
    MatrixXcd out(n, n);
    if (g.dim == 1) {
        const Index m = n;
        for (Index s = 0; s < m; ++s)
            for (Index u = 0; u < m; ++u) {
                Index x = (u + s) % m;
                if (dir == RotationDirection::forward)
                    out(u, s) = k(x, s);
                else
                    out(x, s) = k(u, s);
            }
        return out;
    }
    auto t = sum_table(g);
    for (Index s = 0; s < n; ++s)
        for (Index u = 0; u < n; ++u) {
            Index x = t[s * n + u];
            if (dir == RotationDirection::forward)
                out(u, s) = k(x, s);
            else
                out(x, s) = k(u, s);
        }
    return out;
}

PairKernel rotate_pair_coords(const PairKernel& k, RotationDirection dir) {
    return PairKernel{k.grid, rotate_pair_coords(k.values, k.grid, dir), Symmetry::none};
}

Index w_index(const GridSpec& g, Index u, Index s) {
    auto iu = g.unflatten(u), is = g.unflatten(s);
    std::array<int, 3> w{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) w[a] = (iu[a] + 2 * is[a]) % g.points;
    return g.flatten(w);
}

double rotation_l2_factor(int dim) { return std::pow(2.0, 0.5 * dim); }

double rotated_w_weight(const GridSpec& g) { return std::pow(2.0, g.dim) * g.cell(); }

}  // namespace hfb
