#include "hfb/kernels.hpp"
#include "hfb/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace hfb {

PairKernel compose(const PairKernel& a, const PairKernel& b) {
    require_same_grid(a.grid, b.grid, "compose");
    MatrixXcd r;
    r.noalias() = a.values * b.values;
    r *= a.grid.cell();
    return PairKernel{a.grid, std::move(r), Symmetry::none};
}

MatrixXd difference_matrix(const Field& v) {
    const GridSpec& g = v.grid;
    double scale = v.values.cwiseAbs().maxCoeff();
    if (v.values.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
        throw validation_error("weight V must be real-valued");
    const Index n = g.size();
    MatrixXd m(n, n);
    for (Index z = 0; z < n; ++z)
        for (Index x = 0; x < n; ++x) m(x, z) = v.values[g.difference(x, z)].real();
    return m;
}

MatrixXcd weighted_compose(const MatrixXd& vmat, const MatrixXcd& a, const MatrixXcd& b, double cell) {
    MatrixXcd w = a.cwiseProduct(vmat.cast<cplx>());
    MatrixXcd r;
    r.noalias() = w * b;
    r *= cell;
    return r;
}

PairKernel weighted_compose(const Field& v, const PairKernel& a, const PairKernel& b) {
    require_same_grid(v.grid, a.grid, "weighted_compose");
    require_same_grid(a.grid, b.grid, "weighted_compose");
    MatrixXd vm = difference_matrix(v);
    return PairKernel{a.grid, weighted_compose(vm, a.values, b.values, a.grid.cell()), Symmetry::none};
}

namespace {

void require_symmetric_k(const PairKernel& k) {
    if (symmetry_defect(k.values, Symmetry::symmetric) > 1e-12)
        throw validation_error("pair excitation kernel k must be symmetric");
}

}  // namespace

BogoliubovPair sh_ch_from_k(const PairKernel& k, double tol) {
    require_symmetric_k(k);
    if (!(tol > 0.0)) throw validation_error("series tolerance must be positive");
    const GridSpec& g = k.grid;
    const double cell = g.cell();
    const Index n = g.size();

    // operator form K = h^d k, T = K conj(K); term_n(sh) = T^n K/(2n+1)!,
    // term_n(ch) = T^n/(2n)!. Kernel Frobenius norm of a term equals the
    // Frobenius norm of its operator matrix.
    MatrixXcd kop = k.values * cell;
    MatrixXcd t = kop * kop.conjugate();
    MatrixXcd s = kop, c = MatrixXcd::Identity(n, n);
    MatrixXcd ts = kop, tc = MatrixXcd::Identity(n, n);
    int used = 1;
    double residual = 0.0;
    for (int m = 1;; ++m) {
        MatrixXcd next_s = t * ts / double((2 * m) * (2 * m + 1));
        MatrixXcd next_c = t * tc / double((2 * m - 1) * (2 * m));
        residual = std::max(next_s.norm(), next_c.norm());
        if (residual < tol) break;
        if (used >= series_term_cap)
            throw numerical_error("sh/ch series not converged within " + std::to_string(series_term_cap) +
                                  " terms; use the block-exponential oracle");
        ts = std::move(next_s);
        tc = std::move(next_c);
        s += ts;
        c += tc;
        ++used;
    }
    BogoliubovPair p;
    p.sh = PairKernel{g, s / cell, Symmetry::symmetric};
    p.ch = PairKernel{g, c / cell, Symmetry::hermitian};
    p.source_k = k;
    p.series_terms_used = used;
    p.truncation_residual = residual;
    return p;
}

HyperbolicBlocks block_exp_blocks(const MatrixXcd& kop) {
    const Index n = kop.rows();
    MatrixXcd b = MatrixXcd::Zero(2 * n, 2 * n);
    b.topRightCorner(n, n) = kop;
    b.bottomLeftCorner(n, n) = kop.conjugate();
    MatrixXcd e = b.exp();
    return HyperbolicBlocks{e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

BogoliubovPair block_exp_oracle(const PairKernel& k) {
    require_symmetric_k(k);
    const GridSpec& g = k.grid;
    if (g.size() > 64) throw validation_error("block_exp_oracle: grid too large (M^d > 64)");
    const double cell = g.cell();
    auto blocks = block_exp_blocks(k.values * cell);
    BogoliubovPair p;
    p.ch = PairKernel{g, blocks.c / cell, Symmetry::hermitian};
    p.sh = PairKernel{g, blocks.s / cell, Symmetry::symmetric};
    p.source_k = k;
    return p;
}

PairKernel conj(const PairKernel& a) {
    Symmetry s = a.symmetry;
    return PairKernel{a.grid, a.values.conjugate(), s};
}

PairKernel sh_double(const BogoliubovPair& p) {
    PairKernel r = compose(p.sh, conj(p.ch));
    r.values *= 2.0;
    r.symmetry = Symmetry::symmetric;
    return r;
}

Densities assemble_densities(const Field& phi, const BogoliubovPair& pair, double n) {
    require_same_grid(phi.grid, pair.sh.grid, "assemble_densities");
    if (!(n > 0.0)) throw validation_error("N must be positive");
    Densities d;
    d.gamma_p = compose(conj(pair.sh), pair.sh);
    d.gamma_p.values /= n;
    d.gamma_p.symmetry = Symmetry::hermitian;
    d.lambda_p = sh_double(pair);
    d.lambda_p.values /= 2.0 * n;
    d.gamma_c = PairKernel{phi.grid, phi.values.conjugate() * phi.values.transpose(), Symmetry::hermitian};
    d.lambda_c = PairKernel{phi.grid, phi.values * phi.values.transpose(), Symmetry::symmetric};
    d.gamma = PairKernel{phi.grid, d.gamma_p.values + d.gamma_c.values, Symmetry::hermitian};
    d.lambda = PairKernel{phi.grid, d.lambda_p.values + d.lambda_c.values, Symmetry::symmetric};
    d.rho = Field{phi.grid, d.gamma.values.diagonal().real().cast<cplx>()};
    if (d.rho.values.real().minCoeff() < -1e-10)
        throw numerical_error("density rho has negative entries");
    return d;
}

cplx trace(const MatrixXcd& g, double cell) { return cell * g.trace(); }

cplx trace(const PairKernel& g) { return trace(g.values, g.grid.cell()); }

PairKernel kernel_inverse(const PairKernel& a) {
    const double cell = a.grid.cell();
    MatrixXcd op = a.values * cell;
    Eigen::PartialPivLU<MatrixXcd> lu(op);
    return PairKernel{a.grid, lu.inverse() / cell, Symmetry::none};
}

}  // namespace hfb
