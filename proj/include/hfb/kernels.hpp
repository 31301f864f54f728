#pragma once

#include "hfb/grid.hpp"

namespace hfb {

// (a o b)(x,y) = h^d sum_z a(x,z) b(z,y)
PairKernel compose(const PairKernel& a, const PairKernel& b);

// V(x - z) on the lattice, periodic difference; V must be real
MatrixXd difference_matrix(const Field& v);
// h^d sum_z V(x-z) a(x,z) b(z,y)
PairKernel weighted_compose(const Field& v, const PairKernel& a, const PairKernel& b);
MatrixXcd weighted_compose(const MatrixXd& vmat, const MatrixXcd& a, const MatrixXcd& b, double cell);

struct BogoliubovPair {
    PairKernel ch;  // includes delta_h
    PairKernel sh;
    PairKernel source_k;
    int series_terms_used = 0;
    double truncation_residual = 0.0;
};

inline constexpr int series_term_cap = 40;

BogoliubovPair sh_ch_from_k(const PairKernel& k, double tol = 1e-12);
BogoliubovPair block_exp_oracle(const PairKernel& k);

struct HyperbolicBlocks {
    MatrixXcd c;  // top-left block of exp([[0,K],[conj K,0]])
    MatrixXcd s;  // top-right block
};
// operator-level oracle on an explicit matrix K (no grid needed)
HyperbolicBlocks block_exp_blocks(const MatrixXcd& kop);

// sh(2k) = 2 sh o conj(ch)
PairKernel sh_double(const BogoliubovPair& p);

struct Densities {
    PairKernel gamma, lambda;
    PairKernel gamma_p, lambda_p;
    PairKernel gamma_c, lambda_c;
    Field rho;
};

Densities assemble_densities(const Field& phi, const BogoliubovPair& pair, double n);

cplx trace(const PairKernel& g);
cplx trace(const MatrixXcd& g, double cell);

// operator inverse as a kernel: inverse(a) o a = delta_h
PairKernel kernel_inverse(const PairKernel& a);
PairKernel conj(const PairKernel& a);

}  // namespace hfb
