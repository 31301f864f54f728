#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "hfb/errors.hpp"
#include "hfb/kernels.hpp"

#include <Eigen/Eigenvalues>

using namespace hfbtest;

namespace {

Field unit_gaussian(const GridSpec& g, double width) {
    Field e = zero_field(g);
    for (Index i = 0; i < g.size(); ++i) {
        double x = g.position(i)[0] - 0.5 * g.length;
        e.values[i] = std::exp(-x * x / (2 * width * width));
    }
    e.values /= l2_norm(e);
    return e;
}

}  // namespace

TEST_CASE("compose of separable kernels") {
    GridSpec g = make_grid(1, 8, 2.0);
    Field f = random_field(g, 1), gg = random_field(g, 2), p = random_field(g, 3), w = random_field(g, 4);
    PairKernel c = compose(outer(f, gg), outer(p, w));
    cplx s = g.cell() * (gg.values.array() * p.values.array()).sum();
    MatrixXcd expect = s * outer(f, w).values;
    CHECK(max_abs(c.values - expect) < 1e-12 * max_abs(expect));
}

TEST_CASE("delta is the identity for compose") {
    for (int d : {1, 2}) {
        GridSpec g = make_grid(d, 8, 3.0);
        PairKernel a = random_kernel(g, 5);
        CHECK(max_abs(compose(a, delta_kernel(g)).values - a.values) < 1e-12 * max_abs(a.values));
        CHECK(max_abs(compose(delta_kernel(g), a).values - a.values) < 1e-12 * max_abs(a.values));
    }
}

TEST_CASE("compose matches the triple loop") {
    GridSpec g = make_grid(1, 8, 1.3);
    PairKernel a = random_kernel(g, 6), b = random_kernel(g, 7);
    MatrixXcd ref = MatrixXcd::Zero(8, 8);
    for (Index x = 0; x < 8; ++x)
        for (Index y = 0; y < 8; ++y)
            for (Index z = 0; z < 8; ++z) ref(x, y) += g.cell() * a.values(x, z) * b.values(z, y);
    CHECK((compose(a, b).values - ref).norm() < 1e-12 * ref.norm());
    CHECK_THROWS_AS(compose(a, random_kernel(make_grid(1, 8, 1.0), 1)), validation_error);
}

TEST_CASE("weighted compose") {
    GridSpec g = make_grid(1, 8, 2.0);
    PairKernel a = random_kernel(g, 8), b = random_kernel(g, 9);

    Field one = zero_field(g);
    one.values.setOnes();
    CHECK(max_abs(weighted_compose(one, a, b).values - compose(a, b).values) < 1e-12 * max_abs(b.values) * 8);

    Field v = zero_field(g);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Index i = 0; i < 8; ++i) v.values[i] = u(rng);

    PairKernel ones = zero_kernel(g);
    ones.values.setOnes();
    MatrixXcd conv = MatrixXcd::Zero(8, 8);
    for (Index x = 0; x < 8; ++x)
        for (Index y = 0; y < 8; ++y)
            for (Index z = 0; z < 8; ++z) conv(x, y) += g.cell() * v.values[g.difference(x, z)] * b.values(z, y);
    CHECK(max_abs(weighted_compose(v, ones, b).values - conv) < 1e-12 * max_abs(conv));

    MatrixXcd ref = MatrixXcd::Zero(8, 8);
    for (Index x = 0; x < 8; ++x)
        for (Index y = 0; y < 8; ++y)
            for (Index z = 0; z < 8; ++z)
                ref(x, y) += g.cell() * v.values[g.difference(x, z)] * a.values(x, z) * b.values(z, y);
    CHECK((weighted_compose(v, a, b).values - ref).norm() < 1e-12 * ref.norm());

    Field cv = v;
    cv.values[3] += 1i;
    CHECK_THROWS_AS(weighted_compose(cv, a, b), validation_error);
}

TEST_CASE("series at k = 0") {
    GridSpec g = make_grid(1, 8, 1.0);
    BogoliubovPair p = sh_ch_from_k(zero_kernel(g, Symmetry::symmetric));
    CHECK(max_abs(p.sh.values) == 0.0);
    CHECK(p.ch.values == delta_kernel(g).values);
    CHECK(p.series_terms_used == 1);
    BogoliubovPair o = block_exp_oracle(zero_kernel(g, Symmetry::symmetric));
    CHECK(max_abs(o.sh.values) == 0.0);
    CHECK(max_abs(o.ch.values - delta_kernel(g).values) == 0.0);
}

TEST_CASE("rank-one functional calculus at lambda = 0.7") {
    GridSpec g = make_grid(1, 32, 8.0);
    Field e = unit_gaussian(g, 1.0);
    PairKernel k = outer(e, e, Symmetry::symmetric);
    k.values *= 0.7;
    MatrixXcd ee = outer(e, e).values;
    MatrixXcd sh = std::sinh(0.7) * ee;
    MatrixXcd ch = delta_kernel(g).values + (std::cosh(0.7) - 1.0) * ee;
    for (const BogoliubovPair& p : {sh_ch_from_k(k), block_exp_oracle(k)}) {
        CHECK(max_abs(p.sh.values - sh) < 1e-12 * max_abs(sh));
        CHECK(max_abs(p.ch.values - ch) < 1e-12 * max_abs(ch));
    }
}

TEST_CASE("scalar block exponential") {
    MatrixXcd k(1, 1);
    k(0, 0) = 0.5;
    HyperbolicBlocks b = block_exp_blocks(k);
    CHECK(b.c(0, 0).real() == doctest::Approx(1.127626).epsilon(1e-6));
    CHECK(b.s(0, 0).real() == doctest::Approx(0.521095).epsilon(1e-6));
    CHECK(std::abs(b.c(0, 0) - std::cosh(0.5)) < 1e-15);
    CHECK(std::abs(b.s(0, 0) - std::sinh(0.5)) < 1e-15);
}

TEST_CASE("series matches the oracle on a random kernel of norm 0.5") {
    GridSpec g = make_grid(1, 8, 2.0);
    PairKernel k = random_symmetric(g, 11, 0.5);
    CHECK(pair_distance(sh_ch_from_k(k), block_exp_oracle(k)) < 1e-10);
}

TEST_CASE("symmetry and size preconditions") {
    GridSpec g = make_grid(1, 8, 2.0);
    PairKernel k = random_kernel(g, 12);
    CHECK_THROWS_AS(sh_ch_from_k(k), validation_error);
    CHECK_THROWS_AS(block_exp_oracle(k), validation_error);
    CHECK_THROWS_AS(sh_ch_from_k(random_symmetric(g, 1, 0.5), 0.0), validation_error);
    CHECK_THROWS_AS(block_exp_oracle(random_symmetric(make_grid(1, 128, 2.0), 1, 0.5)), validation_error);
    CHECK_THROWS_AS(sh_ch_from_k(random_symmetric(g, 1, 60.0)), numerical_error);
}

TEST_CASE("symplectic identity on 50 seeds") {
    const GridSpec grids[] = {make_grid(1, 8, 2.0), make_grid(1, 16, 4.0), make_grid(1, 32, 8.0),
                              make_grid(2, 8, 4.0)};
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst_eq = 0.0, worst_sym = 0.0;
    for (int s = 0; s < 50; ++s) {
        PairKernel k = random_symmetric(grids[s % 4], 100 + s, u(rng));
        BogoliubovPair p = sh_ch_from_k(k), o = block_exp_oracle(k);
        worst_eq = std::max(worst_eq, pair_distance(p, o));
        worst_sym = std::max({worst_sym, symplectic_residual(p), symplectic_residual(o)});
    }
    CHECK(worst_eq < 1e-10);
    CHECK(worst_sym < 1e-10);
}

TEST_CASE("symplectic identity for real kernels") {
    GridSpec g = make_grid(1, 16, 4.0);
    for (std::uint64_t s = 0; s < 10; ++s) {
        PairKernel k = random_symmetric(g, 300 + s, 0.9);
        k.values = k.values.real().cast<cplx>();
        k.values *= 0.9 / l2_norm(k);
        CHECK(symplectic_residual_real(sh_ch_from_k(k)) < 1e-10);
        CHECK(symplectic_residual_real(block_exp_oracle(k)) < 1e-10);
    }
}

TEST_CASE("ch and sh intertwine") {
    GridSpec g = make_grid(1, 16, 4.0);
    BogoliubovPair p = sh_ch_from_k(random_symmetric(g, 20, 0.9));
    PairKernel r = compose(p.ch, p.sh);
    r.values -= compose(p.sh, conj(p.ch)).values;
    CHECK(l2_norm(r) < 1e-12);
}

TEST_CASE("sh(2k) identity matches the series on 2k") {
    GridSpec g = make_grid(1, 16, 4.0);
    PairKernel k = random_symmetric(g, 13, 0.6);
    BogoliubovPair p = sh_ch_from_k(k);
    PairKernel k2 = k;
    k2.values *= 2.0;
    PairKernel direct = sh_ch_from_k(k2).sh;
    direct.values -= sh_double(p).values;
    CHECK(l2_norm(direct) < 1e-8);
}

TEST_CASE("sh(k) recovered from sh(2k) and ch(k)") {
    GridSpec g = make_grid(1, 16, 4.0);
    PairKernel k = random_symmetric(g, 14, 0.8);
    BogoliubovPair p = block_exp_oracle(k);
    PairKernel rec = compose(sh_double(p), kernel_inverse(conj(p.ch)));
    rec.values *= 0.5;
    rec.values -= p.sh.values;
    CHECK(l2_norm(rec) < 1e-8);
}

TEST_CASE("densities of a pure condensate") {
    GridSpec g = make_grid(1, 16, 4.0);
    Field phi = random_field(g, 15);
    phi.values /= l2_norm(phi);
    Densities d = assemble_densities(phi, sh_ch_from_k(zero_kernel(g, Symmetry::symmetric)), 4.0);
    CHECK(max_abs(d.gamma.values - outer(Field{g, phi.values.conjugate()}, phi).values) < 1e-14);
    CHECK(max_abs(d.lambda.values - outer(phi, phi).values) < 1e-14);
    CHECK(std::abs(trace(d.gamma) - 1.0) < 1e-12);
    CHECK(max_abs(d.rho.values - phi.values.cwiseAbs2().cast<cplx>()) < 1e-14);
}

TEST_CASE("pair-only trace") {
    GridSpec g = make_grid(1, 32, 8.0);
    Field e = unit_gaussian(g, 1.0);
    PairKernel k = outer(e, e, Symmetry::symmetric);
    k.values *= 0.7;
    const double n = 3.0;
    Densities d = assemble_densities(zero_field(g), sh_ch_from_k(k), n);
    CHECK(std::abs(trace(d.gamma) - std::pow(std::sinh(0.7), 2) / n) < 1e-12);
    CHECK_THROWS_AS(assemble_densities(zero_field(g), sh_ch_from_k(k), 0.0), validation_error);
}

TEST_CASE("trace identities") {
    GridSpec g = make_grid(1, 16, 3.0);
    Field f = random_field(g, 16), h = random_field(g, 17);
    cplx inner = g.cell() * (f.values.conjugate().array() * h.values.array()).sum();
    CHECK(std::abs(trace(outer(Field{g, f.values.conjugate()}, h)) - inner) < 1e-12 * std::abs(inner));
    CHECK(trace(delta_kernel(g)).real() == doctest::Approx(16.0).epsilon(1e-13));
    GridSpec g2 = make_grid(2, 8, 3.0);
    CHECK(trace(delta_kernel(g2)).real() == doctest::Approx(64.0).epsilon(1e-13));
}

TEST_CASE("density symmetries and positivity") {
    GridSpec g = make_grid(1, 32, 8.0);
    Field phi = random_field(g, 18);
    phi.values *= 0.5 / l2_norm(phi);
    PairKernel k = random_symmetric(g, 19, 0.9);
    Densities d = assemble_densities(phi, sh_ch_from_k(k), 2.0);
    for (const PairKernel* p : {&d.gamma, &d.gamma_p, &d.gamma_c})
        CHECK(symmetry_defect(p->values, Symmetry::hermitian) < 1e-12);
    for (const PairKernel* p : {&d.lambda, &d.lambda_p, &d.lambda_c})
        CHECK(symmetry_defect(p->values, Symmetry::symmetric) < 1e-12);
    CHECK(d.rho.values.imag().cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g.cell() * d.gamma_p.values);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);

    // Lambda_p via the oracle on 2k agrees with the canonical path
    PairKernel k2 = k;
    k2.values *= 2.0;
    MatrixXcd lp_oracle = block_exp_oracle(k2).sh.values / (2.0 * 2.0);
    CHECK(g.cell() * (lp_oracle - d.lambda_p.values).norm() < 1e-8);
}
