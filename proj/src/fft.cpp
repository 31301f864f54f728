#include "hfb/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <vector>

namespace hfb {

namespace {

Eigen::FFT<double>& engine() {
    thread_local Eigen::FFT<double> f;
    return f;
}

void transform_lines(cplx* data, Index n, Index stride, Index lines_outer, Index block,
                     bool inverse) {
    thread_local std::vector<cplx> in, out;
    in.resize(n);
    out.resize(n);
    auto& f = engine();
    for (Index o = 0; o < lines_outer; ++o) {
        for (Index s = 0; s < stride; ++s) {
            cplx* base = data + o * block + s;
            for (Index k = 0; k < n; ++k) in[k] = base[k * stride];
            if (inverse)
                f.inv(out.data(), in.data(), n);
            else
                f.fwd(out.data(), in.data(), n);
            for (Index k = 0; k < n; ++k) base[k * stride] = out[k];
        }
    }
}

}  // namespace

void fft_block(cplx* data, const GridSpec& g, bool inverse) {
    const Index m = g.points;
    const Index total = g.size();
    Index stride = 1;
    for (int a = 0; a < g.dim; ++a) {
        const Index block = stride * m;
        transform_lines(data, m, stride, total / block, block, inverse);
        stride = block;
    }
}

VectorXcd fft(const VectorXcd& f, const GridSpec& g) {
    VectorXcd out = f;
    fft_block(out.data(), g, false);
    return out;
}

VectorXcd ifft(const VectorXcd& f, const GridSpec& g) {
    VectorXcd out = f;
    fft_block(out.data(), g, true);
    return out;
}

MatrixXcd fft_x(const MatrixXcd& a, const GridSpec& g, bool inverse) {
    MatrixXcd out = a;
    for (Index j = 0; j < out.cols(); ++j) fft_block(out.col(j).data(), g, inverse);
    return out;
}

void fft_x_inplace(MatrixXcd& a, const GridSpec& g, bool inverse) {
    for (Index j = 0; j < a.cols(); ++j) fft_block(a.col(j).data(), g, inverse);
}

MatrixXcd fft_y(const MatrixXcd& a, const GridSpec& g, bool inverse) {
    MatrixXcd t = a.transpose();
    for (Index j = 0; j < t.cols(); ++j) fft_block(t.col(j).data(), g, inverse);
    return t.transpose();
}

MatrixXcd fft_xy(const MatrixXcd& a, const GridSpec& g, bool inverse) {
    return fft_y(fft_x(a, g, inverse), g, inverse);
}

void dft_inplace(cplx* data, Index n, bool inverse) {
    std::vector<cplx> in(data, data + n), out(n);
    if (inverse)
        engine().inv(out.data(), in.data(), n);
    else
        engine().fwd(out.data(), in.data(), n);
    std::copy(out.begin(), out.end(), data);
}

void dft_columns(MatrixXcd& m, bool inverse) {
    const Index n = m.rows();
    std::vector<cplx> out(n);
    auto& f = engine();
    for (Index j = 0; j < m.cols(); ++j) {
        if (inverse)
            f.inv(out.data(), m.col(j).data(), n);
        else
            f.fwd(out.data(), m.col(j).data(), n);
        std::copy(out.begin(), out.end(), m.col(j).data());
    }
}

}  // namespace hfb
