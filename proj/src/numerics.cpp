#include "linklab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace linklab {

namespace {

void check_fft_size(std::size_t n) {
    if (n < 2 || !is_power_of_two(n)) {
        throw SizeError("fft: length " + std::to_string(n) + " is not a power of two >= 2");
    }
}

// In-place radix-2 DIT. sign = -1 forward, +1 inverse. No scaling.
void radix2(ComplexVector& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            // Twiddles evaluated directly rather than by recurrence to keep
            // the error at machine precision for N = 512.
            const Complex w = std::polar(1.0, angle * static_cast<double>(k));
            for (std::size_t i = k; i < n; i += len) {
                const Complex u = a[i];
                const Complex v = a[i + half] * w;
                a[i] = u + v;
                a[i + half] = u - v;
            }
        }
    }
}

ComplexVector transform(std::span<const Complex> x, int sign) {
    check_fft_size(x.size());
    ComplexVector a(x.begin(), x.end());
    radix2(a, sign);
    const double scale = 1.0 / std::sqrt(static_cast<double>(a.size()));
    for (auto& v : a) {
        v *= scale;
    }
    return a;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

ComplexVector fft(std::span<const Complex> x) { return transform(x, -1); }

ComplexVector ifft(std::span<const Complex> x) { return transform(x, +1); }

ComplexVector naive_dft(std::span<const Complex> x, bool inverse) {
    const std::size_t n = x.size();
    if (n == 0) {
        throw SizeError("naive_dft: empty input");
    }
    const double sign = inverse ? 1.0 : -1.0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexVector out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t t = 0; t < n; ++t) {
            // (k*t) mod n keeps the phase argument small.
            const auto idx = static_cast<double>((k * t) % n);
            acc += x[t] * std::polar(1.0, sign * 2.0 * std::numbers::pi * idx / static_cast<double>(n));
        }
        out[k] = acc * scale;
    }
    return out;
}

ComplexVector circular_convolve(std::span<const Complex> x, std::span<const Complex> h) {
    if (h.size() > x.size()) {
        throw SizeError("circular_convolve: kernel longer than signal");
    }
    const std::size_t n = x.size();
    ComplexVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc{};
        for (std::size_t l = 0; l < h.size(); ++l) {
            acc += h[l] * x[(i + n - l) % n];
        }
        y[i] = acc;
    }
    return y;
}

ComplexVector linear_convolve(std::span<const Complex> x, std::span<const Complex> h) {
    if (x.empty() || h.empty()) {
        throw SizeError("linear_convolve: empty operand");
    }
    ComplexVector y(x.size() + h.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t l = 0; l < h.size(); ++l) {
            y[i + l] += x[i] * h[l];
        }
    }
    return y;
}

double norm2(std::span<const Complex> x) {
    double acc = 0.0;
    for (const auto& v : x) {
        acc += std::norm(v);
    }
    return std::sqrt(acc);
}

double Matrix2x2::frobenius_norm2() const {
    return std::norm(h11) + std::norm(h12) + std::norm(h21) + std::norm(h22);
}

Matrix2x2 operator+(const Matrix2x2& a, const Matrix2x2& b) {
    return {a.h11 + b.h11, a.h12 + b.h12, a.h21 + b.h21, a.h22 + b.h22};
}

Matrix2x2 operator-(const Matrix2x2& a, const Matrix2x2& b) {
    return {a.h11 - b.h11, a.h12 - b.h12, a.h21 - b.h21, a.h22 - b.h22};
}

Matrix2x2 operator*(Complex s, const Matrix2x2& a) {
    return {s * a.h11, s * a.h12, s * a.h21, s * a.h22};
}

Matrix2x2 mat2_mul(const Matrix2x2& a, const Matrix2x2& b) {
    return {a.h11 * b.h11 + a.h12 * b.h21, a.h11 * b.h12 + a.h12 * b.h22,
            a.h21 * b.h11 + a.h22 * b.h21, a.h21 * b.h12 + a.h22 * b.h22};
}

Matrix2x2 mat2_hermitian(const Matrix2x2& a) {
    return {std::conj(a.h11), std::conj(a.h21), std::conj(a.h12), std::conj(a.h22)};
}

Matrix2x2 mat2_inverse(const Matrix2x2& a) {
    const Complex det = a.determinant();
    const double scale = a.frobenius_norm2();
    if (!(std::abs(det) > 1e-12 * scale)) {
        throw SingularMatrixError("mat2_inverse: matrix is singular to working precision");
    }
    const Complex inv = 1.0 / det;
    return {inv * a.h22, -inv * a.h12, -inv * a.h21, inv * a.h11};
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> values)
    : rows_(rows), cols_(cols), data_(values) {
    if (data_.size() != rows * cols) {
        throw SizeError("CMatrix: initializer has wrong number of entries");
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::from(const Matrix2x2& m) { return CMatrix(2, 2, {m.h11, m.h12, m.h21, m.h22}); }

CMatrix CMatrix::hermitian() const {
    CMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexVector CMatrix::apply(std::span<const Complex> x) const {
    if (x.size() != cols_) {
        throw SizeError("CMatrix::apply: dimension mismatch");
    }
    ComplexVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < cols_; ++c) {
            acc += (*this)(r, c) * x[c];
        }
        y[r] = acc;
    }
    return y;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) {
        throw SizeError("CMatrix multiply: dimension mismatch");
    }
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex v = a(r, k);
            for (std::size_t c = 0; c < b.cols_; ++c) {
                out(r, c) += v * b(k, c);
            }
        }
    }
    return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw SizeError("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            m = std::max(m, std::abs(a(r, c) - b(r, c)));
        }
    }
    return m;
}

double max_abs_diff(const Matrix2x2& a, const Matrix2x2& b) {
    return std::max({std::abs(a.h11 - b.h11), std::abs(a.h12 - b.h12), std::abs(a.h21 - b.h21),
                     std::abs(a.h22 - b.h22)});
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw SizeError("max_abs_diff: length mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace linklab
