#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linklab {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Raised when a transform or framing operation receives a vector of the wrong size.
class SizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix fails a conditioning or determinant test.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_power_of_two(std::size_t n);

/// Unitary forward DFT (scale 1/sqrt(N)) by iterative radix-2 decimation in time.
/// Length must be a power of two and at least 2.
ComplexVector fft(std::span<const Complex> x);

/// Unitary inverse DFT; exact inverse of fft().
ComplexVector ifft(std::span<const Complex> x);

/// Direct O(N^2) evaluation of the same unitary DFT. Any length >= 1.
/// Used as an oracle for fft()/ifft().
ComplexVector naive_dft(std::span<const Complex> x, bool inverse);

/// y[n] = sum_l h[l] * x[(n - l) mod N], with h zero-padded to len(x).
ComplexVector circular_convolve(std::span<const Complex> x, std::span<const Complex> h);

/// Full linear convolution, output length len(x) + len(h) - 1.
ComplexVector linear_convolve(std::span<const Complex> x, std::span<const Complex> h);

double norm2(std::span<const Complex> x);

/// 2x2 complex matrix, row = receive antenna, column = transmit antenna.
struct Matrix2x2 {
    Complex h11{}, h12{}, h21{}, h22{};

    static Matrix2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Matrix2x2 diag(Complex a, Complex b) { return {a, 0.0, 0.0, b}; }

    Complex determinant() const { return h11 * h22 - h12 * h21; }
    double frobenius_norm2() const;

    friend bool operator==(const Matrix2x2&, const Matrix2x2&) = default;
};

Matrix2x2 operator+(const Matrix2x2& a, const Matrix2x2& b);
Matrix2x2 operator-(const Matrix2x2& a, const Matrix2x2& b);
Matrix2x2 operator*(Complex s, const Matrix2x2& a);

Matrix2x2 mat2_mul(const Matrix2x2& a, const Matrix2x2& b);
Matrix2x2 mat2_hermitian(const Matrix2x2& a);

/// Throws SingularMatrixError when |det| <= 1e-12 * ||a||_F^2.
Matrix2x2 mat2_inverse(const Matrix2x2& a);

/// Dense row-major complex matrix for the small tall systems the detectors solve.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    CMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Complex> values);

    static CMatrix identity(std::size_t n);
    static CMatrix from(const Matrix2x2& m);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    CMatrix hermitian() const;
    ComplexVector apply(std::span<const Complex> x) const;

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Largest entrywise magnitude of a - b.
double max_abs_diff(const Matrix2x2& a, const Matrix2x2& b);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace linklab
