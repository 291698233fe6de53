#ifndef SIWR_LINALG_H
#define SIWR_LINALG_H

#include <array>
#include <complex>
#include <cstddef>

namespace siwr
{

/// 4x4 real matrix, row-major, rows and columns in compartment order (S, I, R, W).
struct Matrix4 {
    std::array<double, 16> entries{};

    double& operator()(std::size_t row, std::size_t col)
    {
        return entries[row * 4 + col];
    }
    double operator()(std::size_t row, std::size_t col) const
    {
        return entries[row * 4 + col];
    }

    static Matrix4 identity();
    static Matrix4 diagonal(double a, double b, double c, double d);

    Matrix4 operator*(const Matrix4& rhs) const;
    double trace() const;
    bool all_finite() const;
};

using Eigenvalues4 = std::array<std::complex<double>, 4>;

/// Coefficients of det(lambda I - m) = lambda^4 + c[3] lambda^3 + c[2] lambda^2 + c[1] lambda + c[0]
/// by the Faddeev-LeVerrier recursion.
std::array<double, 4> characteristic_polynomial(const Matrix4& m);

/**
 * @brief Roots of a monic quartic by Durand-Kerner simultaneous iteration.
 *
 * Iterates until every root satisfies |p(z)| < 1e-12 * sum_k |c_k| |z|^k.
 * Throws NonConvergence after 500 sweeps. Sorted by descending real part.
 */
Eigenvalues4 quartic_roots(const std::array<double, 4>& coeffs);

/// Spectrum of m via its characteristic polynomial.
Eigenvalues4 eigenvalues_4x4(const Matrix4& m);

} // namespace siwr

#endif // SIWR_LINALG_H
