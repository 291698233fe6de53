#include "siwr/linalg.h"
#include "siwr/errors.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace siwr
{

Matrix4 Matrix4::identity()
{
    return diagonal(1.0, 1.0, 1.0, 1.0);
}

Matrix4 Matrix4::diagonal(double a, double b, double c, double d)
{
    Matrix4 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

Matrix4 Matrix4::operator*(const Matrix4& rhs) const
{
    Matrix4 out;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            double acc = 0.0;
            for (std::size_t j = 0; j < 4; ++j) {
                acc += (*this)(r, j) * rhs(j, c);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

double Matrix4::trace() const
{
    return entries[0] + entries[5] + entries[10] + entries[15];
}

bool Matrix4::all_finite() const
{
    return std::all_of(entries.begin(), entries.end(), [](double v) {
        return std::isfinite(v);
    });
}

std::array<double, 4> characteristic_polynomial(const Matrix4& m)
{
    // M_1 = I, c_{n-1} = -tr(A); M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
    std::array<double, 4> c{};
    Matrix4 mk    = Matrix4::identity();
    double c_prev = 1.0;
    for (int k = 1; k <= 4; ++k) {
        if (k > 1) {
            mk = m * mk;
            for (std::size_t d = 0; d < 4; ++d) {
                mk(d, d) += c_prev;
            }
        }
        const double ck = -(m * mk).trace() / k;
        c[4 - k]        = ck;
        c_prev          = ck;
    }
    return c;
}

namespace
{

using cd = std::complex<double>;

// Monic polynomial z^n + c[n-1] z^(n-1) + ... + c[0].
cd eval_monic(const std::vector<double>& c, cd z)
{
    cd acc = 1.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

double eval_scale(const std::vector<double>& c, double az)
{
    double acc = 1.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * az + std::abs(*it);
    }
    return acc;
}

std::vector<cd> durand_kerner(const std::vector<double>& c)
{
    const std::size_t n = c.size();
    if (n == 0) {
        return {};
    }

    // Fujiwara bound on the root moduli sets the radius of the starting circle.
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = std::abs(c[k]) / (k == 0 ? 2.0 : 1.0);
        radius         = std::max(radius, std::pow(a, 1.0 / static_cast<double>(n - k)));
    }
    radius = radius > 0.0 ? 2.0 * radius : 1.0;

    std::vector<cd> z(n);
    const cd seed(0.4, 0.9);
    cd pw = 1.0;
    for (auto& zi : z) {
        pw *= seed;
        zi = radius * pw / std::abs(pw);
    }

    constexpr int max_iterations = 500;
    int settled                  = 0;
    for (int it = 0; it < max_iterations; ++it) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cd denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    denom *= z[i] - z[j];
                }
            }
            if (denom == cd{}) {
                denom = cd(1e-300, 0.0);
            }
            const cd delta = eval_monic(c, z[i]) / denom;
            z[i] -= delta;
            max_step = std::max(max_step, std::abs(delta) / (1.0 + std::abs(z[i])));
        }

        const bool residual_ok = std::all_of(z.begin(), z.end(), [&c](const cd& zi) {
            return std::abs(eval_monic(c, zi)) < 1e-12 * eval_scale(c, std::abs(zi));
        });
        if (residual_ok) {
            // Clustered roots converge only linearly: keep sweeping after the
            // residual test passes and stop once the updates stall.
            if (max_step < 1e-15 || ++settled > 50) {
                return z;
            }
        }
    }
    throw NonConvergence("Durand-Kerner iteration did not converge in 500 sweeps");
}

} // namespace

Eigenvalues4 quartic_roots(const std::array<double, 4>& coeffs)
{
    for (double v : coeffs) {
        if (!std::isfinite(v)) {
            throw DomainError("characteristic polynomial has non-finite coefficients");
        }
    }

    // Exact zero roots are deflated; the relative residual test cannot certify them.
    std::size_t zeros = 0;
    while (zeros < 4 && coeffs[zeros] == 0.0) {
        ++zeros;
    }
    std::vector<double> reduced(coeffs.begin() + static_cast<std::ptrdiff_t>(zeros), coeffs.end());
    std::vector<cd> found = durand_kerner(reduced);
    found.resize(4, cd{});

    Eigenvalues4 z;
    std::copy(found.begin(), found.end(), z.begin());
    for (auto& zi : z) {
        if (std::abs(zi.imag()) <= 1e-14 * (1.0 + std::abs(zi.real()))) {
            zi = cd(zi.real(), 0.0);
        }
    }
    // A real polynomial has conjugate pairs; symmetrize them so each pair shares one real part.
    std::array<bool, 4> paired{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (paired[i] || z[i].imag() <= 0.0) {
            continue;
        }
        std::size_t best = 4;
        for (std::size_t j = 0; j < 4; ++j) {
            if (!paired[j] && z[j].imag() < 0.0 &&
                (best == 4 || std::abs(z[j] - std::conj(z[i])) < std::abs(z[best] - std::conj(z[i])))) {
                best = j;
            }
        }
        if (best == 4) {
            continue;
        }
        const double re = 0.5 * (z[i].real() + z[best].real());
        const double im = 0.5 * (z[i].imag() - z[best].imag());
        z[i]            = cd(re, im);
        z[best]         = cd(re, -im);
        paired[i] = paired[best] = true;
    }
    std::sort(z.begin(), z.end(), [](const cd& a, const cd& b) {
        if (a.real() != b.real()) {
            return a.real() > b.real();
        }
        return a.imag() > b.imag();
    });
    return z;
}

Eigenvalues4 eigenvalues_4x4(const Matrix4& m)
{
    if (!m.all_finite()) {
        throw DomainError("matrix has non-finite entries");
    }
    return quartic_roots(characteristic_polynomial(m));
}

} // namespace siwr
