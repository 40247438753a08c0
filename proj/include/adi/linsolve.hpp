#pragma once

#include "adi/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace adi {

enum class BandKind { Tri, Penta, CyclicTri, CyclicPenta };

constexpr bool is_cyclic(BandKind k) noexcept
{
    return k == BandKind::CyclicTri || k == BandKind::CyclicPenta;
}

constexpr std::size_t half_bandwidth(BandKind k) noexcept
{
    return (k == BandKind::Tri || k == BandKind::CyclicTri) ? 1 : 2;
}

/// Row-wise band storage for one grid line.
///
/// Row i holds 2p+1 coefficients for columns i-p .. i+p, where p is the
/// half bandwidth. Cyclic kinds wrap columns modulo n; for open kinds,
/// coefficients that would fall outside the matrix must be zero.
class BandedLineMatrix {
public:
    BandedLineMatrix(BandKind kind, std::size_t n);

    /// Every row gets the same `stencil` (length 2p+1, lowest offset first).
    /// Open kinds drop the entries that fall off either end.
    static BandedLineMatrix toeplitz(BandKind kind, std::size_t n, std::span<const double> stencil);

    BandKind kind() const noexcept { return kind_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t p() const noexcept { return p_; }

    /// Coefficient of row i at column offset `offset` in [-p, p].
    double& at(std::size_t i, std::ptrdiff_t offset) noexcept
    {
        return coeffs_[i * width() + static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(p_))];
    }
    double at(std::size_t i, std::ptrdiff_t offset) const noexcept
    {
        return coeffs_[i * width() + static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(p_))];
    }

    /// Replaces row i by the corresponding identity row.
    void set_identity_row(std::size_t i) noexcept;

    /// Dense column index of (row, offset), wrapping for cyclic kinds;
    /// returns n for open-kind entries outside the matrix.
    std::size_t column(std::size_t row, std::ptrdiff_t offset) const noexcept;

    /// out = M x over a strided line. `x` and `out` must not alias.
    void multiply(const double* x, std::ptrdiff_t x_stride, double* out,
                  std::ptrdiff_t out_stride) const noexcept;
    std::vector<double> multiply(std::span<const double> x) const;

    /// Multi-line product over position-major data: element (position k,
    /// line l) lives at [k * lines + l]. Computes out = alpha M x, or
    /// out += alpha M x when `accumulate` is set.
    void multiply_lines(const double* x, double* out, std::size_t lines, double alpha,
                        bool accumulate) const noexcept;

    double max_abs() const noexcept;

    std::size_t width() const noexcept { return 2 * p_ + 1; }

private:
    BandKind kind_;
    std::size_t n_;
    std::size_t p_;
    std::vector<double> coeffs_;
};

/// Unpivoted banded LU of a line matrix, plus a rank-p low-rank
/// correction (Sherman-Morrison / Woodbury) for the cyclic kinds.
/// Immutable once built; safe to share across threads.
class LineFactorization {
public:
    BandKind kind() const noexcept { return kind_; }
    std::size_t n() const noexcept { return n_; }

    /// Solves M x = rhs in place on a strided line.
    void solve_inplace(double* x, std::ptrdiff_t stride) const noexcept;

    /// Solves `lines` independent systems at once over position-major data
    /// (element (k, l) at [k * lines + l]).
    void solve_lines(double* data, std::size_t lines) const;

private:
    friend LineFactorization factorize(const BandedLineMatrix& m);

    LineFactorization() = default;
    void band_solve(double* x, std::ptrdiff_t stride) const noexcept;

    BandKind kind_ = BandKind::Tri;
    std::size_t n_ = 0;
    std::size_t p_ = 1;
    std::vector<double> lu_;
    // Cyclic correction: Z = A'^{-1} U (p columns of length n), bottom block
    // W of V (p x p, V's top block is the identity), and (I + V^T Z)^{-1}.
    std::vector<double> z_;
    std::vector<double> w_;
    std::vector<double> capacitance_inv_;
};

/// Throws SingularMatrixError when a pivot falls below 1e-14 times the
/// largest band magnitude.
LineFactorization factorize(const BandedLineMatrix& m);

std::vector<double> solve_line(const LineFactorization& f, std::span<const double> rhs);

/// Solves every grid line along `axis` with the shared factorization.
ScalarField solve_batch(const LineFactorization& f, const ScalarField& field, Axis axis);

/// Copies `src` (rows x cols, row-major) into `dst` as cols x rows.
void transpose(const double* src, double* dst, std::size_t rows, std::size_t cols) noexcept;

/// In-place variant of solve_batch.
void solve_batch_inplace(const LineFactorization& f, ScalarField& field, Axis axis);

} // namespace adi
