#include "adi/linsolve.hpp"

#include "adi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adi {

namespace {

constexpr double pivot_tolerance = 1e-14;

void check_size(BandKind kind, std::size_t n)
{
    if (n < 2 * half_bandwidth(kind) + 1 || n < 5) {
        std::ostringstream msg;
        msg << "line matrix needs n >= 5, got " << n;
        throw ShapeError(msg.str());
    }
}

// Inverts a p x p matrix (p <= 2) stored row-major.
std::vector<double> invert_small(const std::vector<double>& m, std::size_t p, double scale)
{
    if (p == 1) {
        if (std::abs(m[0]) < pivot_tolerance * scale) {
            throw SingularMatrixError("cyclic correction is singular", 0);
        }
        return {1.0 / m[0]};
    }
    const double det = m[0] * m[3] - m[1] * m[2];
    if (std::abs(det) < pivot_tolerance * scale * scale) {
        throw SingularMatrixError("cyclic correction is singular", 0);
    }
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

} // namespace

BandedLineMatrix::BandedLineMatrix(BandKind kind, std::size_t n)
    : kind_(kind), n_(n), p_(half_bandwidth(kind))
{
    check_size(kind, n);
    coeffs_.assign(n_ * width(), 0.0);
}

BandedLineMatrix BandedLineMatrix::toeplitz(BandKind kind, std::size_t n, std::span<const double> stencil)
{
    BandedLineMatrix m(kind, n);
    if (stencil.size() != m.width()) {
        throw ShapeError("stencil length does not match band width");
    }
    const auto p = static_cast<std::ptrdiff_t>(m.p_);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t k = -p; k <= p; ++k) {
            if (m.column(i, k) < n) m.at(i, k) = stencil[static_cast<std::size_t>(k + p)];
        }
    }
    return m;
}

void BandedLineMatrix::set_identity_row(std::size_t i) noexcept
{
    std::fill_n(coeffs_.begin() + static_cast<std::ptrdiff_t>(i * width()), width(), 0.0);
    at(i, 0) = 1.0;
}

std::size_t BandedLineMatrix::column(std::size_t row, std::ptrdiff_t offset) const noexcept
{
    const auto c = static_cast<std::ptrdiff_t>(row) + offset;
    const auto n = static_cast<std::ptrdiff_t>(n_);
    if (is_cyclic(kind_)) return static_cast<std::size_t>(((c % n) + n) % n);
    return (c < 0 || c >= n) ? n_ : static_cast<std::size_t>(c);
}

void BandedLineMatrix::multiply(const double* x, std::ptrdiff_t xs, double* out,
                                std::ptrdiff_t os) const noexcept
{
    const auto p = static_cast<std::ptrdiff_t>(p_);
    const auto n = static_cast<std::ptrdiff_t>(n_);
    const bool cyclic = is_cyclic(kind_);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* row = coeffs_.data() + i * static_cast<std::ptrdiff_t>(width()) + p;
        double acc = 0.0;
        if (i >= p && i < n - p) {
            for (std::ptrdiff_t k = -p; k <= p; ++k) acc += row[k] * x[(i + k) * xs];
        } else {
            for (std::ptrdiff_t k = -p; k <= p; ++k) {
                std::ptrdiff_t c = i + k;
                if (cyclic) {
                    c = (c + n) % n;
                } else if (c < 0 || c >= n) {
                    continue;
                }
                acc += row[k] * x[c * xs];
            }
        }
        out[i * os] = acc;
    }
}

std::vector<double> BandedLineMatrix::multiply(std::span<const double> x) const
{
    if (x.size() != n_) throw ShapeError("matrix-vector product: length mismatch");
    std::vector<double> out(n_);
    multiply(x.data(), 1, out.data(), 1);
    return out;
}

void BandedLineMatrix::multiply_lines(const double* x, double* out, std::size_t lines, double alpha,
                                      bool accumulate) const noexcept
{
    const auto p = static_cast<std::ptrdiff_t>(p_);
    const bool cyclic = is_cyclic(kind_);
    for (std::size_t i = 0; i < n_; ++i) {
        double* o = out + i * lines;
        if (!accumulate) std::fill_n(o, lines, 0.0);
        for (std::ptrdiff_t k = -p; k <= p; ++k) {
            const double c = alpha * at(i, k);
            if (c == 0.0) continue;
            const std::size_t col = column(i, k);
            if (!cyclic && col >= n_) continue;
            const double* xr = x + col * lines;
            for (std::size_t l = 0; l < lines; ++l) o[l] += c * xr[l];
        }
    }
}

double BandedLineMatrix::max_abs() const noexcept
{
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

LineFactorization factorize(const BandedLineMatrix& m)
{
    const std::size_t n = m.n();
    const std::size_t p = m.p();
    const std::size_t w = m.width();
    const auto ip = static_cast<std::ptrdiff_t>(p);

    LineFactorization f;
    f.kind_ = m.kind();
    f.n_ = n;
    f.p_ = p;
    f.lu_.assign(n * w, 0.0);
    auto lu = [&](std::size_t i, std::size_t j) -> double& { return f.lu_[i * w + (j + p - i)]; };

    // Open band part.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t k = -ip; k <= ip; ++k) {
            const auto c = static_cast<std::ptrdiff_t>(i) + k;
            const double a = m.at(i, k);
            if (c >= 0 && c < static_cast<std::ptrdiff_t>(n)) {
                lu(i, static_cast<std::size_t>(c)) = a;
            } else if (!is_cyclic(m.kind()) && a != 0.0) {
                std::ostringstream msg;
                msg << "row " << i << " has a coefficient outside the open band";
                throw ShapeError(msg.str());
            }
        }
    }

    const double scale = std::max(m.max_abs(), 1e-300);

    // Corner blocks: T (top-right, rows 0..p-1, cols n-p..n-1) and L
    // (bottom-left, rows n-p..n-1, cols 0..p-1), both p x p row-major.
    std::vector<double> top(p * p, 0.0), bottom(p * p, 0.0), g(p, 0.0);
    if (is_cyclic(m.kind())) {
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) {
                if (c >= r) top[r * p + c] = m.at(r, static_cast<std::ptrdiff_t>(c) - ip - static_cast<std::ptrdiff_t>(r));
                if (c <= r) bottom[r * p + c] = m.at(n - p + r, static_cast<std::ptrdiff_t>(c) + ip - static_cast<std::ptrdiff_t>(r));
            }
        }
        // G = -diag(A_rr); A' = A_band - U V^T with U = [G; 0; L], V = [I; 0; W],
        // W^T = G^{-1} T.
        for (std::size_t r = 0; r < p; ++r) {
            const double d = m.at(r, 0);
            g[r] = d != 0.0 ? -d : -scale;
            lu(r, r) -= g[r];
        }
        f.w_.assign(p * p, 0.0);
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) f.w_[r * p + c] = top[c * p + r] / g[c];
        }
        // bottom-right block -= L W^T
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) {
                double s = 0.0;
                for (std::size_t k = 0; k < p; ++k) s += bottom[r * p + k] * f.w_[c * p + k];
                lu(n - p + r, n - p + c) -= s;
            }
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        const double pivot = lu(k, k);
        if (!(std::abs(pivot) >= pivot_tolerance * scale)) {
            std::ostringstream msg;
            msg << "singular line matrix: pivot " << pivot << " at row " << k;
            throw SingularMatrixError(msg.str(), k);
        }
        const std::size_t last = std::min(k + p, n - 1);
        for (std::size_t i = k + 1; i <= last; ++i) {
            const double l = lu(i, k) / pivot;
            lu(i, k) = l;
            for (std::size_t j = k + 1; j <= last; ++j) lu(i, j) -= l * lu(k, j);
        }
    }

    if (is_cyclic(m.kind())) {
        f.z_.assign(p * n, 0.0);
        for (std::size_t c = 0; c < p; ++c) {
            double* z = f.z_.data() + c * n;
            z[c] = g[c];
            for (std::size_t r = 0; r < p; ++r) z[n - p + r] = bottom[r * p + c];
            f.band_solve(z, 1);
        }
        std::vector<double> cap(p * p, 0.0);
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < p; ++b) {
                const double* z = f.z_.data() + b * n;
                double s = (a == b ? 1.0 : 0.0) + z[a];
                for (std::size_t r = 0; r < p; ++r) s += f.w_[r * p + a] * z[n - p + r];
                cap[a * p + b] = s;
            }
        }
        f.capacitance_inv_ = invert_small(cap, p, 1.0);
    }
    return f;
}

void LineFactorization::band_solve(double* x, std::ptrdiff_t s) const noexcept
{
    const auto n = static_cast<std::ptrdiff_t>(n_);
    const auto p = static_cast<std::ptrdiff_t>(p_);
    const auto w = 2 * p + 1;
    const double* a = lu_.data();
    // Row i, column j lives at a[i * w + (j - i + p)].
    for (std::ptrdiff_t i = 1; i < n; ++i) {
        double acc = x[i * s];
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - p); j < i; ++j) {
            acc -= a[i * w + (j - i + p)] * x[j * s];
        }
        x[i * s] = acc;
    }
    for (std::ptrdiff_t i = n - 1; i >= 0; --i) {
        double acc = x[i * s];
        const std::ptrdiff_t last = std::min(i + p, n - 1);
        for (std::ptrdiff_t j = i + 1; j <= last; ++j) acc -= a[i * w + (j - i + p)] * x[j * s];
        x[i * s] = acc / a[i * w + p];
    }
}

void LineFactorization::solve_inplace(double* x, std::ptrdiff_t s) const noexcept
{
    band_solve(x, s);
    if (!is_cyclic(kind_)) return;

    const std::size_t n = n_;
    const std::size_t p = p_;
    double q[2] = {0.0, 0.0};
    for (std::size_t a = 0; a < p; ++a) {
        double v = x[static_cast<std::ptrdiff_t>(a) * s];
        for (std::size_t r = 0; r < p; ++r) {
            v += w_[r * p + a] * x[static_cast<std::ptrdiff_t>(n - p + r) * s];
        }
        q[a] = v;
    }
    double coef[2] = {0.0, 0.0};
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) coef[a] += capacitance_inv_[a * p + b] * q[b];
    }
    for (std::size_t b = 0; b < p; ++b) {
        const double* z = z_.data() + b * n;
        for (std::size_t i = 0; i < n; ++i) x[static_cast<std::ptrdiff_t>(i) * s] -= coef[b] * z[i];
    }
}

void LineFactorization::solve_lines(double* data, std::size_t lines) const
{
    const std::size_t n = n_;
    const std::size_t p = p_;
    const std::size_t w = 2 * p + 1;
    const double* a = lu_.data();
    auto row = [&](std::size_t k) { return data + k * lines; };

    for (std::size_t i = 1; i < n; ++i) {
        double* ri = row(i);
        for (std::size_t j = i > p ? i - p : 0; j < i; ++j) {
            const double l = a[i * w + (j + p - i)];
            const double* rj = row(j);
            for (std::size_t c = 0; c < lines; ++c) ri[c] -= l * rj[c];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double* ri = row(i);
        const std::size_t last = std::min(i + p, n - 1);
        for (std::size_t j = i + 1; j <= last; ++j) {
            const double u = a[i * w + (j + p - i)];
            const double* rj = row(j);
            for (std::size_t c = 0; c < lines; ++c) ri[c] -= u * rj[c];
        }
        const double inv = 1.0 / a[i * w + p];
        for (std::size_t c = 0; c < lines; ++c) ri[c] *= inv;
    }
    if (!is_cyclic(kind_)) return;

    // q = V^T y per line, then coef = (I + V^T Z)^{-1} q and x = y - Z coef.
    std::vector<double> q(p * lines), coef(p * lines, 0.0);
    for (std::size_t a_idx = 0; a_idx < p; ++a_idx) {
        double* qa = q.data() + a_idx * lines;
        std::copy_n(row(a_idx), lines, qa);
        for (std::size_t r = 0; r < p; ++r) {
            const double wv = w_[r * p + a_idx];
            const double* rr = row(n - p + r);
            for (std::size_t c = 0; c < lines; ++c) qa[c] += wv * rr[c];
        }
    }
    for (std::size_t a_idx = 0; a_idx < p; ++a_idx) {
        double* ca = coef.data() + a_idx * lines;
        for (std::size_t b = 0; b < p; ++b) {
            const double m = capacitance_inv_[a_idx * p + b];
            const double* qb = q.data() + b * lines;
            for (std::size_t c = 0; c < lines; ++c) ca[c] += m * qb[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double* ri = row(i);
        for (std::size_t b = 0; b < p; ++b) {
            const double z = z_[b * n + i];
            const double* cb = coef.data() + b * lines;
            for (std::size_t c = 0; c < lines; ++c) ri[c] -= z * cb[c];
        }
    }
}

void transpose(const double* src, double* dst, std::size_t rows, std::size_t cols) noexcept
{
    constexpr std::size_t tile = 32;
    for (std::size_t r0 = 0; r0 < rows; r0 += tile) {
        for (std::size_t c0 = 0; c0 < cols; c0 += tile) {
            const std::size_t r1 = std::min(rows, r0 + tile);
            const std::size_t c1 = std::min(cols, c0 + tile);
            for (std::size_t r = r0; r < r1; ++r) {
                for (std::size_t c = c0; c < c1; ++c) dst[c * rows + r] = src[r * cols + c];
            }
        }
    }
}

std::vector<double> solve_line(const LineFactorization& f, std::span<const double> rhs)
{
    if (rhs.size() != f.n()) {
        std::ostringstream msg;
        msg << "solve_line: rhs length " << rhs.size() << " does not match matrix size " << f.n();
        throw ShapeError(msg.str());
    }
    std::vector<double> x(rhs.begin(), rhs.end());
    f.solve_inplace(x.data(), 1);
    return x;
}

void solve_batch_inplace(const LineFactorization& f, ScalarField& field, Axis axis)
{
    const Grid& g = field.grid();
    if (g.n(axis) != f.n()) {
        std::ostringstream msg;
        msg << "solve_batch: line length " << g.n(axis) << " does not match matrix size " << f.n();
        throw ShapeError(msg.str());
    }
    double* data = field.values().data();
    if (axis == Axis::Y) {
        // Natural layout is already position-major (rows j, lines i).
        f.solve_lines(data, g.n_x());
        return;
    }
    std::vector<double> t(g.size());
    transpose(data, t.data(), g.n_y(), g.n_x());
    f.solve_lines(t.data(), g.n_y());
    transpose(t.data(), data, g.n_x(), g.n_y());
}

ScalarField solve_batch(const LineFactorization& f, const ScalarField& field, Axis axis)
{
    ScalarField out = field;
    solve_batch_inplace(f, out, axis);
    return out;
}

} // namespace adi
