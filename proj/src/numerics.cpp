#include "onebit/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <utility>

namespace onebit {

RealMatrix::RealMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    assert(rows >= 0 && cols >= 0);
}

RealMatrix RealMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    RealMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        assert(static_cast<int>(row.size()) == c);
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

bool RealMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ComplexMatrix::ComplexMatrix(int rows, int cols, cplx fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    assert(rows >= 0 && cols >= 0);
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

int SeededRng::uniform_int(int lo, int hi) {
    assert(lo <= hi);
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(gen_);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
    return h;
}

ComplexMatrix gaussian_complex_matrix(SeededRng& rng, int rows, int cols) {
    assert(rows >= 1 && cols >= 1);
    ComplexMatrix m(rows, cols);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cplx(s * rng.gaussian(), s * rng.gaussian());
    return m;
}

RealMatrix transpose(const RealMatrix& a) {
    RealMatrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

ComplexMatrix hermitian(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    assert(a.cols() == b.rows());
    ComplexMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> matvec(const RealMatrix& a, std::span<const double> x) {
    assert(static_cast<int>(x.size()) == a.cols());
    std::vector<double> y(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        const auto row = a.row(i);
        for (int j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x) {
    assert(static_cast<int>(x.size()) == a.cols());
    std::vector<cplx> y(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        cplx acc{};
        const auto row = a.row(i);
        for (int j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double mean_abs(const RealMatrix& a) {
    if (a.data().empty()) return 0.0;
    double acc = 0.0;
    for (double v : a.data()) acc += std::abs(v);
    return acc / static_cast<double>(a.data().size());
}

ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.rows();
    assert(a.cols() == n && b.rows() == n);

    ComplexMatrix lu = a;
    ComplexMatrix x = b;

    double scale = 0.0;
    for (cplx v : lu.data()) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw SingularMatrix("solve_linear: zero matrix");
    const double tol = 1e-12 * scale;

    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(lu(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(lu(r, col));
            if (mag > best) {
                best = mag;
                p = r;
            }
        }
        if (best < tol) throw SingularMatrix("solve_linear: pivot below tolerance");
        if (p != col) {
            for (int j = 0; j < n; ++j) std::swap(lu(p, j), lu(col, j));
            for (int j = 0; j < x.cols(); ++j) std::swap(x(p, j), x(col, j));
        }
        const cplx pivot = lu(col, col);
        for (int r = col + 1; r < n; ++r) {
            const cplx f = lu(r, col) / pivot;
            if (f == cplx{}) continue;
            for (int j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
            for (int j = 0; j < x.cols(); ++j) x(r, j) -= f * x(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        const cplx pivot = lu(col, col);
        for (int j = 0; j < x.cols(); ++j) {
            cplx acc = x(col, j);
            for (int k = col + 1; k < n; ++k) acc -= lu(col, k) * x(k, j);
            x(col, j) = acc / pivot;
        }
    }
    return x;
}

double spectral_norm(const RealMatrix& a, int iters) {
    assert(iters >= 1);
    const int n = a.cols();
    if (n == 0 || a.rows() == 0) return 0.0;

    // Fixed-seed start vector keeps the estimate deterministic.
    SeededRng rng(0x5eedf00d2bad1dEAULL);
    std::vector<double> v(n);
    for (double& vi : v) vi = rng.gaussian();
    double norm = 0.0;
    for (double vi : v) norm += vi * vi;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        v.assign(n, 0.0);
        v[0] = 1.0;
        norm = 1.0;
    }
    for (double& vi : v) vi /= norm;

    std::vector<double> w(a.rows());
    for (int it = 0; it < iters; ++it) {
        // w = A v, then v = A^T w, renormalized.
        for (int i = 0; i < a.rows(); ++i) {
            double acc = 0.0;
            const auto row = a.row(i);
            for (int j = 0; j < n; ++j) acc += row[j] * v[j];
            w[i] = acc;
        }
        std::vector<double> u(n, 0.0);
        for (int i = 0; i < a.rows(); ++i) {
            const auto row = a.row(i);
            const double wi = w[i];
            for (int j = 0; j < n; ++j) u[j] += row[j] * wi;
        }
        double nu = 0.0;
        for (double uj : u) nu += uj * uj;
        nu = std::sqrt(nu);
        if (nu == 0.0) return 0.0;
        for (int j = 0; j < n; ++j) v[j] = u[j] / nu;
    }

    double out = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        const auto row = a.row(i);
        for (int j = 0; j < n; ++j) acc += row[j] * v[j];
        out += acc * acc;
    }
    return std::sqrt(out);
}

}  // namespace onebit
