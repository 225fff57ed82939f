#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "onebit/errors.hpp"

namespace onebit {

using cplx = std::complex<double>;

/// Dense row-major real matrix.
class RealMatrix {
  public:
    RealMatrix() = default;
    RealMatrix(int rows, int cols, double fill = 0.0);
    static RealMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<const double> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<double> row(int r) {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<double>& data() const { return data_; }
    bool all_finite() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols, cplx fill = {});

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    cplx operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<const cplx> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<cplx>& data() const { return data_; }
    bool all_finite() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> data_;
};

/// Deterministic random stream; one owner per stream, never shared across tasks.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double gaussian() { return normal_(gen_); }
    double uniform01() { return uniform_(gen_); }
    /// Uniform on [-1, 1).
    double uniform_symmetric() { return 2.0 * uniform_(gen_) - 1.0; }
    /// Uniform integer on [lo, hi], inclusive.
    int uniform_int(int lo, int hi);
    std::uint64_t next_u64() { return gen_(); }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Derives a child seed from a base seed and a tag sequence (splitmix64 chain).
/// Distinct tag sequences give statistically independent streams.
std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words);

/// K x N matrix with i.i.d. CN(0, 1) entries (variance 1/2 per real component).
ComplexMatrix gaussian_complex_matrix(SeededRng& rng, int rows, int cols);

RealMatrix transpose(const RealMatrix& a);
ComplexMatrix hermitian(const ComplexMatrix& a);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

std::vector<double> matvec(const RealMatrix& a, std::span<const double> x);
std::vector<cplx> matvec(const ComplexMatrix& a, std::span<const cplx> x);

double mean_abs(const RealMatrix& a);

/// Solves a X = b by Gaussian elimination with partial pivoting.
/// Throws SingularMatrix when a pivot falls below 1e-12 times the largest
/// initial entry magnitude.
ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest singular value, estimated by power iteration on a^T a.
/// Always a lower bound on the true value; the zero matrix returns 0.
double spectral_norm(const RealMatrix& a, int iters = 50);

}  // namespace onebit
