#pragma once

#include <span>
#include <vector>

#include "onebit/numerics.hpp"

namespace onebit {

/// M-PSK constellation with symbols at angles (2i+1)*pi/M and a
/// binary-reflected Gray bit mapping. M must be a power of two, at least 4.
/// With this phase offset the QPSK decision boundaries are the I/Q axes.
class PskConstellation {
  public:
    explicit PskConstellation(int order);

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_; }
    double sector_half_angle() const;  // pi / M

    cplx symbol(int index) const { return symbols_[index]; }
    /// Symbol phase in (-pi, pi]; negated exactly for conjugate-symmetric pairs.
    double symbol_angle(int index) const { return angles_[index]; }

    unsigned gray_label(int index) const {
        return static_cast<unsigned>(index) ^ (static_cast<unsigned>(index) >> 1);
    }
    int index_from_gray(unsigned label) const { return gray_inverse_[label]; }

  private:
    int order_ = 0;
    int bits_ = 0;
    std::vector<double> angles_;
    std::vector<cplx> symbols_;
    std::vector<int> gray_inverse_;
};

/// Unit vectors along the two decision boundaries enclosing a symbol.
struct BoundaryPair {
    cplx ccw;  // boundary at +pi/M from the symbol
    cplx cw;   // boundary at -pi/M from the symbol
};

/// The real-expanded operator of the symbol-scaling model: an m x n matrix
/// with m = 2K and n = 2*N_t, mapping x = [Re(x_T); Im(x_T)] in {-1,1}^n to
/// the negated scaling coefficients of all users. The 1/sqrt(2*N_t) transmit
/// normalization is folded into the matrix at build time.
class CiSystem {
  public:
    CiSystem(RealMatrix a, PskConstellation constellation, int k_users, int n_antennas,
             double scale);

    const RealMatrix& a() const { return a_; }
    const RealMatrix& a_transpose() const { return a_t_; }
    int rows() const { return a_.rows(); }   // m = 2K
    int cols() const { return a_.cols(); }   // n = 2*N_t
    int k_users() const { return k_users_; }
    int n_antennas() const { return n_antennas_; }
    const PskConstellation& constellation() const { return constellation_; }
    double scale() const { return scale_; }

  private:
    RealMatrix a_;
    RealMatrix a_t_;
    PskConstellation constellation_;
    int k_users_ = 0;
    int n_antennas_ = 0;
    double scale_ = 0.0;
};

struct CiObjective {
    double value;  // max over rows of a_l . x
    int argmax;    // smallest row index attaining it
};

BoundaryPair boundary_pair(const PskConstellation& constellation, int symbol_index);

/// 2 x 2N_t map from x = [Re(x_T); Im(x_T)] to the boundary coefficients
/// (alpha_ccw, alpha_cw) of h^T x_T decomposed along the pair.
RealMatrix build_vk(std::span<const cplx> h_row, const BoundaryPair& pair);

/// Stacks the negated per-user maps for the scaled channel rows.
CiSystem build_system(const ComplexMatrix& h, std::span<const int> symbol_indices,
                      const PskConstellation& constellation);

/// The negated coefficient vector A x (length m).
std::vector<double> alpha_vector(const CiSystem& system, std::span<const double> x);

CiObjective ci_objective(const CiSystem& system, std::span<const double> x);

/// Minimum boundary coefficient over all users; positive means every
/// noise-free received signal lies strictly inside its decision sector.
double safety_margin(const CiSystem& system, std::span<const double> x);

}  // namespace onebit
