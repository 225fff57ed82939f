#include "onebit/ci_model.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace onebit {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

PskConstellation::PskConstellation(int order) : order_(order) {
    if (!is_power_of_two(order) || order < 4)
        throw ConfigInvalid("PSK order must be a power of two >= 4, got " + std::to_string(order));
    while ((1 << bits_) < order) ++bits_;

    angles_.resize(order);
    symbols_.resize(order);
    gray_inverse_.assign(order, 0);
    const double unit = std::numbers::pi / order;
    for (int i = 0; i < order; ++i) {
        // Odd multiple of pi/M, wrapped into (-pi, pi] by exact integer
        // arithmetic so conjugate pairs get exactly opposite angles.
        int mult = 2 * i + 1;
        if (mult > order) mult -= 2 * order;
        angles_[i] = mult * unit;
        symbols_[i] = std::polar(1.0, angles_[i]);
        gray_inverse_[gray_label(i)] = i;
    }
}

double PskConstellation::sector_half_angle() const { return std::numbers::pi / order_; }

CiSystem::CiSystem(RealMatrix a, PskConstellation constellation, int k_users, int n_antennas,
                   double scale)
    : a_(std::move(a)),
      constellation_(std::move(constellation)),
      k_users_(k_users),
      n_antennas_(n_antennas),
      scale_(scale) {
    if (a_.rows() != 2 * k_users_ || a_.cols() != 2 * n_antennas_)
        throw ConfigInvalid("CiSystem: matrix must be 2K x 2N_t");
    if (!a_.all_finite()) throw ConfigInvalid("CiSystem: matrix has non-finite entries");
    a_t_ = transpose(a_);
}

BoundaryPair boundary_pair(const PskConstellation& constellation, int symbol_index) {
    assert(symbol_index >= 0 && symbol_index < constellation.order());
    const cplx s = constellation.symbol(symbol_index);
    const cplx rot = std::polar(1.0, constellation.sector_half_angle());
    return {s * rot, s * std::conj(rot)};
}

RealMatrix build_vk(std::span<const cplx> h_row, const BoundaryPair& pair) {
    const int nt = static_cast<int>(h_row.size());
    const double denom =
        pair.ccw.real() * pair.cw.imag() - pair.ccw.imag() * pair.cw.real();  // -sin(2*pi/M)
    if (std::abs(denom) < 1e-9)
        throw DegenerateBoundary("build_vk: boundary vectors are numerically parallel");

    // Inverse of [[Re(ccw), Re(cw)], [Im(ccw), Im(cw)]] applied to
    // [Re(h^T x_T); Im(h^T x_T)] expressed on x = [Re(x_T); Im(x_T)].
    const double b00 = pair.cw.imag() / denom;
    const double b01 = -pair.cw.real() / denom;
    const double b10 = -pair.ccw.imag() / denom;
    const double b11 = pair.ccw.real() / denom;

    RealMatrix v(2, 2 * nt);
    for (int j = 0; j < nt; ++j) {
        const double re = h_row[j].real();
        const double im = h_row[j].imag();
        v(0, j) = b00 * re + b01 * im;
        v(0, nt + j) = -b00 * im + b01 * re;
        v(1, j) = b10 * re + b11 * im;
        v(1, nt + j) = -b10 * im + b11 * re;
    }
    return v;
}

CiSystem build_system(const ComplexMatrix& h, std::span<const int> symbol_indices,
                      const PskConstellation& constellation) {
    const int k = h.rows();
    const int nt = h.cols();
    if (k < 1 || nt < 1) throw ConfigInvalid("build_system: need K >= 1 and N_t >= 1");
    if (static_cast<int>(symbol_indices.size()) != k)
        throw ConfigInvalid("build_system: one symbol index per user required");
    for (int idx : symbol_indices)
        if (idx < 0 || idx >= constellation.order())
            throw ConfigInvalid("build_system: symbol index out of range");

    const double scale = 1.0 / std::sqrt(2.0 * nt);
    RealMatrix a(2 * k, 2 * nt);
    std::vector<cplx> scaled_row(nt);
    for (int u = 0; u < k; ++u) {
        for (int j = 0; j < nt; ++j) scaled_row[j] = scale * h(u, j);
        const RealMatrix v = build_vk(scaled_row, boundary_pair(constellation, symbol_indices[u]));
        for (int j = 0; j < 2 * nt; ++j) {
            a(2 * u, j) = -v(0, j);
            a(2 * u + 1, j) = -v(1, j);
        }
    }
    return CiSystem(std::move(a), constellation, k, nt, scale);
}

std::vector<double> alpha_vector(const CiSystem& system, std::span<const double> x) {
    assert(static_cast<int>(x.size()) == system.cols());
    return matvec(system.a(), x);
}

CiObjective ci_objective(const CiSystem& system, std::span<const double> x) {
    assert(static_cast<int>(x.size()) == system.cols());
    const RealMatrix& a = system.a();
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int l = 0; l < a.rows(); ++l) {
        double acc = 0.0;
        const auto row = a.row(l);
        for (int j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        if (acc > best) {
            best = acc;
            arg = l;
        }
    }
    return {best, arg};
}

double safety_margin(const CiSystem& system, std::span<const double> x) {
    return -ci_objective(system, x).value;
}

}  // namespace onebit
