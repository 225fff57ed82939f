#include "onebit/penalty_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace onebit {

namespace {

inline double sign_pm1(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Scratch-buffer core of the two updates; the public wrappers and the inner
// loop share these so there is a single implementation of each formula.

void x_step(const CiSystem& sys, std::span<const double> x_old, std::span<const double> y,
            double lambda, double tau, std::span<double> x_out) {
    const RealMatrix& at = sys.a_transpose();  // row i = column i of A
    const int n = sys.cols();
    const int m = sys.rows();
    const double push = lambda / tau;
    for (int i = 0; i < n; ++i) {
        const auto col = at.row(i);
        double g = 0.0;
        for (int l = 0; l < m; ++l) g += col[l] * y[l];
        const double a_i = x_old[i] - g / tau;
        x_out[i] = sign_pm1(a_i) * std::min(std::abs(a_i) + push, 1.0);
    }
}

void project_simplex_inplace(std::span<double> v, std::vector<double>& scratch) {
    const int m = static_cast<int>(v.size());
    scratch.assign(v.begin(), v.end());
    std::sort(scratch.begin(), scratch.end(), std::greater<double>());
    double cum = 0.0;
    double theta = 0.0;
    for (int j = 0; j < m; ++j) {
        cum += scratch[j];
        const double t = (cum - 1.0) / (j + 1);
        // The largest prefix whose entries stay above the running threshold
        // is the active support; j = 0 always qualifies.
        if (scratch[j] - t > 0.0) theta = t;
    }
    for (int j = 0; j < m; ++j) v[j] = std::max(v[j] - theta, 0.0);
}

void y_step(const CiSystem& sys, std::span<const double> y_old, std::span<const double> x_new,
            double rho, double c, std::span<double> y_out, std::vector<double>& scratch) {
    const RealMatrix& a = sys.a();
    const int m = sys.rows();
    const int n = sys.cols();
    for (int l = 0; l < m; ++l) {
        const auto row = a.row(l);
        double ax = 0.0;
        for (int j = 0; j < n; ++j) ax += row[j] * x_new[j];
        y_out[l] = y_old[l] + rho * ax - rho * c * y_old[l];
    }
    project_simplex_inplace(y_out, scratch);
}

}  // namespace

double SolverSchedule::c_at(int k) const {
    assert(k >= 1);
    return c0_coeff / std::pow(static_cast<double>(k), c_exponent);
}

double SolverSchedule::tau_at(int k) const {
    assert(k >= 1);
    return tau_coeff * std::pow(static_cast<double>(k), tau_exponent);
}

SolverSchedule practical_schedule(const CiSystem& system) {
    const double norm = spectral_norm(system.a());
    if (norm <= 0.0) throw ConfigInvalid("practical_schedule: system matrix is zero");
    SolverSchedule s;
    s.rho = 0.2 / norm;
    s.c0_coeff = 0.01 / s.rho;
    s.c_exponent = 0.05;
    s.tau_coeff = (2.0 * std::log2(static_cast<double>(system.n_antennas())) + 1.0) / 10.0 *
                  mean_abs(system.a());
    s.tau_exponent = 0.1;
    s.max_iters = 500;
    s.tol = 1e-3;
    return s;
}

HomotopyConfig HomotopyConfig::defaults(int psk_order) {
    HomotopyConfig c;
    c.lambda0 = 0.001 * psk_order / 8.0;
    c.delta = 5.0;
    c.max_rounds = 20;
    c.onebit_tol = 1e-6;
    return c;
}

SolverState initial_state(const CiSystem& system) {
    SolverState st;
    st.x.assign(system.cols(), 0.0);
    st.y.assign(system.rows(), 1.0 / system.rows());
    st.iter = 0;
    st.last_step_norm = std::numeric_limits<double>::infinity();
    return st;
}

double penalty_objective(const CiSystem& system, std::span<const double> x, double lambda) {
    double l1 = 0.0;
    for (double v : x) l1 += std::abs(v);
    return ci_objective(system, x).value - lambda * l1;
}

double exactness_threshold(const CiSystem& system) {
    double best = 0.0;
    for (double v : system.a().data()) best = std::max(best, std::abs(v));
    return best;
}

std::vector<double> project_simplex(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    std::vector<double> scratch;
    project_simplex_inplace(out, scratch);
    return out;
}

std::vector<double> x_update(const CiSystem& system, const SolverState& state, double lambda,
                             double tau) {
    assert(tau > 0.0);
    std::vector<double> out(system.cols());
    x_step(system, state.x, state.y, lambda, tau, out);
    return out;
}

std::vector<double> y_update(const CiSystem& system, const SolverState& state,
                             std::span<const double> x_new, double rho, double c) {
    assert(rho > 0.0 && c >= 0.0);
    std::vector<double> out(system.rows());
    std::vector<double> scratch;
    y_step(system, state.y, x_new, rho, c, out, scratch);
    return out;
}

SolverState solve_inner(const CiSystem& system, double lambda, std::span<const double> x0,
                        std::span<const double> y0, const SolverSchedule& schedule) {
    const int n = system.cols();
    const int m = system.rows();
    assert(static_cast<int>(x0.size()) == n && static_cast<int>(y0.size()) == m);

    SolverState st;
    st.x.assign(x0.begin(), x0.end());
    st.y.assign(y0.begin(), y0.end());
    st.iter = 0;
    st.last_step_norm = std::numeric_limits<double>::infinity();

    std::vector<double> x_new(n);
    std::vector<double> y_new(m);
    std::vector<double> scratch;
    for (int k = 1; k <= schedule.max_iters; ++k) {
        const double tau = schedule.tau_at(k);
        const double c = schedule.c_at(k);
        x_step(system, st.x, st.y, lambda, tau, x_new);
        y_step(system, st.y, x_new, schedule.rho, c, y_new, scratch);

        double step_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = x_new[i] - st.x[i];
            step_sq += d * d;
        }
        st.x.swap(x_new);
        st.y.swap(y_new);
        st.iter = k;
        st.last_step_norm = std::sqrt(step_sq);
        if (st.last_step_norm < schedule.tol) break;
    }
    return st;
}

Nl1pResult solve_nl1p(const CiSystem& system, const HomotopyConfig& config,
                      const SolverSchedule& schedule) {
    if (config.lambda0 <= 0.0) throw ConfigInvalid("solve_nl1p: lambda0 must be positive");
    if (config.delta <= 1.0) throw ConfigInvalid("solve_nl1p: delta must exceed 1");

    SolverState st = initial_state(system);
    Nl1pResult result;
    double lambda = config.lambda0;
    for (int round = 1; round <= config.max_rounds; ++round) {
        st = solve_inner(system, lambda, st.x, st.y, schedule);
        result.rounds = round;
        result.inner_iterations += st.iter;
        result.final_lambda = lambda;

        const bool one_bit = std::all_of(st.x.begin(), st.x.end(), [&](double v) {
            return std::abs(v) >= 1.0 - config.onebit_tol;
        });
        if (one_bit) {
            result.one_bit_reached = true;
            break;
        }
        lambda *= config.delta;
    }
    result.round_limit_exceeded = !result.one_bit_reached;

    result.x.resize(system.cols());
    std::transform(st.x.begin(), st.x.end(), result.x.begin(), sign_pm1);
    return result;
}

}  // namespace onebit
