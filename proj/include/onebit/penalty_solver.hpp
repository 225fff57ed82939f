#pragma once

#include <span>
#include <vector>

#include "onebit/ci_model.hpp"

namespace onebit {

/// Per-iteration parameters of the alternating min-max solver:
///   step size rho (constant), perturbation c_k = c0_coeff / k^c_exponent,
///   proximal weight tau_k = tau_coeff * k^tau_exponent, k starting at 1.
struct SolverSchedule {
    double rho = 0.0;
    double c0_coeff = 0.0;
    double c_exponent = 0.0;
    double tau_coeff = 0.0;
    double tau_exponent = 0.0;
    int max_iters = 500;
    double tol = 1e-3;  // stop when successive x iterates move less than this

    double c_at(int k) const;
    double tau_at(int k) const;
};

/// Default production schedule:
///   rho = 0.2 / ||A||_2, c_k = 0.01 / (rho * k^0.05),
///   tau_k = ((2*log2(N_t) + 1) / 10) * mean(|A|) * k^0.1,
///   at most 500 iterations, successive-iterate tolerance 1e-3.
SolverSchedule practical_schedule(const CiSystem& system);

/// Homotopy loop parameters: the penalty weight starts at lambda0 and is
/// multiplied by delta each round until the iterate is one-bit.
struct HomotopyConfig {
    double lambda0 = 1e-3;
    double delta = 5.0;
    int max_rounds = 20;
    double onebit_tol = 1e-6;  // |x_i| >= 1 - onebit_tol counts as binary

    /// lambda0 = 0.001 * M / 8, delta = 5.
    static HomotopyConfig defaults(int psk_order);
};

struct SolverState {
    std::vector<double> x;  // in [-1, 1]^n
    std::vector<double> y;  // on the unit simplex
    int iter = 0;
    double last_step_norm = 0.0;
};

/// x = 0, y = (1/m) * ones.
SolverState initial_state(const CiSystem& system);

/// max_l a_l . x - lambda * ||x||_1
double penalty_objective(const CiSystem& system, std::span<const double> x, double lambda);

/// Smallest penalty weight beyond which the box-penalty problem and the
/// one-bit problem share global and local solutions: max_l ||a_l||_inf.
double exactness_threshold(const CiSystem& system);

/// Euclidean projection onto {y >= 0, sum y = 1}; sort-based, O(m log m).
std::vector<double> project_simplex(std::span<const double> v);

/// Closed-form box + negative-l1 proximal step. Per coordinate i, with
/// g = (column i of A) . y and a_i = x_i - g / tau:
///   x_i <- sgn(a_i) * min(|a_i| + lambda / tau, 1),  sgn(0) = +1.
std::vector<double> x_update(const CiSystem& system, const SolverState& state, double lambda,
                             double tau);

/// Projected perturbed gradient ascent step for the max player:
///   y <- proj_simplex(y + rho * A x_new - rho * c * y).
std::vector<double> y_update(const CiSystem& system, const SolverState& state,
                             std::span<const double> x_new, double rho, double c);

/// Alternates the two updates from (x0, y0) until the x step norm drops
/// below schedule.tol or max_iters is reached. Always returns; a final
/// last_step_norm above tol signals non-convergence.
SolverState solve_inner(const CiSystem& system, double lambda, std::span<const double> x0,
                        std::span<const double> y0, const SolverSchedule& schedule);

struct Nl1pResult {
    std::vector<double> x;  // in {-1, +1}^n after thresholding
    int rounds = 0;
    bool one_bit_reached = false;      // iterate was binary before thresholding
    bool round_limit_exceeded = false;
    int inner_iterations = 0;          // total across all rounds
    double final_lambda = 0.0;         // penalty weight of the last round run
};

/// Homotopy loop: warm-starts the inner solver from the previous round's
/// (x, y) while growing lambda by delta per round, then hard-thresholds the
/// final iterate to sgn(x) with sgn(0) = +1.
Nl1pResult solve_nl1p(const CiSystem& system, const HomotopyConfig& config,
                      const SolverSchedule& schedule);

}  // namespace onebit
