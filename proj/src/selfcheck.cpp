#include "onebit/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <ostream>
#include <cstdio>
#include <string>
#include <vector>

#include "onebit/precoders.hpp"
#include "onebit/sim.hpp"

namespace onebit {

namespace {

struct Check {
    std::string name;
    std::function<bool(std::string&)> run;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// Recomputes the boundary coefficients of one user directly in the complex
// domain, independent of the real-expanded matrix path.
std::pair<double, double> complex_alphas(const ComplexMatrix& h, int user, double scale,
                                         const PskConstellation& constellation, int symbol_index,
                                         std::span<const double> x) {
    const int nt = h.cols();
    cplx yhat{};
    for (int j = 0; j < nt; ++j) yhat += scale * h(user, j) * cplx(x[j], x[nt + j]);
    const BoundaryPair pair = boundary_pair(constellation, symbol_index);
    const double alpha_ccw =
        std::imag(yhat * std::conj(pair.cw)) / std::imag(pair.ccw * std::conj(pair.cw));
    const double alpha_cw =
        std::imag(yhat * std::conj(pair.ccw)) / std::imag(pair.cw * std::conj(pair.ccw));
    return {alpha_ccw, alpha_cw};
}

bool check_model_oracle(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        SeededRng rng(mix_seed(101, {std::uint64_t(trial)}));
        const int orders[] = {4, 8, 16};
        const PskConstellation constellation(orders[trial % 3]);
        const int k = 1 + rng.uniform_int(0, 3);
        const int nt = 1 + rng.uniform_int(0, 5);
        const ComplexMatrix h = gaussian_complex_matrix(rng, k, nt);
        std::vector<int> symbols(k);
        for (int& s : symbols) s = rng.uniform_int(0, constellation.order() - 1);
        std::vector<double> x(2 * nt);
        for (double& v : x) v = rng.uniform_int(0, 1) ? 1.0 : -1.0;

        const CiSystem sys = build_system(h, symbols, constellation);
        const double direct = ci_objective(sys, x).value;
        double min_alpha = std::numeric_limits<double>::infinity();
        for (int u = 0; u < k; ++u) {
            const auto [a, b] = complex_alphas(h, u, sys.scale(), constellation, symbols[u], x);
            min_alpha = std::min({min_alpha, a, b});
        }
        worst = std::max(worst, std::abs(direct - (-min_alpha)));
    }
    detail = "max deviation " + fmt(worst);
    return worst <= 1e-10;
}

bool check_decomposition(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        SeededRng rng(mix_seed(202, {std::uint64_t(trial)}));
        const PskConstellation constellation(8);
        const int nt = 1 + rng.uniform_int(0, 6);
        const ComplexMatrix h = gaussian_complex_matrix(rng, 1, nt);
        const int sym = rng.uniform_int(0, 7);
        const BoundaryPair pair = boundary_pair(constellation, sym);
        const RealMatrix v = build_vk(h.row(0), pair);
        std::vector<double> x(2 * nt);
        for (double& xv : x) xv = rng.uniform_symmetric();

        const std::vector<double> alphas = matvec(v, x);
        cplx recon = alphas[0] * pair.ccw + alphas[1] * pair.cw;
        cplx direct{};
        for (int j = 0; j < nt; ++j) direct += h(0, j) * cplx(x[j], x[nt + j]);
        worst = std::max(worst, std::abs(recon - direct));
    }
    detail = "max reconstruction error " + fmt(worst);
    return worst <= 1e-10;
}

bool check_simplex_projection(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        SeededRng rng(mix_seed(303, {std::uint64_t(trial)}));
        const int m = 1 + rng.uniform_int(0, 63);
        std::vector<double> v(m);
        for (double& vi : v) vi = 4.0 * rng.uniform_symmetric();
        const std::vector<double> p = project_simplex(v);

        double sum = 0.0;
        double theta_min = std::numeric_limits<double>::infinity();
        double theta_max = -theta_min;
        for (int i = 0; i < m; ++i) {
            if (p[i] < 0.0) worst = std::max(worst, -p[i]);
            sum += p[i];
            if (p[i] > 0.0) {
                theta_min = std::min(theta_min, v[i] - p[i]);
                theta_max = std::max(theta_max, v[i] - p[i]);
            }
        }
        worst = std::max(worst, std::abs(sum - 1.0));
        worst = std::max(worst, theta_max - theta_min);  // active coords share one threshold
        for (int i = 0; i < m; ++i)
            if (p[i] == 0.0) worst = std::max(worst, v[i] - theta_max);  // inactive stay below it
    }
    detail = "max KKT residual " + fmt(worst);
    return worst <= 1e-9;
}

bool check_x_update_grid(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        SeededRng rng(mix_seed(404, {std::uint64_t(trial)}));
        const double g = 2.0 * rng.uniform_symmetric();   // column-gradient term
        const double x0 = rng.uniform_symmetric();
        const double lambda = rng.uniform01();
        const double tau = 0.2 + 3.0 * rng.uniform01();

        const double a = x0 - g / tau;
        const double closed = (a < 0.0 ? -1.0 : 1.0) * std::min(std::abs(a) + lambda / tau, 1.0);

        double best_x = -1.0;
        double best_f = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 20000; ++i) {
            const double x = -1.0 + i * 1e-4;
            const double f = g * x - lambda * std::abs(x) + 0.5 * tau * (x - x0) * (x - x0);
            if (f < best_f) {
                best_f = f;
                best_x = x;
            }
        }
        worst = std::max(worst, std::abs(closed - best_x));
    }
    detail = "max deviation from grid search " + fmt(worst);
    return worst <= 1e-3;
}

bool check_exact_search_agreement(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        SeededRng rng(mix_seed(505, {std::uint64_t(trial)}));
        const PskConstellation constellation(8);
        const ComplexMatrix h = gaussian_complex_matrix(rng, 3, 5);
        std::vector<int> symbols(3);
        for (int& s : symbols) s = rng.uniform_int(0, 7);
        const CiSystem sys = build_system(h, symbols, constellation);
        const ExactSearchResult ex = exhaustive_minimize(sys);
        const ExactSearchResult bb = branch_bound_minimize(sys);
        worst = std::max(worst, std::abs(ex.value - bb.value));
    }
    detail = "max optimum mismatch " + fmt(worst);
    return worst <= 1e-9;
}

bool check_penalty_exactness(std::string& detail) {
    int violations = 0;
    for (int trial = 0; trial < 5; ++trial) {
        SeededRng rng(mix_seed(606, {std::uint64_t(trial)}));
        const PskConstellation constellation(8);
        const ComplexMatrix h = gaussian_complex_matrix(rng, 3, 5);
        std::vector<int> symbols(3);
        for (int& s : symbols) s = rng.uniform_int(0, 7);
        const CiSystem sys = build_system(h, symbols, constellation);
        const double lambda = 1.01 * exactness_threshold(sys);
        const int n = sys.cols();

        double best_binary = std::numeric_limits<double>::infinity();
        std::vector<double> x(n);
        for (unsigned b = 0; b < (1u << n); ++b) {
            for (int i = 0; i < n; ++i) x[i] = (b >> i) & 1u ? 1.0 : -1.0;
            const double f0 = penalty_objective(sys, x, lambda);
            best_binary = std::min(best_binary, f0);
            for (int i = 0; i < n; ++i) {
                const double saved = x[i];
                x[i] -= saved * 1e-6;  // step toward the box interior
                if (penalty_objective(sys, x, lambda) < f0 - 1e-12) ++violations;
                x[i] = saved;
            }
        }
        for (int s = 0; s < 10000; ++s) {
            for (double& v : x) v = rng.uniform_symmetric();
            if (penalty_objective(sys, x, lambda) < best_binary - 1e-12) ++violations;
        }
    }
    detail = std::to_string(violations) + " violations";
    return violations == 0;
}

bool check_homotopy_feasibility(std::string& detail) {
    int reached = 0;
    int binary = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        SeededRng rng(mix_seed(707, {std::uint64_t(trial)}));
        const PskConstellation constellation(8);
        const ComplexMatrix h = gaussian_complex_matrix(rng, 3, 5);
        std::vector<int> symbols(3);
        for (int& s : symbols) s = rng.uniform_int(0, 7);
        const CiSystem sys = build_system(h, symbols, constellation);
        const Nl1pResult r =
            solve_nl1p(sys, HomotopyConfig::defaults(8), practical_schedule(sys));
        if (r.one_bit_reached) ++reached;
        if (std::all_of(r.x.begin(), r.x.end(), [](double v) { return std::abs(v) == 1.0; }))
            ++binary;
    }
    detail = std::to_string(reached) + "/" + std::to_string(trials) + " one-bit, " +
             std::to_string(binary) + "/" + std::to_string(trials) + " binary after threshold";
    return reached >= (trials * 8) / 10 && binary == trials;
}

bool check_zf_residual(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        SeededRng rng(mix_seed(808, {std::uint64_t(trial)}));
        const PskConstellation constellation(8);
        const ComplexMatrix h = gaussian_complex_matrix(rng, 4, 12);
        std::vector<int> symbols(4);
        for (int& s : symbols) s = rng.uniform_int(0, 7);
        const PrecoderOutput out = precode_zf_infinite(h, symbols, constellation);

        // Noise-free receive vector must be a common positive multiple of s.
        const std::vector<cplx> y = matvec(h, out.x_transmit);
        const cplx ratio = y[0] / constellation.symbol(symbols[0]);
        for (int u = 0; u < 4; ++u)
            worst = std::max(worst,
                             std::abs(y[u] - ratio * constellation.symbol(symbols[u])));
    }
    detail = "max interference residual " + fmt(worst);
    return worst <= 1e-8;
}

bool check_detection_rule(std::string& detail) {
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        SeededRng rng(mix_seed(909, {std::uint64_t(trial)}));
        const int orders[] = {4, 8, 16, 32};
        const PskConstellation constellation(orders[trial % 4]);
        const cplx y(rng.gaussian(), rng.gaussian());
        const int by_phase = detect_symbol(y, constellation);
        int by_distance = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < constellation.order(); ++i) {
            const double d = std::abs(y - constellation.symbol(i));
            if (d < best) {
                best = d;
                by_distance = i;
            }
        }
        if (by_phase != by_distance) ++mismatches;
    }
    detail = std::to_string(mismatches) + " mismatches vs nearest-point rule";
    return mismatches == 0;
}

}  // namespace

bool run_selfcheck(std::ostream& out) {
    const std::vector<Check> checks = {
        {"real-expanded model matches complex recomputation", check_model_oracle},
        {"boundary decomposition reconstructs the received signal", check_decomposition},
        {"simplex projection satisfies feasibility and KKT", check_simplex_projection},
        {"closed-form coordinate update matches grid search", check_x_update_grid},
        {"branch and bound agrees with exhaustive search", check_exact_search_agreement},
        {"penalty model is exact above the threshold", check_penalty_exactness},
        {"homotopy reaches one-bit points and thresholds cleanly", check_homotopy_feasibility},
        {"zero-forcing removes multi-user interference", check_zf_residual},
        {"phase detection equals nearest-symbol detection", check_detection_rule},
    };

    bool all_ok = true;
    for (const Check& c : checks) {
        std::string detail;
        const bool ok = c.run(detail);
        all_ok = all_ok && ok;
        out << (ok ? "[ ok ] " : "[FAIL] ") << c.name;
        if (!detail.empty()) out << " (" << detail << ")";
        out << "\n";
    }
    out << (all_ok ? "all checks passed\n" : "SOME CHECKS FAILED\n");
    return all_ok;
}

}  // namespace onebit
