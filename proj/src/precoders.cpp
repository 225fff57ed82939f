#include "onebit/precoders.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace onebit {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

inline double sign_pm1(double v) { return v < 0.0 ? -1.0 : 1.0; }

// x_T(i) = (x_b[i] + j x_b[N_t + i]) / sqrt(2 N_t); entries land exactly on
// the four one-bit constellation points.
std::vector<cplx> binary_to_transmit(std::span<const double> x_binary, int n_antennas) {
    const double c = 1.0 / std::sqrt(2.0 * n_antennas);
    std::vector<cplx> x(n_antennas);
    for (int i = 0; i < n_antennas; ++i)
        x[i] = cplx(x_binary[i] * c, x_binary[n_antennas + i] * c);
    return x;
}

// Objective of an arbitrary unit-power transmit vector: evaluate the system
// operator at sqrt(2 N_t) * [Re(x_T); Im(x_T)], which undoes the transmit
// normalization folded into the matrix.
double transmit_objective(const CiSystem& sys, std::span<const cplx> x_transmit) {
    const int nt = sys.n_antennas();
    const double s = std::sqrt(2.0 * nt);
    std::vector<double> x(2 * nt);
    for (int i = 0; i < nt; ++i) {
        x[i] = s * x_transmit[i].real();
        x[nt + i] = s * x_transmit[i].imag();
    }
    return ci_objective(sys, x).value;
}

PrecoderOutput output_from_binary(const CiSystem& sys, std::vector<double> x_binary,
                                  double elapsed, bool round_limit = false) {
    PrecoderOutput out;
    out.x_transmit = binary_to_transmit(x_binary, sys.n_antennas());
    out.objective = ci_objective(sys, x_binary).value;
    out.x_binary = std::move(x_binary);
    out.elapsed_seconds = elapsed;
    out.round_limit_exceeded = round_limit;
    return out;
}

// Unnormalized zero-forcing signal h^H (h h^H)^{-1} s.
std::vector<cplx> zf_direction(const ComplexMatrix& h, std::span<const int> symbol_indices,
                               const PskConstellation& constellation) {
    const int k = h.rows();
    const int nt = h.cols();
    if (k > nt) throw ConfigInvalid("zero-forcing requires K <= N_t");
    const ComplexMatrix hh = hermitian(h);
    const ComplexMatrix gram = matmul(h, hh);
    ComplexMatrix s(k, 1);
    for (int u = 0; u < k; ++u) s(u, 0) = constellation.symbol(symbol_indices[u]);
    const ComplexMatrix w = solve_linear(gram, s);
    std::vector<cplx> x(nt);
    for (int i = 0; i < nt; ++i) {
        cplx acc{};
        for (int u = 0; u < k; ++u) acc += hh(i, u) * w(u, 0);
        x[i] = acc;
    }
    return x;
}

std::vector<double> quantize_to_signs(std::span<const cplx> x) {
    const int nt = static_cast<int>(x.size());
    std::vector<double> b(2 * nt);
    for (int i = 0; i < nt; ++i) {
        b[i] = sign_pm1(x[i].real());
        b[nt + i] = sign_pm1(x[i].imag());
    }
    return b;
}

SolverSchedule relaxation_schedule(const CiSystem& sys,
                                   const std::optional<SolverSchedule>& given) {
    if (given) return *given;
    SolverSchedule s = practical_schedule(sys);
    s.tol = 1e-5;
    s.max_iters = 2000;
    return s;
}

std::vector<double> solve_relaxation(const CiSystem& sys, const SolverSchedule& sched) {
    const SolverState st0 = initial_state(sys);
    return solve_inner(sys, 0.0, st0.x, st0.y, sched).x;
}

}  // namespace

std::string_view precoder_token(PrecoderKind kind) {
    switch (kind) {
        case PrecoderKind::Nl1p: return "nl1p";
        case PrecoderKind::ZfInfinite: return "zfinf";
        case PrecoderKind::ZfOneBit: return "zf1bit";
        case PrecoderKind::Msm: return "msm";
        case PrecoderKind::GreedyRound: return "greedy";
        case PrecoderKind::Exhaustive: return "exhaustive";
        case PrecoderKind::BranchBound: return "bb";
    }
    return "?";
}

std::string_view precoder_label(PrecoderKind kind) {
    // GreedyRound is labeled explicitly as an OPSU-style stand-in, not OPSU.
    if (kind == PrecoderKind::GreedyRound) return "greedy rounding (OPSU-style)";
    return precoder_token(kind);
}

std::optional<PrecoderKind> parse_precoder(std::string_view name) {
    for (PrecoderKind k :
         {PrecoderKind::Nl1p, PrecoderKind::ZfInfinite, PrecoderKind::ZfOneBit, PrecoderKind::Msm,
          PrecoderKind::GreedyRound, PrecoderKind::Exhaustive, PrecoderKind::BranchBound}) {
        if (name == precoder_token(k) || name == precoder_label(k)) return k;
    }
    return std::nullopt;
}

std::string valid_precoder_tokens() {
    std::string out;
    for (PrecoderKind k :
         {PrecoderKind::Nl1p, PrecoderKind::ZfInfinite, PrecoderKind::ZfOneBit, PrecoderKind::Msm,
          PrecoderKind::GreedyRound, PrecoderKind::Exhaustive, PrecoderKind::BranchBound}) {
        if (!out.empty()) out += ", ";
        out += precoder_token(k);
    }
    return out;
}

PrecoderOutput precode_nl1p(const ComplexMatrix& h, std::span<const int> symbol_indices,
                            const PskConstellation& constellation, const HomotopyConfig& config,
                            const std::optional<SolverSchedule>& schedule) {
    const auto start = clock_type::now();
    const CiSystem sys = build_system(h, symbol_indices, constellation);
    const SolverSchedule sched = schedule ? *schedule : practical_schedule(sys);
    Nl1pResult r = solve_nl1p(sys, config, sched);
    const double elapsed = seconds_since(start);
    return output_from_binary(sys, std::move(r.x), elapsed, r.round_limit_exceeded);
}

PrecoderOutput precode_zf_infinite(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                   const PskConstellation& constellation, double noise_var) {
    (void)noise_var;  // phase detection needs no receiver-side scaling
    const auto start = clock_type::now();
    std::vector<cplx> x = zf_direction(h, symbol_indices, constellation);
    double norm = 0.0;
    for (cplx v : x) norm += std::norm(v);
    norm = std::sqrt(norm);
    if (norm <= 0.0) throw SingularMatrix("precode_zf_infinite: zero-forcing signal vanished");
    for (cplx& v : x) v /= norm;
    const double elapsed = seconds_since(start);

    PrecoderOutput out;
    out.x_transmit = std::move(x);
    out.elapsed_seconds = elapsed;
    const CiSystem sys = build_system(h, symbol_indices, constellation);
    out.objective = transmit_objective(sys, out.x_transmit);
    return out;
}

PrecoderOutput precode_zf_onebit(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                 const PskConstellation& constellation) {
    const auto start = clock_type::now();
    std::vector<double> b = quantize_to_signs(zf_direction(h, symbol_indices, constellation));
    const double elapsed = seconds_since(start);
    const CiSystem sys = build_system(h, symbol_indices, constellation);
    return output_from_binary(sys, std::move(b), elapsed);
}

PrecoderOutput precode_msm(const ComplexMatrix& h, std::span<const int> symbol_indices,
                           const PskConstellation& constellation,
                           const std::optional<SolverSchedule>& schedule) {
    const auto start = clock_type::now();
    const CiSystem sys = build_system(h, symbol_indices, constellation);
    const std::vector<double> relaxed = solve_relaxation(sys, relaxation_schedule(sys, schedule));
    std::vector<double> b(relaxed.size());
    std::transform(relaxed.begin(), relaxed.end(), b.begin(), sign_pm1);
    const double elapsed = seconds_since(start);
    return output_from_binary(sys, std::move(b), elapsed);
}

PrecoderOutput precode_greedy(const ComplexMatrix& h, std::span<const int> symbol_indices,
                              const PskConstellation& constellation,
                              const std::optional<SolverSchedule>& schedule) {
    constexpr double kFixTol = 1e-3;
    const auto start = clock_type::now();
    const CiSystem sys = build_system(h, symbol_indices, constellation);
    const std::vector<double> relaxed = solve_relaxation(sys, relaxation_schedule(sys, schedule));
    const int n = sys.cols();

    std::vector<double> work = relaxed;
    std::vector<int> free_coords;
    for (int i = 0; i < n; ++i) {
        if (std::abs(relaxed[i]) >= 1.0 - kFixTol)
            work[i] = sign_pm1(relaxed[i]);
        else
            free_coords.push_back(i);
    }
    std::sort(free_coords.begin(), free_coords.end(), [&](int a, int b) {
        if (std::abs(relaxed[a]) != std::abs(relaxed[b]))
            return std::abs(relaxed[a]) > std::abs(relaxed[b]);
        return a < b;
    });
    for (int i : free_coords) {
        work[i] = 1.0;
        const double plus = ci_objective(sys, work).value;
        work[i] = -1.0;
        const double minus = ci_objective(sys, work).value;
        if (plus <= minus) work[i] = 1.0;
    }
    const double elapsed = seconds_since(start);
    return output_from_binary(sys, std::move(work), elapsed);
}

PrecoderOutput precode_exhaustive(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                  const PskConstellation& constellation) {
    const auto start = clock_type::now();
    const CiSystem sys = build_system(h, symbol_indices, constellation);
    ExactSearchResult r = exhaustive_minimize(sys);
    const double elapsed = seconds_since(start);
    return output_from_binary(sys, std::move(r.x), elapsed);
}

PrecoderOutput precode_branch_bound(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                    const PskConstellation& constellation) {
    const auto start = clock_type::now();
    const CiSystem sys = build_system(h, symbol_indices, constellation);
    ExactSearchResult r = branch_bound_minimize(sys);
    const double elapsed = seconds_since(start);
    return output_from_binary(sys, std::move(r.x), elapsed);
}

ExactSearchResult exhaustive_minimize(const CiSystem& system) {
    const int n = system.cols();
    const int m = system.rows();
    if (n > 22)
        throw InstanceTooLarge("exhaustive_minimize: 2^" + std::to_string(n) +
                               " sign vectors exceed the enumeration budget (n <= 22)");

    ExactSearchResult best;
    best.value = std::numeric_limits<double>::infinity();
    best.nodes = 1;

    std::vector<double> x(n);
    const std::uint64_t total = std::uint64_t{1} << n;
    if (n <= 16) {
        // Fresh evaluation per point, enumerated in lexicographic order with
        // -1 < +1, so the first minimizer found is the lexicographic one.
        for (std::uint64_t b = 0; b < total; ++b) {
            for (int i = 0; i < n; ++i)
                x[i] = ((b >> (n - 1 - i)) & 1u) ? 1.0 : -1.0;
            const double v = ci_objective(system, x).value;
            if (v < best.value) {
                best.value = v;
                best.x = x;
            }
        }
    } else {
        // Gray-code walk with incremental row sums; ties are resolved by an
        // explicit lexicographic comparison.
        std::fill(x.begin(), x.end(), -1.0);
        std::vector<double> ax = matvec(system.a(), x);
        auto lex_less = [](const std::vector<double>& a, const std::vector<double>& b) {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
        };
        auto consider = [&]() {
            const double v = *std::max_element(ax.begin(), ax.end());
            if (v < best.value || (v == best.value && (best.x.empty() || lex_less(x, best.x)))) {
                best.value = v;
                best.x = x;
            }
        };
        consider();
        const RealMatrix& at = system.a_transpose();
        for (std::uint64_t step = 1; step < total; ++step) {
            const int i = std::countr_zero(step);
            const double delta = -2.0 * x[i];
            x[i] += delta;
            const auto col = at.row(i);
            for (int l = 0; l < m; ++l) ax[l] += delta * col[l];
            consider();
        }
        // Re-evaluate from scratch to drop incremental round-off.
        best.value = ci_objective(system, best.x).value;
    }
    return best;
}

namespace {

struct BnbContext {
    const CiSystem* sys;
    const RealMatrix* suffix;  // suffix(l, d) = sum_{i >= d} |a_li|
    std::vector<double> partial;
    std::vector<double> x;
    std::vector<double> best_x;
    double incumbent;
    std::uint64_t nodes;
};

void bnb_recurse(BnbContext& ctx, int depth) {
    ++ctx.nodes;
    const int m = ctx.sys->rows();
    const int n = ctx.sys->cols();

    double bound = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < m; ++l)
        bound = std::max(bound, ctx.partial[l] - (*ctx.suffix)(l, depth));
    if (bound >= ctx.incumbent) return;

    if (depth == n) {
        // bound equals the exact value here (no free coordinates left).
        ctx.incumbent = bound;
        ctx.best_x = ctx.x;
        return;
    }

    const auto col = ctx.sys->a_transpose().row(depth);
    for (double sign : {-1.0, 1.0}) {
        ctx.x[depth] = sign;
        for (int l = 0; l < m; ++l) ctx.partial[l] += sign * col[l];
        bnb_recurse(ctx, depth + 1);
        for (int l = 0; l < m; ++l) ctx.partial[l] -= sign * col[l];
    }
}

}  // namespace

ExactSearchResult branch_bound_minimize(const CiSystem& system) {
    const int n = system.cols();
    const int m = system.rows();

    RealMatrix suffix(m, n + 1);
    for (int l = 0; l < m; ++l) {
        suffix(l, n) = 0.0;
        const auto row = system.a().row(l);
        for (int i = n - 1; i >= 0; --i) suffix(l, i) = suffix(l, i + 1) + std::abs(row[i]);
    }

    BnbContext ctx;
    ctx.sys = &system;
    ctx.suffix = &suffix;
    ctx.partial.assign(m, 0.0);
    ctx.x.assign(n, -1.0);
    ctx.incumbent = std::numeric_limits<double>::infinity();
    ctx.nodes = 0;
    bnb_recurse(ctx, 0);

    ExactSearchResult r;
    r.x = std::move(ctx.best_x);
    r.nodes = ctx.nodes;
    r.value = ci_objective(system, r.x).value;  // recompute without accumulation drift
    return r;
}

PrecoderOutput run_precoder(PrecoderKind kind, const ComplexMatrix& h,
                            std::span<const int> symbol_indices,
                            const PskConstellation& constellation,
                            const PrecoderOptions& options) {
    switch (kind) {
        case PrecoderKind::Nl1p:
            return precode_nl1p(h, symbol_indices, constellation, options.homotopy,
                                options.schedule);
        case PrecoderKind::ZfInfinite:
            return precode_zf_infinite(h, symbol_indices, constellation, options.noise_var);
        case PrecoderKind::ZfOneBit:
            return precode_zf_onebit(h, symbol_indices, constellation);
        case PrecoderKind::Msm:
            return precode_msm(h, symbol_indices, constellation, options.schedule);
        case PrecoderKind::GreedyRound:
            return precode_greedy(h, symbol_indices, constellation, options.schedule);
        case PrecoderKind::Exhaustive:
            return precode_exhaustive(h, symbol_indices, constellation);
        case PrecoderKind::BranchBound:
            return precode_branch_bound(h, symbol_indices, constellation);
    }
    throw ConfigInvalid("run_precoder: unknown precoder kind");
}

}  // namespace onebit
