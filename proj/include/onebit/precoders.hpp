#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "onebit/penalty_solver.hpp"

namespace onebit {

enum class PrecoderKind {
    Nl1p,
    ZfInfinite,
    ZfOneBit,
    Msm,
    GreedyRound,
    Exhaustive,
    BranchBound,
};

/// Short token accepted on the command line and used in config mirrors.
std::string_view precoder_token(PrecoderKind kind);
/// Label printed in result tables and files.
std::string_view precoder_label(PrecoderKind kind);
/// Accepts both tokens and labels; nullopt for unknown names.
std::optional<PrecoderKind> parse_precoder(std::string_view name);
/// Comma-separated list of all valid tokens, for error messages.
std::string valid_precoder_tokens();

struct PrecoderOutput {
    std::vector<cplx> x_transmit;                  // length N_t, unit total power
    std::optional<std::vector<double>> x_binary;   // in {-1,+1}^{2N_t} for one-bit precoders
    double objective = 0.0;                        // ci_objective at the returned point
    double elapsed_seconds = 0.0;                  // precoding computation only
    bool round_limit_exceeded = false;             // homotopy warning flag
};

/// Negative-l1 penalty precoder (homotopy over the min-max inner solver).
/// Uses practical_schedule(system) when no schedule is given.
PrecoderOutput precode_nl1p(const ComplexMatrix& h, std::span<const int> symbol_indices,
                            const PskConstellation& constellation, const HomotopyConfig& config,
                            const std::optional<SolverSchedule>& schedule = std::nullopt);

/// Zero-forcing with unconstrained (infinite-resolution) outputs, normalized
/// to unit transmit power. No binary point is produced.
PrecoderOutput precode_zf_infinite(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                   const PskConstellation& constellation, double noise_var = 0.0);

/// Elementwise sign quantization of the zero-forcing signal.
PrecoderOutput precode_zf_onebit(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                 const PskConstellation& constellation);

/// Box relaxation of the min-max objective (penalty weight zero) followed by
/// sign quantization. The relaxation is solved tighter than the default
/// schedule: tolerance 1e-5, up to 2000 iterations.
PrecoderOutput precode_msm(const ComplexMatrix& h, std::span<const int> symbol_indices,
                           const PskConstellation& constellation,
                           const std::optional<SolverSchedule>& schedule = std::nullopt);

/// Greedy rounding of the box relaxation: coordinates already at the box
/// boundary are fixed, the rest are visited in descending magnitude and set
/// to the sign that minimizes the objective with the remainder held relaxed.
PrecoderOutput precode_greedy(const ComplexMatrix& h, std::span<const int> symbol_indices,
                              const PskConstellation& constellation,
                              const std::optional<SolverSchedule>& schedule = std::nullopt);

/// Ground-truth oracle: enumerates all 2^n sign vectors (n <= 22).
PrecoderOutput precode_exhaustive(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                  const PskConstellation& constellation);

/// Exact depth-first search with a coordinatewise interval bound; returns the
/// same optimum as precode_exhaustive.
PrecoderOutput precode_branch_bound(const ComplexMatrix& h, std::span<const int> symbol_indices,
                                    const PskConstellation& constellation);

struct ExactSearchResult {
    std::vector<double> x;      // optimal sign vector
    double value = 0.0;         // optimal objective
    std::uint64_t nodes = 0;    // search nodes expanded (1 for plain enumeration)
};

/// Lexicographically smallest global minimizer over {-1,+1}^n (with -1 < +1).
/// Throws InstanceTooLarge when n > 22.
ExactSearchResult exhaustive_minimize(const CiSystem& system);

/// Depth-first branch and bound. At a node with coordinates [0, d) fixed,
/// the bound is max_l (sum_fixed a_li x_i - sum_free |a_li|); a node is cut
/// when its bound is >= the incumbent value.
ExactSearchResult branch_bound_minimize(const CiSystem& system);

/// Options bundle for the dispatch below.
struct PrecoderOptions {
    HomotopyConfig homotopy;
    std::optional<SolverSchedule> schedule;
    double noise_var = 0.0;
};

PrecoderOutput run_precoder(PrecoderKind kind, const ComplexMatrix& h,
                            std::span<const int> symbol_indices,
                            const PskConstellation& constellation, const PrecoderOptions& options);

}  // namespace onebit
