#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "onebit/precoders.hpp"

namespace onebit {

enum class OutputFormat { Csv, Json };

std::string_view format_name(OutputFormat format);
std::optional<OutputFormat> parse_format(std::string_view name);

struct ScenarioConfig {
    int k_users = 8;
    int n_antennas = 32;
    int psk_order = 8;
    std::vector<double> snr_grid_db{0.0, 5.0, 10.0, 15.0, 20.0};
    int block_length = 10;    // symbol slots per channel realization
    int n_channels = 100;     // independent channel realizations
    std::uint64_t seed = 1;
    std::vector<PrecoderKind> precoders{PrecoderKind::Nl1p, PrecoderKind::ZfOneBit,
                                        PrecoderKind::ZfInfinite};
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
};

struct SimCell {
    PrecoderKind precoder;
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
    double mean_cpu_seconds = 0.0;
    std::uint64_t feasibility_failures = 0;  // homotopy round-limit events
};

/// One cell per (precoder, snr), precoder-major in config order.
struct SimResult {
    ScenarioConfig config;
    std::vector<SimCell> cells;

    const SimCell& cell(PrecoderKind kind, double snr_db) const;
};

/// Runs the Monte-Carlo link-level protocol: per channel realization draw H,
/// per slot draw the data symbols, precode once per precoder, then add noise
/// and detect at every SNR grid point. Channel, symbol, and noise streams are
/// derived from the seed by fixed offsets, so results do not depend on the
/// order or composition of the precoder list.
SimResult run_scenario(const ScenarioConfig& config);

/// Nearest symbol by phase; ties go to the smaller index, zero maps to 0.
int detect_symbol(cplx y, const PskConstellation& constellation);

std::string to_csv(const SimResult& result);
std::string to_json_string(const SimResult& result);
SimResult sim_result_from_json(const std::string& text);

/// Writes CSV or JSON to path; throws IoError when the file cannot be written.
void emit_results(const SimResult& result, const std::string& path, OutputFormat format);

}  // namespace onebit
