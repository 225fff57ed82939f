#include "onebit/sim.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace onebit {

namespace {

// Stream tags for substream derivation from the master seed.
constexpr std::uint64_t kStreamChannel = 1;
constexpr std::uint64_t kStreamSymbols = 2;
constexpr std::uint64_t kStreamNoise = 3;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.k_users < 1) throw ConfigInvalid("config: users must be >= 1");
    if (cfg.n_antennas < 1) throw ConfigInvalid("config: antennas must be >= 1");
    if (cfg.psk_order != 4 && cfg.psk_order != 8 && cfg.psk_order != 16 && cfg.psk_order != 32)
        throw ConfigInvalid("config: psk order must be one of 4, 8, 16, 32");
    if (cfg.block_length < 1) throw ConfigInvalid("config: block length must be >= 1");
    if (cfg.n_channels < 1) throw ConfigInvalid("config: channel count must be >= 1");
    if (cfg.snr_grid_db.empty()) throw ConfigInvalid("config: SNR grid must not be empty");
    if (cfg.precoders.empty()) throw ConfigInvalid("config: precoder list must not be empty");
    for (PrecoderKind k : cfg.precoders) {
        if ((k == PrecoderKind::ZfInfinite || k == PrecoderKind::ZfOneBit) &&
            cfg.n_antennas < cfg.k_users)
            throw ConfigInvalid("config: zero-forcing baselines require N_t >= K");
        if (k == PrecoderKind::Exhaustive && 2 * cfg.n_antennas > 22)
            throw ConfigInvalid("config: exhaustive search requires 2*N_t <= 22");
    }
}

}  // namespace

std::string_view format_name(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    return std::nullopt;
}

const SimCell& SimResult::cell(PrecoderKind kind, double snr_db) const {
    for (const SimCell& c : cells)
        if (c.precoder == kind && c.snr_db == snr_db) return c;
    throw ConfigInvalid("SimResult: no such (precoder, snr) cell");
}

int detect_symbol(cplx y, const PskConstellation& constellation) {
    const double phase = std::arg(y);
    const double two_pi = 2.0 * std::numbers::pi;
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int i = 0; i < constellation.order(); ++i) {
        const double d = std::abs(std::remainder(phase - constellation.symbol_angle(i), two_pi));
        if (d < best) {
            best = d;
            arg = i;
        }
    }
    return arg;
}

SimResult run_scenario(const ScenarioConfig& config) {
    validate(config);
    const PskConstellation constellation(config.psk_order);
    const int k = config.k_users;
    const int num_p = static_cast<int>(config.precoders.size());
    const int num_s = static_cast<int>(config.snr_grid_db.size());
    const int bps = constellation.bits_per_symbol();

    PrecoderOptions options;
    options.homotopy = HomotopyConfig::defaults(config.psk_order);

    struct Tally {
        std::uint64_t bit_errors = 0;
        std::uint64_t bits = 0;
    };
    std::vector<Tally> tallies(static_cast<std::size_t>(num_p) * num_s);
    std::vector<double> cpu_seconds(num_p, 0.0);
    std::vector<std::uint64_t> trials(num_p, 0);
    std::vector<std::uint64_t> feas_failures(num_p, 0);

    std::vector<int> symbols(k);
    std::vector<cplx> noise_free(k);
    for (int ch = 0; ch < config.n_channels; ++ch) {
        SeededRng channel_rng(mix_seed(config.seed, {kStreamChannel, std::uint64_t(ch)}));
        const ComplexMatrix h = gaussian_complex_matrix(channel_rng, k, config.n_antennas);
        SeededRng symbol_rng(mix_seed(config.seed, {kStreamSymbols, std::uint64_t(ch)}));

        for (int slot = 0; slot < config.block_length; ++slot) {
            for (int u = 0; u < k; ++u) symbols[u] = symbol_rng.uniform_int(0, config.psk_order - 1);

            for (int pi = 0; pi < num_p; ++pi) {
                const PrecoderKind kind = config.precoders[pi];
                PrecoderOutput out;
                try {
                    out = run_precoder(kind, h, symbols, constellation, options);
                } catch (const Error& e) {
                    // Per-precoder failures skip the trial instead of aborting the run.
                    std::cerr << "warning: " << precoder_label(kind) << " failed on channel " << ch
                              << " slot " << slot << ": " << e.what() << "\n";
                    continue;
                }
                cpu_seconds[pi] += out.elapsed_seconds;
                ++trials[pi];
                if (out.round_limit_exceeded) ++feas_failures[pi];

                for (int u = 0; u < k; ++u) {
                    cplx acc{};
                    for (int j = 0; j < config.n_antennas; ++j) acc += h(u, j) * out.x_transmit[j];
                    noise_free[u] = acc;
                }
                for (int si = 0; si < num_s; ++si) {
                    const double sigma2 = std::pow(10.0, -config.snr_grid_db[si] / 10.0);
                    const double sigma_c = std::sqrt(sigma2 / 2.0);
                    SeededRng noise_rng(mix_seed(
                        config.seed, {kStreamNoise, std::uint64_t(ch), std::uint64_t(slot),
                                      std::uint64_t(si), static_cast<std::uint64_t>(kind)}));
                    Tally& t = tallies[static_cast<std::size_t>(pi) * num_s + si];
                    for (int u = 0; u < k; ++u) {
                        const cplx y = noise_free[u] + cplx(sigma_c * noise_rng.gaussian(),
                                                            sigma_c * noise_rng.gaussian());
                        const int detected = detect_symbol(y, constellation);
                        const unsigned diff = constellation.gray_label(symbols[u]) ^
                                              constellation.gray_label(detected);
                        t.bit_errors += std::popcount(diff);
                        t.bits += static_cast<unsigned>(bps);
                    }
                }
            }
        }
    }

    SimResult result;
    result.config = config;
    result.cells.reserve(tallies.size());
    for (int pi = 0; pi < num_p; ++pi) {
        for (int si = 0; si < num_s; ++si) {
            const Tally& t = tallies[static_cast<std::size_t>(pi) * num_s + si];
            SimCell cell;
            cell.precoder = config.precoders[pi];
            cell.snr_db = config.snr_grid_db[si];
            cell.bit_errors = t.bit_errors;
            cell.bits_total = t.bits;
            cell.ber = t.bits > 0 ? static_cast<double>(t.bit_errors) / t.bits : 0.0;
            cell.mean_cpu_seconds = trials[pi] > 0 ? cpu_seconds[pi] / trials[pi] : 0.0;
            cell.feasibility_failures = feas_failures[pi];
            result.cells.push_back(cell);
        }
    }
    return result;
}

std::string to_csv(const SimResult& result) {
    std::ostringstream out;
    out << "precoder,snr_db,ber,bit_errors,bits_total,mean_cpu_seconds,feasibility_failures\n";
    for (const SimCell& c : result.cells) {
        out << precoder_label(c.precoder) << ',' << format_double(c.snr_db) << ','
            << format_double(c.ber) << ',' << c.bit_errors << ',' << c.bits_total << ','
            << format_double(c.mean_cpu_seconds) << ',' << c.feasibility_failures << '\n';
    }
    return out.str();
}

std::string to_json_string(const SimResult& result) {
    nlohmann::json cfg;
    cfg["k_users"] = result.config.k_users;
    cfg["n_antennas"] = result.config.n_antennas;
    cfg["psk_order"] = result.config.psk_order;
    cfg["snr_grid_db"] = result.config.snr_grid_db;
    cfg["block_length"] = result.config.block_length;
    cfg["n_channels"] = result.config.n_channels;
    cfg["seed"] = result.config.seed;
    std::vector<std::string> tokens;
    for (PrecoderKind k : result.config.precoders) tokens.emplace_back(precoder_token(k));
    cfg["precoder_list"] = tokens;
    cfg["output_path"] = result.config.output_path;
    cfg["format"] = std::string(format_name(result.config.format));

    nlohmann::json rows = nlohmann::json::array();
    for (const SimCell& c : result.cells) {
        nlohmann::json row;
        row["precoder"] = std::string(precoder_label(c.precoder));
        row["snr_db"] = c.snr_db;
        row["ber"] = c.ber;
        row["bit_errors"] = c.bit_errors;
        row["bits_total"] = c.bits_total;
        row["mean_cpu_seconds"] = c.mean_cpu_seconds;
        row["feasibility_failures"] = c.feasibility_failures;
        rows.push_back(row);
    }
    nlohmann::json doc;
    doc["config"] = cfg;
    doc["results"] = rows;
    return doc.dump(2) + "\n";
}

SimResult sim_result_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("result JSON parse failed: ") + e.what());
    }
    SimResult result;
    const auto& cfg = doc.at("config");
    result.config.k_users = cfg.at("k_users").get<int>();
    result.config.n_antennas = cfg.at("n_antennas").get<int>();
    result.config.psk_order = cfg.at("psk_order").get<int>();
    result.config.snr_grid_db = cfg.at("snr_grid_db").get<std::vector<double>>();
    result.config.block_length = cfg.at("block_length").get<int>();
    result.config.n_channels = cfg.at("n_channels").get<int>();
    result.config.seed = cfg.at("seed").get<std::uint64_t>();
    result.config.precoders.clear();
    for (const auto& tok : cfg.at("precoder_list")) {
        const auto kind = parse_precoder(tok.get<std::string>());
        if (!kind) throw IoError("result JSON names an unknown precoder");
        result.config.precoders.push_back(*kind);
    }
    result.config.output_path = cfg.at("output_path").get<std::string>();
    const auto fmt = parse_format(cfg.at("format").get<std::string>());
    if (!fmt) throw IoError("result JSON names an unknown format");
    result.config.format = *fmt;

    for (const auto& row : doc.at("results")) {
        SimCell c;
        const auto kind = parse_precoder(row.at("precoder").get<std::string>());
        if (!kind) throw IoError("result JSON names an unknown precoder");
        c.precoder = *kind;
        c.snr_db = row.at("snr_db").get<double>();
        c.ber = row.at("ber").get<double>();
        c.bit_errors = row.at("bit_errors").get<std::uint64_t>();
        c.bits_total = row.at("bits_total").get<std::uint64_t>();
        c.mean_cpu_seconds = row.at("mean_cpu_seconds").get<double>();
        c.feasibility_failures = row.at("feasibility_failures").get<std::uint64_t>();
        result.cells.push_back(c);
    }
    return result;
}

void emit_results(const SimResult& result, const std::string& path, OutputFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << (format == OutputFormat::Csv ? to_csv(result) : to_json_string(result));
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace onebit
