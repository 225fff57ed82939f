#include "onebit/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onebit/selfcheck.hpp"
#include "onebit/sim.hpp"

namespace onebit {

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    for (const std::string& part : split_csv(text)) {
        try {
            std::size_t pos = 0;
            values.push_back(std::stod(part, &pos));
            if (pos != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ConfigInvalid(std::string("invalid ") + what + " value '" + part + "'");
        }
    }
    if (values.empty()) throw ConfigInvalid(std::string(what) + " list is empty");
    return values;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> values;
    for (double v : parse_double_list(text, what)) {
        if (v != static_cast<int>(v))
            throw ConfigInvalid(std::string(what) + " values must be integers");
        values.push_back(static_cast<int>(v));
    }
    return values;
}

std::vector<PrecoderKind> parse_precoder_list(const std::string& text) {
    std::vector<PrecoderKind> kinds;
    for (const std::string& name : split_csv(text)) {
        const auto kind = parse_precoder(name);
        if (!kind)
            throw ConfigInvalid("unknown precoder '" + name +
                                "'; valid options: " + valid_precoder_tokens());
        kinds.push_back(*kind);
    }
    if (kinds.empty()) throw ConfigInvalid("precoder list is empty");
    return kinds;
}

// Flag values as strings, so a config file can override them uniformly.
struct RawScenario {
    std::string users = "8";
    std::string antennas = "32";
    std::string psk = "8";
    std::string snr = "0,5,10,15,20";
    std::string block = "10";
    std::string channels = "100";
    std::string seed = "1";
    std::string precoders = "nl1p,zf1bit,zfinf,msm";
    std::string out;
    std::string format = "csv";
};

int parse_int(const std::string& text, const char* what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigInvalid(std::string("invalid ") + what + " value '" + text + "'");
    }
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigInvalid(std::string("invalid ") + what + " value '" + text + "'");
    }
}

// key=value lines mirroring the CLI flags; values from the file win.
void apply_config_file(RawScenario& raw, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigInvalid("config file line " + std::to_string(line_no) +
                                ": expected key=value");
        std::string key = line.substr(first, eq - first);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t' ||
                                  value.back() == '\r'))
            value.pop_back();
        const auto vfirst = value.find_first_not_of(" \t");
        value = vfirst == std::string::npos ? std::string() : value.substr(vfirst);

        if (key == "users") raw.users = value;
        else if (key == "antennas") raw.antennas = value;
        else if (key == "psk") raw.psk = value;
        else if (key == "snr") raw.snr = value;
        else if (key == "block") raw.block = value;
        else if (key == "channels") raw.channels = value;
        else if (key == "seed") raw.seed = value;
        else if (key == "precoders") raw.precoders = value;
        else if (key == "out") raw.out = value;
        else if (key == "format") raw.format = value;
        else
            throw ConfigInvalid("config file line " + std::to_string(line_no) +
                                ": unknown key '" + key + "'");
    }
}

ScenarioConfig to_scenario(const RawScenario& raw) {
    ScenarioConfig cfg;
    cfg.k_users = parse_int(raw.users, "users");
    cfg.n_antennas = parse_int(raw.antennas, "antennas");
    cfg.psk_order = parse_int(raw.psk, "psk");
    cfg.snr_grid_db = parse_double_list(raw.snr, "snr");
    cfg.block_length = parse_int(raw.block, "block");
    cfg.n_channels = parse_int(raw.channels, "channels");
    cfg.seed = parse_u64(raw.seed, "seed");
    cfg.precoders = parse_precoder_list(raw.precoders);
    cfg.output_path = raw.out;
    const auto fmt = parse_format(raw.format);
    if (!fmt) throw ConfigInvalid("unknown format '" + raw.format + "'; valid options: csv, json");
    cfg.format = *fmt;
    return cfg;
}

void add_scenario_flags(CLI::App* cmd, RawScenario& raw, std::string& config_path) {
    cmd->add_option("--users", raw.users, "number of users K");
    cmd->add_option("--antennas", raw.antennas, "number of transmit antennas N_t");
    cmd->add_option("--psk", raw.psk, "PSK order M (4, 8, 16, 32)");
    cmd->add_option("--snr", raw.snr, "comma-separated SNR grid in dB");
    cmd->add_option("--block", raw.block, "symbol slots per channel realization");
    cmd->add_option("--channels", raw.channels, "number of channel realizations");
    cmd->add_option("--seed", raw.seed, "master RNG seed");
    cmd->add_option("--precoders", raw.precoders, "comma-separated precoder list");
    cmd->add_option("--out", raw.out, "output file (stdout when empty)");
    cmd->add_option("--format", raw.format, "output format: csv or json");
    cmd->add_option("--config", config_path, "key=value file overriding the flags");
}

int run_ber(const RawScenario& raw_in, const std::string& config_path) {
    RawScenario raw = raw_in;
    if (!config_path.empty()) apply_config_file(raw, config_path);
    const ScenarioConfig cfg = to_scenario(raw);

    const SimResult result = run_scenario(cfg);
    if (cfg.output_path.empty()) {
        std::cout << (cfg.format == OutputFormat::Csv ? to_csv(result) : to_json_string(result));
    } else {
        emit_results(result, cfg.output_path, cfg.format);
        std::cout << "wrote " << result.cells.size() << " result rows to " << cfg.output_path
                  << "\n";
    }
    return 0;
}

int run_time(const RawScenario& raw_in, const std::string& config_path) {
    RawScenario raw = raw_in;
    if (!config_path.empty()) apply_config_file(raw, config_path);
    const std::vector<int> user_counts = parse_int_list(raw.users, "users");

    std::ostringstream csv;
    csv << "precoder,k_users,mean_cpu_seconds\n";
    for (int k : user_counts) {
        RawScenario one = raw;
        one.users = std::to_string(k);
        ScenarioConfig cfg = to_scenario(one);
        if (cfg.snr_grid_db.size() != 1)
            throw ConfigInvalid("time sweep expects a single --snr value");
        const SimResult result = run_scenario(cfg);
        for (std::size_t pi = 0; pi < cfg.precoders.size(); ++pi) {
            const SimCell& c = result.cells[pi * cfg.snr_grid_db.size()];
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6g", c.mean_cpu_seconds);
            csv << precoder_label(c.precoder) << ',' << k << ',' << buf << '\n';
            std::cout << "K=" << k << "  " << precoder_label(c.precoder) << ": " << buf
                      << " s per precoding call\n";
        }
    }
    if (!raw.out.empty()) {
        std::ofstream out(raw.out, std::ios::binary);
        if (!out) throw IoError("cannot open '" + raw.out + "' for writing");
        out << csv.str();
        if (!out) throw IoError("write to '" + raw.out + "' failed");
        std::cout << "wrote timing sweep to " << raw.out << "\n";
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"one-bit constructive-interference precoding simulator"};
    app.require_subcommand(1);

    RawScenario ber_raw;
    std::string ber_config;
    CLI::App* ber = app.add_subcommand("ber", "Monte-Carlo BER vs SNR scenario");
    add_scenario_flags(ber, ber_raw, ber_config);

    RawScenario time_raw;
    time_raw.users = "2,4,8";
    time_raw.antennas = "64";
    time_raw.snr = "20";
    time_raw.block = "5";
    time_raw.channels = "10";
    time_raw.precoders = "nl1p,msm,zf1bit";
    std::string time_config;
    CLI::App* time_cmd =
        app.add_subcommand("time", "runtime sweep over user counts at fixed N_t and SNR");
    add_scenario_flags(time_cmd, time_raw, time_config);

    CLI::App* verify =
        app.add_subcommand("verify", "run the oracle and property suite on small instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ber->parsed()) return run_ber(ber_raw, ber_config);
        if (time_cmd->parsed()) return run_time(time_raw, time_config);
        if (verify->parsed()) return run_selfcheck(std::cout) ? 0 : 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace onebit
