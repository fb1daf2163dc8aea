#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mhop/config_io.hpp"

namespace mhop {

// Log-spaced snr sweep, parsed from "lo:hi:points".
struct SnrGrid {
    double lo = 1e-8;
    double hi = 10.0;
    int points = 40;

    static SnrGrid parse(const std::string& text);
    std::vector<double> values() const;  // ascending
};

struct CommonOptions {
    std::optional<std::filesystem::path> config;
    Overrides overrides;
    std::filesystem::path out_dir = ".";
    unsigned workers = 1;
};

struct TradeoffOptions {
    CommonOptions common;
    SnrGrid grid;
    // Frozen realization to load instead of drawing one from (seed, 0).
    std::optional<std::filesystem::path> channel_file;
    // Where to save the realization that was used.
    std::optional<std::filesystem::path> dump_channel;
};

struct CdfOptions {
    CommonOptions common;
    std::string scenario = "single";  // single | fig3
};

struct ConvergenceOptions {
    CommonOptions common;
    std::vector<int> n_list{16, 64, 256};
    int m_fixed = 1;  // slots held fixed while n_hops grows
    std::optional<double> chi_ref;  // skip estimation, use this reference
    std::optional<double> const_power;  // degenerate channel, beta fixed
};

struct EvtOptions {
    CommonOptions common;
    std::vector<int> n_list{4, 16, 64};
    std::optional<double> const_power;
};

// Each command writes its output files under out_dir and prints a short
// digest to console.  Returns a process exit code.
int cmd_tradeoff(const TradeoffOptions& options, std::ostream& console);
int cmd_cdf(const CdfOptions& options, std::ostream& console);
int cmd_convergence(const ConvergenceOptions& options, std::ostream& console);
int cmd_evt(const EvtOptions& options, std::ostream& console);

}  // namespace mhop
