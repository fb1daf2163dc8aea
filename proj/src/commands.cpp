#include "mhop/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhop/channel.hpp"
#include "mhop/linkmath.hpp"
#include "mhop/montecarlo.hpp"
#include "mhop/topology.hpp"
#include "mhop/wideband.hpp"

namespace mhop {

namespace {

using nlohmann::json;

constexpr double kLn2 = std::numbers::ln2;

// Energy per information bit over noise density, dB; rate in nats/s/Hz.
double ebn0_db(double snr, double rate_nats) {
    return 10.0 * std::log10(snr * kLn2 / rate_nats);
}

std::string fmt6(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

// Output files are opened in binary mode so line endings stay LF on every
// platform and files diff cleanly across machines.
std::ofstream open_output(const std::filesystem::path& dir,
                          const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json_file(const std::filesystem::path& dir, const std::string& name,
                     const json& doc) {
    auto out = open_output(dir, name);
    out << doc.dump(2) << '\n';
}

json load_json_file(const std::filesystem::path& path,
                    const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument(what + ": cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(what + ": " + path.string() +
                                    " is not valid JSON: " + err.what());
    }
}

struct Scenario {
    std::string tag;
    NetworkConfig net;
};

// Comparison sweep: single hop versus eight hops with and without reuse,
// each in flat and frequency-selective mode, all sharing one seed.
std::vector<Scenario> comparison_scenarios(const NetworkConfig& base) {
    struct Shape {
        int n, k;
    };
    struct Freq {
        int v, w;
    };
    constexpr Shape shapes[] = {{1, 1}, {8, 8}, {8, 4}};
    constexpr Freq freqs[] = {{1, 1}, {2, 4}};
    std::vector<Scenario> out;
    for (const auto& f : freqs)
        for (const auto& s : shapes) {
            NetworkConfig net = base;
            net.n_hops = s.n;
            net.reuse_sep = s.k;
            net.n_taps = f.v;
            net.n_tones = f.w;
            net.pdp.assign(f.v, 1.0 / f.v);
            char tag[32];
            std::snprintf(tag, sizeof tag, "n%d_k%d_v%dw%d", s.n, s.k, f.v,
                          f.w);
            out.push_back({tag, net});
        }
    return out;
}

json run_cdf_scenario(const NetworkConfig& net, const McConfig& mc,
                      unsigned workers, const std::filesystem::path& dir,
                      const std::string& csv_name, std::ostream& console) {
    net.validate();
    RunOptions run_options;
    run_options.workers = workers;
    const McSummary summary = run_ensemble(net, mc, run_options);
    const RunManifest manifest = make_manifest(net, mc);

    auto csv = open_output(dir, csv_name);
    csv << "# manifest_hash=" << manifest.hash << '\n';
    csv << "value,cdf_fixed,cdf_adaptive\n";
    for (std::size_t i = 0; i < summary.grid.size(); ++i)
        csv << format_g17(summary.grid[i]) << ','
            << format_g17(summary.fixed.cdf[i]) << ','
            << format_g17(summary.adaptive.cdf[i]) << '\n';

    console << "  " << csv_name << ": median " << fmt6(summary.fixed.mi.q50)
            << " fixed / " << fmt6(summary.adaptive.mi.q50)
            << " adaptive nats/s/Hz, dominance "
            << (summary.dominance_violations == 0 ? "ok" : "VIOLATED") << '\n';
    if (summary.flagged_trials > 0)
        console << "  " << csv_name << ": " << summary.flagged_trials
                << " flagged trials\n";

    const ParsedRun run{net, mc, manifest};
    return json{{"csv", csv_name},
                {"manifest", manifest_json(run)},
                {"results", summary_to_json(summary)},
                {"dominance_verified", summary.dominance_violations == 0}};
}

// Degenerate channels have no mass near zero power, so the integrability
// hint only applies when sampling the fading law.
PowerSampler pick_sampler(const NetworkConfig& net,
                          const std::optional<double>& const_power,
                          int& taps_hint) {
    if (const_power) {
        if (!(*const_power > 0.0))
            throw std::invalid_argument("const-power: must be positive");
        taps_hint = 0;
        return constant_power_sampler(*const_power);
    }
    taps_hint = net.n_taps;
    return hop_power_sampler(net.fading, net.pdp);
}

}  // namespace

SnrGrid SnrGrid::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::istringstream in(text);
    for (std::string part; std::getline(in, part, ':');)
        parts.push_back(part);
    if (parts.size() != 3)
        throw std::invalid_argument("snr-grid: expected lo:hi:points");
    SnrGrid grid;
    try {
        std::size_t eaten = 0;
        grid.lo = std::stod(parts[0], &eaten);
        if (eaten != parts[0].size()) throw std::invalid_argument("");
        grid.hi = std::stod(parts[1], &eaten);
        if (eaten != parts[1].size()) throw std::invalid_argument("");
        grid.points = std::stoi(parts[2], &eaten);
        if (eaten != parts[2].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("snr-grid: expected numeric lo:hi:points");
    }
    return grid;
}

std::vector<double> SnrGrid::values() const {
    if (!(lo > 0.0))
        throw std::invalid_argument("snr-grid: lo must be positive");
    if (!(hi >= lo)) throw std::invalid_argument("snr-grid: hi must be >= lo");
    if (points < 1)
        throw std::invalid_argument("snr-grid: points must be >= 1");
    std::vector<double> out;
    out.reserve(points);
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    const double log_lo = std::log(lo);
    const double log_hi = std::log(hi);
    for (int i = 0; i < points; ++i)
        out.push_back(
            std::exp(log_lo + (log_hi - log_lo) * i / (points - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

int cmd_tradeoff(const TradeoffOptions& options, std::ostream& console) {
    const ParsedRun run =
        parse_config(options.common.config, options.common.overrides);
    const ReusePlan plan = build_reuse_plan(run.net);

    ChannelRealization real;
    if (options.channel_file) {
        real = realization_from_json(
            load_json_file(*options.channel_file, "channel file"), run.net,
            plan);
    } else {
        TrialRng rng(run.mc.seed, 0);
        real = draw_realization(run.net, plan, rng);
    }
    if (options.dump_channel) {
        std::ofstream out(*options.dump_channel, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " +
                                     options.dump_channel->string());
        out << realization_to_json(real).dump(2) << '\n';
    }
    const ToneGrid tones = tones_from_taps(real, run.net.n_tones);

    auto csv = open_output(options.common.out_dir, "tradeoff.csv");
    csv << "# manifest_hash=" << run.manifest.hash << '\n';
    csv << "snr,I_fixed,I_adaptive,ebn0_fixed_dB,ebn0_adaptive_dB\n";
    for (double snr : options.grid.values()) {
        const double i_fixed = e2e_mutual_information(run.net, plan, tones,
                                                      snr, Strategy::fixed_rate);
        const double i_adaptive = e2e_mutual_information(
            run.net, plan, tones, snr, Strategy::rate_adaptive);
        csv << format_g17(snr) << ',' << format_g17(i_fixed) << ','
            << format_g17(i_adaptive) << ','
            << format_g17(ebn0_db(snr, i_fixed)) << ','
            << format_g17(ebn0_db(snr, i_adaptive)) << '\n';
    }

    const WidebandMetrics fixed =
        wideband_metrics(run.net, plan, tones, Strategy::fixed_rate);
    const WidebandMetrics adaptive =
        wideband_metrics(run.net, plan, tones, Strategy::rate_adaptive);
    csv << "# ebn0_min_fixed=" << format_g17(fixed.ebn0_closed)
        << " ebn0_min_adaptive=" << format_g17(adaptive.ebn0_closed)
        << " ebn0_min_fixed_numeric=" << format_g17(fixed.ebn0_numeric)
        << " ebn0_min_adaptive_numeric=" << format_g17(adaptive.ebn0_numeric)
        << " s0_closed=" << format_g17(fixed.slope_closed)
        << " s0_numeric_fixed=" << format_g17(fixed.slope_numeric)
        << " s0_numeric_adaptive=" << format_g17(adaptive.slope_numeric)
        << '\n';

    console << "tradeoff: wrote "
            << (options.common.out_dir / "tradeoff.csv").string() << '\n';
    console << "  manifest_hash=" << run.manifest.hash << '\n';
    console << "  ebn0_min fixed " << fmt6(fixed.ebn0_closed) << " ("
            << fmt6(10.0 * std::log10(fixed.ebn0_closed)) << " dB), adaptive "
            << fmt6(adaptive.ebn0_closed) << " ("
            << fmt6(10.0 * std::log10(adaptive.ebn0_closed)) << " dB)\n";
    console << "  s0_closed " << fmt6(fixed.slope_closed)
            << ", s0_numeric fixed " << fmt6(fixed.slope_numeric)
            << ", adaptive " << fmt6(adaptive.slope_numeric) << '\n';
    if (fixed.probe_argmin_mismatch || adaptive.probe_argmin_mismatch)
        console << "  note: weakest hop by power differs from weakest hop by "
                   "probed rate\n";
    return 0;
}

int cmd_cdf(const CdfOptions& options, std::ostream& console) {
    const ParsedRun run =
        parse_config(options.common.config, options.common.overrides);
    const auto& dir = options.common.out_dir;

    if (options.scenario == "single") {
        console << "cdf: seed " << run.mc.seed << ", " << run.mc.trials
                << " trials\n";
        json entry = run_cdf_scenario(run.net, run.mc, options.common.workers,
                                      dir, "cdf.csv", console);
        write_json_file(dir, "summary.json", entry);
        console << "  wrote " << (dir / "summary.json").string() << '\n';
        return 0;
    }
    if (options.scenario == "fig3") {
        console << "cdf: comparison sweep, seed " << run.mc.seed << ", "
                << run.mc.trials << " trials per scenario\n";
        json scenarios = json::array();
        for (const auto& scenario : comparison_scenarios(run.net)) {
            json entry =
                run_cdf_scenario(scenario.net, run.mc, options.common.workers,
                                 dir, "cdf_" + scenario.tag + ".csv", console);
            entry["tag"] = scenario.tag;
            scenarios.push_back(std::move(entry));
        }
        write_json_file(dir, "summary.json", json{{"scenarios", scenarios}});
        console << "  wrote " << (dir / "summary.json").string() << '\n';
        return 0;
    }
    throw std::invalid_argument("scenario: must be single or fig3");
}

int cmd_convergence(const ConvergenceOptions& options, std::ostream& console) {
    const ParsedRun run =
        parse_config(options.common.config, options.common.overrides);
    if (options.n_list.empty())
        throw std::invalid_argument("n-list: must not be empty");
    if (options.m_fixed < 1)
        throw std::invalid_argument("m-fixed: must be >= 1");

    int taps_hint = 0;
    const PowerSampler sampler =
        pick_sampler(run.net, options.const_power, taps_hint);

    ChiEstimate chi;
    if (options.chi_ref) {
        if (!(*options.chi_ref > 0.0))
            throw std::invalid_argument("chi-ref: must be positive");
        chi.value = *options.chi_ref;
    } else {
        // Fresh stream block, disjoint from the per-N convergence trials.
        const std::uint64_t chi_seed = stream_seed(
            run.mc.seed, options.n_list.size() * run.mc.trials);
        chi = estimate_chi(sampler, options.m_fixed, run.mc.trials, chi_seed,
                           taps_hint);
    }

    const auto rows = chi_convergence_check(
        sampler, options.n_list, options.m_fixed, run.mc.trials, run.mc.seed,
        chi.value, run.net.distance, run.net.pathloss_exp);

    auto csv = open_output(options.common.out_dir, "convergence.csv");
    csv << "# manifest_hash=" << run.manifest.hash << '\n';
    csv << "# m_fixed=" << options.m_fixed << " chi_ref="
        << format_g17(chi.value) << " chi_se=" << format_g17(chi.standard_error)
        << " chi_samples=" << chi.samples
        << " heavy_tail_warning=" << (chi.heavy_tail_warning ? 1 : 0) << '\n';
    csv << "n_hops,mean_ratio,ratio_stddev,trials\n";
    for (const auto& row : rows)
        csv << row.n_hops << ',' << format_g17(row.mean_ratio) << ','
            << format_g17(row.ratio_stddev) << ',' << run.mc.trials << '\n';

    console << "convergence: wrote "
            << (options.common.out_dir / "convergence.csv").string() << '\n';
    console << "  chi_ref " << fmt6(chi.value);
    if (chi.samples > 0)
        console << " (se " << fmt6(chi.standard_error) << ", " << chi.samples
                << " samples)";
    console << '\n';
    if (chi.heavy_tail_warning)
        console << "  warning: single-tap fading puts positive density at "
                   "zero power, the reciprocal mean diverges with sample "
                   "size\n";
    for (const auto& row : rows)
        console << "  N=" << row.n_hops << ": ratio " << fmt6(row.mean_ratio)
                << " +- " << fmt6(row.ratio_stddev) << '\n';
    return 0;
}

int cmd_evt(const EvtOptions& options, std::ostream& console) {
    const ParsedRun run =
        parse_config(options.common.config, options.common.overrides);
    if (options.n_list.empty())
        throw std::invalid_argument("n-list: must not be empty");

    int taps_hint = 0;
    const PowerSampler sampler =
        pick_sampler(run.net, options.const_power, taps_hint);
    const EvtReport report =
        evt_diagnostics(sampler, options.n_list, run.mc.trials, run.mc.seed);

    auto csv = open_output(options.common.out_dir, "evt.csv");
    csv << "# manifest_hash=" << run.manifest.hash << '\n';
    csv << "n_hops,gamma,a_n,b_n,ks_distance,converged,samples\n";
    for (const auto& entry : report.entries)
        csv << entry.n_hops << ',' << format_g17(entry.fit.shape) << ','
            << format_g17(entry.fit.scale) << ','
            << format_g17(entry.fit.location) << ','
            << format_g17(entry.fit.ks_distance) << ','
            << (entry.fit.converged ? 1 : 0) << ',' << run.mc.trials << '\n';

    console << "evt: wrote " << (options.common.out_dir / "evt.csv").string()
            << '\n';
    for (const auto& entry : report.entries) {
        console << "  N=" << entry.n_hops;
        if (entry.fit.converged)
            console << ": gamma " << fmt6(entry.fit.shape) << ", a_n "
                    << fmt6(entry.fit.scale) << " (N*a_n "
                    << fmt6(entry.fit.scale * entry.n_hops) << "), KS "
                    << fmt6(entry.fit.ks_distance) << '\n';
        else
            console << ": fit did not converge\n";
    }
    return 0;
}

}  // namespace mhop
