#include "mhop/config_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "mhop/channel.hpp"

namespace mhop {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& rule) {
    throw std::invalid_argument(field + ": " + rule);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& scope) {
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            fail(scope + item.key(), "unknown configuration key");
}

template <typename T>
T take(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(key, "has the wrong type");
    }
}

json fading_to_json(const FadingSpec& fading) {
    return json{{"mean_re", fading.tap_mean.real()},
                {"mean_im", fading.tap_mean.imag()},
                {"variance", fading.tap_variance}};
}

json config_to_json(const NetworkConfig& net, const McConfig& mc) {
    return json{{"n_hops", net.n_hops},
                {"reuse_sep", net.reuse_sep},
                {"distance", net.distance},
                {"pathloss_exp", net.pathloss_exp},
                {"n_tones", net.n_tones},
                {"n_taps", net.n_taps},
                {"pdp", net.pdp},
                {"fading", fading_to_json(net.fading)},
                {"snr", net.snr},
                {"trials", mc.trials},
                {"seed", mc.seed},
                {"target_rate", mc.target_rate}};
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json complex_to_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& v) {
    if (!v.is_array() || v.size() != 2)
        throw std::invalid_argument(
            "channel file: complex values must be [re, im] pairs");
    return {v[0].get<double>(), v[1].get<double>()};
}

json stats_to_json(const SummaryStats& s) {
    return json{{"mean", s.mean},
                {"variance", s.variance},
                {"q01", s.q01},
                {"q10", s.q10},
                {"q50", s.q50}};
}

json strategy_to_json(const StrategySummary& s) {
    return json{{"mi", stats_to_json(s.mi)},
                {"ebn0_min", stats_to_json(s.ebn0_min)},
                {"p_out", s.p_out},
                {"p_out_se", s.p_out_interval.se},
                {"cdf", s.cdf}};
}

const char* family_name(EvtFit::Family family) {
    switch (family) {
        case EvtFit::Family::gumbel_type: return "gumbel";
        case EvtFit::Family::frechet_type: return "frechet";
        case EvtFit::Family::weibull_type: return "weibull";
    }
    return "unknown";
}

}  // namespace

std::string format_g17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string manifest_hash(const nlohmann::json& resolved_config) {
    const std::string canon = resolved_config.dump();
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

ParsedRun parse_config_json(const nlohmann::json& doc, const Overrides& o) {
    const json* cfg = &doc;
    if (doc.is_object() && doc.contains("config")) {
        reject_unknown_keys(doc,
                            {"config", "tool_version", "normalization",
                             "manifest_hash", "timestamp"},
                            "");
        cfg = &doc.at("config");
    }
    if (!cfg->is_object())
        throw std::invalid_argument("config: document must be a JSON object");

    reject_unknown_keys(*cfg,
                        {"n_hops", "reuse_sep", "distance", "pathloss_exp",
                         "n_tones", "n_taps", "pdp", "fading", "snr", "trials",
                         "seed", "target_rate"},
                        "");

    ParsedRun run;
    run.net.n_hops = take(*cfg, "n_hops", 1);
    run.net.reuse_sep = take(*cfg, "reuse_sep", run.net.n_hops);
    run.net.distance = take(*cfg, "distance", 1.0);
    run.net.pathloss_exp = take(*cfg, "pathloss_exp", 4.0);
    run.net.n_tones = take(*cfg, "n_tones", 1);
    run.net.n_taps = take(*cfg, "n_taps", 1);

    if (cfg->contains("pdp")) {
        run.net.pdp = take(*cfg, "pdp", std::vector<double>{});
    } else if (run.net.n_taps >= 1) {
        run.net.pdp.assign(run.net.n_taps, 1.0 / run.net.n_taps);
    }

    if (cfg->contains("fading")) {
        const json& f = cfg->at("fading");
        if (!f.is_object()) fail("fading", "must be an object");
        reject_unknown_keys(f, {"mean_re", "mean_im", "variance"}, "fading.");
        run.net.fading.tap_mean = {take(f, "mean_re", 0.0),
                                   take(f, "mean_im", 0.0)};
        run.net.fading.tap_variance = take(f, "variance", 1.0);
    }

    run.net.snr = o.snr.value_or(take(*cfg, "snr", 1.0));

    // Unsigned fields go through a signed read first; nlohmann would
    // otherwise wrap "trials": -3 into a huge positive count.
    const auto trials_raw = o.trials
        ? static_cast<std::int64_t>(*o.trials)
        : take(*cfg, "trials", static_cast<std::int64_t>(10000));
    if (trials_raw < 1) fail("trials", "must be at least 1");
    run.mc.trials = static_cast<std::uint64_t>(trials_raw);

    run.mc.target_rate = o.target_rate.value_or(take(*cfg, "target_rate", 0.0));

    if (o.seed) {
        run.mc.seed = *o.seed;
    } else if (cfg->contains("seed")) {
        // get<uint64_t> would wrap a negative value instead of failing, and
        // documents built in code may store small seeds as signed integers.
        const json& seed_node = cfg->at("seed");
        if (!seed_node.is_number_unsigned() && seed_node.is_number_integer() &&
            seed_node.get<std::int64_t>() < 0)
            fail("seed", "must be non-negative");
        run.mc.seed = take(*cfg, "seed", static_cast<std::uint64_t>(0));
    } else {
        // No seed given anywhere; draw one and record it below so the run
        // can still be reproduced from its manifest.
        std::random_device entropy;
        run.mc.seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    }

    run.net.validate();
    run.mc.validate();

    run.manifest = make_manifest(run.net, run.mc);
    return run;
}

RunManifest make_manifest(const NetworkConfig& net, const McConfig& mc) {
    RunManifest manifest;
    manifest.resolved_config = config_to_json(net, mc);
    manifest.hash = manifest_hash(manifest.resolved_config);
    return manifest;
}

ParsedRun parse_config(const std::optional<std::filesystem::path>& file,
                       const Overrides& o) {
    if (!file) return parse_config_json(nlohmann::json::object(), o);
    std::ifstream in(*file);
    if (!in)
        throw std::invalid_argument("config: cannot open " + file->string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::invalid_argument("config: " + file->string() + " is not valid JSON: " +
                                    err.what());
    }
    return parse_config_json(doc, o);
}

nlohmann::json manifest_json(const ParsedRun& run) {
    const double power = fading_power(run.net.fading);
    return nlohmann::json{
        {"config", run.manifest.resolved_config},
        {"tool_version", std::string(kToolVersion)},
        {"normalization",
         {{"channel_power", "unit_total_average"},
          {"fading_power_scale", 1.0 / power},
          {"snr_reference", "total_transmit_power_over_total_noise"}}},
        {"manifest_hash", run.manifest.hash},
        {"timestamp", timestamp_utc()}};
}

nlohmann::json realization_to_json(const ChannelRealization& real) {
    json taps = json::array();
    for (const auto& z : real.signal_taps) taps.push_back(complex_to_json(z));
    json itaps = json::array();
    for (const auto& row : real.interference_taps) {
        json hop_row = json::array();
        for (const auto& z : row) hop_row.push_back(complex_to_json(z));
        itaps.push_back(std::move(hop_row));
    }
    return json{{"n_hops", real.n_hops},
                {"n_taps", real.n_taps},
                {"signal_taps", std::move(taps)},
                {"interference_taps", std::move(itaps)}};
}

ChannelRealization realization_from_json(const nlohmann::json& doc,
                                         const NetworkConfig& cfg,
                                         const ReusePlan& plan) {
    reject_unknown_keys(
        doc, {"n_hops", "n_taps", "signal_taps", "interference_taps"},
        "channel file: ");
    ChannelRealization real;
    real.n_hops = take(doc, "n_hops", 0);
    real.n_taps = take(doc, "n_taps", 0);
    if (real.n_hops != cfg.n_hops)
        fail("channel file: n_hops", "does not match the configuration");
    if (real.n_taps != cfg.n_taps)
        fail("channel file: n_taps", "does not match the configuration");

    const json& taps = doc.at("signal_taps");
    if (!taps.is_array() ||
        taps.size() != static_cast<std::size_t>(cfg.n_hops) * cfg.n_taps)
        fail("channel file: signal_taps", "must hold n_hops*n_taps entries");
    for (const auto& v : taps) real.signal_taps.push_back(complex_from_json(v));

    const json& itaps = doc.at("interference_taps");
    if (!itaps.is_array() || itaps.size() != static_cast<std::size_t>(cfg.n_hops))
        fail("channel file: interference_taps", "must hold one row per hop");
    real.interference_taps.resize(cfg.n_hops);
    for (int hop = 0; hop < cfg.n_hops; ++hop) {
        const auto expected = plan.interferers[hop].size() * cfg.n_taps;
        const json& row = itaps[hop];
        if (!row.is_array() || row.size() != expected)
            fail("channel file: interference_taps",
                 "row " + std::to_string(hop + 1) + " must hold " +
                     std::to_string(expected) + " entries");
        for (const auto& v : row)
            real.interference_taps[hop].push_back(complex_from_json(v));
    }
    return real;
}

nlohmann::json summary_to_json(const McSummary& summary) {
    return json{
        {"grid", summary.grid},
        {"fixed", strategy_to_json(summary.fixed)},
        {"adaptive", strategy_to_json(summary.adaptive)},
        {"chi",
         {{"value", summary.chi.value},
          {"standard_error", summary.chi.standard_error},
          {"samples", summary.chi.samples},
          {"heavy_tail_warning", summary.chi.heavy_tail_warning}}},
        {"evt",
         {{"family", family_name(summary.evt.family)},
          {"shape", summary.evt.shape},
          {"scale", summary.evt.scale},
          {"location", summary.evt.location},
          {"ks_distance", summary.evt.ks_distance},
          {"converged", summary.evt.converged}}},
        {"flagged_trials", summary.flagged_trials},
        {"dominance_violations", summary.dominance_violations},
        {"metadata",
         {{"config", config_to_json(summary.metadata.net, summary.metadata.mc)},
          {"fading_power_scale", summary.metadata.fading_power_scale}}}};
}

}  // namespace mhop
