// Command-line front end: tradeoff, cdf, convergence, evt.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhop/commands.hpp"

namespace {

void add_common(CLI::App* cmd, mhop::CommonOptions& common,
                std::optional<std::uint64_t>& seed,
                std::optional<std::uint64_t>& trials,
                std::optional<double>& snr) {
    cmd->add_option("--config", common.config, "config JSON (or run manifest)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "base seed for all random streams");
    cmd->add_option("--trials", trials, "Monte Carlo trial count");
    cmd->add_option("--snr", snr, "linear snr override");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--workers", common.workers, "trial worker threads")
        ->check(CLI::Range(1u, 256u));
}

void finish_overrides(mhop::CommonOptions& common,
                      const std::optional<std::uint64_t>& seed,
                      const std::optional<std::uint64_t>& trials,
                      const std::optional<double>& snr,
                      const std::optional<double>& rate) {
    common.overrides.seed = seed;
    common.overrides.trials = trials;
    common.overrides.snr = snr;
    common.overrides.target_rate = rate;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wideband multihop relay network simulator"};
    app.require_subcommand(1);

    mhop::TradeoffOptions tradeoff;
    mhop::CdfOptions cdf;
    mhop::ConvergenceOptions convergence;
    mhop::EvtOptions evt;

    struct PerCmd {
        std::optional<std::uint64_t> seed, trials;
        std::optional<double> snr, rate;
        std::string snr_grid;
    };
    PerCmd ptr, pcdf, pconv, pevt;

    CLI::App* cmd_tr = app.add_subcommand(
        "tradeoff", "rate and energy-per-bit sweep for one frozen channel");
    add_common(cmd_tr, tradeoff.common, ptr.seed, ptr.trials, ptr.snr);
    cmd_tr->add_option("--snr-grid", ptr.snr_grid,
                       "lo:hi:points, log spaced (default 1e-8:10:40)");
    cmd_tr->add_option("--channel", tradeoff.channel_file,
                       "load a frozen channel realization JSON")
        ->check(CLI::ExistingFile);
    cmd_tr->add_option("--dump-channel", tradeoff.dump_channel,
                       "save the channel realization that was used");

    CLI::App* cmd_cd = app.add_subcommand(
        "cdf", "empirical distribution of the end-to-end rate");
    add_common(cmd_cd, cdf.common, pcdf.seed, pcdf.trials, pcdf.snr);
    cmd_cd->add_option("--scenario", cdf.scenario, "single | fig3")
        ->check(CLI::IsMember({"single", "fig3"}));
    cmd_cd->add_option("--rate", pcdf.rate, "outage threshold, nats/s/Hz");

    CLI::App* cmd_cv = app.add_subcommand(
        "convergence",
        "normalized energy-per-bit ratio versus hop count, slots fixed");
    add_common(cmd_cv, convergence.common, pconv.seed, pconv.trials,
               pconv.snr);
    cmd_cv->add_option("--n-list", convergence.n_list,
                       "hop counts (default 16 64 256)")
        ->delimiter(',');
    cmd_cv->add_option("--m-fixed", convergence.m_fixed,
                       "simultaneous transmissions held fixed");
    cmd_cv->add_option("--chi-ref", convergence.chi_ref,
                       "reference reciprocal-power mean (default: estimated)");
    cmd_cv->add_option("--const-power", convergence.const_power,
                       "degenerate channel with this per-hop power");

    CLI::App* cmd_ev = app.add_subcommand(
        "evt", "extreme-value fit of the weakest hop power versus hop count");
    add_common(cmd_ev, evt.common, pevt.seed, pevt.trials, pevt.snr);
    cmd_ev->add_option("--n-list", evt.n_list, "hop counts (default 4 16 64)")
        ->delimiter(',');
    cmd_ev->add_option("--const-power", evt.const_power,
                       "degenerate channel with this per-hop power");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_tr->parsed()) {
            finish_overrides(tradeoff.common, ptr.seed, ptr.trials, ptr.snr,
                             ptr.rate);
            if (!ptr.snr_grid.empty())
                tradeoff.grid = mhop::SnrGrid::parse(ptr.snr_grid);
            return mhop::cmd_tradeoff(tradeoff, std::cout);
        }
        if (cmd_cd->parsed()) {
            finish_overrides(cdf.common, pcdf.seed, pcdf.trials, pcdf.snr,
                             pcdf.rate);
            return mhop::cmd_cdf(cdf, std::cout);
        }
        if (cmd_cv->parsed()) {
            finish_overrides(convergence.common, pconv.seed, pconv.trials,
                             pconv.snr, pconv.rate);
            return mhop::cmd_convergence(convergence, std::cout);
        }
        if (cmd_ev->parsed()) {
            finish_overrides(evt.common, pevt.seed, pevt.trials, pevt.snr,
                             pevt.rate);
            return mhop::cmd_evt(evt, std::cout);
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
