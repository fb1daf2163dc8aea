#include "mhop/topology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mhop {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& rule) {
    throw std::invalid_argument(field + ": " + rule);
}

}  // namespace

void NetworkConfig::validate() const {
    if (n_hops < 1) fail("n_hops", "must be a positive integer");
    if (reuse_sep < 1 || reuse_sep > n_hops)
        fail("reuse_sep", "must satisfy 1 <= reuse_sep <= n_hops (got " +
                              std::to_string(reuse_sep) + " with n_hops " +
                              std::to_string(n_hops) + ")");
    if (n_hops % reuse_sep != 0)
        fail("reuse_sep", "must divide n_hops (got " + std::to_string(reuse_sep) +
                              " with n_hops " + std::to_string(n_hops) + ")");
    if (reuse_sep == 1 && n_hops > 1)
        fail("reuse_sep",
             "reuse_sep 1 with more than one hop would make a relay transmit "
             "and receive in the same phase; use reuse_sep >= 2");
    if (!(distance > 0.0)) fail("distance", "must be positive");
    if (!(pathloss_exp >= 2.0)) fail("pathloss_exp", "must be at least 2");
    if (n_tones < 1) fail("n_tones", "must be a positive integer");
    if (n_taps < 1) fail("n_taps", "must be a positive integer");
    if (n_taps > n_tones)
        fail("n_taps", "must not exceed n_tones (got " + std::to_string(n_taps) +
                           " taps, " + std::to_string(n_tones) + " tones)");
    if (pdp.size() != static_cast<std::size_t>(n_taps))
        fail("pdp", "must have exactly n_taps entries");
    double sum = 0.0;
    for (double w : pdp) {
        if (!(w >= 0.0)) fail("pdp", "entries must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) fail("pdp", "entries must sum to 1");
    if (!(fading.tap_variance > 0.0)) fail("fading.variance", "must be positive");
    if (!(snr > 0.0)) fail("snr", "must be positive");
}

ReusePlan build_reuse_plan(const NetworkConfig& cfg) {
    cfg.validate();

    ReusePlan plan;
    plan.n_hops = cfg.n_hops;
    plan.reuse_sep = cfg.reuse_sep;
    plan.slots = cfg.slots();
    plan.hop_distance = cfg.distance / cfg.n_hops;

    plan.phases.assign(cfg.reuse_sep, {});
    for (int k = 1; k <= cfg.reuse_sep; ++k) {
        plan.phases[k - 1].reserve(plan.slots);
        for (int m = 1; m <= plan.slots; ++m)
            plan.phases[k - 1].push_back((m - 1) * cfg.reuse_sep + k);
    }

    // Hop n is sent by T_n at (n-1)*D/N and received by T_{n+1} at n*D/N.
    // A co-scheduled transmitter T_l sits |l - 1 - n| hop lengths from that
    // receiver; the schedule guarantees |l - 1 - n| >= K - 1 > 0.
    plan.interferers.assign(cfg.n_hops, {});
    for (int n = 1; n <= cfg.n_hops; ++n) {
        const int phase = (n - 1) % cfg.reuse_sep + 1;
        for (int l : plan.phases[phase - 1]) {
            if (l == n) continue;
            plan.interferers[n - 1].push_back(
                {l, std::abs(l - 1 - n) * plan.hop_distance});
        }
    }
    return plan;
}

PhaseSlot phase_of_hop(const ReusePlan& plan, int hop) {
    if (hop < 1 || hop > plan.n_hops)
        throw std::out_of_range("phase_of_hop: hop " + std::to_string(hop) +
                                " outside 1.." + std::to_string(plan.n_hops));
    return {(hop - 1) % plan.reuse_sep + 1, (hop - 1) / plan.reuse_sep + 1};
}

}  // namespace mhop
