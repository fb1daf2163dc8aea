#include "doctest.h"

#include <set>
#include <stdexcept>
#include <string>

#include "mhop/topology.hpp"

using namespace mhop;

namespace {

NetworkConfig make_config(int n_hops, int reuse_sep) {
    NetworkConfig cfg;
    cfg.n_hops = n_hops;
    cfg.reuse_sep = reuse_sep;
    return cfg;
}

std::string validation_message(const NetworkConfig& cfg) {
    try {
        cfg.validate();
    } catch (const std::invalid_argument& err) {
        return err.what();
    }
    return {};
}

}  // namespace

TEST_CASE("four hops with separation two split into two alternating phases") {
    const ReusePlan plan = build_reuse_plan(make_config(4, 2));
    CHECK(plan.slots == 2);
    REQUIRE(plan.phases.size() == 2);
    CHECK(plan.phases[0] == std::vector<int>{1, 3});
    CHECK(plan.phases[1] == std::vector<int>{2, 4});
    CHECK(plan.hop_distance == 0.25);
}

TEST_CASE("no reuse means no interferers on any hop") {
    const ReusePlan plan = build_reuse_plan(make_config(4, 4));
    CHECK(plan.slots == 1);
    for (const auto& sources : plan.interferers) CHECK(sources.empty());
}

TEST_CASE("interferer distances count terminal index gaps") {
    const ReusePlan plan = build_reuse_plan(make_config(4, 2));
    // Hop 1 is received at T2; the other phase-1 transmitter is T3, one hop
    // length away.  Hop 3 is received at T4 with T1 three hop lengths back.
    REQUIRE(plan.interferers[0].size() == 1);
    CHECK(plan.interferers[0][0].terminal == 3);
    CHECK(plan.interferers[0][0].distance == 0.25);
    REQUIRE(plan.interferers[2].size() == 1);
    CHECK(plan.interferers[2][0].terminal == 1);
    CHECK(plan.interferers[2][0].distance == 0.75);
    REQUIRE(plan.interferers[1].size() == 1);
    CHECK(plan.interferers[1][0].terminal == 4);
    CHECK(plan.interferers[1][0].distance == 0.25);
    REQUIRE(plan.interferers[3].size() == 1);
    CHECK(plan.interferers[3][0].terminal == 2);
    CHECK(plan.interferers[3][0].distance == 0.75);
}

TEST_CASE("hop to phase and slot mapping") {
    SUBCASE("eight hops, separation four") {
        const ReusePlan plan = build_reuse_plan(make_config(8, 4));
        const PhaseSlot ps = phase_of_hop(plan, 7);
        CHECK(ps.phase == 3);
        CHECK(ps.slot == 2);
    }
    SUBCASE("eight hops, no reuse") {
        const ReusePlan plan = build_reuse_plan(make_config(8, 8));
        const PhaseSlot ps = phase_of_hop(plan, 5);
        CHECK(ps.phase == 5);
        CHECK(ps.slot == 1);
    }
    SUBCASE("four hops, separation two") {
        const ReusePlan plan = build_reuse_plan(make_config(4, 2));
        const PhaseSlot ps = phase_of_hop(plan, 2);
        CHECK(ps.phase == 2);
        CHECK(ps.slot == 1);
    }
    SUBCASE("out of range hop index") {
        const ReusePlan plan = build_reuse_plan(make_config(4, 2));
        CHECK_THROWS_AS(phase_of_hop(plan, 0), std::out_of_range);
        CHECK_THROWS_AS(phase_of_hop(plan, 5), std::out_of_range);
    }
}

TEST_CASE("phases partition the hops and interferer sets have slots-1 entries") {
    const int cases[][2] = {{1, 1}, {2, 2}, {4, 2}, {8, 2}, {8, 4},
                            {8, 8}, {12, 3}, {12, 4}, {16, 2}};
    for (const auto& c : cases) {
        CAPTURE(c[0]);
        CAPTURE(c[1]);
        NetworkConfig cfg = make_config(c[0], c[1]);
        cfg.distance = 3.0;
        const ReusePlan plan = build_reuse_plan(cfg);

        std::set<int> seen;
        std::size_t total = 0;
        for (const auto& phase : plan.phases) {
            total += phase.size();
            seen.insert(phase.begin(), phase.end());
        }
        CHECK(total == static_cast<std::size_t>(cfg.n_hops));
        CHECK(seen.size() == static_cast<std::size_t>(cfg.n_hops));
        CHECK(*seen.begin() == 1);
        CHECK(*seen.rbegin() == cfg.n_hops);

        std::size_t interferer_total = 0;
        for (int n = 1; n <= cfg.n_hops; ++n) {
            const auto& sources = plan.interferers[n - 1];
            CHECK(sources.size() == static_cast<std::size_t>(plan.slots - 1));
            interferer_total += sources.size();
            for (const auto& src : sources) {
                // Same phase, at least K-1 hop lengths from the receiver.
                CHECK((src.terminal - n) % cfg.reuse_sep == 0);
                CHECK(src.distance >=
                      (cfg.reuse_sep - 1) * plan.hop_distance - 1e-15);
            }
        }
        CHECK(interferer_total ==
              static_cast<std::size_t>(cfg.n_hops) * (plan.slots - 1));

        // Any two transmitters of one phase are at least K hop lengths apart.
        for (const auto& phase : plan.phases)
            for (std::size_t i = 1; i < phase.size(); ++i)
                CHECK(phase[i] - phase[i - 1] >= cfg.reuse_sep);
    }
}

TEST_CASE("single hop baseline needs no separation") {
    const ReusePlan plan = build_reuse_plan(make_config(1, 1));
    CHECK(plan.slots == 1);
    CHECK(plan.phases == std::vector<std::vector<int>>{{1}});
    CHECK(plan.interferers[0].empty());
}

TEST_CASE("config validation names the offending field") {
    CHECK(validation_message(make_config(8, 3)).find("reuse_sep") !=
          std::string::npos);
    CHECK(validation_message(make_config(4, 1)).find("reuse_sep") !=
          std::string::npos);
    CHECK(validation_message(make_config(0, 1)).find("n_hops") !=
          std::string::npos);
    CHECK(validation_message(make_config(4, 8)).find("reuse_sep") !=
          std::string::npos);

    NetworkConfig cfg;
    cfg.distance = -1.0;
    CHECK(validation_message(cfg).find("distance") != std::string::npos);

    cfg = NetworkConfig{};
    cfg.pathloss_exp = 1.5;
    CHECK(validation_message(cfg).find("pathloss_exp") != std::string::npos);

    cfg = NetworkConfig{};
    cfg.n_taps = 4;
    cfg.n_tones = 2;
    cfg.pdp = {0.25, 0.25, 0.25, 0.25};
    CHECK(validation_message(cfg).find("n_taps") != std::string::npos);

    cfg = NetworkConfig{};
    cfg.pdp = {0.5, 0.5};
    CHECK(validation_message(cfg).find("pdp") != std::string::npos);

    cfg = NetworkConfig{};
    cfg.n_taps = 2;
    cfg.n_tones = 2;
    cfg.pdp = {0.7, 0.4};
    CHECK(validation_message(cfg).find("pdp") != std::string::npos);

    cfg = NetworkConfig{};
    cfg.pdp = {-1.0};
    CHECK(validation_message(cfg).find("pdp") != std::string::npos);

    cfg = NetworkConfig{};
    cfg.fading.tap_variance = 0.0;
    CHECK(validation_message(cfg).find("fading.variance") != std::string::npos);

    cfg = NetworkConfig{};
    cfg.snr = 0.0;
    CHECK(validation_message(cfg).find("snr") != std::string::npos);

    CHECK(validation_message(make_config(4, 2)).empty());
}
