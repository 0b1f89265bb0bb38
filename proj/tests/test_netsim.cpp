// Copyright 2026 The tcqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "tcqkd/netsim.hpp"

namespace tcqkd {
namespace {

SessionConfig cfg(ProtocolId p, std::size_t n, double loss = 0.0) {
    SessionConfig c;
    c.protocol = p;
    c.num_states = n;
    c.loss_probability = loss;
    return c;
}

TEST(Registry, RegisterAndDuplicate) {
    Registry r;
    EXPECT_EQ(r.register_user("alice"), "alice");
    EXPECT_TRUE(r.contains("alice"));
    EXPECT_THROW(r.register_user("alice"), DuplicateUser);
    EXPECT_THROW(r.register_user(""), std::invalid_argument);
    EXPECT_THROW(r.register_user("bob", ChannelModel{1.0, 0}), std::invalid_argument);
    EXPECT_EQ(r.size(), 1u);
}

TEST(Registry, TenUsersInOrder) {
    Registry r;
    for (int i = 0; i < 10; ++i) r.register_user("u" + std::to_string(i));
    EXPECT_EQ(r.size(), 10u);
    EXPECT_EQ(r.users().front(), "u0");
    EXPECT_EQ(r.users().back(), "u9");
    EXPECT_THROW(r.channel("u10"), UnknownUser);
}

TEST(Session, RejectsSelfAndUnknown) {
    Registry r;
    r.register_user("u1");
    r.register_user("u2");
    EXPECT_THROW(request_session(r, "u1", "u1", cfg(ProtocolId::Ghz1, 100)), std::invalid_argument);
    EXPECT_THROW(request_session(r, "u1", "u3", cfg(ProtocolId::Ghz1, 100)), UnknownUser);
    EXPECT_THROW(request_session(r, "u0", "u2", cfg(ProtocolId::Ghz1, 100)), UnknownUser);
    EXPECT_TRUE(verify_identity(r, "u1"));
}

TEST(Session, Ghz1KeptHalf) {
    Registry r;
    r.register_user("u1");
    r.register_user("u2");
    const auto t = request_session(r, "u1", "u2", cfg(ProtocolId::Ghz1, 10000));
    EXPECT_NEAR(t.kept_fraction(), 0.5, 0.02);
}

TEST(Session, Bell4HalfLossPerLeg) {
    Registry r;
    r.register_user("u1", {0.5, 1});
    r.register_user("u2", {0.5, 2});
    auto c = cfg(ProtocolId::Bell4, 10000);
    c.rng_seed = 3;
    const auto t = request_session(r, "u1", "u2", c);
    EXPECT_DOUBLE_EQ(t.legs.alice, 0.5);
    EXPECT_NEAR(t.kept_fraction(), 0.125, 0.02);
}

TEST(Session, LegLossComposition) {
    EXPECT_DOUBLE_EQ(leg_loss(0.0, {0.3, 0}), 0.3);
    EXPECT_DOUBLE_EQ(leg_loss(0.5, {0.5, 0}), 0.75);
    EXPECT_DOUBLE_EQ(leg_loss(0.2, {}), 0.2);
}

TEST(Session, LossAccountingWithinThreeSigma) {
    Registry r;
    r.register_user("near", {0.1, 0});
    r.register_user("far", {0.4, 0});
    for (ProtocolId p : kAllProtocols) {
        auto c = cfg(p, 10000, 0.05);
        c.rng_seed = 11;
        const auto t = request_session(r, "near", "far", c);
        const double sift = p == ProtocolId::Ghz3 ? 1.0 : 0.5;
        const double mean = sift * (1 - leg_loss(0.05, {0.1, 0})) * (1 - leg_loss(0.05, {0.4, 0}));
        EXPECT_NEAR(t.kept_fraction(), mean, 3 * std::sqrt(mean * (1 - mean) / 10000)) << to_string(p);
    }
}

NetworkScenario three_users() {
    NetworkScenario s;
    s.users = {"u1", "u2", "u3"};
    s.seed = 7;
    s.sessions = {{"u1", "u2", cfg(ProtocolId::Ghz3, 2000), false},
                  {"u2", "u3", cfg(ProtocolId::Ghz3, 2000), false},
                  {"u3", "u1", cfg(ProtocolId::Ghz3, 2000), false}};
    return s;
}

TEST(Scenario, ThreePairwiseGhz3) {
    const auto report = run_network_scenario(three_users());
    ASSERT_EQ(report.sessions.size(), 3u);
    for (const auto& s : report.sessions) {
        ASSERT_TRUE(s.transcript.has_value());
        EXPECT_EQ(s.transcript->kept_fraction(), 1.0);
        EXPECT_EQ(s.transcript->distillation.alice_final.bits, s.transcript->distillation.bob_final.bits);
        EXPECT_FALSE(s.aborted());
        EXPECT_EQ(s.seed, session_seed(7, s.index));
    }
    const auto& agg = report.by_protocol.at(ProtocolId::Ghz3);
    EXPECT_EQ(agg.completed, 3u);
    EXPECT_EQ(agg.aborted, 0u);
    EXPECT_DOUBLE_EQ(agg.mean_kept_fraction, 1.0);
    EXPECT_EQ(report.by_user.at("u1").sessions, 2u);
}

TEST(Scenario, OnlyAttackedSessionAborts) {
    auto s = three_users();
    for (auto& req : s.sessions) req.config.qber_abort_threshold = 0.05;
    s.sessions[1].config.protocol = ProtocolId::Ghz1;
    s.sessions[1].config.attack = InterceptResend{Party::Bob, {}};
    const auto report = run_network_scenario(s);
    EXPECT_FALSE(report.sessions[0].aborted());
    EXPECT_TRUE(report.sessions[1].aborted());
    EXPECT_FALSE(report.sessions[2].aborted());
}

TEST(Scenario, FailureIsRecordedAndScenarioContinues) {
    auto s = three_users();
    s.sessions.insert(s.sessions.begin() + 1, SessionRequest{"u1", "ghost", cfg(ProtocolId::Ghz1, 100), false});
    s.sessions.push_back(SessionRequest{"u2", "u2", cfg(ProtocolId::Ghz1, 100), false});
    const auto report = run_network_scenario(s);
    ASSERT_EQ(report.sessions.size(), 5u);
    EXPECT_TRUE(report.sessions[1].error.has_value());
    EXPECT_FALSE(report.sessions[1].transcript.has_value());
    EXPECT_TRUE(report.sessions[4].error.has_value());
    EXPECT_TRUE(report.sessions[2].transcript.has_value());
    EXPECT_EQ(report.by_protocol.at(ProtocolId::Ghz1).failed, 2u);
}

TEST(Scenario, Empty) {
    NetworkScenario s;
    s.users = {"a", "b"};
    const auto report = run_network_scenario(s);
    EXPECT_TRUE(report.sessions.empty());
    EXPECT_TRUE(report.by_protocol.empty());
}

TEST(Scenario, BuildRegistryChecks) {
    NetworkScenario s;
    s.users = {"a", "a"};
    EXPECT_THROW(build_registry(s), DuplicateUser);
    s.users = {"a"};
    s.channels["b"] = {};
    EXPECT_THROW(build_registry(s), UnknownUser);
}

TEST(Scenario, ExplicitSeedKept) {
    auto s = three_users();
    s.sessions[0].config.rng_seed = 1234;
    s.sessions[0].explicit_seed = true;
    const auto report = run_network_scenario(s);
    EXPECT_EQ(report.sessions[0].seed, 1234u);
    EXPECT_EQ(report.sessions[1].seed, session_seed(7, 1));
}

TEST(Scenario, ParallelEqualsSequential) {
    NetworkScenario s;
    s.seed = 99;
    s.users = {"a", "b", "c", "d"};
    s.channels["c"] = {0.2, 5};
    const char* pairs[][2] = {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}, {"a", "c"}, {"b", "d"}};
    int i = 0;
    for (const auto& p : pairs) {
        s.sessions.push_back({p[0], p[1], cfg(kAllProtocols[i % 5], 1500, 0.1), false});
        ++i;
    }
    const auto seq = run_network_scenario(s, Execution::Sequential);
    const auto par = run_network_scenario(s, Execution::Parallel, 3);
    ASSERT_EQ(seq.sessions.size(), par.sessions.size());
    for (std::size_t k = 0; k < seq.sessions.size(); ++k) {
        const auto& a = *seq.sessions[k].transcript;
        const auto& b = *par.sessions[k].transcript;
        EXPECT_EQ(seq.sessions[k].seed, par.sessions[k].seed);
        EXPECT_EQ(seq.sessions[k].latency_ticks, par.sessions[k].latency_ticks);
        EXPECT_EQ(a.events, b.events);
        EXPECT_EQ(a.alice_raw_key, b.alice_raw_key);
        EXPECT_EQ(a.distillation.alice_final.bits, b.distillation.alice_final.bits);
    }
    EXPECT_EQ(seq.sessions[1].latency_ticks, 5u);
}

}  // namespace
}  // namespace tcqkd
