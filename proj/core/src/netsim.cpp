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

#include "tcqkd/netsim.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace tcqkd {
namespace {

void check_channel(const ChannelModel& channel) {
    if (!(channel.loss_probability >= 0.0 && channel.loss_probability < 1.0)) {
        throw std::invalid_argument("channel loss probability must lie in [0, 1)");
    }
}

SessionResult run_one(const Registry& registry, const NetworkScenario& scenario, std::size_t index) {
    const auto& req = scenario.sessions[index];
    SessionResult out;
    out.index = index;
    out.requester = req.requester;
    out.responder = req.responder;
    out.protocol = req.config.protocol;
    out.seed = req.explicit_seed ? req.config.rng_seed : session_seed(scenario.seed, index);
    try {
        SessionConfig config = req.config;
        config.rng_seed = out.seed;
        out.latency_ticks = std::max(registry.channel(req.requester).latency_ticks,
                                     registry.channel(req.responder).latency_ticks);
        out.transcript = request_session(registry, req.requester, req.responder, config);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

void accumulate(Aggregate& agg, const SessionResult& r) {
    ++agg.sessions;
    if (!r.transcript) {
        ++agg.failed;
        return;
    }
    const auto& t = *r.transcript;
    ++agg.completed;
    agg.aborted += t.check.aborted ? 1 : 0;
    agg.mean_kept_fraction += t.kept_fraction();
    agg.mean_qber += t.check.error_rate();
    agg.mean_efficiency += t.efficiency_measured;
    agg.final_key_bits += t.distillation.alice_final.bits.size();
}

void finish(Aggregate& agg) {
    if (agg.completed == 0) return;
    const auto n = static_cast<double>(agg.completed);
    agg.mean_kept_fraction /= n;
    agg.mean_qber /= n;
    agg.mean_efficiency /= n;
}

}  // namespace

const UserId& Registry::register_user(const UserId& id, ChannelModel channel) {
    if (id.empty()) throw std::invalid_argument("user id must not be empty");
    if (contains(id)) throw DuplicateUser("user '" + id + "' is already registered");
    check_channel(channel);
    channels_.emplace(id, channel);
    order_.push_back(id);
    return order_.back();
}

const ChannelModel& Registry::channel(const UserId& id) const {
    const auto it = channels_.find(id);
    if (it == channels_.end()) throw UnknownUser("user '" + id + "' is not registered");
    return it->second;
}

void Registry::set_channel(const UserId& id, ChannelModel channel) {
    const auto it = channels_.find(id);
    if (it == channels_.end()) throw UnknownUser("user '" + id + "' is not registered");
    check_channel(channel);
    it->second = channel;
}

bool verify_identity(const Registry& /*registry*/, const UserId& /*user*/) { return true; }

double leg_loss(double session_loss, const ChannelModel& channel) {
    return 1.0 - (1.0 - session_loss) * (1.0 - channel.loss_probability);
}

SessionTranscript request_session(const Registry& registry, const UserId& requester, const UserId& responder,
                                  const SessionConfig& config) {
    const auto& alice = registry.channel(requester);
    const auto& bob = registry.channel(responder);
    if (requester == responder) throw std::invalid_argument("a user cannot open a session with itself");
    if (!verify_identity(registry, requester) || !verify_identity(registry, responder)) {
        throw std::invalid_argument("identity verification failed");
    }
    config.validate();
    return run_session(config, LegLoss{leg_loss(config.loss_probability, alice),
                                       leg_loss(config.loss_probability, bob)});
}

std::uint64_t session_seed(std::uint64_t scenario_seed, std::size_t index) {
    return split_seed(scenario_seed, static_cast<std::uint64_t>(index));
}

Registry build_registry(const NetworkScenario& scenario) {
    Registry registry;
    for (const auto& u : scenario.users) registry.register_user(u);
    for (const auto& [id, channel] : scenario.channels) registry.set_channel(id, channel);
    return registry;
}

NetworkReport run_network_scenario(const NetworkScenario& scenario, Execution mode, unsigned threads) {
    const Registry registry = build_registry(scenario);
    NetworkReport report;
    const std::size_t n = scenario.sessions.size();
    report.sessions.resize(n);

    if (mode == Execution::Sequential || n < 2) {
        for (std::size_t i = 0; i < n; ++i) report.sessions[i] = run_one(registry, scenario, i);
    } else {
        if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) report.sessions[i] = run_one(registry, scenario, i);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (const auto& r : report.sessions) {
        accumulate(report.by_protocol[r.protocol], r);
        accumulate(report.by_user[r.requester], r);
        if (r.responder != r.requester) accumulate(report.by_user[r.responder], r);
    }
    for (auto& [_, agg] : report.by_protocol) finish(agg);
    for (auto& [_, agg] : report.by_user) finish(agg);
    return report;
}

}  // namespace tcqkd
