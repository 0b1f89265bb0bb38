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

// A star network around one trusted center. Users register once, each with
// its own quantum channel to the center, and then ask the center for
// pairwise sessions on demand.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcqkd/protocols.hpp"

namespace tcqkd {

using UserId = std::string;

struct ChannelModel {
    double loss_probability = 0.0;  // per particle, in [0, 1)
    std::uint64_t latency_ticks = 0;
    bool operator==(const ChannelModel&) const = default;
};

class DuplicateUser : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class UnknownUser : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class Registry {
  public:
    /// Throws DuplicateUser if `id` is taken, std::invalid_argument for an
    /// empty id or a bad channel.
    const UserId& register_user(const UserId& id, ChannelModel channel = {});

    bool contains(const UserId& id) const { return channels_.count(id) != 0; }
    /// Throws UnknownUser.
    const ChannelModel& channel(const UserId& id) const;
    void set_channel(const UserId& id, ChannelModel channel);

    std::size_t size() const { return order_.size(); }
    /// In registration order.
    const std::vector<UserId>& users() const { return order_; }

  private:
    std::map<UserId, ChannelModel> channels_;
    std::vector<UserId> order_;
};

/// Identity verification before a session is granted. Always passes; kept as
/// the place to plug in an authentication scheme.
bool verify_identity(const Registry& registry, const UserId& user);

/// Combined erasure probability of one leg: the session's own loss and the
/// user's channel loss act independently.
double leg_loss(double session_loss, const ChannelModel& channel);

/// The center runs `config` with `requester` as Alice and `responder` as Bob.
/// Throws UnknownUser for an unregistered party and std::invalid_argument for
/// a self-session or invalid config.
SessionTranscript request_session(const Registry& registry, const UserId& requester, const UserId& responder,
                                  const SessionConfig& config);

struct SessionRequest {
    UserId requester;
    UserId responder;
    SessionConfig config;
    /// When false the session seed is derived from the scenario seed.
    bool explicit_seed = false;
};

struct NetworkScenario {
    std::vector<UserId> users;
    std::map<UserId, ChannelModel> channels;  // users absent here get the default channel
    std::vector<SessionRequest> sessions;
    std::uint64_t seed = 0;
};

/// split_seed(scenario_seed, index).
std::uint64_t session_seed(std::uint64_t scenario_seed, std::size_t index);

/// Builds the registry. Throws DuplicateUser, or UnknownUser for a channel of
/// an undeclared user.
Registry build_registry(const NetworkScenario& scenario);

struct SessionResult {
    std::size_t index = 0;
    UserId requester;
    UserId responder;
    ProtocolId protocol = ProtocolId::Ghz1;
    std::uint64_t seed = 0;
    /// Slower of the two channels.
    std::uint64_t latency_ticks = 0;
    std::optional<SessionTranscript> transcript;
    std::optional<std::string> error;

    bool aborted() const { return transcript && transcript->check.aborted; }
};

struct Aggregate {
    std::size_t sessions = 0;
    std::size_t completed = 0;  // ran to the end, aborted or not
    std::size_t aborted = 0;
    std::size_t failed = 0;  // rejected with an error
    double mean_kept_fraction = 0.0;  // over completed sessions
    double mean_qber = 0.0;
    double mean_efficiency = 0.0;
    std::size_t final_key_bits = 0;
};

struct NetworkReport {
    std::vector<SessionResult> sessions;
    std::map<ProtocolId, Aggregate> by_protocol;
    std::map<UserId, Aggregate> by_user;  // each user owns one channel
};

enum class Execution { Sequential, Parallel };

/// Runs every session in declared order (or on worker threads; results are
/// identical). A failing session records its error and the scenario goes on.
NetworkReport run_network_scenario(const NetworkScenario& scenario, Execution mode = Execution::Sequential,
                                   unsigned threads = 0);

}  // namespace tcqkd
