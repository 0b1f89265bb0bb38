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

// Serialized forms of transcripts, network reports and scenario files.
// Every JSON document carries "schema_version".

#pragma once

#include <string>
#include <string_view>

#include "tcqkd/adversary.hpp"
#include "tcqkd/netsim.hpp"
#include "tcqkd/protocols.hpp"

namespace tcqkd {

inline constexpr int kSchemaVersion = 1;

/// Pretty-printed JSON, byte-identical for identical transcripts.
std::string transcript_json(const SessionTranscript& transcript);

/// One line: kept fraction, QBER, key lengths, efficiency vs bound.
std::string transcript_summary(const SessionTranscript& transcript);

/// Summary CSV: protocol, num_states, loss, attack, kept_fraction, qber,
/// aborted, key_bits, efficiency_measured, efficiency_bound.
std::string transcript_csv_header();
std::string transcript_csv_row(const SessionTranscript& transcript);

std::string network_report_json(const NetworkReport& report);
/// One row per session.
std::string network_report_csv(const NetworkReport& report);

/// Parses a scenario document:
///   {"seed": 7, "users": ["u1", ...],
///    "channels": {"u1": {"loss_probability": 0.1, "latency_ticks": 3}},
///    "sessions": [{"requester": "u1", "responder": "u2",
///                  "config": {"protocol": "GHZ1", "num_states": 1000, ...}}]}
/// A session config that sets "rng_seed" keeps it; otherwise the seed is
/// derived from the scenario seed. Throws std::invalid_argument.
NetworkScenario parse_scenario_json(std::string_view text);

/// Textual attack spec: "none", "intercept-resend[:alice|bob]",
/// "cheating-center-x|y|z", "ancilla[:<coupling>]". Throws
/// std::invalid_argument.
AttackModel parse_attack_spec(std::string_view spec);
std::string attack_spec(const AttackModel& attack);

}  // namespace tcqkd
