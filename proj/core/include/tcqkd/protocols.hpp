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

// Session driver for the five trusted-center key distribution schemes.
//
// Per position the driver prepares the entangled state, lets the center
// measure or label it, transmits the two user particles over lossy legs
// (where an attack tap may act), has Alice and Bob measure in random bases,
// and applies the scheme's keep rule. After all positions it runs the
// correlation check on a random subset of kept positions, maps Alice's
// outcomes onto Bob's through the correlation tables, and distills the keys.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tcqkd/adversary.hpp"
#include "tcqkd/correlation.hpp"
#include "tcqkd/postproc.hpp"
#include "tcqkd/qstate.hpp"
#include "tcqkd/rng.hpp"
#include "tcqkd/types.hpp"

namespace tcqkd {

struct SessionConfig {
    ProtocolId protocol = ProtocolId::Ghz1;
    std::size_t num_states = 1000;
    double check_fraction = 0.1;
    double qber_abort_threshold = 0.0;
    double loss_probability = 0.0;  // per transmitted particle
    std::uint64_t rng_seed = 0;
    AttackModel attack = NoAttack{};
    double epsilon = kDefaultEpsilon;  // privacy amplification security parameter

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

/// Independent erasure probabilities of the center->Alice and center->Bob legs.
struct LegLoss {
    double alice = 0.0;
    double bob = 0.0;
};

struct PositionRecord {
    std::size_t index = 0;
    bool lost = false;
    Announcement announcement;
    Basis alice_basis = Basis::X;
    Basis bob_basis = Basis::X;
    std::optional<Outcome> alice_outcome;  // empty if the particle never arrived
    std::optional<Outcome> bob_outcome;
    bool kept = false;
    bool used_for_check = false;
};

/// Steps of one position in the order the driver performed them.
enum class EventKind {
    Prepared,        // source state created (Bell schemes: labelled pair)
    CenterMeasured,  // center measured its GHZ particle
    Announced,       // center's result or label made public
    AliceMeasured,
    BobMeasured,
    BasesDisclosed,  // Alice and Bob published their bases
};
std::string_view to_string(EventKind kind);

struct SessionEvent {
    std::size_t position;
    EventKind kind;
    bool operator==(const SessionEvent&) const = default;
};

struct CheckReport {
    std::size_t checked = 0;
    std::size_t errors = 0;
    bool aborted = false;
    bool empty_check = false;  // nothing was checked; reported, never aborts
    /// [alice basis][bob basis] -> {checked, errors}
    std::array<std::array<std::array<std::size_t, 2>, 3>, 3> by_bases{};

    double error_rate() const { return checked == 0 ? 0.0 : static_cast<double>(errors) / checked; }
    std::optional<double> error_rate(Basis alice, Basis bob) const;
};

struct AdversaryReport {
    AttackModel attack;
    std::vector<EveRecord> records;
    std::optional<double> predicted_detection_rate;
    double observed_detection_rate = 0.0;
    std::optional<double> predicted_eve_agreement;
    /// Fraction of kept positions where Eve's inferred bit equals Bob's bit.
    std::optional<double> observed_eve_agreement;
    std::size_t eve_guesses = 0;
};

struct SessionTranscript {
    SessionConfig config;
    LegLoss legs;
    std::vector<PositionRecord> positions;
    std::vector<SessionEvent> events;
    CheckReport check;
    Bits alice_raw_key;
    Bits bob_raw_key;
    DistillationReport distillation;
    double efficiency_measured = 0.0;
    double efficiency_bound = 0.0;
    std::optional<AdversaryReport> adversary;

    std::size_t kept_count() const;
    std::size_t lost_count() const;
    double kept_fraction() const;
};

// ---- protocol rules ---------------------------------------------------------

/// Measurement bases available to Alice and Bob: {X, Y} for GHZ schemes,
/// {X, Z} for Bell schemes.
std::array<Basis, 2> basis_pool(ProtocolId protocol);

/// Labels the center chooses from in BELL4 / BELL5.
std::array<TwoQubitLabel, 4> center_labels(ProtocolId protocol);

/// GHZ3: the center measures in X when Alice's and Bob's bases agree, in Y
/// otherwise. Throws std::invalid_argument for a Z basis.
Basis center_basis_rule_p3(Basis alice_basis, Basis bob_basis);

/// Whether a position with this announcement and these bases carries a
/// deterministic Alice/Bob correlation the scheme uses. Throws
/// std::invalid_argument if the announcement type or a basis does not fit the
/// protocol.
bool keep_rule(ProtocolId protocol, const CenterLabel& announcement, Basis alice_basis, Basis bob_basis);

/// Bob's outcome as fixed by the announcement and Alice's result. Throws
/// std::logic_error if the combination is not deterministic.
Outcome consistency_map(ProtocolId protocol, const CenterLabel& announcement, BasisOutcome own,
                        Basis peer_basis);

/// Bob encodes his outcome (Plus -> 0, Minus -> 1); Alice encodes her
/// prediction of Bob's outcome. Throws std::invalid_argument if the position
/// was not kept.
int encode_bit(ProtocolId protocol, const PositionRecord& position, Party party);

/// Marks floor(check_fraction * kept) kept positions, chosen uniformly, as
/// check positions and compares Bob's outcome there against the correlation
/// table.
CheckReport eavesdrop_check(std::span<PositionRecord> positions, ProtocolId protocol, double check_fraction,
                            double abort_threshold, Rng& rng);

/// Asymptotic key bits per prepared state: 1 for GHZ3, 1/2 otherwise.
double efficiency_bound(ProtocolId protocol);

/// Four-particle time-reserved EPR comparison scheme.
inline constexpr double kTimeReservedBaseline = 0.125;

/// Final key bits / prepared states.
double measured_efficiency(const SessionTranscript& transcript);

// ---- driver -------------------------------------------------------------------

/// Runs one session with config.loss_probability on both legs.
SessionTranscript run_session(const SessionConfig& config);

/// Runs one session with explicit per-leg loss (config.loss_probability is
/// ignored).
SessionTranscript run_session(const SessionConfig& config, LegLoss legs);

}  // namespace tcqkd
