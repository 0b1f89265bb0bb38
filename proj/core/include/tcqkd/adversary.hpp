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

// Attack models and the middleware that injects them into a session.
//
// An attack sees quantum registers while they are at the source or in flight
// and the public discussion afterwards. It never sees a party's private
// outcomes; the session driver enforces that boundary by only handing taps a
// Register and a PublicRecord.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tcqkd/qstate.hpp"
#include "tcqkd/rng.hpp"
#include "tcqkd/types.hpp"

namespace tcqkd {

struct NoAttack {
    bool operator==(const NoAttack&) const = default;
};

/// Eve measures one party's particle in flight in a basis drawn uniformly from
/// `basis_pool` and forwards a fresh eigenstate of her result. An empty pool
/// means the protocol's own basis pool.
struct InterceptResend {
    Party target = Party::Alice;
    std::vector<Basis> basis_pool;
    bool operator==(const InterceptResend&) const = default;
};

/// The center measures all three GHZ particles in `basis` before distributing
/// them, then runs the protocol honestly on its own (now disentangled) particle.
struct CheatingCenterMeasureAll {
    Basis basis = Basis::X;
    bool operator==(const CheatingCenterMeasureAll&) const = default;
};

/// Eve couples a two-qubit probe to the x-basis branches of Alice's and Bob's
/// particles. coupling 0 leaves the probe factorized; coupling 1 makes the four
/// probe states orthogonal.
struct AncillaEntangle {
    double coupling = 0.0;
    bool operator==(const AncillaEntangle&) const = default;
};

using AttackModel = std::variant<NoAttack, InterceptResend, CheatingCenterMeasureAll, AncillaEntangle>;

/// "None", "InterceptResend", "CheatingCenterMeasureAll", "AncillaEntangle".
std::string_view attack_kind(const AttackModel& attack);
bool is_attack_free(const AttackModel& attack);

/// Throws std::invalid_argument on bad parameters or an unsupported
/// (protocol, attack) pair.
void validate_attack(const AttackModel& attack, ProtocolId protocol);

/// {X, Y} for GHZ protocols, {X, Z} for Bell protocols.
std::vector<Basis> default_intercept_pool(ProtocolId protocol);
std::vector<Basis> effective_pool(const InterceptResend& attack, ProtocolId protocol);

/// Eve's probe readout: index of the x-basis branch (see ancilla_states).
struct AncillaLabel {
    int branch;
    bool operator==(const AncillaLabel&) const = default;
};

struct EveRecord {
    std::size_t position;
    std::variant<Basis, AncillaLabel> basis_used;
    Outcome outcome;
    std::optional<int> inferred_bit;  // Eve's guess of the shared key bit
};

std::string to_string(const std::variant<Basis, AncillaLabel>& used);

// ---- middleware -----------------------------------------------------------

enum class Holder { Center, Alice, Bob, Eve };

/// A multi-qubit state together with who holds each qubit (index-aligned).
class Register {
  public:
    Register(StateVector state, std::vector<Holder> holders);

    const StateVector& state() const { return state_; }
    const std::vector<Holder>& holders() const { return holders_; }
    bool holds(Holder h) const;
    /// First qubit held by `h`. Throws std::out_of_range if none.
    std::size_t index_of(Holder h) const;

    /// Measures and removes the first qubit held by `h`.
    Measurement measure(Holder h, Basis basis, double random_draw);
    /// Collapses the first qubit held by `h` onto `eigen` and removes it.
    /// Returns the probability of that outcome; the register is left
    /// unchanged when it is zero.
    double post_select(Holder h, BasisOutcome eigen);
    /// Inserts a one-qubit state at `position`.
    void insert(std::size_t position, Holder h, const StateVector& single);
    void reset(StateVector state, std::vector<Holder> holders);

  private:
    StateVector state_;
    std::vector<Holder> holders_;
};

/// Public information about one position once the bases are compared.
struct PublicRecord {
    std::size_t position;
    ProtocolId protocol;
    Announcement announcement;
    Basis alice_basis;
    Basis bob_basis;
    bool lost;
    bool kept;
};

class ChannelTap {
  public:
    virtual ~ChannelTap() = default;

    /// Before any particle leaves the source.
    virtual void at_source(Register&, std::size_t /*position*/) {}
    /// While Alice's and Bob's particles are in flight.
    virtual void in_transit(Register&, std::size_t /*position*/) {}
    /// After the legitimate parties measured whatever particles reached them.
    virtual void after_measurement(Register&, std::size_t /*position*/) {}
    /// After bases and announcements are public.
    virtual void after_public(const PublicRecord&) {}

    const std::vector<EveRecord>& records() const { return records_; }

  protected:
    std::vector<EveRecord> records_;
};

/// Builds the tap for `attack`. A NoAttack model yields a tap that does
/// nothing. `seed` feeds Eve's private randomness only.
std::unique_ptr<ChannelTap> make_tap(const AttackModel& attack, ProtocolId protocol, std::uint64_t seed);

// ---- exact oracles --------------------------------------------------------

struct AttackPrediction {
    double kept_probability = 0.0;
    /// P(check mismatch | kept).
    double detection_rate = 0.0;
    /// P(Eve's inferred bit equals Bob's key bit | kept).
    double eve_agreement = 0.5;
    /// P(check mismatch | kept, alice basis, bob basis), indexed [alice][bob]
    /// by Basis value; NaN where that pair is never kept.
    std::array<std::array<double, 3>, 3> detection_by_bases{};
};

/// Enumerates every discrete choice of one position (bases, source labels,
/// Eve's basis, Born-rule outcomes, Eve's coin) with its exact weight. No
/// sampling.
AttackPrediction predict_attack(ProtocolId protocol, const AttackModel& attack);

/// predict_attack(...).detection_rate; 0 for NoAttack.
double predict_detection_rate(ProtocolId protocol, const AttackModel& attack);

// ---- ancilla probe ----------------------------------------------------------

/// Branch order of the probe states: (Alice, Bob) x-results
/// 0: (+,+)  1: (-,-)  2: (+,-)  3: (-,+).
inline constexpr std::array<std::array<Outcome, 2>, 4> kAncillaBranches{{
    {Outcome::Plus, Outcome::Plus},
    {Outcome::Minus, Outcome::Minus},
    {Outcome::Plus, Outcome::Minus},
    {Outcome::Minus, Outcome::Plus},
}};

/// Four two-qubit probe states with real pairwise overlap 1 - coupling.
std::array<StateVector, 4> ancilla_states(double coupling);

/// Couples the probe to the x-branches of qubits `alice` and `bob` of `state`
/// and appends the two probe qubits at the end.
StateVector entangle_ancilla(const StateVector& state, std::size_t alice, std::size_t bob, double coupling);

/// The GHZ triplet (center, Alice, Bob) coupled to the probe: 5 qubits.
StateVector ancilla_attack(const StateVector& ghz, double coupling);

struct AncillaProjection {
    /// Squared norm of the projected vector.
    double probability;
    /// Normalized (center, probe0, probe1) state left after the projection.
    StateVector remaining;
    /// Probe vectors attached to the center's x+ and x- components
    /// (unnormalized, as they appear in the projected sum).
    std::array<std::vector<Amplitude>, 2> probe_given_center;
    /// Relative weight of the Alice-x+ and Alice-x- terms in the projection;
    /// Eve's guess probability of Alice's bit is the larger one.
    std::array<double, 2> alice_weights;
    double guess_probability;
};

/// Projects Alice's and Bob's qubits of a 5-qubit probe-coupled GHZ state onto
/// sum_k alpha_k |branch_k>. Throws std::invalid_argument if alpha is not
/// normalized.
AncillaProjection eve_projection(const StateVector& joint, const std::array<Amplitude, 4>& alpha);

/// Best probability of guessing Alice's x-result on a kept x-x position by
/// measuring the probe (Helstrom bound between the two possible probe states).
double ancilla_guess_probability(double coupling);

}  // namespace tcqkd
