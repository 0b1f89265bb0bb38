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

#include "tcqkd/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcqkd {
namespace {

constexpr std::size_t kNoLabel = 12;

std::size_t label_index(const CenterLabel& label) {
    if (const auto* bo = std::get_if<BasisOutcome>(&label)) {
        return static_cast<std::size_t>(bo->basis) * 2 + static_cast<std::size_t>(bo->outcome);
    }
    return 6 + static_cast<std::size_t>(std::get<TwoQubitLabel>(label));
}

CenterLabel label_from_index(std::size_t i) {
    if (i < 6) return BasisOutcome{static_cast<Basis>(i / 2), static_cast<Outcome>(i % 2)};
    return static_cast<TwoQubitLabel>(i - 6);
}

// Bob's outcome, if determined, for every (announcement, Alice basis, Alice
// outcome, Bob basis). Built once from the conditional pair states.
class PeerTable {
  public:
    PeerTable() {
        for (std::size_t l = 0; l < kNoLabel; ++l) {
            const auto pair = conditional_pair(label_from_index(l));
            for (std::size_t ab = 0; ab < 3; ++ab) {
                for (std::size_t ao = 0; ao < 2; ++ao) {
                    for (std::size_t bb = 0; bb < 3; ++bb) {
                        table_[key(l, ab, ao, bb)] =
                            predict_peer(pair, {static_cast<Basis>(ab), static_cast<Outcome>(ao)},
                                         static_cast<Basis>(bb));
                    }
                }
            }
        }
    }

    std::optional<Outcome> lookup(const CenterLabel& label, BasisOutcome alice, Basis bob) const {
        return table_[key(label_index(label), static_cast<std::size_t>(alice.basis),
                          static_cast<std::size_t>(alice.outcome), static_cast<std::size_t>(bob))];
    }

  private:
    static std::size_t key(std::size_t l, std::size_t ab, std::size_t ao, std::size_t bb) {
        return ((l * 3 + ab) * 2 + ao) * 3 + bb;
    }
    std::array<std::optional<Outcome>, kNoLabel * 18> table_{};
};

const PeerTable& peer_table() {
    static const PeerTable table;
    return table;
}

void require_ghz_announcement(ProtocolId protocol, const CenterLabel& announcement) {
    if (!std::holds_alternative<BasisOutcome>(announcement)) {
        throw std::invalid_argument(std::string(to_string(protocol)) +
                                    " expects the center's basis/outcome as announcement");
    }
}

TwoQubitLabel require_label(ProtocolId protocol, const CenterLabel& announcement) {
    const auto* label = std::get_if<TwoQubitLabel>(&announcement);
    if (label == nullptr) {
        throw std::invalid_argument(std::string(to_string(protocol)) +
                                    " expects a two-qubit state label as announcement");
    }
    const auto allowed = center_labels(protocol);
    if (std::find(allowed.begin(), allowed.end(), *label) == allowed.end()) {
        throw std::invalid_argument(std::string(to_string(*label)) + " is not prepared by " +
                                    std::string(to_string(protocol)));
    }
    return *label;
}

void require_pool(ProtocolId protocol, Basis b) {
    const auto pool = basis_pool(protocol);
    if (b != pool[0] && b != pool[1]) {
        throw std::invalid_argument(std::string(to_string(protocol)) + " does not measure in the " +
                                    std::string(to_string(b)) + " basis");
    }
}

Basis pick(const std::array<Basis, 2>& pool, double draw) { return draw < 0.5 ? pool[0] : pool[1]; }

// Uniform draws consumed per position, in order. Every position consumes all of
// them so that loss and attack settings never shift the legitimate stream.
enum Draw : std::size_t {
    kSource,  // GHZ2 center basis / Bell label
    kAliceBasis,
    kBobBasis,
    kLossAlice,
    kLossBob,
    kCenterOutcome,
    kAliceOutcome,
    kBobOutcome,
    kDrawsPerPosition,
};

}  // namespace

std::string_view to_string(ProtocolId p) {
    switch (p) {
        case ProtocolId::Ghz1: return "GHZ1";
        case ProtocolId::Ghz2: return "GHZ2";
        case ProtocolId::Ghz3: return "GHZ3";
        case ProtocolId::Bell4: return "BELL4";
        case ProtocolId::Bell5: return "BELL5";
    }
    return "?";
}

ProtocolId parse_protocol(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto p : kAllProtocols) {
        if (upper == to_string(p)) return p;
    }
    throw std::invalid_argument("unknown protocol '" + std::string(text) + "'");
}

std::string_view to_string(Party p) { return p == Party::Alice ? "Alice" : "Bob"; }

Party parse_party(std::string_view text) {
    if (text == "Alice" || text == "alice") return Party::Alice;
    if (text == "Bob" || text == "bob") return Party::Bob;
    throw std::invalid_argument("unknown party '" + std::string(text) + "'");
}

void SessionConfig::validate() const {
    if (num_states < 1) throw std::invalid_argument("num_states must be at least 1");
    if (!(check_fraction > 0.0 && check_fraction < 1.0)) {
        throw std::invalid_argument("check_fraction must lie in (0, 1)");
    }
    if ((1.0 - check_fraction) * static_cast<double>(num_states) < 1.0) {
        throw std::invalid_argument("check_fraction leaves no unchecked position");
    }
    if (!(qber_abort_threshold >= 0.0 && qber_abort_threshold < 1.0)) {
        throw std::invalid_argument("qber_abort_threshold must lie in [0, 1)");
    }
    if (!(loss_probability >= 0.0 && loss_probability <= 1.0)) {
        throw std::invalid_argument("loss_probability must lie in [0, 1]");
    }
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    validate_attack(attack, protocol);
}

std::optional<double> CheckReport::error_rate(Basis alice, Basis bob) const {
    const auto& cell = by_bases[static_cast<std::size_t>(alice)][static_cast<std::size_t>(bob)];
    if (cell[0] == 0) return std::nullopt;
    return static_cast<double>(cell[1]) / static_cast<double>(cell[0]);
}

std::size_t SessionTranscript::kept_count() const {
    return static_cast<std::size_t>(
        std::count_if(positions.begin(), positions.end(), [](const auto& p) { return p.kept; }));
}

std::size_t SessionTranscript::lost_count() const {
    return static_cast<std::size_t>(
        std::count_if(positions.begin(), positions.end(), [](const auto& p) { return p.lost; }));
}

double SessionTranscript::kept_fraction() const {
    return positions.empty() ? 0.0 : static_cast<double>(kept_count()) / static_cast<double>(positions.size());
}

std::array<Basis, 2> basis_pool(ProtocolId protocol) {
    return is_ghz(protocol) ? std::array<Basis, 2>{Basis::X, Basis::Y} : std::array<Basis, 2>{Basis::X, Basis::Z};
}

std::array<TwoQubitLabel, 4> center_labels(ProtocolId protocol) {
    using L = TwoQubitLabel;
    switch (protocol) {
        case ProtocolId::Bell4: return {L::PsiPlus, L::PsiMinus, L::PhiPlus, L::PhiMinus};
        case ProtocolId::Bell5: return {L::PhiPlus, L::PsiMinus, L::CombPhiMinus, L::CombPsiPlus};
        default: break;
    }
    throw std::invalid_argument(std::string(to_string(protocol)) + " does not use labelled pairs");
}

Basis center_basis_rule_p3(Basis alice_basis, Basis bob_basis) {
    if (alice_basis == Basis::Z || bob_basis == Basis::Z) {
        throw std::invalid_argument("GHZ3 bases must be x or y");
    }
    return alice_basis == bob_basis ? Basis::X : Basis::Y;
}

bool keep_rule(ProtocolId protocol, const CenterLabel& announcement, Basis alice_basis, Basis bob_basis) {
    require_pool(protocol, alice_basis);
    require_pool(protocol, bob_basis);
    const bool same = alice_basis == bob_basis;
    switch (protocol) {
        case ProtocolId::Ghz1:
            require_ghz_announcement(protocol, announcement);
            return same;
        case ProtocolId::Ghz2: {
            require_ghz_announcement(protocol, announcement);
            const Basis center = std::get<BasisOutcome>(announcement).basis;
            return (center == Basis::X && same) || (center == Basis::Y && !same);
        }
        case ProtocolId::Ghz3:
            require_ghz_announcement(protocol, announcement);
            return true;
        case ProtocolId::Bell4:
            require_label(protocol, announcement);
            return same;
        case ProtocolId::Bell5: {
            const auto label = require_label(protocol, announcement);
            const bool bell = label == TwoQubitLabel::PhiPlus || label == TwoQubitLabel::PsiMinus;
            return bell ? same : !same;
        }
    }
    return false;
}

Outcome consistency_map(ProtocolId protocol, const CenterLabel& announcement, BasisOutcome own,
                        Basis peer_basis) {
    if (is_ghz(protocol)) {
        require_ghz_announcement(protocol, announcement);
    } else {
        require_label(protocol, announcement);
    }
    const auto bob = peer_table().lookup(announcement, own, peer_basis);
    if (!bob) {
        throw std::logic_error("no deterministic correlation for announcement " + to_string(announcement) +
                               ", Alice " + to_string(own) + ", Bob basis " + std::string(to_string(peer_basis)));
    }
    return *bob;
}

int encode_bit(ProtocolId protocol, const PositionRecord& position, Party party) {
    if (!position.kept || !position.announcement || !position.alice_outcome || !position.bob_outcome) {
        throw std::invalid_argument("position " + std::to_string(position.index) + " was not kept");
    }
    if (party == Party::Bob) return bit_of(*position.bob_outcome);
    return bit_of(consistency_map(protocol, *position.announcement, {position.alice_basis, *position.alice_outcome},
                                  position.bob_basis));
}

CheckReport eavesdrop_check(std::span<PositionRecord> positions, ProtocolId protocol, double check_fraction,
                            double abort_threshold, Rng& rng) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i].kept) kept.push_back(i);
    }
    CheckReport report;
    const auto count = static_cast<std::size_t>(std::floor(check_fraction * static_cast<double>(kept.size())));
    // Partial Fisher-Yates: the first `count` slots become a uniform subset.
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(kept[i], kept[i + rng.below(kept.size() - i)]);
    }
    for (std::size_t i = 0; i < count; ++i) {
        auto& p = positions[kept[i]];
        p.used_for_check = true;
        const int predicted = encode_bit(protocol, p, Party::Alice);
        const bool mismatch = predicted != bit_of(*p.bob_outcome);
        auto& cell = report.by_bases[static_cast<std::size_t>(p.alice_basis)][static_cast<std::size_t>(p.bob_basis)];
        ++cell[0];
        if (mismatch) {
            ++cell[1];
            ++report.errors;
        }
    }
    report.checked = count;
    report.empty_check = count == 0;
    report.aborted = count > 0 && report.error_rate() > abort_threshold;
    return report;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Prepared: return "prepared";
        case EventKind::CenterMeasured: return "center_measured";
        case EventKind::Announced: return "announced";
        case EventKind::AliceMeasured: return "alice_measured";
        case EventKind::BobMeasured: return "bob_measured";
        case EventKind::BasesDisclosed: return "bases_disclosed";
    }
    return "?";
}

double efficiency_bound(ProtocolId protocol) { return protocol == ProtocolId::Ghz3 ? 1.0 : 0.5; }

double measured_efficiency(const SessionTranscript& transcript) {
    if (transcript.config.num_states == 0) return 0.0;
    return static_cast<double>(transcript.distillation.alice_final.bits.size()) /
           static_cast<double>(transcript.config.num_states);
}

SessionTranscript run_session(const SessionConfig& config) {
    return run_session(config, LegLoss{config.loss_probability, config.loss_probability});
}

SessionTranscript run_session(const SessionConfig& config, LegLoss legs) {
    config.validate();
    if (!(legs.alice >= 0.0 && legs.alice <= 1.0 && legs.bob >= 0.0 && legs.bob <= 1.0)) {
        throw std::invalid_argument("leg loss probabilities must lie in [0, 1]");
    }
    const ProtocolId protocol = config.protocol;
    const auto pool = basis_pool(protocol);
    Rng rng(split_seed(config.rng_seed, 0));
    auto tap = make_tap(config.attack, protocol, split_seed(config.rng_seed, 1));

    SessionTranscript t;
    t.config = config;
    t.legs = legs;
    t.positions.reserve(config.num_states);
    t.events.reserve(config.num_states * 6);

    std::array<double, kDrawsPerPosition> draw{};
    for (std::size_t i = 0; i < config.num_states; ++i) {
        for (auto& d : draw) d = rng.uniform();

        PositionRecord rec;
        rec.index = i;
        rec.alice_basis = pick(pool, draw[kAliceBasis]);
        rec.bob_basis = pick(pool, draw[kBobBasis]);

        const auto log = [&](EventKind kind) { t.events.push_back({i, kind}); };
        std::optional<Register> reg;
        if (is_ghz(protocol)) {
            reg.emplace(make_cat(3, Outcome::Plus), std::vector{Holder::Center, Holder::Alice, Holder::Bob});
            log(EventKind::Prepared);
        } else {
            const auto labels = center_labels(protocol);
            const auto label = labels[std::min<std::size_t>(3, static_cast<std::size_t>(draw[kSource] * 4.0))];
            reg.emplace(make_two_qubit(label), std::vector{Holder::Alice, Holder::Bob});
            rec.announcement = label;
            log(EventKind::Prepared);
            log(EventKind::Announced);
        }
        tap->at_source(*reg, i);

        // GHZ1/GHZ2: the center measures before the users do.
        if (protocol == ProtocolId::Ghz1 || protocol == ProtocolId::Ghz2) {
            const Basis center_basis =
                protocol == ProtocolId::Ghz1 ? Basis::X : (draw[kSource] < 0.5 ? Basis::X : Basis::Y);
            const auto m = reg->measure(Holder::Center, center_basis, draw[kCenterOutcome]);
            rec.announcement = BasisOutcome{center_basis, m.outcome};
            log(EventKind::CenterMeasured);
            log(EventKind::Announced);
        }

        tap->in_transit(*reg, i);

        const bool alice_lost = draw[kLossAlice] < legs.alice;
        const bool bob_lost = draw[kLossBob] < legs.bob;
        rec.lost = alice_lost || bob_lost;
        if (!alice_lost) {
            rec.alice_outcome = reg->measure(Holder::Alice, rec.alice_basis, draw[kAliceOutcome]).outcome;
            log(EventKind::AliceMeasured);
        }
        if (!bob_lost) {
            rec.bob_outcome = reg->measure(Holder::Bob, rec.bob_basis, draw[kBobOutcome]).outcome;
            log(EventKind::BobMeasured);
        }
        log(EventKind::BasesDisclosed);

        // GHZ3: bases go to the center, which then measures by rule.
        if (protocol == ProtocolId::Ghz3 && !rec.lost) {
            const Basis center_basis = center_basis_rule_p3(rec.alice_basis, rec.bob_basis);
            const auto m = reg->measure(Holder::Center, center_basis, draw[kCenterOutcome]);
            rec.announcement = BasisOutcome{center_basis, m.outcome};
            log(EventKind::CenterMeasured);
            log(EventKind::Announced);
        }

        tap->after_measurement(*reg, i);
        if (!rec.lost) rec.kept = keep_rule(protocol, *rec.announcement, rec.alice_basis, rec.bob_basis);
        tap->after_public({i, protocol, rec.announcement, rec.alice_basis, rec.bob_basis, rec.lost, rec.kept});
        t.positions.push_back(std::move(rec));
    }

    t.check = eavesdrop_check(t.positions, protocol, config.check_fraction, config.qber_abort_threshold, rng);
    const std::uint64_t amplification_seed = rng.next();

    if (!t.check.aborted) {
        for (const auto& p : t.positions) {
            if (!p.kept || p.used_for_check) continue;
            t.alice_raw_key.push_back(static_cast<std::uint8_t>(encode_bit(protocol, p, Party::Alice)));
            t.bob_raw_key.push_back(static_cast<std::uint8_t>(encode_bit(protocol, p, Party::Bob)));
        }
        t.distillation = distill(t.alice_raw_key, t.bob_raw_key, t.check.error_rate(), config.epsilon,
                                 amplification_seed);
    } else {
        t.distillation.qber = t.check.error_rate();
    }
    t.efficiency_measured = measured_efficiency(t);
    t.efficiency_bound = efficiency_bound(protocol);

    if (!is_attack_free(config.attack)) {
        AdversaryReport adv;
        adv.attack = config.attack;
        adv.records = tap->records();
        const auto prediction = predict_attack(protocol, config.attack);
        adv.predicted_detection_rate = prediction.detection_rate;
        adv.predicted_eve_agreement = prediction.eve_agreement;
        adv.observed_detection_rate = t.check.error_rate();
        std::size_t agree = 0;
        for (const auto& r : adv.records) {
            const auto& p = t.positions[r.position];
            if (!p.kept || !r.inferred_bit) continue;
            ++adv.eve_guesses;
            agree += *r.inferred_bit == encode_bit(protocol, p, Party::Bob) ? 1 : 0;
        }
        if (adv.eve_guesses > 0) {
            adv.observed_eve_agreement = static_cast<double>(agree) / static_cast<double>(adv.eve_guesses);
        }
        t.adversary = std::move(adv);
    }
    return t;
}

}  // namespace tcqkd
