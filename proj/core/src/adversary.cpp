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

#include "tcqkd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tcqkd/protocols.hpp"

namespace tcqkd {
namespace {

constexpr std::array<Outcome, 2> kOutcomes{Outcome::Plus, Outcome::Minus};

// Branch probabilities below this are treated as impossible.
constexpr double kNegligible = 1e-15;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Applies |e><e| to qubit q of a raw amplitude vector in place.
void apply_projector(std::vector<Amplitude>& v, std::size_t n, std::size_t q, const StateVector& e) {
    const std::size_t stride = std::size_t{1} << (n - 1 - q);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if ((i & stride) != 0) continue;
        const Amplitude overlap = std::conj(e[0]) * v[i] + std::conj(e[1]) * v[i | stride];
        v[i] = e[0] * overlap;
        v[i | stride] = e[1] * overlap;
    }
}

// ---- taps -------------------------------------------------------------------

class NullTap final : public ChannelTap {};

class InterceptResendTap final : public ChannelTap {
  public:
    InterceptResendTap(InterceptResend attack, ProtocolId protocol, std::uint64_t seed)
        : target_(attack.target == Party::Alice ? Holder::Alice : Holder::Bob),
          party_(attack.target),
          pool_(effective_pool(attack, protocol)),
          protocol_(protocol),
          rng_(seed) {}

    void in_transit(Register& reg, std::size_t position) override {
        if (!reg.holds(target_)) return;
        const Basis basis = pool_[rng_.below(pool_.size())];
        const std::size_t slot = reg.index_of(target_);
        const auto m = reg.measure(target_, basis, rng_.uniform());
        reg.insert(slot, target_, make_eigenstate(basis, m.outcome));
        records_.push_back({position, basis, m.outcome, std::nullopt});
    }

    void after_public(const PublicRecord& pub) override {
        if (records_.empty() || records_.back().position != pub.position) return;
        auto& rec = records_.back();
        if (!pub.kept) return;
        const Basis eve_basis = std::get<Basis>(rec.basis_used);
        const Basis party_basis = party_ == Party::Alice ? pub.alice_basis : pub.bob_basis;
        if (eve_basis != party_basis) {
            rec.inferred_bit = rng_.coin() ? 1 : 0;
        } else if (party_ == Party::Bob) {
            rec.inferred_bit = bit_of(rec.outcome);
        } else {
            rec.inferred_bit =
                bit_of(consistency_map(protocol_, *pub.announcement, {eve_basis, rec.outcome}, pub.bob_basis));
        }
    }

  private:
    Holder target_;
    Party party_;
    std::vector<Basis> pool_;
    ProtocolId protocol_;
    Rng rng_;
};

class CheatingCenterTap final : public ChannelTap {
  public:
    CheatingCenterTap(CheatingCenterMeasureAll attack, std::uint64_t seed) : basis_(attack.basis), rng_(seed) {}

    void at_source(Register& reg, std::size_t position) override {
        std::array<BasisOutcome, 3> product{};
        const std::array<Holder, 3> order{Holder::Center, Holder::Alice, Holder::Bob};
        for (std::size_t k = 0; k < 3; ++k) {
            product[k] = {basis_, reg.measure(order[k], basis_, rng_.uniform()).outcome};
        }
        reg.reset(make_product(product), {order.begin(), order.end()});
        records_.push_back({position, basis_, product[2].outcome, std::nullopt});
    }

    void after_public(const PublicRecord& pub) override {
        auto& rec = records_.back();
        if (!pub.kept) return;
        rec.inferred_bit = pub.bob_basis == basis_ ? bit_of(rec.outcome) : (rng_.coin() ? 1 : 0);
    }

  private:
    Basis basis_;
    Rng rng_;
};

class AncillaTap final : public ChannelTap {
  public:
    AncillaTap(AncillaEntangle attack, std::uint64_t seed) : coupling_(attack.coupling), rng_(seed) {}

    void in_transit(Register& reg, std::size_t position) override {
        auto holders = reg.holders();
        holders.push_back(Holder::Eve);
        holders.push_back(Holder::Eve);
        reg.reset(entangle_ancilla(reg.state(), reg.index_of(Holder::Alice), reg.index_of(Holder::Bob), coupling_),
                  std::move(holders));
        attacked_ = position;
    }

    void after_measurement(Register& reg, std::size_t position) override {
        if (attacked_ != position) return;
        // Read the probe in its computational basis: outcome j names branch j.
        const int high = bit_of(reg.measure(Holder::Eve, Basis::Z, rng_.uniform()).outcome);
        const int low = bit_of(reg.measure(Holder::Eve, Basis::Z, rng_.uniform()).outcome);
        const int branch = 2 * high + low;
        records_.push_back({position, AncillaLabel{branch}, kAncillaBranches[branch][1], std::nullopt});
    }

    void after_public(const PublicRecord& pub) override {
        if (records_.empty() || records_.back().position != pub.position || !pub.kept) return;
        auto& rec = records_.back();
        rec.inferred_bit = pub.bob_basis == Basis::X ? bit_of(rec.outcome) : (rng_.coin() ? 1 : 0);
    }

  private:
    double coupling_;
    Rng rng_;
    std::size_t attacked_ = std::numeric_limits<std::size_t>::max();
};

// ---- enumeration ------------------------------------------------------------

struct Path {
    double weight;
    Register reg;
    Announcement announcement;
    Basis alice_basis;
    Basis bob_basis;
    std::optional<Basis> center_basis;
    std::optional<BasisOutcome> eve_result;  // intercept/resend
    std::optional<Outcome> known_bob;        // cheating center
};

// Splits every path on the outcome of `holder` measured in `basis_of(path)`.
template <class BasisOf, class OnOutcome>
std::vector<Path> branch_on(std::vector<Path> paths, Holder holder, BasisOf basis_of, OnOutcome on_outcome) {
    std::vector<Path> out;
    for (auto& p : paths) {
        const Basis basis = basis_of(p);
        for (Outcome o : kOutcomes) {
            Path next = p;
            const double prob = next.reg.post_select(holder, {basis, o});
            if (prob < kNegligible) continue;
            next.weight *= prob;
            on_outcome(next, basis, o);
            out.push_back(std::move(next));
        }
    }
    return out;
}

}  // namespace

std::string_view attack_kind(const AttackModel& attack) {
    return std::visit(Overloaded{
                          [](const NoAttack&) { return std::string_view("None"); },
                          [](const InterceptResend&) { return std::string_view("InterceptResend"); },
                          [](const CheatingCenterMeasureAll&) { return std::string_view("CheatingCenterMeasureAll"); },
                          [](const AncillaEntangle&) { return std::string_view("AncillaEntangle"); },
                      },
                      attack);
}

bool is_attack_free(const AttackModel& attack) { return std::holds_alternative<NoAttack>(attack); }

void validate_attack(const AttackModel& attack, ProtocolId protocol) {
    std::visit(Overloaded{
                   [](const NoAttack&) {},
                   [](const InterceptResend&) {},
                   [&](const CheatingCenterMeasureAll&) {
                       if (protocol != ProtocolId::Ghz1 && protocol != ProtocolId::Ghz2) {
                           throw std::invalid_argument("cheating-center attack is defined for GHZ1 and GHZ2 only");
                       }
                   },
                   [&](const AncillaEntangle& a) {
                       if (!is_ghz(protocol)) {
                           throw std::invalid_argument("ancilla attack is defined for GHZ protocols only");
                       }
                       if (!(a.coupling >= 0.0 && a.coupling <= 1.0)) {
                           throw std::invalid_argument("ancilla coupling must lie in [0, 1]");
                       }
                   },
               },
               attack);
}

std::vector<Basis> default_intercept_pool(ProtocolId protocol) {
    const auto pool = basis_pool(protocol);
    return {pool.begin(), pool.end()};
}

std::vector<Basis> effective_pool(const InterceptResend& attack, ProtocolId protocol) {
    return attack.basis_pool.empty() ? default_intercept_pool(protocol) : attack.basis_pool;
}

std::string to_string(const std::variant<Basis, AncillaLabel>& used) {
    if (const auto* b = std::get_if<Basis>(&used)) return std::string(to_string(*b));
    return "ancilla:" + std::to_string(std::get<AncillaLabel>(used).branch);
}

// ---- Register -----------------------------------------------------------------

Register::Register(StateVector state, std::vector<Holder> holders) : state_(std::move(state)), holders_(std::move(holders)) {
    if (holders_.size() != state_.num_qubits()) throw std::invalid_argument("one holder per qubit required");
}

bool Register::holds(Holder h) const { return std::find(holders_.begin(), holders_.end(), h) != holders_.end(); }

std::size_t Register::index_of(Holder h) const {
    const auto it = std::find(holders_.begin(), holders_.end(), h);
    if (it == holders_.end()) throw std::out_of_range("register holds no qubit for that party");
    return static_cast<std::size_t>(it - holders_.begin());
}

Measurement Register::measure(Holder h, Basis basis, double random_draw) {
    const std::size_t i = index_of(h);
    auto m = tcqkd::measure(state_, i, basis, random_draw);
    state_ = m.collapsed;
    holders_.erase(holders_.begin() + static_cast<std::ptrdiff_t>(i));
    return m;
}

double Register::post_select(Holder h, BasisOutcome eigen) {
    const std::size_t i = index_of(h);
    const double p = outcome_distribution(state_, i, eigen.basis).probability(eigen.outcome);
    if (p < kNegligible) return 0.0;
    state_ = collapse(state_, i, eigen);
    holders_.erase(holders_.begin() + static_cast<std::ptrdiff_t>(i));
    return p;
}

void Register::insert(std::size_t position, Holder h, const StateVector& single) {
    state_ = insert_qubit(state_, position, single);
    holders_.insert(holders_.begin() + static_cast<std::ptrdiff_t>(position), h);
}

void Register::reset(StateVector state, std::vector<Holder> holders) {
    if (holders.size() != state.num_qubits()) throw std::invalid_argument("one holder per qubit required");
    state_ = std::move(state);
    holders_ = std::move(holders);
}

std::unique_ptr<ChannelTap> make_tap(const AttackModel& attack, ProtocolId protocol, std::uint64_t seed) {
    validate_attack(attack, protocol);
    return std::visit(Overloaded{
                          [](const NoAttack&) -> std::unique_ptr<ChannelTap> { return std::make_unique<NullTap>(); },
                          [&](const InterceptResend& a) -> std::unique_ptr<ChannelTap> {
                              return std::make_unique<InterceptResendTap>(a, protocol, seed);
                          },
                          [&](const CheatingCenterMeasureAll& a) -> std::unique_ptr<ChannelTap> {
                              return std::make_unique<CheatingCenterTap>(a, seed);
                          },
                          [&](const AncillaEntangle& a) -> std::unique_ptr<ChannelTap> {
                              return std::make_unique<AncillaTap>(a, seed);
                          },
                      },
                      attack);
}

// ---- oracle -------------------------------------------------------------------

AttackPrediction predict_attack(ProtocolId protocol, const AttackModel& attack) {
    validate_attack(attack, protocol);
    const auto pool = basis_pool(protocol);

    // Parties' bases and the source: center schedule or prepared label.
    std::vector<Path> paths;
    for (Basis a : pool) {
        for (Basis b : pool) {
            if (is_ghz(protocol)) {
                const Register ghz(make_cat(3, Outcome::Plus), {Holder::Center, Holder::Alice, Holder::Bob});
                switch (protocol) {
                    case ProtocolId::Ghz1:
                        paths.push_back({0.25, ghz, std::nullopt, a, b, Basis::X, {}, {}});
                        break;
                    case ProtocolId::Ghz2:
                        paths.push_back({0.125, ghz, std::nullopt, a, b, Basis::X, {}, {}});
                        paths.push_back({0.125, ghz, std::nullopt, a, b, Basis::Y, {}, {}});
                        break;
                    default:
                        paths.push_back({0.25, ghz, std::nullopt, a, b, center_basis_rule_p3(a, b), {}, {}});
                        break;
                }
            } else {
                for (auto label : center_labels(protocol)) {
                    paths.push_back({0.0625, Register(make_two_qubit(label), {Holder::Alice, Holder::Bob}), label, a,
                                     b, std::nullopt, {}, {}});
                }
            }
        }
    }

    // The cheating center measures every particle before distribution.
    if (const auto* cheat = std::get_if<CheatingCenterMeasureAll>(&attack)) {
        const Basis basis = cheat->basis;
        for (Holder h : {Holder::Center, Holder::Alice, Holder::Bob}) {
            std::vector<Path> next;
            for (auto& p : paths) {
                for (Outcome o : kOutcomes) {
                    Path q = p;
                    const double prob = q.reg.post_select(h, {basis, o});
                    if (prob < kNegligible) continue;
                    q.weight *= prob;
                    // Re-insert the eigenstate so the particle still travels.
                    const std::size_t slot = h == Holder::Center ? 0 : (h == Holder::Alice ? 1 : 2);
                    q.reg.insert(slot, h, make_eigenstate(basis, o));
                    if (h == Holder::Bob) q.known_bob = o;
                    next.push_back(std::move(q));
                }
            }
            paths = std::move(next);
        }
    }

    // The center's own measurement and announcement.
    if (is_ghz(protocol)) {
        paths = branch_on(
            std::move(paths), Holder::Center, [](const Path& p) { return *p.center_basis; },
            [](Path& p, Basis basis, Outcome o) { p.announcement = BasisOutcome{basis, o}; });
    }

    // Channel attacks.
    if (const auto* ir = std::get_if<InterceptResend>(&attack)) {
        const auto eve_pool = effective_pool(*ir, protocol);
        const Holder target = ir->target == Party::Alice ? Holder::Alice : Holder::Bob;
        std::vector<Path> next;
        for (auto& p : paths) {
            for (Basis eb : eve_pool) {
                for (Outcome o : kOutcomes) {
                    Path q = p;
                    const std::size_t slot = q.reg.index_of(target);
                    const double prob = q.reg.post_select(target, {eb, o});
                    if (prob < kNegligible) continue;
                    q.weight *= prob / static_cast<double>(eve_pool.size());
                    q.reg.insert(slot, target, make_eigenstate(eb, o));
                    q.eve_result = BasisOutcome{eb, o};
                    next.push_back(std::move(q));
                }
            }
        }
        paths = std::move(next);
    } else if (const auto* anc = std::get_if<AncillaEntangle>(&attack)) {
        for (auto& p : paths) {
            auto holders = p.reg.holders();
            holders.push_back(Holder::Eve);
            holders.push_back(Holder::Eve);
            p.reg.reset(entangle_ancilla(p.reg.state(), p.reg.index_of(Holder::Alice), p.reg.index_of(Holder::Bob),
                                         anc->coupling),
                        std::move(holders));
        }
    }

    // Sifting, then the legitimate outcomes.
    std::erase_if(paths, [&](const Path& p) {
        return !keep_rule(protocol, *p.announcement, p.alice_basis, p.bob_basis);
    });
    std::array<std::array<double, 3>, 3> kept_mass{};
    std::array<std::array<double, 3>, 3> error_mass{};
    double kept = 0.0;
    double errors = 0.0;
    double agreement = 0.0;
    for (auto& p : paths) {
        for (Outcome oa : kOutcomes) {
            Register after_alice = p.reg;
            const double pa = after_alice.post_select(Holder::Alice, {p.alice_basis, oa});
            if (pa < kNegligible) continue;
            for (Outcome ob : kOutcomes) {
                Register after_bob = after_alice;
                const double pb = after_bob.post_select(Holder::Bob, {p.bob_basis, ob});
                if (pb < kNegligible) continue;
                const double w = p.weight * pa * pb;
                const Outcome predicted =
                    consistency_map(protocol, *p.announcement, {p.alice_basis, oa}, p.bob_basis);
                const bool mismatch = predicted != ob;

                // Probability that Eve's inferred bit equals Bob's bit.
                double eve_right = 0.5;
                if (p.eve_result) {
                    const auto& ir = std::get<InterceptResend>(attack);
                    const Basis party_basis = ir.target == Party::Alice ? p.alice_basis : p.bob_basis;
                    if (p.eve_result->basis == party_basis) {
                        const Outcome guess =
                            ir.target == Party::Bob
                                ? p.eve_result->outcome
                                : consistency_map(protocol, *p.announcement, *p.eve_result, p.bob_basis);
                        eve_right = guess == ob ? 1.0 : 0.0;
                    }
                } else if (p.known_bob) {
                    const auto& cheat = std::get<CheatingCenterMeasureAll>(attack);
                    if (p.bob_basis == cheat.basis) eve_right = *p.known_bob == ob ? 1.0 : 0.0;
                } else if (std::holds_alternative<AncillaEntangle>(attack) && p.bob_basis == Basis::X) {
                    // Only the probe remains; branch j predicts Bob's x-result.
                    const auto probe = after_bob.state().amplitudes();
                    eve_right = 0.0;
                    for (std::size_t j = 0; j < 4; ++j) {
                        if (kAncillaBranches[j][1] == ob) eve_right += std::norm(probe[j]);
                    }
                }

                const auto ai = static_cast<std::size_t>(p.alice_basis);
                const auto bi = static_cast<std::size_t>(p.bob_basis);
                kept += w;
                kept_mass[ai][bi] += w;
                if (mismatch) {
                    errors += w;
                    error_mass[ai][bi] += w;
                }
                agreement += w * eve_right;
            }
        }
    }

    AttackPrediction out;
    out.kept_probability = kept;
    out.detection_rate = kept > 0.0 ? errors / kept : 0.0;
    out.eve_agreement = kept > 0.0 ? agreement / kept : 0.5;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            out.detection_by_bases[i][j] = kept_mass[i][j] > 0.0 ? error_mass[i][j] / kept_mass[i][j]
                                                                 : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

double predict_detection_rate(ProtocolId protocol, const AttackModel& attack) {
    if (is_attack_free(attack)) return 0.0;
    return predict_attack(protocol, attack).detection_rate;
}

// ---- ancilla probe -------------------------------------------------------------

std::array<StateVector, 4> ancilla_states(double coupling) {
    if (!(coupling >= 0.0 && coupling <= 1.0)) throw std::invalid_argument("coupling must lie in [0, 1]");
    // Columns of the square root of the Gram matrix (1-c) J + c I, which has
    // eigenvalue 4 - 3c on the all-ones direction and c elsewhere.
    const double diag = std::sqrt(coupling);
    const double common = (std::sqrt(4.0 - 3.0 * coupling) - diag) / 4.0;
    std::array<StateVector, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<Amplitude> amps(4, Amplitude{common});
        amps[i] += diag;
        out[i] = normalized(2, std::move(amps));
    }
    return out;
}

StateVector entangle_ancilla(const StateVector& state, std::size_t alice, std::size_t bob, double coupling) {
    const std::size_t n = state.num_qubits();
    if (alice >= n || bob >= n || alice == bob) throw std::out_of_range("invalid Alice/Bob qubit indices");
    const auto probes = ancilla_states(coupling);
    std::vector<Amplitude> joint(state.dimension() * 4);
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<Amplitude> branch(state.amplitudes().begin(), state.amplitudes().end());
        apply_projector(branch, n, alice, make_eigenstate(Basis::X, kAncillaBranches[k][0]));
        apply_projector(branch, n, bob, make_eigenstate(Basis::X, kAncillaBranches[k][1]));
        for (std::size_t i = 0; i < branch.size(); ++i) {
            for (std::size_t j = 0; j < 4; ++j) joint[i * 4 + j] += branch[i] * probes[k][j];
        }
    }
    return normalized(n + 2, std::move(joint));
}

StateVector ancilla_attack(const StateVector& ghz, double coupling) {
    if (ghz.num_qubits() != 3) throw std::invalid_argument("ancilla_attack expects a three-qubit state");
    return entangle_ancilla(ghz, 1, 2, coupling);
}

AncillaProjection eve_projection(const StateVector& joint, const std::array<Amplitude, 4>& alpha) {
    if (joint.num_qubits() != 5) throw std::invalid_argument("eve_projection expects the 5-qubit coupled state");
    double alpha_norm = 0.0;
    for (const auto& a : alpha) alpha_norm += std::norm(a);
    if (std::abs(alpha_norm - 1.0) > kStateTolerance) throw std::invalid_argument("alpha must be normalized");

    // <branch_k| on (Alice, Bob), leaving (center, probe0, probe1).
    std::array<std::vector<Amplitude>, 4> parts;
    for (std::size_t k = 0; k < 4; ++k) {
        const auto after_alice = project(joint.amplitudes(), 5, 1, {Basis::X, kAncillaBranches[k][0]});
        parts[k] = project(after_alice, 4, 1, {Basis::X, kAncillaBranches[k][1]});
        for (auto& v : parts[k]) v *= std::conj(alpha[k]);
    }
    std::vector<Amplitude> total(8);
    std::array<std::vector<Amplitude>, 2> by_alice{std::vector<Amplitude>(8), std::vector<Amplitude>(8)};
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t side = kAncillaBranches[k][0] == Outcome::Plus ? 0 : 1;
        for (std::size_t i = 0; i < 8; ++i) {
            total[i] += parts[k][i];
            by_alice[side][i] += parts[k][i];
        }
    }
    double probability = 0.0;
    for (const auto& v : total) probability += std::norm(v);

    AncillaProjection out{probability, normalized(3, total), {}, {}, 0.0};
    out.probe_given_center[0] = project(total, 3, 0, {Basis::X, Outcome::Plus});
    out.probe_given_center[1] = project(total, 3, 0, {Basis::X, Outcome::Minus});
    std::array<double, 2> w{};
    for (std::size_t side = 0; side < 2; ++side) {
        for (const auto& v : by_alice[side]) w[side] += std::norm(v);
    }
    const double sum = w[0] + w[1];
    out.alice_weights = {w[0] / sum, w[1] / sum};
    out.guess_probability = std::max(out.alice_weights[0], out.alice_weights[1]);
    return out;
}

double ancilla_guess_probability(double coupling) {
    const auto probes = ancilla_states(coupling);
    // Given the center's x-result, Alice's + and - branches leave the probe in
    // one of two pure states with equal priors.
    const double overlap = std::norm(inner_product(probes[0], probes[1]));
    return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - overlap)));
}

}  // namespace tcqkd
