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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "tcqkd/adversary.hpp"
#include "tcqkd/protocols.hpp"

namespace tcqkd {
namespace {

std::string pool_string(const std::vector<Basis>& pool) {
    std::string s;
    for (Basis b : pool) s += b == Basis::X ? 'x' : b == Basis::Y ? 'y' : 'z';
    return s;
}

SessionConfig attacked(ProtocolId p, AttackModel attack, std::size_t n, std::uint64_t seed, double check = 0.5) {
    SessionConfig c;
    c.protocol = p;
    c.num_states = n;
    c.rng_seed = seed;
    c.check_fraction = check;
    c.attack = std::move(attack);
    return c;
}

double binomial_sd(double p, std::size_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

// P(X <= k) for X ~ Binomial(n, p), summed in log space.
double binomial_cdf(std::size_t k, std::size_t n, double p) {
    double total = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                                i * std::log(p) + (n - i) * std::log1p(-p);
        total += std::exp(log_term);
    }
    return total;
}

TEST(Predict, NoAttackIsZero) {
    for (ProtocolId p : kAllProtocols) EXPECT_EQ(predict_detection_rate(p, NoAttack{}), 0.0);
}

TEST(Predict, InterceptResendMatchesOracle) {
    const std::vector<std::vector<Basis>> pools{{}, {Basis::X, Basis::Y, Basis::Z}, {Basis::X}};
    for (ProtocolId p : kAllProtocols) {
        for (Party target : {Party::Alice, Party::Bob}) {
            for (const auto& pool : pools) {
                const InterceptResend ir{target, pool};
                const auto got = predict_attack(p, ir);
                const auto want = oracle::intercept_resend(std::string(to_string(p)), target == Party::Alice ? 'a' : 'b',
                                                           pool_string(effective_pool(ir, p)));
                SCOPED_TRACE(std::string(to_string(p)) + " " + std::string(to_string(target)) + " " +
                             pool_string(effective_pool(ir, p)));
                EXPECT_NEAR(got.kept_probability, want.kept, 1e-12);
                EXPECT_NEAR(got.detection_rate, want.detection, 1e-12);
                EXPECT_NEAR(got.eve_agreement, want.eve_agreement, 1e-12);
            }
        }
    }
}

TEST(Predict, Ghz1InterceptResendIsOneQuarter) {
    EXPECT_NEAR(predict_detection_rate(ProtocolId::Ghz1, InterceptResend{Party::Alice, {}}), 0.25, 1e-12);
    EXPECT_NEAR(predict_detection_rate(ProtocolId::Ghz1, InterceptResend{Party::Bob, {}}), 0.25, 1e-12);
}

TEST(Predict, CheatingCenterMatchesOracle) {
    for (ProtocolId p : {ProtocolId::Ghz1, ProtocolId::Ghz2}) {
        for (Basis b : {Basis::X, Basis::Y, Basis::Z}) {
            const auto got = predict_attack(p, CheatingCenterMeasureAll{b});
            const char letter = b == Basis::X ? 'x' : b == Basis::Y ? 'y' : 'z';
            const auto want = oracle::cheating_center(std::string(to_string(p)), letter);
            SCOPED_TRACE(std::string(to_string(p)) + " " + letter);
            EXPECT_NEAR(got.detection_rate, want.detection, 1e-12);
            EXPECT_NEAR(got.eve_agreement, want.eve_agreement, 1e-12);
            const double yy = got.detection_by_bases[1][1];
            if (std::isnan(want.yy_detection)) {
                EXPECT_TRUE(std::isnan(yy));
            } else {
                EXPECT_NEAR(yy, want.yy_detection, 1e-12);
            }
        }
    }
}

TEST(Predict, CheatingCenterXOnGhz1) {
    const auto pr = predict_attack(ProtocolId::Ghz1, CheatingCenterMeasureAll{Basis::X});
    EXPECT_NEAR(pr.detection_by_bases[0][0], 0.0, 1e-12);
    EXPECT_NEAR(pr.detection_by_bases[1][1], 0.5, 1e-12);
    // Half the kept positions are Y-Y, each failing with probability 1/2.
    EXPECT_NEAR(pr.detection_rate, 0.25, 1e-12);
    EXPECT_TRUE(std::isnan(pr.detection_by_bases[0][1]));
}

TEST(Predict, UnsupportedPairsRejected) {
    EXPECT_THROW(validate_attack(CheatingCenterMeasureAll{}, ProtocolId::Ghz3), std::invalid_argument);
    EXPECT_THROW(validate_attack(CheatingCenterMeasureAll{}, ProtocolId::Bell4), std::invalid_argument);
    EXPECT_THROW(validate_attack(AncillaEntangle{0.5}, ProtocolId::Bell5), std::invalid_argument);
    EXPECT_THROW(validate_attack(AncillaEntangle{1.5}, ProtocolId::Ghz1), std::invalid_argument);
}

TEST(Observed, InterceptResendWithinThreeSigma) {
    for (ProtocolId p : kAllProtocols) {
        for (Party target : {Party::Alice, Party::Bob}) {
            const InterceptResend ir{target, {}};
            const auto t = run_session(attacked(p, ir, 10000, 17));
            ASSERT_TRUE(t.adversary.has_value());
            const double pd = *t.adversary->predicted_detection_rate;
            const auto checked = t.check.checked;
            ASSERT_GE(checked, 50u);
            SCOPED_TRACE(std::string(to_string(p)) + " " + std::string(to_string(target)));
            EXPECT_NEAR(t.check.error_rate(), pd, 3 * binomial_sd(pd, checked));

            const double pe = *t.adversary->predicted_eve_agreement;
            EXPECT_LT(pe, 1.0);
            ASSERT_TRUE(t.adversary->observed_eve_agreement.has_value());
            EXPECT_NEAR(*t.adversary->observed_eve_agreement, pe, 3 * binomial_sd(pe, t.adversary->eve_guesses));
        }
    }
}

TEST(Observed, InterceptResendAbortsWithFiftyChecks) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto c = attacked(ProtocolId::Ghz1, InterceptResend{Party::Alice, {}}, 1100, seed, 0.1);
        c.qber_abort_threshold = 0.05;
        const auto t = run_session(c);
        ASSERT_GE(t.check.checked, 50u);
        EXPECT_TRUE(t.check.aborted) << "seed " << seed << " errors " << t.check.errors;
    }
}

TEST(Observed, AbortTailProbability) {
    // Abort iff errors > 0.05 * checked. With p_d = 1/4 the no-abort tail
    // stays below 1e-6 from 84 checks on; at exactly 50 it is about 9e-5.
    const double pd = predict_detection_rate(ProtocolId::Ghz1, InterceptResend{Party::Alice, {}});
    auto no_abort = [&](std::size_t n) { return binomial_cdf(static_cast<std::size_t>(0.05 * n + 1e-9), n, pd); };
    EXPECT_GT(no_abort(50), 1e-6);
    EXPECT_LT(no_abort(50), 1e-4);
    for (std::size_t n = 84; n <= 2000; ++n) EXPECT_LT(no_abort(n), 1e-6) << n;
}

TEST(Observed, CheatingCenterYYHalf) {
    const auto t = run_session(attacked(ProtocolId::Ghz1, CheatingCenterMeasureAll{Basis::X}, 10000, 5));
    const auto yy = t.check.error_rate(Basis::Y, Basis::Y);
    ASSERT_TRUE(yy.has_value());
    const auto n = t.check.by_bases[1][1][0];
    EXPECT_NEAR(*yy, 0.5, 3 * binomial_sd(0.5, n));
    EXPECT_EQ(t.check.error_rate(Basis::X, Basis::X), 0.0);
    // The center's guesses on Y-Y positions are coins.
    EXPECT_NEAR(*t.adversary->observed_eve_agreement, *t.adversary->predicted_eve_agreement,
                3 * binomial_sd(0.75, t.adversary->eve_guesses));
}

TEST(Observed, SameBasisInterceptIsSilent) {
    // Eve always picks X on GHZ1: X-X positions stay clean.
    const auto t = run_session(attacked(ProtocolId::Ghz1, InterceptResend{Party::Bob, {Basis::X}}, 4000, 6));
    EXPECT_EQ(t.check.error_rate(Basis::X, Basis::X), 0.0);
    EXPECT_GT(*t.check.error_rate(Basis::Y, Basis::Y), 0.3);
}

TEST(Ancilla, ZeroCouplingIsInvisible) {
    for (ProtocolId p : {ProtocolId::Ghz1, ProtocolId::Ghz2, ProtocolId::Ghz3}) {
        const auto clean = run_session(attacked(p, NoAttack{}, 3000, 21, 0.1));
        const auto probed = run_session(attacked(p, AncillaEntangle{0.0}, 3000, 21, 0.1));
        EXPECT_EQ(probed.check.errors, 0u);
        EXPECT_EQ(clean.alice_raw_key, probed.alice_raw_key);
        EXPECT_EQ(clean.bob_raw_key, probed.bob_raw_key);
        EXPECT_EQ(clean.distillation.alice_final.bits, probed.distillation.alice_final.bits);
        ASSERT_EQ(clean.positions.size(), probed.positions.size());
        for (std::size_t i = 0; i < clean.positions.size(); ++i) {
            EXPECT_EQ(clean.positions[i].alice_outcome, probed.positions[i].alice_outcome);
            EXPECT_EQ(clean.positions[i].bob_outcome, probed.positions[i].bob_outcome);
        }
        EXPECT_NEAR(predict_detection_rate(p, AncillaEntangle{0.0}), 0.0, 1e-12);
    }
}

TEST(Ancilla, ProbeOverlaps) {
    for (double k : {0.0, 0.3, 1.0}) {
        const auto probes = ancilla_states(k);
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(std::abs(inner_product(probes[i], probes[i])), 1.0, 1e-12);
            for (std::size_t j = i + 1; j < 4; ++j) {
                const auto o = inner_product(probes[i], probes[j]);
                EXPECT_NEAR(o.real(), 1.0 - k, 1e-12);
                EXPECT_NEAR(o.imag(), 0.0, 1e-12);
            }
        }
    }
}

// Disturbance of the coupled GHZ state on GHZ1, computed with dense
// projectors: probe states are built from their overlap alone.
double ghz1_disturbance(double k) {
    namespace o = oracle;
    const double off = (std::sqrt(4 - 3 * k) - std::sqrt(k)) / 4;
    const int branches[4][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    o::Vec joint(32);
    for (int b = 0; b < 4; ++b) {
        o::Vec probe(4, off);
        probe[b] += std::sqrt(k);
        o::Vec part = o::project(o::project(o::ghz(), 3, 1, 'x', branches[b][0]), 3, 2, 'x', branches[b][1]);
        joint = o::add(joint, o::kron(part, probe));
    }
    double kept = 0, err = 0;
    for (char basis : {'x', 'y'}) {
        for (int c : {1, -1}) {
            const o::Vec vc = o::apply(o::embed(o::outer(o::ket('x', c)), 0, 5), joint);
            for (int a : {1, -1}) {
                const o::Vec va = o::apply(o::embed(o::outer(o::ket(basis, a)), 1, 5), vc);
                for (int s : {1, -1}) {
                    const double w = o::norm2(o::apply(o::embed(o::outer(o::ket(basis, s)), 2, 5), va));
                    const auto pred = o::derived_bob(std::string("x") + (c > 0 ? "+" : "-"), basis, a, basis);
                    kept += w;
                    err += *pred != s ? w : 0.0;
                }
            }
        }
    }
    return err / kept;
}

TEST(Ancilla, DisturbanceIsQuarterCoupling) {
    double last = -1.0;
    for (double k : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double d = predict_detection_rate(ProtocolId::Ghz1, AncillaEntangle{k});
        EXPECT_NEAR(d, k / 4, 1e-12);
        EXPECT_NEAR(d, ghz1_disturbance(k), 1e-12);
        EXPECT_GT(d, last);
        last = d;
    }
}

TEST(Ancilla, ObservedDisturbanceWithinThreeSigma) {
    const auto t = run_session(attacked(ProtocolId::Ghz1, AncillaEntangle{1.0}, 10000, 8));
    EXPECT_NEAR(t.check.error_rate(), 0.25, 3 * binomial_sd(0.25, t.check.checked));
}

TEST(Ancilla, EqualAlphasGiveNoInformation) {
    const auto joint = ancilla_attack(make_cat(3, Outcome::Plus), 1.0);
    EXPECT_EQ(joint.num_qubits(), 5u);
    const std::array<Amplitude, 4> alpha{0.5, 0.5, 0.5, 0.5};
    const auto proj = eve_projection(joint, alpha);
    EXPECT_NEAR(proj.guess_probability, 0.5, 1e-12);
    EXPECT_NEAR(proj.alice_weights[0], proj.alice_weights[1], 1e-12);

    const auto factorized = eve_projection(ancilla_attack(make_cat(3, Outcome::Plus), 0.0), alpha);
    EXPECT_NEAR(factorized.guess_probability, 0.5, 1e-12);
}

TEST(Ancilla, ProjectionRejectsUnnormalizedAlpha) {
    const auto joint = ancilla_attack(make_cat(3, Outcome::Plus), 0.5);
    EXPECT_THROW(eve_projection(joint, {1.0, 1.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(eve_projection(make_cat(3, Outcome::Plus), {1.0, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(Ancilla, GuessProbability) {
    EXPECT_NEAR(ancilla_guess_probability(0.0), 0.5, 1e-12);
    EXPECT_NEAR(ancilla_guess_probability(1.0), 1.0, 1e-12);
    double last = 0.0;
    for (double k = 0.0; k <= 1.0; k += 0.125) {
        const double g = ancilla_guess_probability(k);
        EXPECT_GE(g, last);
        last = g;
    }
}

TEST(Ancilla, ZeroCouplingGuessesAreCoins) {
    const auto t = run_session(attacked(ProtocolId::Ghz1, AncillaEntangle{0.0}, 10000, 9));
    ASSERT_TRUE(t.adversary->observed_eve_agreement.has_value());
    EXPECT_NEAR(*t.adversary->observed_eve_agreement, 0.5, 3 * binomial_sd(0.5, t.adversary->eve_guesses));
    EXPECT_NEAR(*t.adversary->predicted_eve_agreement, 0.5, 1e-12);
}

TEST(Tap, NoAttackRecordsNothing) {
    auto tap = make_tap(NoAttack{}, ProtocolId::Ghz1, 1);
    Register reg(make_cat(3, Outcome::Plus), {Holder::Center, Holder::Alice, Holder::Bob});
    tap->at_source(reg, 0);
    tap->in_transit(reg, 0);
    EXPECT_TRUE(tap->records().empty());
    EXPECT_TRUE(reg.state().approx_equal(make_cat(3, Outcome::Plus)));
}

TEST(Tap, AttackFreeTranscriptUnchangedByEveSeed) {
    const auto a = run_session(attacked(ProtocolId::Bell5, NoAttack{}, 1000, 4));
    EXPECT_FALSE(a.adversary.has_value());
}

TEST(Register, HoldersAndPostSelect) {
    Register reg(make_cat(3, Outcome::Plus), {Holder::Center, Holder::Alice, Holder::Bob});
    EXPECT_EQ(reg.index_of(Holder::Bob), 2u);
    EXPECT_THROW(reg.index_of(Holder::Eve), std::out_of_range);
    EXPECT_NEAR(reg.post_select(Holder::Center, {Basis::X, Outcome::Minus}), 0.5, 1e-12);
    EXPECT_EQ(reg.holders().size(), 2u);
    EXPECT_NEAR(reg.post_select(Holder::Alice, {Basis::Z, Outcome::Plus}), 0.5, 1e-12);
    EXPECT_EQ(reg.post_select(Holder::Bob, {Basis::Z, Outcome::Minus}), 0.0);
    EXPECT_EQ(reg.holders().size(), 1u);
}

TEST(Names, AttackKinds) {
    EXPECT_EQ(attack_kind(NoAttack{}), "None");
    EXPECT_EQ(attack_kind(InterceptResend{}), "InterceptResend");
    EXPECT_EQ(attack_kind(CheatingCenterMeasureAll{}), "CheatingCenterMeasureAll");
    EXPECT_EQ(attack_kind(AncillaEntangle{}), "AncillaEntangle");
    EXPECT_TRUE(is_attack_free(NoAttack{}));
    EXPECT_EQ(to_string(std::variant<Basis, AncillaLabel>{AncillaLabel{2}}), "ancilla:2");
}

}  // namespace
}  // namespace tcqkd
