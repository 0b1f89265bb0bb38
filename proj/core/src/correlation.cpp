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

#include "tcqkd/correlation.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace tcqkd {
namespace {

constexpr BasisOutcome xp{Basis::X, Outcome::Plus};
constexpr BasisOutcome xm{Basis::X, Outcome::Minus};
constexpr BasisOutcome yp{Basis::Y, Outcome::Plus};
constexpr BasisOutcome ym{Basis::Y, Outcome::Minus};
constexpr BasisOutcome zp{Basis::Z, Outcome::Plus};
constexpr BasisOutcome zm{Basis::Z, Outcome::Minus};

struct PrintedColumn {
    CenterLabel center;
    // (Alice, Bob) reference cells, in the row order used for rendering.
    std::array<std::pair<BasisOutcome, BasisOutcome>, 4> cells;
};

// Reference values; used only for the matches flag.
const std::array<PrintedColumn, 4>& printed_columns(TableScenario s) {
    using L = TwoQubitLabel;
    static const std::array<PrintedColumn, 4> bell{{
        {L::PsiPlus, {{{xp, xp}, {xm, xm}, {zp, zp}, {zm, zm}}}},
        {L::PsiMinus, {{{xp, xm}, {xm, xp}, {zp, zp}, {zm, zm}}}},
        {L::PhiPlus, {{{xp, xp}, {xm, xm}, {zp, zm}, {zm, zp}}}},
        {L::PhiMinus, {{{xp, xm}, {xm, xp}, {zp, zm}, {zm, zp}}}},
    }};
    static const std::array<PrintedColumn, 4> mixed{{
        {L::PhiPlus, {{{xp, xp}, {xm, xm}, {zp, zm}, {zm, zp}}}},
        {L::PsiMinus, {{{xp, xm}, {xm, xp}, {zp, zp}, {zm, zm}}}},
        {L::CombPhiMinus, {{{xp, zm}, {xm, zp}, {zp, xm}, {zm, xp}}}},
        {L::CombPsiPlus, {{{xp, zp}, {xm, zm}, {zp, xp}, {zm, xm}}}},
    }};
    static const std::array<PrintedColumn, 4> ghz{{
        {xp, {{{xp, xp}, {xm, xm}, {yp, ym}, {ym, yp}}}},
        {xm, {{{xp, xm}, {xm, xp}, {yp, yp}, {ym, ym}}}},
        {yp, {{{xp, ym}, {xm, yp}, {yp, xm}, {ym, xp}}}},
        {ym, {{{xp, yp}, {xm, ym}, {yp, xm}, {ym, xm}}}},
    }};
    switch (s) {
        case TableScenario::Bell: return bell;
        case TableScenario::Mixed: return mixed;
        case TableScenario::Ghz: return ghz;
    }
    throw std::invalid_argument("unknown table scenario");
}

std::string cell_text(const CorrelationEntry& e) {
    if (!e.bob_outcome) return std::string(to_string(e.bob_basis)) + "?";
    return to_string(BasisOutcome{e.bob_basis, *e.bob_outcome});
}

}  // namespace

std::string to_string(const CenterLabel& label) {
    if (const auto* bo = std::get_if<BasisOutcome>(&label)) return to_string(*bo);
    return std::string(to_string(std::get<TwoQubitLabel>(label)));
}

StateVector conditional_pair(const CenterLabel& label) {
    if (const auto* bo = std::get_if<BasisOutcome>(&label)) {
        return collapse(make_cat(3, Outcome::Plus), 0, *bo);
    }
    return make_two_qubit(std::get<TwoQubitLabel>(label));
}

std::optional<Outcome> predict_peer(const StateVector& pair, BasisOutcome alice, Basis bob_basis) {
    if (outcome_distribution(pair, 0, alice.basis).probability(alice.outcome) <= kStateTolerance) {
        return std::nullopt;
    }
    const auto bob = collapse(pair, 0, alice);
    const auto dist = outcome_distribution(bob, 0, bob_basis);
    if (dist.p_plus >= 1.0 - kStateTolerance) return Outcome::Plus;
    if (dist.p_minus >= 1.0 - kStateTolerance) return Outcome::Minus;
    return std::nullopt;
}

std::string_view to_string(TableScenario s) {
    switch (s) {
        case TableScenario::Bell: return "bell";
        case TableScenario::Mixed: return "mixed";
        case TableScenario::Ghz: return "ghz";
    }
    return "?";
}

TableScenario parse_table_scenario(std::string_view text) {
    if (text == "bell") return TableScenario::Bell;
    if (text == "mixed") return TableScenario::Mixed;
    if (text == "ghz") return TableScenario::Ghz;
    throw std::invalid_argument("unknown table scenario '" + std::string(text) + "'");
}

std::size_t CorrelationTable::discrepancy_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.matches_printed ? 0 : 1;
    return n;
}

CorrelationTable derive_correlation_table(TableScenario scenario) {
    CorrelationTable table{scenario, {}, {}};
    for (const auto& column : printed_columns(scenario)) {
        table.columns.push_back(column.center);
        const auto pair = conditional_pair(column.center);
        for (const auto& [alice, printed_bob] : column.cells) {
            // Bob's basis is the one the reference cell is stated in.
            const auto bob = predict_peer(pair, alice, printed_bob.basis);
            CorrelationEntry entry{column.center, alice, printed_bob.basis, bob, printed_bob, false};
            entry.matches_printed = bob.has_value() && *bob == printed_bob.outcome;
            table.entries.push_back(entry);
        }
    }
    return table;
}

std::string render_csv(std::span<const CorrelationTable> tables) {
    std::ostringstream out;
    out << "scenario,center,alice_basis,alice_outcome,bob_basis,bob_outcome,deterministic,matches_paper\n";
    for (const auto& t : tables) {
        for (const auto& e : t.entries) {
            out << to_string(t.scenario) << ',' << to_string(e.center) << ',' << to_string(e.alice.basis)
                << ',' << to_string(e.alice.outcome) << ',' << to_string(e.bob_basis) << ','
                << (e.bob_outcome ? std::string(to_string(*e.bob_outcome)) : std::string()) << ','
                << (e.deterministic() ? "true" : "false") << ',' << (e.matches_printed ? "true" : "false")
                << '\n';
        }
    }
    return out.str();
}

std::string render_text(const CorrelationTable& table) {
    static constexpr int kWidth = 14;
    auto pad = [](std::string s) {
        if (s.size() < kWidth) s.append(kWidth - s.size(), ' ');
        return s;
    };
    std::ostringstream out;
    switch (table.scenario) {
        case TableScenario::Bell: out << "Bell-state correlations\n"; break;
        case TableScenario::Mixed: out << "Bell and combination-state correlations\n"; break;
        case TableScenario::Ghz: out << "GHZ triplet correlations (qubits: center, Alice, Bob)\n"; break;
    }
    const std::string rule = "------+" + std::string(kWidth * table.columns.size(), '-') + "\n";
    out << rule << "Trent | ";
    for (const auto& c : table.columns) out << pad(to_string(c));
    out << "\n" << rule;
    const std::size_t rows = table.entries.size() / table.columns.size();
    std::vector<std::string> notes;
    for (std::size_t r = 0; r < rows; ++r) {
        std::ostringstream alice_line;
        std::ostringstream bob_line;
        alice_line << "Alice | ";
        bob_line << "Bob   | ";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto& e = table.entries[c * rows + r];
            alice_line << pad(to_string(e.alice));
            std::string cell = cell_text(e);
            if (!e.matches_printed) {
                cell += "*";
                notes.push_back("* center " + to_string(e.center) + ", Alice " + to_string(e.alice) +
                                ": derived Bob " + cell_text(e) + ", printed " + to_string(e.printed_bob));
            }
            bob_line << pad(cell);
        }
        out << alice_line.str() << "\n" << bob_line.str() << "\n" << rule;
    }
    for (const auto& n : notes) out << n << "\n";
    return out.str();
}

}  // namespace tcqkd
