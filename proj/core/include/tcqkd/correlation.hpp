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

// Correlation look-up tables for the states the center hands out. Every
// derived entry comes from projecting the conditional pair state; the
// reference tables are carried alongside only so that disagreements can be
// flagged.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tcqkd/qstate.hpp"

namespace tcqkd {

/// What the center announces about the pair it handed out: its own GHZ
/// measurement result, or the label of the prepared two-qubit state.
using CenterLabel = std::variant<BasisOutcome, TwoQubitLabel>;

std::string to_string(const CenterLabel& label);

/// The two-qubit (Alice, Bob) state conditioned on the center's announcement.
/// For a BasisOutcome this is the GHZ triplet collapsed on qubit 0.
StateVector conditional_pair(const CenterLabel& label);

/// Bob's outcome in `bob_basis` if it is fixed by Alice's (basis, outcome) on
/// `pair`, otherwise nullopt (also when Alice's outcome is impossible).
std::optional<Outcome> predict_peer(const StateVector& pair, BasisOutcome alice, Basis bob_basis);

enum class TableScenario { Bell, Mixed, Ghz };

std::string_view to_string(TableScenario s);
TableScenario parse_table_scenario(std::string_view text);

struct CorrelationEntry {
    CenterLabel center;
    BasisOutcome alice;
    Basis bob_basis;
    std::optional<Outcome> bob_outcome;  // set iff deterministic
    BasisOutcome printed_bob;
    bool matches_printed;

    bool deterministic() const { return bob_outcome.has_value(); }
};

struct CorrelationTable {
    TableScenario scenario;
    std::vector<CenterLabel> columns;
    std::vector<CorrelationEntry> entries;  // column-major: 4 entries per column

    std::size_t discrepancy_count() const;
};

CorrelationTable derive_correlation_table(TableScenario scenario);

/// CSV with header
/// scenario,center,alice_basis,alice_outcome,bob_basis,bob_outcome,deterministic,matches_paper
std::string render_csv(std::span<const CorrelationTable> tables);

/// Column-per-announcement layout (Alice/Bob row pairs); mismatching cells are
/// starred and explained below the table.
std::string render_text(const CorrelationTable& table);

}  // namespace tcqkd
