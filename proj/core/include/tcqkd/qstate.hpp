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

// Exact statevector arithmetic for the handful of qubits a trusted-center
// session ever holds at once.
//
// Conventions:
//  * computational (z) basis index bit 0 <-> |z+>, bit 1 <-> |z->
//  * qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
//    the amplitude index
//  * in three-party states the order is center = 0, Alice = 1, Bob = 2

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tcqkd {

using Amplitude = std::complex<double>;

enum class Basis { X, Y, Z };
enum class Outcome { Plus, Minus };

/// Named two-qubit states prepared by the Bell-state protocols. The first four
/// are the Bell states; the last two are the equal-weight combinations
/// (PsiMinus +/- PhiPlus) / sqrt(2).
enum class TwoQubitLabel { PsiPlus, PsiMinus, PhiPlus, PhiMinus, CombPsiPlus, CombPhiMinus };

/// Tolerance used for every state equality and probability comparison.
inline constexpr double kStateTolerance = 1e-12;

/// Largest register the simulator accepts. Protocol states use at most three
/// qubits; the ancilla probe adds two more.
inline constexpr std::size_t kMaxQubits = 5;

class StateVector {
  public:
    /// The empty (zero-qubit) marker left behind when the last qubit of a
    /// register is measured. It holds the single amplitude 1.
    StateVector();

    /// Validates length (2^num_qubits) and unit norm.
    StateVector(std::size_t num_qubits, std::vector<Amplitude> amplitudes);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    bool empty() const { return num_qubits_ == 0; }

    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    Amplitude operator[](std::size_t index) const { return amplitudes_[index]; }

    double norm_squared() const;

    /// Equality up to kStateTolerance per amplitude (no global-phase freedom).
    bool approx_equal(const StateVector& other, double tol = kStateTolerance) const;

    /// Equality up to a global phase.
    bool equal_up_to_phase(const StateVector& other, double tol = kStateTolerance) const;

    bool operator==(const StateVector&) const = default;

  private:
    std::size_t num_qubits_;
    std::vector<Amplitude> amplitudes_;
};

struct BasisOutcome {
    Basis basis;
    Outcome outcome;
    bool operator==(const BasisOutcome&) const = default;
};

// ---- constructors -------------------------------------------------------

StateVector make_eigenstate(Basis basis, Outcome sign);

/// (|z+>^n +/- |z->^n) / sqrt(2) for n in [2, 4]. Throws std::invalid_argument
/// otherwise.
StateVector make_cat(std::size_t n, Outcome relative_sign);

StateVector make_two_qubit(TwoQubitLabel label);

/// Product of single-qubit eigenstates, leftmost first.
StateVector make_product(std::span<const BasisOutcome> factors);

StateVector tensor(const StateVector& left, const StateVector& right);

/// Builds a state from unnormalized amplitudes by rescaling to unit norm.
/// Throws std::invalid_argument if the input is (numerically) zero.
StateVector normalized(std::size_t num_qubits, std::vector<Amplitude> amplitudes);

// ---- measurement --------------------------------------------------------

struct OutcomeDistribution {
    double p_plus;
    double p_minus;
    double probability(Outcome o) const { return o == Outcome::Plus ? p_plus : p_minus; }
};

/// Born-rule probabilities of measuring `qubit` in `basis`.
OutcomeDistribution outcome_distribution(const StateVector& state, std::size_t qubit, Basis basis);

/// Contracts `qubit` with <basis, outcome| and returns the (unnormalized)
/// remaining amplitudes. The squared norm of the result is the probability of
/// that outcome. The measured qubit is removed.
std::vector<Amplitude> project(const StateVector& state, std::size_t qubit, BasisOutcome eigen);

/// Same contraction on a raw (not necessarily normalized) amplitude vector of
/// `num_qubits` qubits.
std::vector<Amplitude> project(std::span<const Amplitude> amplitudes, std::size_t num_qubits, std::size_t qubit,
                               BasisOutcome eigen);

struct Measurement {
    Outcome outcome;
    double probability;
    StateVector collapsed;
};

/// Projective measurement driven by an externally supplied uniform draw in
/// [0, 1): the outcome is Plus iff draw < p_plus. The measured qubit is removed
/// from the collapsed state.
Measurement measure(const StateVector& state, std::size_t qubit, Basis basis, double random_draw);

/// Collapse onto a chosen outcome. Throws std::domain_error if it has zero
/// probability.
StateVector collapse(const StateVector& state, std::size_t qubit, BasisOutcome eigen);

/// Inserts `single` (a one-qubit state) so that it becomes qubit `position`.
StateVector insert_qubit(const StateVector& state, std::size_t position, const StateVector& single);

/// Hermitian inner product <a|b>. Throws std::invalid_argument on dimension
/// mismatch.
Amplitude inner_product(const StateVector& a, const StateVector& b);

// ---- names ----------------------------------------------------------------

std::string_view to_string(Basis b);
std::string_view to_string(Outcome o);
std::string_view to_string(TwoQubitLabel l);
/// "x+", "y-", ...
std::string to_string(BasisOutcome bo);

Basis parse_basis(std::string_view text);
TwoQubitLabel parse_two_qubit_label(std::string_view text);

inline Outcome flip(Outcome o) { return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus; }
inline int bit_of(Outcome o) { return o == Outcome::Plus ? 0 : 1; }

}  // namespace tcqkd
