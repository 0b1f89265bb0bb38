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

#include "tcqkd/qstate.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace tcqkd {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Amplitude kI{0.0, 1.0};

// Amplitudes <z+|e>, <z-|e> of a single-qubit eigenstate.
std::array<Amplitude, 2> eigen_components(Basis basis, Outcome sign) {
    const double s = sign == Outcome::Plus ? 1.0 : -1.0;
    switch (basis) {
        case Basis::X:
            return {Amplitude{kInvSqrt2}, Amplitude{s * kInvSqrt2}};
        case Basis::Y:
            return {Amplitude{kInvSqrt2}, s * kI * kInvSqrt2};
        case Basis::Z:
            break;
    }
    return sign == Outcome::Plus ? std::array<Amplitude, 2>{1.0, 0.0}
                                 : std::array<Amplitude, 2>{0.0, 1.0};
}

// Index into an n-qubit register obtained by inserting `bit` as qubit `q`
// into an (n-1)-qubit index `rest`.
std::size_t insert_bit(std::size_t rest, std::size_t n, std::size_t q, std::size_t bit) {
    const std::size_t shift = n - 1 - q;
    const std::size_t low_mask = (std::size_t{1} << shift) - 1;
    return ((rest & ~low_mask) << 1) | (bit << shift) | (rest & low_mask);
}

void check_qubit(const StateVector& state, std::size_t qubit) {
    if (qubit >= state.num_qubits()) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                                std::to_string(state.num_qubits()) + "-qubit state");
    }
}

}  // namespace

StateVector::StateVector() : num_qubits_(0), amplitudes_{Amplitude{1.0}} {}

StateVector::StateVector(std::size_t num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits > kMaxQubits) {
        throw std::invalid_argument("at most " + std::to_string(kMaxQubits) + " qubits supported");
    }
    if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("amplitude count must be 2^num_qubits");
    }
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("non-finite amplitude");
        }
    }
    if (std::abs(norm_squared() - 1.0) > kStateTolerance) {
        throw std::invalid_argument("state is not normalized");
    }
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes_) total += std::norm(a);
    return total;
}

bool StateVector::approx_equal(const StateVector& other, double tol) const {
    if (num_qubits_ != other.num_qubits_) return false;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (std::abs(amplitudes_[i] - other.amplitudes_[i]) > tol) return false;
    }
    return true;
}

bool StateVector::equal_up_to_phase(const StateVector& other, double tol) const {
    if (num_qubits_ != other.num_qubits_) return false;
    return std::abs(std::abs(inner_product(*this, other)) - 1.0) <= tol;
}

StateVector make_eigenstate(Basis basis, Outcome sign) {
    const auto c = eigen_components(basis, sign);
    return StateVector(1, {c[0], c[1]});
}

StateVector make_cat(std::size_t n, Outcome relative_sign) {
    if (n < 2 || n > 4) {
        throw std::invalid_argument("cat states are supported for 2 <= n <= 4");
    }
    std::vector<Amplitude> amps(std::size_t{1} << n);
    amps.front() = kInvSqrt2;
    amps.back() = relative_sign == Outcome::Plus ? kInvSqrt2 : -kInvSqrt2;
    return StateVector(n, std::move(amps));
}

StateVector make_two_qubit(TwoQubitLabel label) {
    // Index order: 00, 01, 10, 11 with 0 = z+.
    const double h = kInvSqrt2;
    switch (label) {
        case TwoQubitLabel::PsiPlus:
            return StateVector(2, {h, 0.0, 0.0, h});
        case TwoQubitLabel::PsiMinus:
            return StateVector(2, {h, 0.0, 0.0, -h});
        case TwoQubitLabel::PhiPlus:
            return StateVector(2, {0.0, h, h, 0.0});
        case TwoQubitLabel::PhiMinus:
            return StateVector(2, {0.0, h, -h, 0.0});
        case TwoQubitLabel::CombPsiPlus:
        case TwoQubitLabel::CombPhiMinus: {
            const auto psi = make_two_qubit(TwoQubitLabel::PsiMinus);
            const auto phi = make_two_qubit(TwoQubitLabel::PhiPlus);
            const double s = label == TwoQubitLabel::CombPsiPlus ? 1.0 : -1.0;
            std::vector<Amplitude> amps(4);
            for (std::size_t i = 0; i < 4; ++i) amps[i] = (psi[i] + s * phi[i]) * h;
            return StateVector(2, std::move(amps));
        }
    }
    throw std::invalid_argument("unknown two-qubit label");
}

StateVector tensor(const StateVector& left, const StateVector& right) {
    std::vector<Amplitude> amps(left.dimension() * right.dimension());
    for (std::size_t i = 0; i < left.dimension(); ++i) {
        for (std::size_t j = 0; j < right.dimension(); ++j) {
            amps[i * right.dimension() + j] = left[i] * right[j];
        }
    }
    return StateVector(left.num_qubits() + right.num_qubits(), std::move(amps));
}

StateVector make_product(std::span<const BasisOutcome> factors) {
    StateVector result;
    for (const auto& f : factors) result = tensor(result, make_eigenstate(f.basis, f.outcome));
    return result;
}

StateVector normalized(std::size_t num_qubits, std::vector<Amplitude> amplitudes) {
    double total = 0.0;
    for (const auto& a : amplitudes) total += std::norm(a);
    if (!(total > kStateTolerance * kStateTolerance)) {
        throw std::invalid_argument("cannot normalize a zero vector");
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto& a : amplitudes) a *= scale;
    return StateVector(num_qubits, std::move(amplitudes));
}

std::vector<Amplitude> project(std::span<const Amplitude> amplitudes, std::size_t num_qubits, std::size_t qubit,
                               BasisOutcome eigen) {
    if (qubit >= num_qubits || amplitudes.size() != (std::size_t{1} << num_qubits)) {
        throw std::out_of_range("projection qubit out of range");
    }
    const auto e = eigen_components(eigen.basis, eigen.outcome);
    const Amplitude c0 = std::conj(e[0]);
    const Amplitude c1 = std::conj(e[1]);
    std::vector<Amplitude> out(amplitudes.size() / 2);
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r] = c0 * amplitudes[insert_bit(r, num_qubits, qubit, 0)] +
                 c1 * amplitudes[insert_bit(r, num_qubits, qubit, 1)];
    }
    return out;
}

std::vector<Amplitude> project(const StateVector& state, std::size_t qubit, BasisOutcome eigen) {
    check_qubit(state, qubit);
    return project(state.amplitudes(), state.num_qubits(), qubit, eigen);
}

OutcomeDistribution outcome_distribution(const StateVector& state, std::size_t qubit, Basis basis) {
    double p_plus = 0.0;
    for (const auto& a : project(state, qubit, {basis, Outcome::Plus})) p_plus += std::norm(a);
    p_plus = std::clamp(p_plus, 0.0, 1.0);
    return {p_plus, 1.0 - p_plus};
}

StateVector collapse(const StateVector& state, std::size_t qubit, BasisOutcome eigen) {
    auto rest = project(state, qubit, eigen);
    double p = 0.0;
    for (const auto& a : rest) p += std::norm(a);
    if (p <= kStateTolerance) {
        throw std::domain_error("collapse onto a zero-probability outcome");
    }
    if (state.num_qubits() == 1) return StateVector();
    return normalized(state.num_qubits() - 1, std::move(rest));
}

Measurement measure(const StateVector& state, std::size_t qubit, Basis basis, double random_draw) {
    const auto dist = outcome_distribution(state, qubit, basis);
    const Outcome outcome = random_draw < dist.p_plus ? Outcome::Plus : Outcome::Minus;
    const double p = dist.probability(outcome);
    // A draw in [0, 1) never selects a zero-probability branch.
    assert(p > 0.0);
    return {outcome, p, collapse(state, qubit, {basis, outcome})};
}

StateVector insert_qubit(const StateVector& state, std::size_t position, const StateVector& single) {
    if (single.num_qubits() != 1) throw std::invalid_argument("insert_qubit expects a one-qubit state");
    if (position > state.num_qubits()) throw std::out_of_range("insert position out of range");
    const std::size_t n = state.num_qubits() + 1;
    std::vector<Amplitude> amps(std::size_t{1} << n);
    for (std::size_t r = 0; r < state.dimension(); ++r) {
        amps[insert_bit(r, n, position, 0)] = state[r] * single[0];
        amps[insert_bit(r, n, position, 1)] = state[r] * single[1];
    }
    return StateVector(n, std::move(amps));
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner product of states with different qubit counts");
    }
    Amplitude total{};
    for (std::size_t i = 0; i < a.dimension(); ++i) total += std::conj(a[i]) * b[i];
    return total;
}

std::string_view to_string(Basis b) {
    switch (b) {
        case Basis::X: return "x";
        case Basis::Y: return "y";
        case Basis::Z: return "z";
    }
    return "?";
}

std::string_view to_string(Outcome o) { return o == Outcome::Plus ? "+" : "-"; }

std::string_view to_string(TwoQubitLabel l) {
    switch (l) {
        case TwoQubitLabel::PsiPlus: return "PsiPlus";
        case TwoQubitLabel::PsiMinus: return "PsiMinus";
        case TwoQubitLabel::PhiPlus: return "PhiPlus";
        case TwoQubitLabel::PhiMinus: return "PhiMinus";
        case TwoQubitLabel::CombPsiPlus: return "CombPsiPlus";
        case TwoQubitLabel::CombPhiMinus: return "CombPhiMinus";
    }
    return "?";
}

std::string to_string(BasisOutcome bo) {
    return std::string(to_string(bo.basis)) + std::string(to_string(bo.outcome));
}

Basis parse_basis(std::string_view text) {
    if (text == "x" || text == "X") return Basis::X;
    if (text == "y" || text == "Y") return Basis::Y;
    if (text == "z" || text == "Z") return Basis::Z;
    throw std::invalid_argument("unknown basis '" + std::string(text) + "'");
}

TwoQubitLabel parse_two_qubit_label(std::string_view text) {
    for (auto l : {TwoQubitLabel::PsiPlus, TwoQubitLabel::PsiMinus, TwoQubitLabel::PhiPlus,
                   TwoQubitLabel::PhiMinus, TwoQubitLabel::CombPsiPlus, TwoQubitLabel::CombPhiMinus}) {
        if (text == to_string(l)) return l;
    }
    throw std::invalid_argument("unknown two-qubit label '" + std::string(text) + "'");
}

}  // namespace tcqkd
