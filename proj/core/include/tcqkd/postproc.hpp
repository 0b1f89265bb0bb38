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

// Classical distillation of sifted keys: QBER sampling, cascade-style parity
// reconciliation and Toeplitz-hash privacy amplification.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tcqkd/rng.hpp"

namespace tcqkd {

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

enum class KeyStage { Raw, Sifted, Reconciled, Final };
std::string_view to_string(KeyStage s);

struct KeyMaterial {
    KeyStage stage = KeyStage::Raw;
    Bits bits;
    std::size_t leaked_bits = 0;  // cumulative public disclosure about `bits`
};

/// Lowercase hex (MSB-first nibbles, zero padded) preceded by a header line
/// `# stage=<stage> bits=<n> leaked=<k>`.
std::string to_hex(const KeyMaterial& key);
std::string bits_to_hex(const Bits& bits);

std::size_t hamming_distance(const Bits& a, const Bits& b);

struct QberEstimate {
    double qber;
    Bits alice_rest;
    Bits bob_rest;
    std::size_t sampled;  // disclosed bits, counted as leaked
};

/// Discloses floor(sample_fraction * n) uniformly chosen positions, returns
/// their mismatch fraction and the undisclosed remainder of both keys.
/// Throws std::invalid_argument on length mismatch, a fraction outside (0,1)
/// or an empty sample.
QberEstimate estimate_qber(const Bits& alice, const Bits& bob, double sample_fraction, Rng& rng);

/// Block size for the first reconciliation pass: ceil(0.73 / qber) clamped to
/// [8, n]. qber must be positive.
std::size_t cascade_block_size(double qber, std::size_t n);

struct Reconciliation {
    Bits corrected;              // Bob's key after correction
    std::size_t leaked = 0;      // parity bits disclosed
    std::size_t residual_errors = 0;  // mismatches left against Alice's key
};

/// Cascade-style reconciliation: `passes` passes of parity comparison over
/// blocks of `initial_block` bits (pass 0 in key order, later passes over a
/// seeded shuffle), binary search inside mismatched blocks, and back-tracking
/// into earlier passes whenever a correction flips their block parity.
Reconciliation reconcile(const Bits& alice, const Bits& bob, int passes, std::size_t initial_block,
                         std::uint64_t shuffle_seed = 0);

/// h2(p) = -p log2 p - (1-p) log2 (1-p), with h2(0) = h2(1) = 0.
double binary_entropy(double p);

/// max(0, floor(n (1 - h2(qber))) - leaked - ceil(2 log2(1/epsilon))).
std::size_t secure_length(std::size_t n, std::size_t leaked, double qber, double epsilon);

/// The m + n - 1 seed bits defining an m x n Toeplitz matrix,
/// T[i][j] = r[i - j + n - 1].
Bits toeplitz_seed_bits(std::uint64_t seed, std::size_t m, std::size_t n);

/// key (length n) multiplied by the seeded m x n Toeplitz matrix over GF(2).
Bits toeplitz_hash(const Bits& key, std::size_t m, std::uint64_t seed);

/// Compresses `key` to secure_length(...) bits by Toeplitz hashing. epsilon
/// must be in (0, 1]; epsilon = 1 drops the security margin.
Bits privacy_amplify(const Bits& key, std::size_t leaked, double qber, double epsilon, std::uint64_t seed);

struct DistillationReport {
    double qber = 0.0;
    std::size_t input_bits = 0;
    std::size_t block_size = 0;  // 0 when reconciliation was skipped
    std::size_t leaked_bits = 0;
    std::size_t residual_errors = 0;
    KeyMaterial alice_final{KeyStage::Final, {}, 0};
    KeyMaterial bob_final{KeyStage::Final, {}, 0};
};

inline constexpr double kDefaultEpsilon = 0x1p-32;
inline constexpr int kReconcilePasses = 2;

/// Raw keys (already sifted, check positions removed) through reconciliation
/// (skipped when qber is 0) and privacy amplification.
DistillationReport distill(const Bits& alice_raw, const Bits& bob_raw, double qber, double epsilon,
                           std::uint64_t seed);

}  // namespace tcqkd
