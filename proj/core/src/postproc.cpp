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

#include "tcqkd/postproc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace tcqkd {
namespace {

using Word = std::uint64_t;

std::vector<Word> pack(const Bits& bits) {
    std::vector<Word> out((bits.size() + 63) / 64 + 1, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) out[i >> 6] |= Word{1} << (i & 63);
    }
    return out;
}

// Bits [offset, offset + 64) of a packed vector (zero beyond its end).
Word window(const std::vector<Word>& words, std::size_t offset) {
    const std::size_t w = offset >> 6;
    const unsigned shift = offset & 63;
    const Word lo = w < words.size() ? words[w] : 0;
    if (shift == 0) return lo;
    const Word hi = w + 1 < words.size() ? words[w + 1] : 0;
    return (lo >> shift) | (hi << (64 - shift));
}

// Parity of alice XOR bob over the given positions.
int diff_parity(const Bits& alice, const Bits& bob, const std::size_t* begin, const std::size_t* end) {
    int p = 0;
    for (auto it = begin; it != end; ++it) p ^= alice[*it] ^ bob[*it];
    return p;
}

}  // namespace

std::string_view to_string(KeyStage s) {
    switch (s) {
        case KeyStage::Raw: return "raw";
        case KeyStage::Sifted: return "sifted";
        case KeyStage::Reconciled: return "reconciled";
        case KeyStage::Final: return "final";
    }
    return "?";
}

std::string bits_to_hex(const Bits& bits) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            nibble <<= 1;
            if (i + k < bits.size() && bits[i + k] != 0) nibble |= 1;
        }
        out.push_back(kDigits[nibble]);
    }
    return out;
}

std::string to_hex(const KeyMaterial& key) {
    return "# stage=" + std::string(to_string(key.stage)) + " bits=" + std::to_string(key.bits.size()) +
           " leaked=" + std::to_string(key.leaked_bits) + "\n" + bits_to_hex(key.bits) + "\n";
}

std::size_t hamming_distance(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

QberEstimate estimate_qber(const Bits& alice, const Bits& bob, double sample_fraction, Rng& rng) {
    if (alice.size() != bob.size()) throw std::invalid_argument("estimate_qber: length mismatch");
    if (!(sample_fraction > 0.0 && sample_fraction < 1.0)) {
        throw std::invalid_argument("estimate_qber: sample fraction must lie in (0, 1)");
    }
    const std::size_t n = alice.size();
    const auto k = static_cast<std::size_t>(std::floor(sample_fraction * static_cast<double>(n)));
    if (k == 0) throw std::invalid_argument("estimate_qber: empty sample");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + rng.below(n - i)]);
    std::vector<bool> sampled(n, false);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < k; ++i) {
        sampled[order[i]] = true;
        errors += alice[order[i]] != bob[order[i]] ? 1 : 0;
    }
    QberEstimate out{static_cast<double>(errors) / static_cast<double>(k), {}, {}, k};
    for (std::size_t i = 0; i < n; ++i) {
        if (sampled[i]) continue;
        out.alice_rest.push_back(alice[i]);
        out.bob_rest.push_back(bob[i]);
    }
    return out;
}

std::size_t cascade_block_size(double qber, std::size_t n) {
    if (!(qber > 0.0)) throw std::invalid_argument("cascade_block_size: qber must be positive");
    const double raw = std::ceil(0.73 / qber);
    const std::size_t hi = std::max<std::size_t>(n, 8);
    if (raw >= static_cast<double>(hi)) return hi;
    return std::max<std::size_t>(8, static_cast<std::size_t>(raw));
}

Reconciliation reconcile(const Bits& alice, const Bits& bob, int passes, std::size_t initial_block,
                         std::uint64_t shuffle_seed) {
    if (alice.size() != bob.size()) throw std::invalid_argument("reconcile: length mismatch");
    if (passes < 0) throw std::invalid_argument("reconcile: negative pass count");
    if (initial_block == 0) throw std::invalid_argument("reconcile: block size must be positive");

    const std::size_t n = alice.size();
    Reconciliation out{bob, 0, 0};
    if (n == 0) return out;
    const std::size_t k = std::min(initial_block, n);
    const std::size_t blocks = (n + k - 1) / k;

    // order[p] lists positions in pass-p order; block b of pass p is
    // order[p][b*k, min((b+1)*k, n)). where[p][i] is the block holding i.
    std::vector<std::vector<std::size_t>> order;
    std::vector<std::vector<std::size_t>> where;
    std::vector<std::vector<int>> parity;
    Rng rng(shuffle_seed);

    auto block_range = [&](std::size_t p, std::size_t b) {
        const std::size_t* base = order[p].data();
        return std::pair{base + b * k, base + std::min((b + 1) * k, n)};
    };

    std::deque<std::pair<std::size_t, std::size_t>> pending;
    auto correct_block = [&](std::size_t p, std::size_t b) {
        auto [lo, hi] = block_range(p, b);
        // Binary search: one parity disclosed per halving.
        while (hi - lo > 1) {
            const std::size_t* mid = lo + (hi - lo) / 2;
            ++out.leaked;
            if (diff_parity(alice, out.corrected, lo, mid) != 0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        const std::size_t flipped = *lo;
        out.corrected[flipped] ^= 1;
        for (std::size_t q = 0; q < order.size(); ++q) {
            const std::size_t qb = where[q][flipped];
            parity[q][qb] ^= 1;
            if (q != p && parity[q][qb] != 0) pending.emplace_back(q, qb);
        }
    };

    for (int pass = 0; pass < passes; ++pass) {
        std::vector<std::size_t> ord(n);
        std::iota(ord.begin(), ord.end(), 0);
        if (pass > 0) {
            for (std::size_t i = n - 1; i > 0; --i) std::swap(ord[i], ord[rng.below(i + 1)]);
        }
        std::vector<std::size_t> wh(n);
        for (std::size_t j = 0; j < n; ++j) wh[ord[j]] = j / k;
        order.push_back(std::move(ord));
        where.push_back(std::move(wh));

        const auto p = static_cast<std::size_t>(pass);
        std::vector<int> par(blocks);
        for (std::size_t b = 0; b < blocks; ++b) {
            const std::size_t* lo = order[p].data() + b * k;
            const std::size_t* hi = order[p].data() + std::min((b + 1) * k, n);
            par[b] = diff_parity(alice, out.corrected, lo, hi);
            ++out.leaked;
        }
        parity.push_back(std::move(par));

        for (std::size_t b = 0; b < blocks; ++b) {
            if (parity[p][b] != 0) correct_block(p, b);
            while (!pending.empty()) {
                const auto [q, qb] = pending.front();
                pending.pop_front();
                if (parity[q][qb] != 0) correct_block(q, qb);
            }
        }
    }
    out.residual_errors = hamming_distance(alice, out.corrected);
    return out;
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::size_t secure_length(std::size_t n, std::size_t leaked, double qber, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    const double entropy_bits = std::floor(static_cast<double>(n) * (1.0 - binary_entropy(qber)));
    const double margin = std::ceil(2.0 * std::log2(1.0 / epsilon));
    const double m = entropy_bits - static_cast<double>(leaked) - margin;
    return m > 0.0 ? static_cast<std::size_t>(m) : 0;
}

Bits toeplitz_seed_bits(std::uint64_t seed, std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) return {};
    const std::size_t count = m + n - 1;
    Rng rng(seed);
    Bits r(count);
    Word word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if ((i & 63) == 0) word = rng.next();
        r[i] = static_cast<std::uint8_t>((word >> (i & 63)) & 1);
    }
    return r;
}

Bits toeplitz_hash(const Bits& key, std::size_t m, std::uint64_t seed) {
    const std::size_t n = key.size();
    if (m == 0 || n == 0) return {};
    // Row i is r[i + n - 1 - j] over j, i.e. the window r[i, i + n) against
    // the reversed key.
    const auto r = pack(toeplitz_seed_bits(seed, m, n));
    const Bits reversed(key.rbegin(), key.rend());
    const auto kr = pack(reversed);
    const std::size_t words = (n + 63) / 64;
    Bits out(m);
    for (std::size_t i = 0; i < m; ++i) {
        Word acc = 0;
        for (std::size_t w = 0; w < words; ++w) acc ^= window(r, i + 64 * w) & kr[w];
        out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
    }
    return out;
}

Bits privacy_amplify(const Bits& key, std::size_t leaked, double qber, double epsilon, std::uint64_t seed) {
    return toeplitz_hash(key, secure_length(key.size(), leaked, qber, epsilon), seed);
}

DistillationReport distill(const Bits& alice_raw, const Bits& bob_raw, double qber, double epsilon,
                           std::uint64_t seed) {
    if (alice_raw.size() != bob_raw.size()) throw std::invalid_argument("distill: length mismatch");
    DistillationReport report;
    report.qber = qber;
    report.input_bits = alice_raw.size();

    Bits bob = bob_raw;
    if (qber > 0.0 && !alice_raw.empty()) {
        report.block_size = cascade_block_size(qber, alice_raw.size());
        auto rec = reconcile(alice_raw, bob_raw, kReconcilePasses, report.block_size, split_seed(seed, 1));
        bob = std::move(rec.corrected);
        report.leaked_bits = rec.leaked;
        report.residual_errors = rec.residual_errors;
    }
    const std::size_t m = secure_length(alice_raw.size(), report.leaked_bits, qber, epsilon);
    report.alice_final = {KeyStage::Final, toeplitz_hash(alice_raw, m, seed), report.leaked_bits};
    report.bob_final = {KeyStage::Final, toeplitz_hash(bob, m, seed), report.leaked_bits};
    return report;
}

}  // namespace tcqkd
