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

#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "tcqkd/correlation.hpp"
#include "tcqkd/qstate.hpp"

namespace tcqkd {

/// The five trusted-center schemes. GHZ1..GHZ3 distribute GHZ triplets
/// (center measures one particle); BELL4/BELL5 distribute labelled pairs.
enum class ProtocolId { Ghz1, Ghz2, Ghz3, Bell4, Bell5 };

inline constexpr std::array<ProtocolId, 5> kAllProtocols{ProtocolId::Ghz1, ProtocolId::Ghz2,
                                                         ProtocolId::Ghz3, ProtocolId::Bell4,
                                                         ProtocolId::Bell5};

inline bool is_ghz(ProtocolId p) {
    return p == ProtocolId::Ghz1 || p == ProtocolId::Ghz2 || p == ProtocolId::Ghz3;
}

/// "GHZ1" ... "BELL5".
std::string_view to_string(ProtocolId p);
/// Case-insensitive inverse of to_string.
ProtocolId parse_protocol(std::string_view text);

enum class Party { Alice, Bob };
std::string_view to_string(Party p);
Party parse_party(std::string_view text);

/// The center's public announcement for one position. Empty when no
/// announcement was made (GHZ3 position lost before the bases were known).
using Announcement = std::optional<CenterLabel>;

}  // namespace tcqkd
