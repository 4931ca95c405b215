// Copyright 2026 The BrokerShard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include "brokershard/ledger/crypto.hpp"

namespace brokershard {

enum class sibling_side : std::uint8_t { left, right };

struct merkle_step {
    digest sibling;
    sibling_side side;
    bool operator==(const merkle_step &) const = default;
};

using merkle_path = std::vector<merkle_step>;

/// Binary Merkle root. Odd levels duplicate their last node. A single leaf is
/// its own root. Throws empty_list for an empty input.
digest merkle_root(std::span<const digest> leaves);
merkle_path build_merkle_path(std::span<const digest> leaves, std::size_t index);
bool verify_merkle_path(const digest &leaf, const merkle_path &path, const digest &root);

/// Root used for empty collections (empty tree, no migrations).
const digest &empty_root();

} // namespace brokershard
