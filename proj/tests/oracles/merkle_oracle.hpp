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

#include <vector>

#include "brokershard/ledger/crypto.hpp"

namespace oracle {

/// Recursive reference root: split at the largest power of two below n after
/// padding the level to even length, mirroring level-by-level duplication.
inline brokershard::digest merkle_root(std::vector<brokershard::digest> level)
{
    while (level.size() > 1) {
        if (level.size() % 2 == 1)
            level.push_back(level.back());
        std::vector<brokershard::digest> up;
        for (std::size_t i = 0; i < level.size(); i += 2)
            up.push_back(brokershard::hash_pair(level[i], level[i + 1]));
        level = std::move(up);
    }
    return level.front();
}

} // namespace oracle
