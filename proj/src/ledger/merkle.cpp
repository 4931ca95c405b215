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

#include "brokershard/ledger/merkle.hpp"

#include "brokershard/common/error.hpp"

namespace brokershard {

namespace {
    std::vector<digest> next_level(const std::vector<digest> &level)
    {
        std::vector<digest> up;
        up.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            const auto &left = level[i];
            const auto &right = i + 1 < level.size() ? level[i + 1] : level[i];
            up.push_back(hash_pair(left, right));
        }
        return up;
    }
} // namespace

digest merkle_root(std::span<const digest> leaves)
{
    if (leaves.empty())
        throw error(errc::empty_list, "merkle_root of an empty list");
    std::vector<digest> level(leaves.begin(), leaves.end());
    while (level.size() > 1)
        level = next_level(level);
    return level.front();
}

merkle_path build_merkle_path(std::span<const digest> leaves, std::size_t index)
{
    if (leaves.empty())
        throw error(errc::empty_list, "merkle_path of an empty list");
    if (index >= leaves.size())
        throw std::out_of_range("merkle leaf index out of range");
    merkle_path path;
    std::vector<digest> level(leaves.begin(), leaves.end());
    while (level.size() > 1) {
        if (index % 2 == 0) {
            const auto &sib = index + 1 < level.size() ? level[index + 1] : level[index];
            path.push_back({sib, sibling_side::right});
        } else {
            path.push_back({level[index - 1], sibling_side::left});
        }
        level = next_level(level);
        index /= 2;
    }
    return path;
}

bool verify_merkle_path(const digest &leaf, const merkle_path &path, const digest &root)
{
    digest acc = leaf;
    for (const auto &step : path)
        acc = step.side == sibling_side::right ? hash_pair(acc, step.sibling) : hash_pair(step.sibling, acc);
    return acc == root;
}

const digest &empty_root()
{
    static const digest root = sha256(std::string_view{"brokershard/empty"});
    return root;
}

} // namespace brokershard
