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

#include "brokershard/ledger/storage_map.hpp"

namespace brokershard {

storage_map storage_map::single(std::size_t shard_count, shard_id home)
{
    storage_map m(shard_count);
    m.set(home);
    return m;
}

storage_map storage_map::all(std::size_t shard_count)
{
    storage_map m(shard_count);
    for (shard_id s = 0; s < shard_count; ++s)
        m.set(s);
    return m;
}

std::size_t storage_map::count() const noexcept
{
    std::size_t n = 0;
    for (bool b : _bits)
        n += b ? 1 : 0;
    return n;
}

std::optional<shard_id> storage_map::first() const noexcept
{
    for (std::size_t i = 0; i < _bits.size(); ++i)
        if (_bits[i])
            return static_cast<shard_id>(i);
    return std::nullopt;
}

std::vector<shard_id> storage_map::shards() const
{
    std::vector<shard_id> out;
    for (std::size_t i = 0; i < _bits.size(); ++i)
        if (_bits[i])
            out.push_back(static_cast<shard_id>(i));
    return out;
}

std::string storage_map::to_string() const
{
    std::string out;
    out.reserve(_bits.size());
    for (bool b : _bits)
        out.push_back(b ? '1' : '0');
    return out;
}

} // namespace brokershard
