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

#include "brokershard/common/seed.hpp"

#include "brokershard/ledger/crypto.hpp"
#include "brokershard/ledger/encoding.hpp"

namespace brokershard {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream)
{
    encoder e;
    e.u64(seed).field(stream);
    const auto d = sha256(byte_span{e.buffer()});
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < 8; ++i)
        out = (out << 8) | d.data[i];
    return out;
}

} // namespace brokershard
