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

#include "brokershard/ledger/classify.hpp"

namespace brokershard {

tx_class classify_tx(const storage_map &from, const storage_map &to)
{
    const auto n = std::min(from.size(), to.size());
    for (shard_id s = 0; s < n; ++s)
        if (from.test(s) && to.test(s))
            return intra_shard{s};
    const auto src = from.first();
    const auto dst = to.first();
    if (!src || !dst)
        throw error(errc::unknown_account, "account has no placement");
    return cross_shard{*src, *dst};
}

} // namespace brokershard
