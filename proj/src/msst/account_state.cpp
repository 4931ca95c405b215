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

#include "brokershard/msst/account_state.hpp"

#include "brokershard/ledger/crypto.hpp"

namespace brokershard {

bool nonce_window::consume(nonce_t n)
{
    if (is_consumed(n))
        return false;
    if (n != _next) {
        _ahead.insert(n);
        return true;
    }
    ++_next;
    while (!_ahead.empty() && *_ahead.begin() == _next) {
        _ahead.erase(_ahead.begin());
        ++_next;
    }
    return true;
}

void nonce_window::encode(encoder &e) const
{
    encoder inner;
    inner.u64(_next);
    for (auto n : _ahead)
        inner.u64(n);
    e.nested(inner);
}

encoder account_state::encode() const
{
    encoder e;
    e.fixed(addr);
    e.field(storage.to_string());
    nonce.encode(e);
    e.amount(value);
    encoder z;
    z.u8(static_cast<std::uint8_t>(code));
    if (code == code_kind::contract)
        z.fixed(code_hash);
    e.nested(z);
    return e;
}

digest account_state::leaf() const
{
    return sha256(byte_span{encode().buffer()});
}

account_state make_account(const address &a, storage_map m, amount_t value)
{
    account_state st;
    st.addr = a;
    st.storage = std::move(m);
    st.value = value;
    return st;
}

} // namespace brokershard
