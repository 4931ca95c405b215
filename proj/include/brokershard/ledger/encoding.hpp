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

#include "brokershard/ledger/types.hpp"

namespace brokershard {

/// Canonical payload encoding: every field is written as a 4-byte big-endian
/// length followed by its bytes, in declaration order.
class encoder {
public:
    encoder &field(byte_span data);
    encoder &field(std::string_view s);
    encoder &u8(std::uint8_t v);
    encoder &u64(std::uint64_t v);
    encoder &amount(amount_t v);
    template<std::size_t N>
    encoder &fixed(const fixed_bytes<N> &v) { return field(v.span()); }
    /// Nested encodings are length-prefixed like any other field.
    encoder &nested(const encoder &inner) { return field(byte_span{inner._buf}); }

    const bytes &buffer() const noexcept { return _buf; }
    bytes take() && { return std::move(_buf); }

private:
    bytes _buf;
};

} // namespace brokershard
