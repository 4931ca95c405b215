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

#include "brokershard/ledger/encoding.hpp"

namespace brokershard {

namespace {
    void put_be(bytes &out, std::uint64_t v, int width)
    {
        for (int i = width - 1; i >= 0; --i)
            out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
} // namespace

encoder &encoder::field(byte_span data)
{
    put_be(_buf, data.size(), 4);
    _buf.insert(_buf.end(), data.begin(), data.end());
    return *this;
}

encoder &encoder::field(std::string_view s)
{
    return field(byte_span{reinterpret_cast<const std::uint8_t *>(s.data()), s.size()});
}

encoder &encoder::u8(std::uint8_t v)
{
    return field(byte_span{&v, 1});
}

encoder &encoder::u64(std::uint64_t v)
{
    bytes tmp;
    put_be(tmp, v, 8);
    return field(byte_span{tmp});
}

encoder &encoder::amount(amount_t v)
{
    bytes tmp;
    put_be(tmp, static_cast<std::uint64_t>(v >> 64), 8);
    put_be(tmp, static_cast<std::uint64_t>(v), 8);
    return field(byte_span{tmp});
}

} // namespace brokershard
