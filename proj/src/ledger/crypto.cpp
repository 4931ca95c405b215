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

#include "brokershard/ledger/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "brokershard/common/error.hpp"
#include "brokershard/ledger/encoding.hpp"

namespace brokershard {

digest sha256(byte_span data)
{
    digest out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
        throw std::runtime_error("EVP_Digest(sha256) failed");
    return out;
}

digest sha256(std::string_view data)
{
    return sha256(byte_span{reinterpret_cast<const std::uint8_t *>(data.data()), data.size()});
}

digest hash_pair(const digest &left, const digest &right)
{
    std::array<std::uint8_t, 1 + 2 * digest::size()> buf{};
    buf[0] = 0x01;
    std::copy(left.data.begin(), left.data.end(), buf.begin() + 1);
    std::copy(right.data.begin(), right.data.end(), buf.begin() + 1 + digest::size());
    return sha256(byte_span{buf});
}

signature sign(byte_span payload, const address &signer, byte_span secret)
{
    encoder msg;
    msg.field(payload).fixed(signer);
    const auto &buf = msg.buffer();
    signature sig;
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), secret.data(), static_cast<int>(secret.size()), buf.data(), buf.size(), sig.value.data.data(),
             &len) == nullptr
        || len != digest::size())
        throw std::runtime_error("HMAC-SHA256 failed");
    return sig;
}

bool verify(byte_span payload, const signature &sig, const address &signer, byte_span secret)
{
    return sign(payload, signer, secret) == sig;
}

bytes key_ring::secret_for(const address &who) const
{
    encoder e;
    e.field(_salt).fixed(who);
    const auto d = sha256(byte_span{e.buffer()});
    return {d.data.begin(), d.data.end()};
}

} // namespace brokershard
