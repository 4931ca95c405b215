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

digest sha256(byte_span data);
digest sha256(std::string_view data);
/// H(tag || left || right); the tag separates interior nodes from leaves.
digest hash_pair(const digest &left, const digest &right);

/// Mock signature: keyed digest standing in for ECDSA.
struct signature {
    digest value;
    auto operator<=>(const signature &) const = default;
    bool operator==(const signature &) const = default;
};

signature sign(byte_span payload, const address &signer, byte_span secret);
bool verify(byte_span payload, const signature &sig, const address &signer, byte_span secret);

/// Deterministic per-address secrets. Every simulated actor derives its
/// signing secret from its address and the ring's salt.
class key_ring {
public:
    explicit key_ring(std::string salt = "brokershard") : _salt{std::move(salt)} {}

    bytes secret_for(const address &who) const;

private:
    std::string _salt;
};

} // namespace brokershard
