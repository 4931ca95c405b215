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

#include <doctest.h>

#include "brokershard/ledger/block.hpp"
#include "brokershard/ledger/classify.hpp"
#include "brokershard/ledger/transaction.hpp"
#include "oracles/merkle_oracle.hpp"

using namespace brokershard;

namespace {

std::vector<digest> leaves(std::size_t n)
{
    std::vector<digest> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(sha256("leaf-" + std::to_string(i)));
    return out;
}

raw_cross_tx sample_raw(const key_ring &keys)
{
    raw_cross_tx r;
    r.payer = address::from_label("A");
    r.payee = address::from_label("B");
    r.broker = address::from_label("C");
    r.value = 40;
    r.lock_duration = 20;
    r.payer_nonce = 3;
    r.broker_nonce = 9;
    r.payer_sig = sign(r.signed_payload(), r.payer, keys.secret_for(r.payer));
    return r;
}

} // namespace

TEST_CASE("amount and hex round-trips")
{
    const amount_t big = (amount_t{1} << 100) + 12345;
    CHECK(parse_amount(to_string(big)) == big);
    CHECK(to_string(amount_t{0}) == "0");
    CHECK_THROWS_AS(parse_amount("340282366920938463463374607431768211456"), error);
    CHECK_THROWS_AS(parse_amount("12a"), error);
    const auto a = address::from_label("alice");
    CHECK(address::from_hex(a.hex()) == a);
    CHECK(address::from_hex("0x01").data[19] == 1);
    CHECK_THROWS_AS(from_hex("abc"), error);
    CHECK_THROWS_AS(address::from_hex(std::string(42, 'a')), error);
}

TEST_CASE("sha256 known vector")
{
    CHECK(sha256("abc").hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("merkle root matches reference for 1..64 leaves and every path verifies")
{
    for (std::size_t n = 1; n <= 64; ++n) {
        const auto ls = leaves(n);
        const auto root = merkle_root(ls);
        CHECK(root == oracle::merkle_root(ls));
        for (std::size_t i = 0; i < n; ++i) {
            const auto path = build_merkle_path(ls, i);
            CHECK(verify_merkle_path(ls[i], path, root));
            CHECK_FALSE(verify_merkle_path(sha256("other"), path, root));
        }
    }
    CHECK(merkle_root(leaves(1)) == leaves(1)[0]);
    CHECK_THROWS_AS(merkle_root(std::vector<digest>{}), error);
}

TEST_CASE("tampered merkle path is rejected")
{
    const auto ls = leaves(7);
    const auto root = merkle_root(ls);
    auto path = build_merkle_path(ls, 5);
    path[1].sibling.data[0] ^= 1;
    CHECK_FALSE(verify_merkle_path(ls[5], path, root));
}

TEST_CASE("mock signatures bind payload and signer")
{
    const key_ring keys;
    const auto r = sample_raw(keys);
    CHECK(verify(r.signed_payload(), r.payer_sig, r.payer, keys.secret_for(r.payer)));
    CHECK_FALSE(verify(r.signed_payload(), r.payer_sig, r.broker, keys.secret_for(r.broker)));
    auto tampered = r;
    tampered.value = 41;
    CHECK_FALSE(verify(tampered.signed_payload(), r.payer_sig, r.payer, keys.secret_for(r.payer)));
    CHECK(tampered.id() != r.id());
    CHECK(key_ring{"x"}.secret_for(r.payer) != keys.secret_for(r.payer));
}

TEST_CASE("transaction digests are deterministic and field-sensitive")
{
    const auto a = address::from_label("A");
    const auto b = address::from_label("B");
    const auto t1 = make_plain(a, b, 5, 0, 10, 1);
    CHECK(t1.id() == make_plain(a, b, 5, 0, 10, 1).id());
    CHECK(t1.id() != make_plain(a, b, 5, 1, 10, 1).id());
    CHECK(t1.id() != make_plain(a, b, 6, 0, 10, 1).id());
    CHECK(t1.id() != make_plain(b, a, 5, 0, 10, 1).id());

    const key_ring keys;
    half_tx h1{half_kind::type1, sample_raw(keys), std::uint64_t{100}, {}};
    half_tx h2{half_kind::type2, sample_raw(keys), std::nullopt, {}};
    const auto src = make_theta1_tx(h1, ctx_leg::source, 0, 1);
    CHECK(src.from == h1.raw.payer);
    CHECK(src.to == h1.raw.broker);
    CHECK(src.nonce == h1.raw.payer_nonce);
    const auto dst = make_theta1_tx(h1, ctx_leg::destination, 0, 1);
    CHECK(dst.nonce == h1.raw.broker_nonce);
    CHECK(dst.id() != src.id());
    const auto t2 = make_theta2_tx(h2, 0, 1);
    CHECK(t2.from == h2.raw.broker);
    CHECK(t2.to == h2.raw.payee);
    CHECK(h1.ctx_id() == h2.ctx_id());
    CHECK(h1.signed_payload() != h2.signed_payload());
}

TEST_CASE("block header hash and tx root")
{
    const auto a = address::from_label("A");
    const auto b = address::from_label("B");
    std::vector<transaction> txs{make_plain(a, b, 1, 0), make_plain(a, b, 2, 1), make_plain(b, a, 3, 0)};
    const auto blk = seal_block(1, 7, digest{}, txs, empty_root(), 99);
    CHECK(blk.header.tx_count == 3);
    CHECK(blk.header.tx_root == merkle_root(blk.tx_digests()));
    CHECK(seal_block(1, 7, digest{}, {}, empty_root(), 99).header.tx_root == empty_root());
    auto other = blk.header;
    other.height = 8;
    CHECK(other.hash() != blk.header.hash());
}

TEST_CASE("classify_tx")
{
    const auto s = 4;
    CHECK(classify_tx(storage_map::single(s, 1), storage_map::single(s, 1)) == tx_class{intra_shard{1}});
    CHECK(classify_tx(storage_map::single(s, 0), storage_map::single(s, 3)) == tx_class{cross_shard{0, 3}});
    // A broker spans every shard, so payer to broker is local to the payer.
    CHECK(classify_tx(storage_map::single(s, 2), storage_map::all(s)) == tx_class{intra_shard{2}});
    CHECK(classify_tx(storage_map::all(s), storage_map::single(s, 3)) == tx_class{intra_shard{3}});
    CHECK_THROWS_AS(classify_tx(storage_map(s), storage_map::single(s, 3)), error);
}

TEST_CASE("storage map rendering")
{
    auto m = storage_map::single(4, 2);
    CHECK(m.to_string() == "0010");
    CHECK(m.count() == 1);
    m.set(0);
    CHECK(m.first() == 0u);
    CHECK(m.shards() == std::vector<shard_id>{0, 2});
    CHECK(storage_map::all(3).to_string() == "111");
}
