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

#include <random>

#include "brokershard/common/error.hpp"
#include "brokershard/msst/placement_registry.hpp"

using namespace brokershard;

namespace {

shard_state_tree tree_with(shard_id shard, std::size_t s, std::initializer_list<std::pair<const char *, amount_t>> accts)
{
    shard_state_tree t{shard, s};
    for (auto [label, v] : accts)
        t.insert(make_account(address::from_label(label), storage_map::single(s, shard), v));
    return t;
}

} // namespace

TEST_CASE("nonce window consumes each nonce once")
{
    nonce_window w;
    CHECK(w.consume(0));
    CHECK_FALSE(w.consume(0));
    CHECK(w.consume(3));
    CHECK(w.next() == 1);
    CHECK(w.consume(1));
    CHECK(w.consume(2));
    CHECK(w.next() == 4);
    CHECK(w.consumed_ahead().empty());
    CHECK_FALSE(w.consume(3));
}

TEST_CASE("apply_transfer boundaries")
{
    auto t = tree_with(0, 1, {{"A", 10}, {"B", 0}});
    const auto a = address::from_label("A");
    const auto b = address::from_label("B");
    t.apply_transfer(a, b, 10, 0);
    CHECK(t.get(a).value == 0);
    CHECK(t.get(b).value == 10);
    CHECK(t.get(a).nonce.next() == 1);
    CHECK_THROWS_WITH_AS(t.apply_transfer(a, b, 0, 0), doctest::Contains("NonceMismatch"), error);

    auto u = tree_with(0, 1, {{"A", 5}, {"B", 0}});
    try {
        u.apply_transfer(a, b, 6, 0);
        FAIL("expected InsufficientBalance");
    } catch (const error &e) {
        CHECK(e.code() == errc::insufficient_balance);
    }
    CHECK(u.get(a).value == 5);
    CHECK(u.get(a).nonce.next() == 0);
}

TEST_CASE("state root")
{
    shard_state_tree empty{0, 2};
    CHECK(empty.compute_state_root() == empty_root());
    const auto t1 = tree_with(1, 2, {{"A", 3}, {"B", 4}});
    const auto t2 = tree_with(1, 2, {{"B", 4}, {"A", 3}});
    CHECK(t1.compute_state_root() == t2.compute_state_root());
    auto t3 = t1;
    t3.consume_nonce(address::from_label("A"), 0);
    CHECK(t3.compute_state_root() != t1.compute_state_root());
}

TEST_CASE("root sensitivity under randomized single-field mutations")
{
    std::mt19937_64 rng{7};
    const std::size_t s = 4;
    shard_state_tree base{2, s};
    for (int i = 0; i < 12; ++i)
        base.insert(make_account(address::from_label("acct" + std::to_string(i)), storage_map::single(s, 2), 100 + i));
    const auto root = base.compute_state_root();
    for (int trial = 0; trial < 200; ++trial) {
        auto t = base;
        auto it = t.accounts().begin();
        std::advance(it, static_cast<long>(rng() % t.accounts().size()));
        const auto a = it->first;
        auto st = t.remove(a);
        switch (rng() % 5) {
        case 0: st.value += 1 + rng() % 5; break;
        case 1: st.nonce.consume(rng() % 4); break;
        case 2: st.storage.set(static_cast<shard_id>((rng() % 2 == 0) ? 0 : 3)); break;
        case 3: st.code = code_kind::contract; break;
        case 4: st.addr.data[0] ^= 0x80; break;
        }
        t.insert(std::move(st));
        CHECK(t.compute_state_root() != root);
    }
}

TEST_CASE("placement registry")
{
    placement_registry reg{4};
    const auto broker = address::from_label("broker");
    const auto plain = address::from_label("plain");
    reg.place_everywhere(broker);
    reg.place(plain, 2);
    CHECK(reg.get_storage_map(broker).to_string() == "1111");
    CHECK(reg.get_storage_map(plain).to_string() == "0010");
    reg.place(plain, 3);
    CHECK(reg.get_storage_map(plain).to_string() == "0001");
    CHECK(reg.home_of(plain) == 3);
    CHECK_THROWS_AS(reg.get_storage_map(address::from_label("nobody")), error);
    CHECK_THROWS_AS(reg.set(plain, storage_map(4)), error);
    CHECK(reg.classify(plain, broker) == tx_class{intra_shard{3}});
}

TEST_CASE("total deposit sums the segmented slices")
{
    const std::size_t s = 2;
    placement_registry reg{s};
    const auto c = address::from_label("C");
    reg.place_everywhere(c);
    std::vector<shard_state_tree> trees{{0, s}, {1, s}};
    trees[0].insert(make_account(c, storage_map::all(s), 50));
    trees[1].insert(make_account(c, storage_map::all(s), 50));
    CHECK(total_deposit(c, reg, trees) == 100);

    const auto d = address::from_label("D");
    reg.place(d, 1);
    trees[1].insert(make_account(d, storage_map::single(s, 1), 7));
    CHECK(total_deposit(d, reg, trees) == 7);
}

TEST_CASE("tree rejects slices without its storage bit and duplicate locks")
{
    shard_state_tree t{1, 3};
    CHECK_THROWS_AS(t.insert(make_account(address::from_label("X"), storage_map::single(3, 0), 1)), error);
    lock_entry l;
    l.ctx_id = sha256("ctx");
    l.amount = 5;
    l.lock_end = 10;
    t.put_lock(l);
    CHECK(t.total_locked() == 5);
    CHECK_THROWS_AS(t.put_lock(l), error);
    t.lock_at(l.ctx_id).status = lock_status::released_to_broker;
    CHECK(t.total_locked() == 0);
    t.set_dest_outcome(l.ctx_id, dest_outcome::theta2_confirmed);
    CHECK_THROWS_AS(t.set_dest_outcome(l.ctx_id, dest_outcome::theta1_included), error);
}
