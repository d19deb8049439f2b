// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <random>

#include "../support/chain_fixture.hpp"
#include "../support/listing.hpp"
#include "pimledger/contracts/cal_store.hpp"
#include "pimledger/ical.hpp"

using namespace pimledger;
using namespace pimledger::testing;
namespace cs = pimledger::cal_store;

namespace {

struct StoreFixture {
    TestChain chain;
    Identity alice = TestChain::identity(0);
    Identity bob = TestChain::identity(1);
    Address store;

    explicit StoreFixture(std::int64_t t = kListingDtstamp) {
        chain.set_time(t);
        store = chain.deploy(alice, cs::kKind);
    }

    std::vector<CalendarEvent> events(const Identity& who) {
        return decode_events(chain.query(who, store, cs::get_events_obj()));
    }
};

}  // namespace

TEST_CASE("listing event serializes to the golden file") {
    StoreFixture f;
    const auto uid = cs::decode_string(f.chain.exec(
        f.alice, f.store, cs::store_event(kListingDtstart, kListingDtend, kListingSummary, kListingDescription)));
    CHECK(uid == cs::make_uid(1, f.alice.address));

    const auto golden = read_file(std::string(PIMLEDGER_TEST_DATA) + "/golden/listing_event.ics");
    const auto ics = cs::decode_string(f.chain.query(f.alice, f.store, cs::get_events_ical()));
    CHECK(ics == golden);

    const auto doc = ical::parse(golden);
    REQUIRE(doc.events.size() == 1);
    const auto& e = doc.events[0];
    CHECK(e.summary == kListingSummary);
    CHECK(e.description == kListingDescription);
    CHECK(e.dtstart == kListingDtstart);
    CHECK(e.dtend == kListingDtend);
    CHECK(e.dtstamp == kListingDtstamp);
    CHECK(e.organizer == f.alice.address.hex());
    CHECK(doc.events == f.events(f.alice));
}

TEST_CASE("events are partitioned by caller") {
    StoreFixture f;
    f.chain.exec(f.alice, f.store, cs::store_event(10, 20, "a", ""));
    f.chain.exec(f.bob, f.store, cs::store_event(30, 40, "b", ""));
    REQUIRE(f.events(f.alice).size() == 1);
    REQUIRE(f.events(f.bob).size() == 1);
    CHECK(f.events(f.alice)[0].summary == "a");
    CHECK(f.events(TestChain::identity(2)).empty());
    // The foreign uid is not removable by anyone else.
    const auto bobs = f.events(f.bob)[0].uid;
    CHECK(error_of([&] { f.chain.exec(f.alice, f.store, cs::remove_event(bobs)); }) == Errc::NotFound);
    CHECK(f.events(f.bob).size() == 1);
}

TEST_CASE("sequence numbers are never reused and removal keeps order") {
    StoreFixture f;
    const auto u1 = cs::decode_string(f.chain.exec(f.alice, f.store, cs::store_event(1, 2, "1", "")));
    const auto u2 = cs::decode_string(f.chain.exec(f.alice, f.store, cs::store_event(1, 2, "2", "")));
    CHECK(cs::decode_flag(f.chain.exec(f.alice, f.store, cs::remove_event(u2))));
    const auto u3 = cs::decode_string(f.chain.exec(f.alice, f.store, cs::store_event(1, 2, "3", "")));
    CHECK(u1 == cs::make_uid(1, f.alice.address));
    CHECK(u3 == cs::make_uid(3, f.alice.address));
    f.chain.exec(f.alice, f.store, cs::store_event(1, 2, "4", ""));
    f.chain.exec(f.alice, f.store, cs::remove_event(u3));
    const auto ev = f.events(f.alice);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].summary == "1");
    CHECK(ev[1].summary == "4");
    CHECK(error_of([&] { f.chain.exec(f.alice, f.store, cs::remove_event(u2)); }) == Errc::NotFound);
}

TEST_CASE("event validation") {
    StoreFixture f;
    const auto err = [&](const Call& c) { return error_of([&] { f.chain.exec(f.alice, f.store, c); }); };
    CHECK(err(cs::store_event(20, 10, "x", "")) == Errc::InvalidRange);
    CHECK(err(cs::store_event(-1, 10, "x", "")) == Errc::OutOfRange);
    CHECK(err(cs::store_event(0, 253402300800, "x", "")) == Errc::OutOfRange);  // year 10000
    CHECK_FALSE(err(cs::store_event(0, 253402300799, "x", "")));
    CHECK(err(cs::store_event(0, 1, std::string(1025, 'a'), std::string(1024, 'b'))) == Errc::TextTooLong);
    CHECK_FALSE(err(cs::store_event(0, 1, std::string(1024, 'a'), std::string(1024, 'b'))));
    CHECK(err(cs::store_event(0, 1, "bad\rline", "")) == Errc::Malformed);
    CHECK_FALSE(err(cs::store_event(0, 1, "tab\tok", "line\nbreak ok")));
    CHECK(err(Call{"store_event", Bytes{1, 2, 3}}) == Errc::Malformed);
}

TEST_CASE("a configured text limit applies") {
    TestChain chain;
    const auto alice = TestChain::identity(0);
    const auto store = chain.deploy(alice, cs::kKind, cs::init_args(8));
    CHECK_FALSE(error_of([&] { chain.exec(alice, store, cs::store_event(0, 1, "1234", "5678")); }));
    CHECK(error_of([&] { chain.exec(alice, store, cs::store_event(0, 1, "1234", "56789")); }) == Errc::TextTooLong);
}

TEST_CASE("filling past the storage quota fails and preserves storage") {
    StoreFixture f;
    const std::string text(1000, 'q');
    Bytes before;
    std::optional<Errc> error;
    int stored = 0;
    for (int i = 0; i < 100 && !error; ++i) {
        before = f.chain.ledger().snapshot()->contracts.at(f.store).storage;
        auto st = f.chain.run(f.alice, f.store, cs::store_event(0, 1, text, ""));
        if (st.outcome == TxOutcome::Failed) error = st.error;
        else ++stored;
    }
    CHECK(error == Errc::QuotaExceeded);
    CHECK(before.size() <= kDefaultStorageQuota);
    CHECK(before.size() + 1000 > kDefaultStorageQuota);
    CHECK(stored > 0);
    CHECK(f.chain.ledger().snapshot()->contracts.at(f.store).storage == before);
    CHECK(f.events(f.alice).size() == static_cast<std::size_t>(stored));
}

TEST_CASE("randomized store and remove match a reference model") {
    StoreFixture f(100);
    cs::CalStore s;
    std::mt19937_64 rng(17);
    std::vector<Address> who{keygen(1).address, keygen(2).address, keygen(3).address};
    std::map<Address, std::vector<std::string>> model;
    for (int i = 0; i < 400; ++i) {
        const auto& a = who[rng() % who.size()];
        const auto ctx = CallContext::direct(a, 100 + i);
        auto& list = model[a];
        if (!list.empty() && rng() % 3 == 0) {
            const auto k = rng() % list.size();
            s.remove(ctx, list[k]);
            list.erase(list.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            const std::int64_t start = static_cast<std::int64_t>(rng() % 1000000);
            list.push_back(s.store(ctx, start, start + static_cast<std::int64_t>(rng() % 5000), "s", "d"));
        }
        const auto got = s.events_of(a);
        REQUIRE(got.size() == list.size());
        for (std::size_t k = 0; k < got.size(); ++k) REQUIRE(got[k].uid == list[k]);
    }
    const auto copy = cs::CalStore::decode(s.encode());
    CHECK(copy->encode() == s.encode());
    for (const auto& a : who) {
        const auto doc = ical::parse(ical::serialize(s.events_of(a)));
        CHECK(doc.events == s.events_of(a));
    }
}
