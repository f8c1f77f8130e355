#include "purlite/idstore.hpp"

#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "oracles.hpp"

using namespace purlite;
using idstore::Ledger;
using idstore::MintStrategy;
using idstore::StrategyKind;

namespace {

std::filesystem::path temp_file(const char* tag) {
    auto path = std::filesystem::temp_directory_path() /
                ("purlite-test-" + std::string(tag) + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(std::rand()));
    std::filesystem::remove(path);
    return path;
}

idstore::EntropySource seeded(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng]() { return (*rng)(); };
}

MintStrategy counter_strategy(std::string prefix = "") {
    MintStrategy s;
    s.kind = StrategyKind::counter;
    s.name = "counter";
    s.prefix = std::move(prefix);
    return s;
}

}  // namespace

TEST_CASE("counter minting: prefix and numeral form one identifier") {
    Ledger ledger;
    auto strategy = counter_strategy("e");
    CHECK(idstore::mint_counter(strategy, ledger) == "ea2");
    CHECK(idstore::mint_counter(strategy, ledger) == "ea3");
    CHECK(idstore::mint_counter(strategy, ledger) == "ea4");
    CHECK(ledger.was_issued("ea2"));
    CHECK(ledger.counter_state("counter") == "a5");
}

TEST_CASE("counter minting never repeats across 100000 issues") {
    Ledger ledger;
    auto strategy = counter_strategy();
    std::set<std::string> seen;
    std::string prev;
    for (int i = 0; i < 100000; ++i) {
        auto id = idstore::mint_counter(strategy, ledger);
        CHECK(seen.insert(id).second);
        if (!prev.empty()) CHECK(erdi8::ordinal(id, 2) == erdi8::ordinal(prev, 2) + 1);
        prev = id;
    }
}

TEST_CASE("fancy counter walks the stride cycle and never issues the anchor") {
    Ledger ledger;
    MintStrategy s;
    s.kind = StrategyKind::fancyCounter;
    s.name = "fancy";
    s.prefix = "x";
    s.length = 2;
    CHECK(idstore::mint_counter(s, ledger) == "xqt");  // a2 + stride 521

    std::set<std::string> seen{"xqt"};
    for (int i = 0; i < 823; ++i) {
        auto id = idstore::mint_counter(s, ledger);
        CHECK(id != "xa2");
        CHECK(seen.insert(id).second);
    }
    // 824 identifiers issued: every length-2 value except the anchor
    CHECK_THROWS_AS((void)idstore::mint_counter(s, ledger), erdi8::SpaceExhausted);
}

TEST_CASE("random minting records issues and respects the ledger") {
    Ledger ledger;
    MintStrategy s;
    s.kind = StrategyKind::randomLedger;
    s.length = 2;
    auto id = idstore::mint_random(s, ledger, seeded(1));
    CHECK(id.size() == 2);
    CHECK(erdi8::validate(id));
    CHECK(ledger.was_issued(id));

    // a full space leaves nothing to draw
    Ledger full;
    for (const auto& two : oracles::enumerate_length(oracles::kStd, 2)) full.record_issue(two);
    CHECK_THROWS_AS((void)idstore::mint_random(s, full, seeded(2)), idstore::RetriesExhausted);

    // decommissioned identifiers are permanently blocked
    Ledger blocked;
    for (const auto& two : oracles::enumerate_length(oracles::kStd, 2))
        blocked.record_decommission(two);
    CHECK_THROWS_AS((void)idstore::mint_random(s, blocked, seeded(3)),
                    idstore::RetriesExhausted);
}

TEST_CASE("random minting is uniform: first-character frequencies within 5 sigma") {
    MintStrategy s;
    s.kind = StrategyKind::randomLedger;
    s.length = 3;
    auto entropy = seeded(20240811);
    std::map<char, int> counts;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        Ledger fresh;  // draws stay independent of earlier issues
        counts[idstore::mint_random(s, fresh, entropy)[0]]++;
    }
    const double p = 1.0 / 25.0;
    const double mean = n * p;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (char c : oracles::letters(oracles::kStd)) {
        INFO("first character ", c, " count ", counts[c]);
        CHECK(std::abs(counts[c] - mean) <= 5 * sigma);
    }
}

TEST_CASE("uniqueness holds across interleaved strategies on one ledger") {
    Ledger ledger;
    auto counter = counter_strategy();
    MintStrategy fancy;
    fancy.kind = StrategyKind::fancyCounter;
    fancy.name = "fancy";
    fancy.length = 3;
    MintStrategy random;
    random.kind = StrategyKind::randomLedger;
    random.length = 4;
    auto entropy = seeded(7);

    std::set<std::string> seen;
    for (int i = 0; i < 3000; ++i) {
        CHECK(seen.insert(idstore::mint_counter(counter, ledger)).second);
        CHECK(seen.insert(idstore::mint_counter(fancy, ledger)).second);
        CHECK(seen.insert(idstore::mint_random(random, ledger, entropy)).second);
    }
}

TEST_CASE("ledger journal replays to the same state") {
    auto path = temp_file("replay");
    std::string a, b;
    {
        auto ledger = Ledger::open(path);
        auto strategy = counter_strategy("k");
        a = idstore::mint_counter(strategy, ledger);
        ledger.record_decommission("zz");
    }
    {
        auto ledger = Ledger::open(path);
        CHECK(ledger.was_issued(a));
        CHECK(ledger.is_decommissioned("zz"));
        auto strategy = counter_strategy("k");
        b = idstore::mint_counter(strategy, ledger);
    }
    // the mint after reload equals the mint without reload
    Ledger memory;
    auto strategy = counter_strategy("k");
    CHECK(idstore::mint_counter(strategy, memory) == a);
    CHECK(idstore::mint_counter(strategy, memory) == b);
    std::filesystem::remove(path);
}

TEST_CASE("crash between checkpoint and response never replays an identifier") {
    auto path = temp_file("crash");
    std::string issued;
    {
        auto ledger = Ledger::open(path);
        auto strategy = counter_strategy();
        issued = idstore::mint_counter(strategy, ledger);
        // process "dies" here: the return value was never delivered
    }
    {
        auto ledger = Ledger::open(path);
        CHECK(ledger.was_issued(issued));
        auto strategy = counter_strategy();
        CHECK(idstore::mint_counter(strategy, ledger) != issued);
    }
    std::filesystem::remove(path);
}

TEST_CASE("unknown journal records are fatal at load") {
    auto path = temp_file("badkind");
    std::ofstream(path) << "I a2\nX mystery\n";
    CHECK_THROWS_AS((void)Ledger::open(path), idstore::LedgerError);

    std::ofstream(path, std::ios::trunc) << "C counter\n";  // missing state field
    CHECK_THROWS_AS((void)Ledger::open(path), idstore::LedgerError);

    std::ofstream(path, std::ios::trunc) << "I a2 extra\n";
    CHECK_THROWS_AS((void)Ledger::open(path), idstore::LedgerError);
    std::filesystem::remove(path);
}

TEST_CASE("sha256 matches the published test vector") {
    auto digest = idstore::sha256("abc");
    const std::array<std::uint8_t, 8> head = {0xba, 0x78, 0x16, 0xbf, 0x8f, 0x01, 0xcf, 0xea};
    for (std::size_t i = 0; i < head.size(); ++i) CHECK(digest[i] == head[i]);
    CHECK(digest[31] == 0xad);
}

TEST_CASE("stateless time ids") {
    CHECK(idstore::mint_stateless_time_raw(0, {0, 0, 0}, 0, 0) == "a");

    // bytes 6553f100 abcdef 002a 000007, re-encoded (enumeration oracle)
    CHECK(idstore::mint_stateless_time_raw(1700000000, {0xab, 0xcd, 0xef}, 42, 7) ==
          "osohdocyrep8giqa3ea");

    auto one = idstore::mint_stateless_time("seed", 9, 1700000000, 1);
    auto two = idstore::mint_stateless_time("seed", 9, 1700000000, 2);
    CHECK(one != two);

    // within one process, ordinal order is creation order
    std::string prev;
    for (std::uint32_t c = 0; c < 50; ++c) {
        auto id = idstore::mint_stateless_time("seed", 9, 1700000000 + c / 10, c);
        if (!prev.empty()) CHECK(erdi8::ordinal(prev, 1) < erdi8::ordinal(id, 1));
        prev = id;
    }
}

TEST_CASE("natural-key ids are deterministic and order-sensitive") {
    const std::vector<std::string> fields = {"1952-03-11", "Cambridge", "Douglas Adams"};
    auto a = idstore::mint_natural_key(fields, 64);
    auto b = idstore::mint_natural_key(fields, 64);
    CHECK(a == b);
    // sha256("1952-03-11\x1fCambridge\x1fDouglas Adams") starts a670831653bf1fb0;
    // those eight bytes re-encode to:
    CHECK(a == "gfiv3fusqk2o7");

    auto permuted = idstore::mint_natural_key({"Cambridge", "1952-03-11", "Douglas Adams"}, 64);
    CHECK(permuted != a);

    // the unit separator keeps field boundaries unambiguous
    CHECK(idstore::mint_natural_key({"ab", "c"}, 64) != idstore::mint_natural_key({"a", "bc"}, 64));

    CHECK_THROWS_AS((void)idstore::mint_natural_key(fields, 16), Error);
    CHECK_THROWS_AS((void)idstore::mint_natural_key(fields, 20), Error);
    CHECK_THROWS_AS((void)idstore::mint_natural_key(fields, 60), Error);  // not a byte multiple
    CHECK_THROWS_AS((void)idstore::mint_natural_key({}, 64), Error);
    CHECK(idstore::mint_natural_key(fields, 24) != "");
    CHECK(idstore::mint_natural_key(fields, 256) != "");
}

TEST_CASE("collision probability") {
    CHECK(idstore::collision_probability(0, 365) == 0.0);
    CHECK(idstore::collision_probability(1, 365) == 0.0);

    double est = idstore::collision_probability(23, 365);
    CHECK(std::abs(est - oracles::exact_collision(23, 365)) < 0.01);
    CHECK(est == doctest::Approx(0.5000018).epsilon(1e-5));

    CHECK(idstore::collision_probability(1000, 825) == doctest::Approx(1.0));

    // spot checks against an independent evaluation of the same bound
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
        std::uint64_t k = 2 + rng() % 5000;
        double n = 1.0 + static_cast<double>(rng() % 100000000);
        double expected = 1.0 - std::exp(-0.5 * static_cast<double>(k) *
                                         static_cast<double>(k - 1) / n);
        CHECK(idstore::collision_probability(k, n) == doctest::Approx(expected).epsilon(1e-6));
    }
}
