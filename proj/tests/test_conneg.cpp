#include "purlite/conneg.hpp"

#include <doctest.h>

#include <random>

using namespace purlite;
using conneg::MediaRange;
using conneg::Variant;
using conneg::VariantSet;

namespace {

VariantSet variants(std::initializer_list<const char*> types,
                    std::optional<std::size_t> def = std::nullopt) {
    VariantSet vs;
    for (const char* t : types) vs.entries.push_back({t, ""});
    vs.defaultIndex = def;
    return vs;
}

std::optional<std::string> winner(const char* header, const VariantSet& vs) {
    auto sel = conneg::select(conneg::parse_accept(header), vs);
    if (!sel) return std::nullopt;
    return vs.entries[sel->index].mediaType;
}

}  // namespace

TEST_CASE("parse_accept basics") {
    auto one = conneg::parse_accept("text/turtle");
    REQUIRE(one.size() == 1);
    CHECK(one[0].type == "text");
    CHECK(one[0].subtype == "turtle");
    CHECK(one[0].q_milli == 1000);

    auto empty = conneg::parse_accept("");
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].type == "*");
    CHECK(empty[0].subtype == "*");
    CHECK(empty[0].q_milli == 1000);
}

TEST_CASE("parse_accept is total and drops malformed elements") {
    CHECK(conneg::parse_accept("garbage").empty());
    CHECK(conneg::parse_accept("*/html").empty());        // "*" type implies "*" subtype
    CHECK(conneg::parse_accept("text/turtle;q=1.5").empty());
    CHECK(conneg::parse_accept("text/turtle;q=abc").empty());
    CHECK(conneg::parse_accept(",,,").empty());
    CHECK(conneg::parse_accept("text/turtle, garbage").size() == 1);

    // never throws, whatever the bytes
    std::mt19937 rng(3);
    for (int i = 0; i < 20000; ++i) {
        std::string junk;
        for (int j = rng() % 24; j-- > 0;) junk += static_cast<char>(rng() % 256);
        (void)conneg::parse_accept(junk);
    }
}

TEST_CASE("q-values parse exactly, three decimals maximum") {
    CHECK(conneg::parse_accept("a/b;q=0")[0].q_milli == 0);
    CHECK(conneg::parse_accept("a/b;q=0.5")[0].q_milli == 500);
    CHECK(conneg::parse_accept("a/b;q=0.05")[0].q_milli == 50);
    CHECK(conneg::parse_accept("a/b;q=0.005")[0].q_milli == 5);
    CHECK(conneg::parse_accept("a/b;q=1.000")[0].q_milli == 1000);
    CHECK(conneg::parse_accept("a/b;Q=0.7")[0].q_milli == 700);  // parameter names are case-insensitive
    CHECK(conneg::parse_accept("a/b;q=0.0001").empty());
    CHECK(conneg::parse_accept("a/b;q=1.001").empty());
}

TEST_CASE("hand-evaluated header table") {
    VariantSet htmlTurtle = variants({"text/html", "text/turtle"});
    VariantSet three = variants({"text/html", "text/turtle", "application/ld+json"});

    // 1. exact ask
    CHECK(winner("text/turtle", htmlTurtle) == "text/turtle");
    // 2. absent header accepts anything; order breaks the tie
    CHECK(winner("", htmlTurtle) == "text/html");
    // 3. html outranks turtle by q
    CHECK(winner("text/html, text/turtle;q=0.5", htmlTurtle) == "text/html");
    // 4. exact beats type/* and */* regardless of their q
    CHECK(winner("text/*;q=0.3, text/html;q=0.7, */*;q=0.5", three) == "text/html");
    // 5. implicit q=1 beats explicit 0.9
    CHECK(winner("application/ld+json;q=0.9, text/turtle", three) == "text/turtle");
    // 6. q=0 excludes the exact match, wildcard rescues the others
    CHECK(winner("text/turtle;q=0, */*", htmlTurtle) == "text/html");
    // 7. type wildcard applies its q to both text types; order decides
    CHECK(winner("text/*;q=0.8", three) == "text/html");
    // 8. subtype match through type range only
    CHECK(winner("application/*", three) == "application/ld+json");
    // 9. unknown types leave nothing acceptable
    CHECK(winner("image/png", htmlTurtle) == std::nullopt);
    // 10. accept-ext after q does not disturb the value
    CHECK(winner("text/turtle;q=0.4;ext=1, text/html;q=0.39", htmlTurtle) == "text/turtle");
}

TEST_CASE("select follows the spec examples") {
    CHECK(winner("text/turtle", variants({"text/html", "text/turtle"})) == "text/turtle");

    auto sel = conneg::select(conneg::parse_accept("*/*"),
                              variants({"text/html", "text/turtle"}, 0));
    REQUIRE(sel);
    CHECK(sel->index == 0);
    CHECK_FALSE(sel->fallback);  // a real match, not the fallback

    CHECK(winner("image/png", variants({"text/html", "text/turtle"})) == std::nullopt);

    auto fb = conneg::select(conneg::parse_accept("image/png"),
                             variants({"text/html", "text/turtle"}, 1));
    REQUIRE(fb);
    CHECK(fb->index == 1);
    CHECK(fb->fallback);
}

TEST_CASE("select never returns a q=0 variant") {
    auto sel = conneg::select(conneg::parse_accept("text/turtle;q=0"),
                              variants({"text/turtle"}));
    CHECK_FALSE(sel);
    // most specific match wins even when a weaker wildcard allows it
    auto masked = conneg::select(conneg::parse_accept("text/turtle;q=0, text/*;q=0.9"),
                                 variants({"text/turtle"}));
    CHECK_FALSE(masked);
}

TEST_CASE("appending a lower-ranked variant never changes the winner") {
    std::mt19937 rng(42);
    const std::vector<std::string> pool = {"text/html",       "text/turtle",
                                           "text/plain",      "application/ld+json",
                                           "application/xml", "image/png"};
    const std::vector<std::string> headers = {
        "text/html, text/turtle;q=0.5", "text/*;q=0.3, */*;q=0.2",
        "application/*;q=0.9, text/plain", "*/*", "text/turtle"};
    for (int iter = 0; iter < 500; ++iter) {
        VariantSet vs;
        for (std::size_t i = rng() % 4 + 1; i-- > 0;)
            vs.entries.push_back({pool[rng() % pool.size()], ""});
        const auto& header = headers[rng() % headers.size()];
        auto ranges = conneg::parse_accept(header);
        auto before = conneg::select(ranges, vs);
        if (!before) continue;
        std::string beforeType = vs.entries[before->index].mediaType;

        vs.entries.push_back({pool[rng() % pool.size()], ""});
        auto after = conneg::select(ranges, vs);
        REQUIRE(after);
        // the old winner may only be displaced by a strictly better appended variant
        if (after->index != before->index) CHECK(after->index == vs.entries.size() - 1);
        else CHECK(vs.entries[after->index].mediaType == beforeType);
    }
}
