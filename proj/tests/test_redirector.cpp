#include "purlite/redirector.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace purlite;
using redirector::BodyKind;
using redirector::RedirectRule;
using redirector::RequesterKind;
using redirector::RuleSet;
using redirector::RuleState;

namespace {

constexpr const char* kBase = "https://purl.example.com";

// The two-branch topology: one 303 to the html page for humans, one 303 to
// the generic document for machines, 302s from there to the serializations.
RuleSet fig2_rules() {
    RedirectRule rule;
    rule.pattern = "/a9/*";
    rule.htmlTemplate = "https://pages.example.com/$1.html";
    rule.genericTemplate = std::string(kBase) + "/a9/doc/$1";
    rule.variants = {{"text/turtle", "https://pages.example.com/$1.ttl"},
                     {"application/ld+json", "https://pages.example.com/$1.jsonld"}};
    return {{rule}, kBase};
}

auto accept(const char* header) { return conneg::parse_accept(header); }

}  // namespace

TEST_CASE("match: longest pattern wins, independent of declaration order") {
    RedirectRule a{.pattern = "/a9/*"};
    RedirectRule b{.pattern = "/a9/doc/*"};
    for (auto rules : {std::vector<RedirectRule>{a, b}, std::vector<RedirectRule>{b, a}}) {
        auto m = redirector::match("/a9/doc/e42", rules);
        REQUIRE(m);
        CHECK(rules[m->ruleIndex].pattern == "/a9/doc/*");
        CHECK(m->capture == "e42");
    }

    auto m = redirector::match("/a9/e42", {a, b});
    REQUIRE(m);
    CHECK(m->capture == "e42");
    CHECK_FALSE(redirector::match("/zz/1", {a, b}));

    RedirectRule exact{.pattern = "/about"};
    auto e = redirector::match("/about", {exact});
    REQUIRE(e);
    CHECK(e->capture.empty());
    CHECK_FALSE(redirector::match("/about/x", {exact}));
}

TEST_CASE("expand_template keeps the capture verbatim") {
    CHECK(redirector::expand_template("https://sys.example.com/doc/$1", "e42") ==
          "https://sys.example.com/doc/e42");
    CHECK(redirector::expand_template("https://h/$1/x/$1", "q") == "https://h/q/x/q");
    CHECK(redirector::expand_template("https://h/fixed", "e42") == "https://h/fixed");

    std::mt19937 rng(11);
    const char* alphabet = "abcdefghjkmnpqrstuvwxyz23456789";
    for (int i = 0; i < 300; ++i) {
        std::string cap;
        for (int j = 1 + rng() % 10; j-- > 0;) cap += alphabet[rng() % 31];
        auto out = redirector::expand_template("https://h/d/$1", cap);
        CHECK(out.find(cap) != std::string::npos);
    }
}

TEST_CASE("fig. 2 topology: resource requests") {
    auto rules = fig2_rules();

    auto html = redirector::plan("/a9/e42", accept("text/html"), rules,
                                 RequesterKind::resource);
    CHECK(html.status == 303);
    CHECK(html.location == "https://pages.example.com/e42.html");

    auto turtle = redirector::plan("/a9/e42", accept("text/turtle"), rules,
                                   RequesterKind::resource);
    CHECK(turtle.status == 303);
    CHECK(turtle.location == "https://purl.example.com/a9/doc/e42");
    CHECK(turtle.metadata.contains(rdfmin::describe_link(
        "https://purl.example.com/a9/e42", "https://purl.example.com/a9/doc/e42")));

    // any machine-readable type goes through the same generic document
    auto jsonld = redirector::plan("/a9/e42", accept("application/ld+json"), rules,
                                   RequesterKind::resource);
    CHECK(jsonld.location == "https://purl.example.com/a9/doc/e42");
}

TEST_CASE("fig. 2 topology: generic document requests negotiate with a 302") {
    auto rules = fig2_rules();

    auto cls = redirector::classify("/a9/doc/e42", rules);
    REQUIRE(cls);
    CHECK(cls->kind == RequesterKind::generic);
    CHECK(cls->capture == "e42");

    auto p = redirector::plan("/a9/doc/e42", accept("text/turtle"), rules,
                              RequesterKind::generic);
    CHECK(p.status == 302);
    CHECK(p.location == "https://pages.example.com/e42.ttl");

    auto j = redirector::plan("/a9/doc/e42", accept("application/ld+json"), rules,
                              RequesterKind::generic);
    CHECK(j.location == "https://pages.example.com/e42.jsonld");

    // the generic document serves machine formats only
    auto h = redirector::plan("/a9/doc/e42", accept("text/html"), rules,
                              RequesterKind::generic);
    CHECK(h.status == 406);
}

TEST_CASE("single-step 303 when no generic document is configured") {
    auto rules = fig2_rules();
    rules.rules[0].genericTemplate.reset();
    auto p = redirector::plan("/a9/e42", accept("text/turtle"), rules,
                              RequesterKind::resource);
    CHECK(p.status == 303);
    CHECK(p.location == "https://pages.example.com/e42.ttl");
}

TEST_CASE("unknown path plans a 404 and nothing acceptable plans a 406") {
    auto rules = fig2_rules();
    auto nf = redirector::plan("/zz/1", accept("text/html"), rules, RequesterKind::resource);
    CHECK(nf.status == 404);
    CHECK(nf.bodyKind == BodyKind::none);
    CHECK_FALSE(nf.location);

    auto na = redirector::plan("/a9/e42", accept("image/png"), rules,
                               RequesterKind::resource);
    CHECK(na.status == 406);

    // a default media type turns 406 into a fallback delivery
    rules.rules[0].defaultMediaType = "text/html";
    auto fb = redirector::plan("/a9/e42", accept("image/png"), rules,
                               RequesterKind::resource);
    CHECK(fb.status == 303);
    CHECK(fb.location == "https://pages.example.com/e42.html");
}

TEST_CASE("gone rules plan tombstones") {
    RedirectRule gone{.pattern = "/a9/*"};
    gone.state = RuleState::gone;
    gone.reason = "entity split; human review required";
    RuleSet rules{{gone}, kBase};

    auto p = redirector::plan("/a9/e42", accept("text/turtle"), rules,
                              RequesterKind::resource);
    CHECK(p.status == 410);
    CHECK(p.bodyKind == BodyKind::tombstone);
    CHECK(p.contentType == "text/turtle");
    CHECK(p.note == gone.reason);
    CHECK_FALSE(p.location);
    CHECK(p.metadata.size() == 1);

    auto human = redirector::plan("/a9/e42", accept("text/html"), rules,
                                  RequesterKind::resource);
    CHECK(human.contentType == "text/html");
    // the tombstone is always delivered, whatever the Accept header says
    auto whatever = redirector::plan("/a9/e42", accept("image/png"), rules,
                                     RequesterKind::resource);
    CHECK(whatever.status == 410);
    CHECK(whatever.contentType == "text/html");
}

TEST_CASE("moved rules carry exactly the two replacement triples") {
    RedirectRule moved{.pattern = "/a9/*"};
    moved.state = RuleState::moved;
    moved.successorTemplate = "https://purl.example.com/b1/$1";
    RuleSet rules{{moved}, kBase};

    auto p = redirector::plan("/a9/e42", accept("text/turtle"), rules,
                              RequesterKind::resource);
    CHECK(p.status == 301);
    CHECK(p.location == "https://purl.example.com/b1/e42");
    CHECK(p.bodyKind == BodyKind::movedNote);

    auto links = rdfmin::replacement_links("https://purl.example.com/a9/e42",
                                           "https://purl.example.com/b1/e42");
    CHECK(p.metadata.size() == 2);
    for (const auto& t : links) CHECK(p.metadata.contains(t));
}

TEST_CASE("no plan has status 200 with an empty body kind") {
    auto rules = fig2_rules();
    RedirectRule gone{.pattern = "/g/*"};
    gone.state = RuleState::gone;
    gone.reason = "r";
    RedirectRule moved{.pattern = "/m/*"};
    moved.state = RuleState::moved;
    moved.successorTemplate = "https://h/$1";
    rules.rules.push_back(gone);
    rules.rules.push_back(moved);

    for (const char* path : {"/a9/e42", "/a9/doc/e42", "/g/x", "/m/x", "/none"}) {
        for (const char* hdr : {"text/html", "text/turtle", "image/png", ""}) {
            for (auto kind : {RequesterKind::resource, RequesterKind::generic,
                              RequesterKind::variant}) {
                auto p = redirector::plan(path, accept(hdr), rules, kind);
                if (p.status == 200) CHECK(p.bodyKind != BodyKind::none);
                if (p.status / 100 == 3) CHECK(p.location.has_value());
                if (p.status == 410) CHECK(p.bodyKind == BodyKind::tombstone);
                if (p.status == 404) CHECK(p.bodyKind == BodyKind::none);
            }
        }
    }
}

TEST_CASE("classify resolves same-host variant targets") {
    auto rules = fig2_rules();
    rules.rules[0].variants[0].target = std::string(kBase) + "/files/$1.ttl";

    auto cls = redirector::classify("/files/e42.ttl", rules);
    REQUIRE(cls);
    CHECK(cls->kind == RequesterKind::variant);
    CHECK(cls->variantIndex == 0);
    CHECK(cls->capture == "e42");

    auto p = redirector::plan("/files/e42.ttl", accept("text/turtle"), rules,
                              RequesterKind::variant);
    CHECK(p.status == 200);
    CHECK(p.bodyKind == BodyKind::document);
    CHECK(p.contentType == "text/turtle");
}

TEST_CASE("plan chains contain exactly one 303 from a resource, none from a document") {
    auto rules = fig2_rules();
    // keep every hop on the public host so the walk can continue locally
    rules.rules[0].htmlTemplate = std::string(kBase) + "/files/$1.html";
    rules.rules[0].variants = {{"text/turtle", std::string(kBase) + "/files/$1.ttl"},
                               {"application/ld+json", std::string(kBase) + "/files/$1.jsonld"}};
    RedirectRule files{.pattern = "/files/*"};  // the variant host itself
    files.variants = {{"text/turtle", std::string(kBase) + "/files/$1"}};

    auto walk = [&](std::string path, const char* hdr) {
        int seen303 = 0;
        for (int hop = 0; hop < 8; ++hop) {
            auto cls = redirector::classify(path, rules);
            if (!cls) break;
            auto p = redirector::plan(path, accept(hdr), rules, cls->kind);
            if (p.status == 303) ++seen303;
            if (p.status / 100 != 3 || !p.location ||
                p.location->rfind(kBase, 0) != 0)
                break;
            path = p.location->substr(std::string(kBase).size());
        }
        return seen303;
    };

    CHECK(walk("/a9/e42", "text/turtle") == 1);
    CHECK(walk("/a9/e42", "text/html") == 1);
    CHECK(walk("/a9/e42", "application/ld+json") == 1);
    CHECK(walk("/a9/doc/e42", "text/turtle") == 0);
    CHECK(walk("/files/e42.ttl", "text/turtle") == 0);
}

TEST_CASE("decommission transitions") {
    RedirectRule active{.pattern = "/a9/*"};
    active.htmlTemplate = "https://h/$1";

    auto moved = redirector::decommission(active, redirector::DecommissionMode::moved,
                                          "https://h/b1/$1");
    CHECK(moved.state == RuleState::moved);
    CHECK(moved.successorTemplate == "https://h/b1/$1");
    CHECK(moved.htmlTemplate == active.htmlTemplate);  // provenance retained

    auto gone = redirector::decommission(active, redirector::DecommissionMode::gone,
                                         "entity split; human review required");
    CHECK(gone.state == RuleState::gone);
    CHECK(gone.reason == "entity split; human review required");

    CHECK_THROWS_AS((void)redirector::decommission(moved, redirector::DecommissionMode::moved,
                                                   "https://h/x"),
                    redirector::AlreadyDecommissioned);
    CHECK_THROWS_AS((void)redirector::decommission(gone, redirector::DecommissionMode::gone, "x"),
                    redirector::AlreadyDecommissioned);

    RedirectRule exact{.pattern = "/a9"};
    CHECK_THROWS_AS((void)redirector::decommission(exact, redirector::DecommissionMode::moved,
                                                   "https://h/$1"),
                    redirector::InvalidTemplate);
}
