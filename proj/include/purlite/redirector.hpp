#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "purlite/conneg.hpp"
#include "purlite/error.hpp"
#include "purlite/rdfmin.hpp"

namespace purlite::redirector {

struct AlreadyDecommissioned : Error {
    using Error::Error;
};
struct InvalidTemplate : Error {
    using Error::Error;
};

enum class RuleState { active, moved, gone };

/// One entry of the central redirect service. The pattern is a path prefix
/// with an optional single trailing "*" whose capture substitutes for "$1"
/// in the templates.
struct RedirectRule {
    std::string pattern;
    RuleState state = RuleState::active;

    // active
    std::optional<std::string> htmlTemplate;
    std::optional<std::string> genericTemplate;
    std::vector<conneg::Variant> variants;  // machine-readable formats
    std::optional<std::string> defaultMediaType;

    // moved
    std::optional<std::string> successorTemplate;

    // gone
    std::string reason;

    bool wildcard() const { return !pattern.empty() && pattern.back() == '*'; }
    std::string_view prefix() const {
        std::string_view p = pattern;
        return wildcard() ? p.substr(0, p.size() - 1) : p;
    }
};

/// The rules plus the https base under which the service publishes its
/// resource URIs; plans compose absolute URIs from it.
struct RuleSet {
    std::vector<RedirectRule> rules;
    std::string publicBase;  // e.g. "https://purl.example.com", no trailing slash
};

struct MatchResult {
    std::size_t ruleIndex;
    std::string capture;  // the "*" suffix; empty for exact patterns
};

/// Longest-pattern match over the resource patterns. Declaration order never
/// matters: the longest literal prefix wins.
std::optional<MatchResult> match(std::string_view path,
                                 const std::vector<RedirectRule>& rules);

enum class RequesterKind { resource, generic, variant };

struct Classification {
    std::size_t ruleIndex;
    std::string capture;
    RequesterKind kind;
    std::size_t variantIndex;  // meaningful when kind == variant
};

/// Decide which role a path plays: a resource pattern, the path of a rule's
/// generic-document template, or the path of one of its variant templates
/// (the latter two only when their templates live under the public base).
/// The longest matching pattern wins across all three spaces.
std::optional<Classification> classify(std::string_view path, const RuleSet& rules);

enum class BodyKind { none, tombstone, movedNote, document };

struct ResponsePlan {
    int status = 0;
    std::optional<std::string> location;
    BodyKind bodyKind = BodyKind::none;
    std::optional<std::string> contentType;  // media type the body should carry
    rdfmin::Graph metadata;
    std::string note;  // tombstone reason / moved note, human wording
};

/// Response planning, per request role:
///   no match                -> 404
///   gone                    -> 410 + negotiated tombstone
///   moved                   -> 301 + both replacement triples
///   active resource, html   -> 303 to the html target
///   active resource, machine-> 303 to the generic document when configured,
///                              otherwise straight to the winning variant
///   active generic document -> 302 (never 301) to the winning variant
///   active variant document -> 200, body served by the host
/// Nothing acceptable and no default -> 406.
ResponsePlan plan(std::string_view path, const std::vector<conneg::MediaRange>& acceptRanges,
                  const RuleSet& rules, RequesterKind kind);

enum class DecommissionMode { moved, gone };

/// Turn an active rule into a moved (301) or gone (410) one. The argument is
/// the successor template or the tombstone reason. Active-only fields stay
/// on the returned rule for provenance.
RedirectRule decommission(const RedirectRule& rule, DecommissionMode mode,
                          const std::string& argument);

/// Replace every "$1" with the capture.
std::string expand_template(std::string_view tmpl, std::string_view capture);

}  // namespace purlite::redirector
