#include "purlite/redirector.hpp"

#include <algorithm>

namespace purlite::redirector {

namespace {

constexpr std::string_view kPlaceholder = "$1";
constexpr std::string_view kTextHtml = "text/html";
constexpr std::string_view kTextTurtle = "text/turtle";

bool pattern_matches(const RedirectRule& rule, std::string_view path, std::string& capture) {
    std::string_view prefix = rule.prefix();
    if (rule.wildcard()) {
        if (!path.starts_with(prefix)) return false;
        capture = std::string(path.substr(prefix.size()));
        return true;
    }
    capture.clear();
    return path == rule.pattern;
}

// Path-side pattern of a template hosted under the public base, e.g.
// "https://purl.example.com/a9/doc/$1" -> "/a9/doc/$1". Empty when the
// template points elsewhere.
std::string local_template_path(const std::string& tmpl, const std::string& publicBase) {
    if (publicBase.empty() || !tmpl.starts_with(publicBase)) return {};
    std::string rest = tmpl.substr(publicBase.size());
    if (rest.empty() || rest.front() != '/') return {};
    return rest;
}

// Match path against a template path containing at most one "$1"; the
// expansion check keeps templates with repeated captures honest.
bool template_path_matches(const std::string& tmplPath, std::string_view path,
                           std::string& capture) {
    auto at = tmplPath.find(kPlaceholder);
    if (at == std::string::npos) {
        capture.clear();
        return path == tmplPath;
    }
    std::string_view prefix = std::string_view(tmplPath).substr(0, at);
    std::string_view suffix = std::string_view(tmplPath).substr(at + kPlaceholder.size());
    if (path.size() < prefix.size() + suffix.size()) return false;
    if (!path.starts_with(prefix) || !path.ends_with(suffix)) return false;
    capture = std::string(path.substr(prefix.size(), path.size() - prefix.size() - suffix.size()));
    return expand_template(tmplPath, capture) == path;
}

// Resource URI the rule's pattern + capture stands for.
std::string resource_uri(const RuleSet& rules, const RedirectRule& rule,
                         std::string_view capture) {
    return rules.publicBase + std::string(rule.prefix()) + std::string(capture);
}

conneg::VariantSet resource_variants(const RedirectRule& rule) {
    conneg::VariantSet vs;
    if (rule.htmlTemplate) vs.entries.push_back({std::string(kTextHtml), *rule.htmlTemplate});
    for (const auto& v : rule.variants) vs.entries.push_back(v);
    if (rule.defaultMediaType) {
        for (std::size_t i = 0; i < vs.entries.size(); ++i)
            if (vs.entries[i].mediaType == *rule.defaultMediaType) vs.defaultIndex = i;
    }
    return vs;
}

conneg::VariantSet machine_variants(const RedirectRule& rule) {
    conneg::VariantSet vs;
    vs.entries = rule.variants;
    if (rule.defaultMediaType) {
        for (std::size_t i = 0; i < vs.entries.size(); ++i)
            if (vs.entries[i].mediaType == *rule.defaultMediaType) vs.defaultIndex = i;
    }
    return vs;
}

// Rendering format for bodies that exist in both a human and a machine
// flavor (tombstones, moved notes, redirect notes).
std::string negotiated_note_type(const std::vector<conneg::MediaRange>& ranges) {
    conneg::VariantSet vs;
    vs.entries = {{std::string(kTextHtml), ""}, {std::string(kTextTurtle), ""}};
    vs.defaultIndex = 0;  // the note is always delivered
    auto sel = conneg::select(ranges, vs);
    return vs.entries[sel ? sel->index : 0].mediaType;
}

ResponsePlan not_found() {
    ResponsePlan plan;
    plan.status = 404;
    plan.bodyKind = BodyKind::none;
    return plan;
}

ResponsePlan not_acceptable() {
    ResponsePlan plan;
    plan.status = 406;
    plan.bodyKind = BodyKind::none;
    return plan;
}

}  // namespace

std::string expand_template(std::string_view tmpl, std::string_view capture) {
    std::string out;
    out.reserve(tmpl.size() + capture.size());
    std::size_t pos = 0;
    for (;;) {
        auto at = tmpl.find(kPlaceholder, pos);
        if (at == std::string_view::npos) {
            out += tmpl.substr(pos);
            return out;
        }
        out += tmpl.substr(pos, at - pos);
        out += capture;
        pos = at + kPlaceholder.size();
    }
}

std::optional<MatchResult> match(std::string_view path,
                                 const std::vector<RedirectRule>& rules) {
    std::optional<MatchResult> best;
    std::size_t bestLen = 0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        std::string capture;
        if (!pattern_matches(rules[i], path, capture)) continue;
        std::size_t len = rules[i].prefix().size();
        if (!best || len > bestLen) {
            best = MatchResult{i, std::move(capture)};
            bestLen = len;
        }
    }
    return best;
}

std::optional<Classification> classify(std::string_view path, const RuleSet& rules) {
    std::optional<Classification> best;
    std::size_t bestLen = 0;

    auto consider = [&](std::size_t ruleIndex, RequesterKind kind, std::size_t variantIndex,
                        std::size_t literalLen, std::string capture) {
        // resource beats generic beats variant on equal literal length
        if (best && literalLen < bestLen) return;
        if (best && literalLen == bestLen &&
            static_cast<int>(kind) >= static_cast<int>(best->kind))
            return;
        best = Classification{ruleIndex, std::move(capture), kind, variantIndex};
        bestLen = literalLen;
    };

    for (std::size_t i = 0; i < rules.rules.size(); ++i) {
        const auto& rule = rules.rules[i];
        std::string capture;
        if (pattern_matches(rule, path, capture))
            consider(i, RequesterKind::resource, 0, rule.prefix().size(), std::move(capture));

        if (rule.state != RuleState::active) continue;

        if (rule.genericTemplate) {
            std::string tmplPath = local_template_path(*rule.genericTemplate, rules.publicBase);
            std::string cap;
            if (!tmplPath.empty() && template_path_matches(tmplPath, path, cap)) {
                std::size_t len = std::min(tmplPath.find(kPlaceholder), tmplPath.size());
                consider(i, RequesterKind::generic, 0, len, std::move(cap));
            }
        }
        for (std::size_t v = 0; v < rule.variants.size(); ++v) {
            std::string tmplPath =
                local_template_path(rule.variants[v].target, rules.publicBase);
            std::string cap;
            if (!tmplPath.empty() && template_path_matches(tmplPath, path, cap)) {
                std::size_t len = std::min(tmplPath.find(kPlaceholder), tmplPath.size());
                consider(i, RequesterKind::variant, v, len, std::move(cap));
            }
        }
    }
    return best;
}

ResponsePlan plan(std::string_view path, const std::vector<conneg::MediaRange>& acceptRanges,
                  const RuleSet& rules, RequesterKind kind) {
    // Resolve the rule and capture for the stated role.
    const RedirectRule* rule = nullptr;
    std::string capture;
    std::size_t variantIndex = 0;

    if (kind == RequesterKind::resource) {
        auto m = match(path, rules.rules);
        if (!m) return not_found();
        rule = &rules.rules[m->ruleIndex];
        capture = std::move(m->capture);
    } else {
        auto c = classify(path, rules);
        if (!c || c->kind != kind) return not_found();
        rule = &rules.rules[c->ruleIndex];
        capture = std::move(c->capture);
        variantIndex = c->variantIndex;
    }

    const std::string resource = resource_uri(rules, *rule, capture);

    if (rule->state == RuleState::gone) {
        ResponsePlan p;
        p.status = 410;
        p.bodyKind = BodyKind::tombstone;
        p.contentType = negotiated_note_type(acceptRanges);
        p.note = rule->reason;
        p.metadata.insert({rdfmin::Term::iri(resource),
                           rdfmin::Term::iri(std::string(rdfmin::kDctDescription)),
                           rdfmin::Term::literal(rule->reason)});
        return p;
    }

    if (rule->state == RuleState::moved) {
        ResponsePlan p;
        p.status = 301;
        p.location = expand_template(*rule->successorTemplate, capture);
        p.bodyKind = BodyKind::movedNote;
        p.contentType = negotiated_note_type(acceptRanges);
        p.note = "This resource has moved permanently; use " + *p.location +
                 " for future references.";
        for (auto& t : rdfmin::replacement_links(resource, *p.location))
            p.metadata.insert(std::move(t));
        return p;
    }

    if (kind == RequesterKind::resource) {
        auto vs = resource_variants(*rule);
        auto sel = conneg::select(acceptRanges, vs);
        if (!sel) return not_acceptable();
        const auto& chosen = vs.entries[sel->index];

        ResponsePlan p;
        p.status = 303;
        if (chosen.mediaType == kTextHtml && rule->htmlTemplate) {
            p.location = expand_template(*rule->htmlTemplate, capture);
            p.contentType = std::string(kTextHtml);
        } else if (rule->genericTemplate) {
            // one generic document stands for every machine-readable format
            p.location = expand_template(*rule->genericTemplate, capture);
            p.contentType = std::string(kTextTurtle);
        } else {
            p.location = expand_template(chosen.target, capture);
            p.contentType = std::string(kTextTurtle);
        }
        p.bodyKind = BodyKind::none;
        p.metadata.insert(rdfmin::describe_link(resource, *p.location));
        return p;
    }

    if (kind == RequesterKind::generic) {
        auto vs = machine_variants(*rule);
        auto sel = conneg::select(acceptRanges, vs);
        if (!sel) return not_acceptable();

        ResponsePlan p;
        // 302, not 301: the variant address must never read as "stop using
        // the generic document".
        p.status = 302;
        p.location = expand_template(vs.entries[sel->index].target, capture);
        p.bodyKind = BodyKind::none;
        p.contentType = std::string(kTextTurtle);
        p.metadata.insert(rdfmin::describe_link(resource, *p.location));
        return p;
    }

    // variant document hosted by this process
    ResponsePlan p;
    p.status = 200;
    p.bodyKind = BodyKind::document;
    p.contentType = rule->variants[variantIndex].mediaType;
    p.metadata.insert(rdfmin::describe_link(resource, rules.publicBase + std::string(path)));
    return p;
}

RedirectRule decommission(const RedirectRule& rule, DecommissionMode mode,
                          const std::string& argument) {
    if (rule.state != RuleState::active)
        throw AlreadyDecommissioned("rule " + rule.pattern + " is no longer active");

    RedirectRule out = rule;
    if (mode == DecommissionMode::moved) {
        if (argument.empty()) throw InvalidTemplate("successor template must not be empty");
        if (argument.find(kPlaceholder) != std::string::npos && !rule.wildcard())
            throw InvalidTemplate("$1 requires a wildcard pattern");
        out.state = RuleState::moved;
        out.successorTemplate = argument;
    } else {
        if (argument.empty()) throw Error("gone rules require a nonempty reason");
        out.state = RuleState::gone;
        out.reason = argument;
    }
    return out;
}

}  // namespace purlite::redirector
