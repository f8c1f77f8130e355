#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "purlite/error.hpp"
#include "purlite/rdfmin.hpp"

namespace purlite::auditor {

/// One request/response in a dereferencing chain.
struct Hop {
    std::string uri;  // as requested, scheme never auto-upgraded
    int status = 0;
    std::optional<std::string> location;
    std::optional<std::string> contentType;
    std::optional<std::string> error;  // network failure, recorded not thrown
};

struct Finding {
    std::string code;  // C1..C10
    Severity severity;
    std::size_t hopIndex;
    std::string message;
};

/// What one GET returned; fetchers never follow redirects themselves.
struct FetchResult {
    int status = 0;
    std::optional<std::string> location;
    std::optional<std::string> contentType;
    std::string body;
    std::optional<std::string> error;
};

using Fetcher = std::function<FetchResult(const std::string& uri, const std::string& accept)>;

struct ChainReport {
    std::vector<Hop> hops;
    std::vector<Finding> findings;  // sorted by code, then hop
    std::optional<rdfmin::Graph> finalGraph;
    std::string finalBody;
    std::vector<std::string> notes;

    bool has_errors() const {
        for (const auto& f : findings)
            if (f.severity == Severity::error) return true;
        return false;
    }
};

struct AuditOptions {
    std::string accept = "text/turtle";
    std::size_t maxHops = 10;
    bool strict = false;  // raises C3 (no 303) from warn to error
    std::string baseIri;  // base for parsing the final document, defaults to its URI
};

/// Follow the redirect chain by hand, never upgrading schemes, parse the
/// final body when it is Turtle or N-Triples, and evaluate:
///   C1 error  a hop uses plain http
///   C2 error  more than one 303 in the chain
///   C3 warn   no 303 at all for a resource audit (error with strict)
///   C4 error  final Content-Type not acceptable for the requested type
///   C5 error  audited URI absent from the subject position of the final graph
///   C6 error  no linkage triple (w3id.org/303 / schema:about / wdrs:describedby)
///   C7 error  a URI repeats or the chain exceeds maxHops
///   C8 warn   a 301 was taken but the final graph still uses the predecessor URI
///   C9 error  terminal 410 with an empty body
///   C10 warn  terminal 301 body lacks the dcterms replaces/isReplacedBy pair
/// HTML final bodies skip C5/C6/C8 with a note.
ChainReport audit(const std::string& uri, const AuditOptions& options, const Fetcher& fetch);

/// Findings for an already-recorded chain; pure, used for offline tests.
std::vector<Finding> evaluate_chain(const std::vector<Hop>& hops, const std::string& finalBody,
                                    const std::optional<rdfmin::Graph>& finalGraph,
                                    const std::string& originalUri, const std::string& accept,
                                    bool strict, std::vector<std::string>& notes);

enum class ReportFormat { text, lines };

/// "text": a hop table then findings, ending in OK when clean.
/// "lines": one "CODE SEVERITY hop-index message" line per finding.
std::string report_render(const ChainReport& report, ReportFormat format);

/// A real fetcher: single GET, explicit Accept, no automatic redirects.
Fetcher http_fetcher(int timeoutSeconds = 10);

}  // namespace purlite::auditor
