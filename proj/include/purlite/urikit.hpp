#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "purlite/error.hpp"

namespace purlite::urikit {

struct MalformedUri : Error {
    using Error::Error;
};

struct PathSegment {
    std::string text;    // byte-exact as given (path is case-sensitive)
    std::size_t offset;  // position of the first character in the raw input
};

/// A decomposed absolute URI. Scheme and host are stored lowercase; the
/// path, query, and fragment keep their input bytes untouched. A trailing
/// slash shows up as a final empty segment.
struct CoolUri {
    std::string raw;
    std::string scheme;
    std::string host;
    std::optional<std::uint16_t> port;
    std::vector<PathSegment> segments;
    std::optional<std::string> query;
    std::optional<std::string> fragment;

    std::size_t host_offset = 0;
    std::size_t port_offset = 0;   // position of the ':' before the port digits
    std::size_t path_offset = 0;   // position of the leading '/', or end of raw
    std::size_t query_offset = 0;  // position of '?'
    std::size_t fragment_offset = 0;  // position of '#'

    /// "/seg/seg" (empty when the URI has no path).
    std::string path() const;
    /// The final path segment; empty when there is none or the path ends in '/'.
    std::string accession_id() const;
    bool has_trailing_slash() const { return !segments.empty() && segments.back().text.empty(); }
    /// Reassembled from components: lowercased scheme and host, everything
    /// else byte-exact. parse(serialized()) reproduces the same components.
    std::string serialized() const;
};

/// Split an absolute URI of the form scheme://host[:port][/path][?query][#fragment].
CoolUri parse(std::string_view text);

/// RDF-style equality: plain string comparison after lowercasing scheme and
/// host and dropping a default port (443 for https, 80 for http). No
/// percent-decoding, no dot-segment removal.
bool equivalent(const CoolUri& a, const CoolUri& b);

struct Span {
    std::size_t offset;
    std::size_t length;
};

struct Diagnostic {
    std::string code;  // L1..L13
    Severity severity;
    Span span;  // character range in the raw input
    std::string message;
};

/// "CODE SEVERITY offset:length message", newline-terminated.
std::string to_line(const Diagnostic& d);

enum class LintProfile { resource, document };

/// Evaluate the full rule catalog against one URI. Diagnostics come back
/// ordered by span. Rules L6 (technology extension) and L7 (fragment) apply
/// to the resource profile only; document URLs legitimately carry both.
///
///   L1  error  scheme is not https
///   L2  error  uppercase in a path segment before the accession identifier
///   L3  error  path character outside the unreserved set
///   L4  warn   ambiguous character {0,O,1,I,l} in the accession identifier
///   L5  error  trailing slash
///   L6  error  technology extension (.php, .html, ...) [resource profile]
///   L7  error  fragment present [resource profile]
///   L8  warn   path longer than 64 characters
///   L10 warn   digit run with a leading zero in the accession identifier
///   L11 warn   explicit default port
///   L12 warn   percent-encoded octet anywhere
///   L13 warn   underscore or dot used as a word separator in a segment
///
/// Documented overlaps: a technology extension also fires L13 (the dot is a
/// separator), and a leading-zero run also fires L4 (the zero itself is an
/// ambiguous character).
std::vector<Diagnostic> lint(const CoolUri& uri, LintProfile profile = LintProfile::resource);

}  // namespace purlite::urikit
