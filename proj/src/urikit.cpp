#include "purlite/urikit.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace purlite::urikit {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)); }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

bool is_scheme(std::string_view s) {
    if (s.empty() || !is_alpha(s.front())) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return is_alnum(c) || c == '+' || c == '-' || c == '.'; });
}

bool is_host_char(char c) { return is_alnum(c) || c == '-' || c == '.' || c == '_'; }

// RFC 3986 unreserved = ALPHA / DIGIT / "-" / "." / "_" / "~"
bool is_unreserved(char c) { return is_alnum(c) || c == '-' || c == '.' || c == '_' || c == '~'; }

std::optional<std::uint16_t> default_port(std::string_view scheme) {
    if (scheme == "https") return 443;
    if (scheme == "http") return 80;
    return std::nullopt;
}

const std::array<std::string_view, 10> kTechExtensions = {
    ".php", ".html", ".htm", ".ttl", ".jsp", ".asp", ".aspx", ".cgi", ".xml", ".json"};

}  // namespace

std::string CoolUri::path() const {
    std::string out;
    for (const auto& seg : segments) {
        out += '/';
        out += seg.text;
    }
    return out;
}

std::string CoolUri::accession_id() const { return segments.empty() ? "" : segments.back().text; }

std::string CoolUri::serialized() const {
    std::string out = scheme + "://" + host;
    if (port) out += ":" + std::to_string(*port);
    out += path();
    if (query) out += "?" + *query;
    if (fragment) out += "#" + *fragment;
    return out;
}

CoolUri parse(std::string_view text) {
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x21 || u == 0x7F) throw MalformedUri("whitespace or control character in URI");
    }

    CoolUri uri;
    uri.raw = std::string(text);

    auto schemeEnd = text.find("://");
    if (schemeEnd == std::string_view::npos || !is_scheme(text.substr(0, schemeEnd)))
        throw MalformedUri("expected <scheme>://<host>");
    uri.scheme = to_lower(text.substr(0, schemeEnd));

    std::size_t pos = schemeEnd + 3;
    uri.host_offset = pos;
    std::size_t authorityEnd = text.find_first_of("/?#", pos);
    if (authorityEnd == std::string_view::npos) authorityEnd = text.size();
    std::string_view authority = text.substr(pos, authorityEnd - pos);
    if (authority.empty()) throw MalformedUri("empty host");
    if (authority.find('@') != std::string_view::npos)
        throw MalformedUri("userinfo is not supported");

    std::string_view hostPart = authority;
    if (authority.front() == '[') {  // bracketed IPv6 literal
        auto close = authority.find(']');
        if (close == std::string_view::npos) throw MalformedUri("unterminated IPv6 literal");
        hostPart = authority.substr(0, close + 1);
    } else {
        auto colon = authority.find(':');
        if (colon != std::string_view::npos) hostPart = authority.substr(0, colon);
        if (hostPart.empty()) throw MalformedUri("empty host");
        for (char c : hostPart)
            if (!is_host_char(c)) throw MalformedUri(std::string("bad host character '") + c + "'");
    }
    uri.host = to_lower(hostPart);

    std::string_view afterHost = authority.substr(hostPart.size());
    if (!afterHost.empty()) {
        if (afterHost.front() != ':' || afterHost.size() < 2)
            throw MalformedUri("bad authority");
        unsigned long value = 0;
        for (char c : afterHost.substr(1)) {
            if (!is_digit(c)) throw MalformedUri("non-numeric port");
            value = value * 10 + static_cast<unsigned long>(c - '0');
            if (value > 65535) throw MalformedUri("port out of range");
        }
        uri.port = static_cast<std::uint16_t>(value);
        uri.port_offset = pos + hostPart.size();
    }

    pos = authorityEnd;
    uri.path_offset = pos;
    if (pos < text.size() && text[pos] == '/') {
        std::size_t pathEnd = text.find_first_of("?#", pos);
        if (pathEnd == std::string_view::npos) pathEnd = text.size();
        std::size_t segStart = pos + 1;
        for (std::size_t i = segStart;; ++i) {
            if (i == pathEnd || text[i] == '/') {
                uri.segments.push_back(
                    {std::string(text.substr(segStart, i - segStart)), segStart});
                segStart = i + 1;
                if (i == pathEnd) break;
            }
        }
        pos = pathEnd;
    }

    if (pos < text.size() && text[pos] == '?') {
        uri.query_offset = pos;
        std::size_t queryEnd = text.find('#', pos);
        if (queryEnd == std::string_view::npos) queryEnd = text.size();
        uri.query = std::string(text.substr(pos + 1, queryEnd - pos - 1));
        pos = queryEnd;
    }

    if (pos < text.size() && text[pos] == '#') {
        uri.fragment_offset = pos;
        uri.fragment = std::string(text.substr(pos + 1));
        pos = text.size();
    }

    if (pos != text.size()) throw MalformedUri("trailing garbage after URI");
    return uri;
}

bool equivalent(const CoolUri& a, const CoolUri& b) {
    auto normalized = [](const CoolUri& u) {
        std::string out = u.scheme + "://" + u.host;
        if (u.port && u.port != default_port(u.scheme)) out += ":" + std::to_string(*u.port);
        out += u.path();
        if (u.query) out += "?" + *u.query;
        if (u.fragment) out += "#" + *u.fragment;
        return out;
    };
    return normalized(a) == normalized(b);
}

std::string to_line(const Diagnostic& d) {
    return d.code + " " + to_string(d.severity) + " " + std::to_string(d.span.offset) + ":" +
           std::to_string(d.span.length) + " " + d.message + "\n";
}

namespace {

void emit(std::vector<Diagnostic>& out, const char* code, Severity sev, Span span,
          std::string message) {
    out.push_back({code, sev, span, std::move(message)});
}

}  // namespace

std::vector<Diagnostic> lint(const CoolUri& uri, LintProfile profile) {
    std::vector<Diagnostic> out;
    const bool resource = profile == LintProfile::resource;

    // L1: https only
    if (uri.scheme != "https")
        emit(out, "L1", Severity::error, {0, uri.scheme.size()},
             "use the https scheme; plain http exposes every request to interception");

    // L2: lowercase before the accession identifier
    for (std::size_t s = 0; s + 1 < uri.segments.size(); ++s) {
        const auto& seg = uri.segments[s];
        if (std::any_of(seg.text.begin(), seg.text.end(),
                        [](char c) { return std::isupper(static_cast<unsigned char>(c)); }))
            emit(out, "L2", Severity::error, {seg.offset, seg.text.size()},
                 "uppercase in the path before the accession identifier; paths are case-sensitive");
    }

    // L3: unreserved characters only, reported as maximal runs per segment
    for (const auto& seg : uri.segments) {
        std::size_t i = 0;
        while (i < seg.text.size()) {
            if (is_unreserved(seg.text[i])) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < seg.text.size() && !is_unreserved(seg.text[j])) ++j;
            emit(out, "L3", Severity::error, {seg.offset + i, j - i},
                 "character outside the unreserved set (letters, digits, '-', '.', '_', '~')");
            i = j;
        }
    }

    const std::string accession = uri.accession_id();
    const std::size_t accessionOffset = uri.segments.empty() ? 0 : uri.segments.back().offset;

    // L4: ambiguous characters in the accession identifier
    for (std::size_t i = 0; i < accession.size(); ++i) {
        char c = accession[i];
        if (c == '0' || c == 'O' || c == '1' || c == 'I' || c == 'l')
            emit(out, "L4", Severity::warn, {accessionOffset + i, 1},
                 std::string("ambiguous character '") + c + "' (0/O and 1/I/l are easily confused)");
    }

    // L5: trailing slash
    if (uri.has_trailing_slash()) {
        std::size_t slash = uri.segments.back().offset - 1;
        emit(out, "L5", Severity::error, {slash, 1},
             "trailing slash; the accession identifier should end the path");
    }

    // L6: technology extensions (resource URIs only)
    if (resource) {
        std::string lowerAccession = to_lower(accession);
        for (auto ext : kTechExtensions) {
            if (lowerAccession.size() > ext.size() && lowerAccession.ends_with(ext)) {
                emit(out, "L6", Severity::error,
                     {accessionOffset + accession.size() - ext.size(), ext.size()},
                     "technology extension in a resource URI; serve formats via content "
                     "negotiation instead");
                break;
            }
        }
    }

    // L7: fragments never reach the server (resource URIs only)
    if (resource && uri.fragment)
        emit(out, "L7", Severity::error,
             {uri.fragment_offset, uri.raw.size() - uri.fragment_offset},
             "fragment in a resource URI; fragments are stripped before the request is sent "
             "and can never be redirected");

    // L8: short paths
    std::string path = uri.path();
    if (path.size() > 64)
        emit(out, "L8", Severity::warn, {uri.path_offset, path.size()},
             "path longer than 64 characters; keep paths short and stable");

    // L10: leading zeros in accession digit runs
    for (std::size_t i = 0; i < accession.size();) {
        if (!is_digit(accession[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < accession.size() && is_digit(accession[j])) ++j;
        if (accession[i] == '0' && j - i >= 2)
            emit(out, "L10", Severity::warn, {accessionOffset + i, j - i},
                 "digit run with a leading zero artificially limits the identifier space");
        i = j;
    }

    // L11: explicit default port
    if (uri.port && uri.port == default_port(uri.scheme))
        emit(out, "L11", Severity::warn,
             {uri.port_offset, 1 + std::to_string(*uri.port).size()},
             "explicit default port; omit it so equivalent spellings compare equal");

    // L12: percent-encoded octets anywhere
    for (std::size_t i = 0; i + 2 < uri.raw.size(); ++i) {
        if (uri.raw[i] == '%' && is_hex(uri.raw[i + 1]) && is_hex(uri.raw[i + 2]))
            emit(out, "L12", Severity::warn, {i, 3},
                 "percent-encoded octet; RDF compares URIs as plain strings, so encoded "
                 "spellings will not match");
    }

    // L13: separators other than the hyphen
    for (const auto& seg : uri.segments) {
        for (std::size_t i = 0; i + 1 < seg.text.size(); ++i) {
            char c = seg.text[i];
            if ((c == '_' || c == '.') && i > 0 && is_alnum(seg.text[i - 1]) &&
                is_alnum(seg.text[i + 1]))
                emit(out, "L13", Severity::warn, {seg.offset + i, 1},
                     std::string("'") + c + "' used as a separator; prefer hyphens");
        }
    }

    std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return a.span.offset < b.span.offset;
    });
    return out;
}

}  // namespace purlite::urikit
