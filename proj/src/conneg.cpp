#include "purlite/conneg.hpp"

#include <algorithm>
#include <cctype>

namespace purlite::conneg {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool is_tchar(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    return std::string_view("!#$%&'*+-.^_`|~").find(c) != std::string_view::npos;
}

bool is_token(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), is_tchar);
}

// qvalue = ( "0" [ "." 0*3DIGIT ] ) / ( "1" [ "." 0*3("0") ] )
std::optional<int> parse_qvalue(std::string_view s) {
    if (s.empty() || (s[0] != '0' && s[0] != '1')) return std::nullopt;
    int whole = s[0] - '0';
    if (s.size() == 1) return whole * 1000;
    if (s[1] != '.' || s.size() > 5) return std::nullopt;
    int milli = 0, scale = 100;
    for (std::size_t i = 2; i < s.size(); ++i, scale /= 10) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        milli += (s[i] - '0') * scale;
    }
    int q = whole * 1000 + milli;
    return q <= 1000 ? std::optional<int>(q) : std::nullopt;
}

// Split on top-level commas, skipping any that sit inside quoted parameter
// values.
std::vector<std::string_view> split_elements(std::string_view header) {
    std::vector<std::string_view> out;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= header.size(); ++i) {
        if (i == header.size() || (header[i] == ',' && !quoted)) {
            out.push_back(header.substr(start, i - start));
            start = i + 1;
        } else if (header[i] == '"') {
            quoted = !quoted;
        } else if (quoted && header[i] == '\\') {
            ++i;
        }
    }
    return out;
}

std::optional<MediaRange> parse_element(std::string_view element) {
    auto semi = element.find(';');
    std::string_view range = trim(element.substr(0, semi));

    auto slash = range.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    std::string type = to_lower(range.substr(0, slash));
    std::string subtype = to_lower(range.substr(slash + 1));
    if (type == "*") {
        if (subtype != "*") return std::nullopt;  // "*" type implies "*" subtype
    } else if (!is_token(type)) {
        return std::nullopt;
    }
    if (subtype != "*" && !is_token(subtype)) return std::nullopt;

    MediaRange out{std::move(type), std::move(subtype), 1000};
    while (semi != std::string_view::npos) {
        std::size_t next = element.find(';', semi + 1);
        std::string_view param = trim(element.substr(semi + 1, next - semi - 1));
        auto eq = param.find('=');
        if (eq != std::string_view::npos) {
            std::string name = to_lower(trim(param.substr(0, eq)));
            std::string_view value = trim(param.substr(eq + 1));
            if (name == "q") {
                auto q = parse_qvalue(value);
                if (!q) return std::nullopt;
                out.q_milli = *q;
            }
            // other parameters (charset, level, accept-ext) are ignored for matching
        }
        semi = next;
    }
    return out;
}

}  // namespace

int MediaRange::specificity() const {
    if (type == "*") return 0;
    return subtype == "*" ? 1 : 2;
}

bool MediaRange::matches(std::string_view concreteType, std::string_view concreteSubtype) const {
    if (type == "*") return true;
    if (type != concreteType) return false;
    return subtype == "*" || subtype == concreteSubtype;
}

std::vector<MediaRange> parse_accept(std::string_view header) {
    if (trim(header).empty()) return {{"*", "*", 1000}};
    std::vector<MediaRange> out;
    for (auto element : split_elements(header)) {
        if (trim(element).empty()) continue;
        if (auto range = parse_element(element)) out.push_back(std::move(*range));
    }
    return out;
}

std::optional<std::pair<std::string, std::string>> split_media_type(std::string_view mediaType) {
    auto semi = mediaType.find(';');
    std::string_view bare = trim(mediaType.substr(0, semi));
    auto slash = bare.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    std::string type = to_lower(bare.substr(0, slash));
    std::string subtype = to_lower(bare.substr(slash + 1));
    if (!is_token(type) || !is_token(subtype)) return std::nullopt;
    return std::make_pair(std::move(type), std::move(subtype));
}

std::optional<Selection> select(const std::vector<MediaRange>& ranges,
                                const VariantSet& variants) {
    std::optional<std::size_t> best;
    int bestQ = 0, bestSpec = -1;

    for (std::size_t i = 0; i < variants.entries.size(); ++i) {
        auto parts = split_media_type(variants.entries[i].mediaType);
        if (!parts) continue;

        // The most specific matching range decides the variant's quality.
        int spec = -1, q = 0;
        for (const auto& r : ranges) {
            if (!r.matches(parts->first, parts->second)) continue;
            if (r.specificity() > spec) {
                spec = r.specificity();
                q = r.q_milli;
            } else if (r.specificity() == spec) {
                q = std::max(q, r.q_milli);
            }
        }
        if (spec < 0 || q == 0) continue;  // not acceptable

        if (q > bestQ || (q == bestQ && spec > bestSpec)) {
            best = i;
            bestQ = q;
            bestSpec = spec;
        }
    }

    if (best) return Selection{*best, false};
    if (variants.defaultIndex && *variants.defaultIndex < variants.entries.size())
        return Selection{*variants.defaultIndex, true};
    return std::nullopt;
}

}  // namespace purlite::conneg
