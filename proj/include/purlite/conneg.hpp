#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace purlite::conneg {

/// One element of an Accept header. Quality is kept in thousandths so that
/// the at-most-three-decimals grammar compares exactly.
struct MediaRange {
    std::string type;     // token or "*"
    std::string subtype;  // token or "*"
    int q_milli = 1000;   // 0..1000

    /// 2 = exact type/subtype, 1 = type/*, 0 = */*.
    int specificity() const;
    bool matches(std::string_view concreteType, std::string_view concreteSubtype) const;
};

/// Parse an Accept header. Malformed elements are dropped rather than
/// failing the whole header; an empty header means "accept anything".
std::vector<MediaRange> parse_accept(std::string_view header);

struct Variant {
    std::string mediaType;  // concrete "type/subtype"
    std::string target;     // URI template the variant redirects to
};

struct VariantSet {
    std::vector<Variant> entries;
    std::optional<std::size_t> defaultIndex;
};

struct Selection {
    std::size_t index;
    bool fallback;  // true when nothing was acceptable and the default was used
};

/// Pick the variant to deliver: highest quality wins, specificity of the
/// matching range breaks quality ties, declaration order breaks the rest.
/// A variant whose best match has q=0 is never returned. When nothing is
/// acceptable the default variant is returned flagged as fallback, or
/// nullopt when no default is configured.
std::optional<Selection> select(const std::vector<MediaRange>& ranges,
                                const VariantSet& variants);

/// Split "type/subtype" (lowercased, parameters stripped); nullopt when the
/// input is not a concrete media type.
std::optional<std::pair<std::string, std::string>> split_media_type(std::string_view mediaType);

}  // namespace purlite::conneg
