#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "purlite/error.hpp"

namespace purlite::rdfmin {

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kSeeDocument = "https://w3id.org/303";
inline constexpr std::string_view kDctReplaces = "http://purl.org/dc/terms/replaces";
inline constexpr std::string_view kDctIsReplacedBy = "http://purl.org/dc/terms/isReplacedBy";
inline constexpr std::string_view kDctDescription = "http://purl.org/dc/terms/description";
inline constexpr std::string_view kSchemaAbout = "https://schema.org/about";
inline constexpr std::string_view kWdrsDescribedBy = "https://www.w3.org/2007/05/powder-s#describedby";

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& expected)
        : Error("turtle parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": expected " + expected),
          line(line),
          column(column),
          expected(expected) {}

    std::size_t line;
    std::size_t column;
    std::string expected;
};

struct SameUri : Error {
    using Error::Error;
};

enum class TermKind { iri, blank, literal };

struct Term {
    TermKind kind = TermKind::iri;
    std::string value;
    std::string datatype;  // absolute IRI, literals only; exclusive with language
    std::string language;

    static Term iri(std::string v) { return {TermKind::iri, std::move(v), "", ""}; }
    static Term blank(std::string label) { return {TermKind::blank, std::move(label), "", ""}; }
    static Term literal(std::string v, std::string datatype = "", std::string language = "") {
        return {TermKind::literal, std::move(v), std::move(datatype), std::move(language)};
    }

    auto operator<=>(const Term&) const = default;
};

struct Triple {
    Term subject;    // iri or blank
    Term predicate;  // always an iri
    Term object;

    auto operator<=>(const Triple&) const = default;
};

/// A set of triples plus the prefix table used for Turtle output. Equality
/// compares the triple sets only; blank labels compare literally.
class Graph {
public:
    void insert(Triple t) { triples_.insert(std::move(t)); }
    bool contains(const Triple& t) const { return triples_.count(t) > 0; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }
    auto begin() const { return triples_.begin(); }
    auto end() const { return triples_.end(); }

    void add_prefix(std::string prefix, std::string iri) {
        prefixes_[std::move(prefix)] = std::move(iri);
    }
    const std::map<std::string, std::string>& prefixes() const { return prefixes_; }

    bool operator==(const Graph& o) const { return triples_ == o.triples_; }

private:
    std::set<Triple> triples_;
    std::map<std::string, std::string> prefixes_;
};

/// Parse the supported Turtle subset: @prefix / PREFIX directives, <IRI>s,
/// prefixed names, the "a" keyword, ';' and ',' lists, quoted literals with
/// \" \\ \n \t escapes, ^^datatype, @lang tags, labelled blank nodes and
/// '#' comments. Anything else raises ParseError with line and column.
Graph parse_turtle(std::string_view text, std::string_view baseIri = "");

enum class Format { turtle, ntriples };

/// N-Triples output is canonical: fully expanded terms, one triple per
/// line, lines sorted bytewise, so equal graphs serialize identically.
/// Turtle output compresses through the graph's prefixes and groups by
/// subject and predicate.
std::string serialize(const Graph& graph, Format format);

/// The triple that records which document describes a resource:
/// (resource, <https://w3id.org/303>, document).
Triple describe_link(const std::string& resourceIri, const std::string& documentIri);

/// Both directions of a permanent move: (new, dcterms:replaces, old) and
/// (old, dcterms:isReplacedBy, new). Throws SameUri when old == new.
std::vector<Triple> replacement_links(const std::string& oldIri, const std::string& newIri);

}  // namespace purlite::rdfmin
