#include "purlite/rdfmin.hpp"

#include <algorithm>
#include <cctype>

namespace purlite::rdfmin {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

bool has_scheme(std::string_view iri) {
    if (iri.empty() || !is_alpha(iri.front())) return false;
    for (char c : iri) {
        if (c == ':') return true;
        if (!is_alnum(c) && c != '+' && c != '-' && c != '.') return false;
    }
    return false;
}

// Recursive-descent parser over the declared subset:
//
//   doc       := (directive | triples)*
//   directive := '@prefix' PNAME_NS IRIREF '.' | "PREFIX" PNAME_NS IRIREF
//   triples   := subject verb objectList (';' verb objectList)* '.'
//   subject   := iri | BLANK   verb := 'a' | iri   object := iri | BLANK | literal
//   literal   := STRING ('^^' iri | LANGTAG)?
class Parser {
public:
    Parser(std::string_view text, std::string_view base) : text_(text), base_(base) {}

    Graph parse() {
        for (;;) {
            skip_trivia();
            if (eof()) break;
            if (peek() == '@') {
                expect_word("@prefix");
                directive(true);
            } else if (at_sparql_prefix()) {
                pos_ += 6;
                col_ += 6;
                directive(false);
            } else {
                triples();
            }
        }
        return std::move(graph_);
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char peek_at(std::size_t ahead) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw ParseError(line_, col_, expected);
    }

    void skip_trivia() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') take();
            } else {
                break;
            }
        }
    }

    void expect(char c, const char* what) {
        if (eof() || peek() != c) fail(what);
        take();
    }

    void expect_word(std::string_view word) {
        for (char c : word) {
            if (eof() || peek() != c) fail("'" + std::string(word) + "'");
            take();
        }
    }

    bool at_sparql_prefix() const {
        static constexpr std::string_view kw = "prefix";
        for (std::size_t i = 0; i < kw.size(); ++i) {
            char c = peek_at(i);
            if (std::tolower(static_cast<unsigned char>(c)) != kw[i]) return false;
        }
        char after = peek_at(kw.size());
        return after == ' ' || after == '\t' || after == '\r' || after == '\n';
    }

    void directive(bool turtleStyle) {
        skip_trivia();
        std::string prefix = pname_prefix();
        expect(':', "':' after prefix name");
        skip_trivia();
        if (eof() || peek() != '<') fail("IRI for prefix target");
        std::string iri = iriref();
        skip_trivia();
        if (turtleStyle) expect('.', "'.' after @prefix directive");
        prefixes_[prefix] = iri;
        graph_.add_prefix(prefix, iri);
    }

    void triples() {
        Term subject = subject_term();
        for (;;) {
            skip_trivia();
            Term predicate = verb();
            for (;;) {
                skip_trivia();
                Term object = object_term();
                graph_.insert({subject, predicate, object});
                skip_trivia();
                if (!eof() && peek() == ',') {
                    take();
                    continue;
                }
                break;
            }
            if (!eof() && peek() == ';') {
                take();
                skip_trivia();
                if (!eof() && peek() == '.') break;  // trailing ';' before the dot
                if (eof()) fail("predicate after ';'");
                continue;
            }
            break;
        }
        skip_trivia();
        expect('.', "'.' at end of statement");
    }

    Term subject_term() {
        if (eof()) fail("subject");
        char c = peek();
        if (c == '<') return Term::iri(iriref());
        if (c == '_') return Term::blank(blank_label());
        if (c == '"') fail("IRI or blank node subject, not a literal");
        return Term::iri(pname());
    }

    Term verb() {
        if (eof()) fail("predicate");
        char c = peek();
        if (c == '<') return Term::iri(iriref());
        if (c == 'a') {
            char after = peek_at(1);
            if (!is_alnum(after) && after != '_' && after != '-' && after != ':') {
                take();
                return Term::iri(std::string(kRdfType));
            }
        }
        if (c == '_' || c == '"') fail("IRI predicate");
        return Term::iri(pname());
    }

    Term object_term() {
        if (eof()) fail("object");
        char c = peek();
        if (c == '<') return Term::iri(iriref());
        if (c == '_') return Term::blank(blank_label());
        if (c == '"') return literal();
        if (is_alpha(c) || c == ':') return Term::iri(pname());
        fail("IRI, blank node, or quoted literal object");
    }

    std::string iriref() {
        expect('<', "'<'");
        std::string out;
        for (;;) {
            if (eof()) fail("'>' closing the IRI");
            char c = take();
            if (c == '>') break;
            if (c == '<' || c == '"' || c == ' ' || c == '\n' || c == '\t')
                fail("IRI character");
            out += c;
        }
        return resolve(out);
    }

    std::string resolve(const std::string& ref) const {
        if (has_scheme(ref)) return ref;
        if (base_.empty()) fail("absolute IRI (no base set)");
        if (ref.rfind("//", 0) == 0) return std::string(base_.substr(0, base_.find(':'))) + ":" + ref;
        auto schemeEnd = base_.find("://");
        if (ref.rfind('/', 0) == 0) {
            auto hostEnd = schemeEnd == std::string_view::npos
                               ? std::string_view::npos
                               : base_.find('/', schemeEnd + 3);
            return std::string(hostEnd == std::string_view::npos ? base_
                                                                 : base_.substr(0, hostEnd)) +
                   ref;
        }
        if (ref.rfind('#', 0) == 0)
            return std::string(base_.substr(0, base_.find('#'))) + ref;
        auto lastSlash = base_.rfind('/');
        if (lastSlash == std::string_view::npos || lastSlash < schemeEnd + 3)
            return std::string(base_) + "/" + ref;
        return std::string(base_.substr(0, lastSlash + 1)) + ref;
    }

    std::string pname_prefix() {
        std::string out;
        if (!eof() && is_alpha(peek())) {
            out += take();
            while (!eof()) {
                char c = peek();
                if (is_alnum(c) || c == '_' || c == '-') {
                    out += take();
                } else if (c == '.' && (is_alnum(peek_at(1)) || peek_at(1) == '_')) {
                    out += take();
                } else {
                    break;
                }
            }
        }
        return out;
    }

    std::string pname() {
        std::string prefix = pname_prefix();
        if (eof() || peek() != ':') fail("prefixed name");
        take();
        auto found = prefixes_.find(prefix);
        if (found == prefixes_.end())
            fail("declared prefix (unknown prefix '" + prefix + ":')");

        std::string local;
        while (!eof()) {
            char c = peek();
            if (is_alnum(c) || c == '_' || c == '-') {
                local += take();
            } else if (c == '.' && (is_alnum(peek_at(1)) || peek_at(1) == '_')) {
                // inner dots belong to the local name, a trailing dot ends the statement
                local += take();
            } else {
                break;
            }
        }
        return found->second + local;
    }

    std::string blank_label() {
        expect('_', "blank node");
        expect(':', "':' after '_'");
        std::string label;
        while (!eof() && (is_alnum(peek()) || peek() == '_')) label += take();
        if (label.empty()) fail("blank node label");
        return label;
    }

    Term literal() {
        expect('"', "'\"'");
        std::string value;
        for (;;) {
            if (eof()) fail("closing '\"'");
            char c = take();
            if (c == '"') break;
            if (c == '\n') fail("closing '\"' before end of line");
            if (c == '\\') {
                if (eof()) fail("escape character");
                char e = take();
                switch (e) {
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    default: fail(R"(one of the escapes \" \\ \n \t)");
                }
            } else {
                value += c;
            }
        }

        if (!eof() && peek() == '^') {
            take();
            expect('^', "'^^' before the datatype");
            skip_trivia();
            std::string dt = peek() == '<' ? iriref() : pname();
            return Term::literal(std::move(value), std::move(dt));
        }
        if (!eof() && peek() == '@') {
            take();
            std::string tag;
            while (!eof() && (is_alnum(peek()) || peek() == '-')) tag += take();
            if (tag.empty() || tag.front() == '-' || !is_alpha(tag.front()))
                fail("language tag");
            return Term::literal(std::move(value), "", std::move(tag));
        }
        return Term::literal(std::move(value));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    std::string_view base_;
    std::map<std::string, std::string> prefixes_;
    Graph graph_;
};

std::string escape_literal(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string term_to_ntriples(const Term& t) {
    switch (t.kind) {
        case TermKind::iri: return "<" + t.value + ">";
        case TermKind::blank: return "_:" + t.value;
        case TermKind::literal: {
            std::string out = "\"" + escape_literal(t.value) + "\"";
            if (!t.datatype.empty()) out += "^^<" + t.datatype + ">";
            if (!t.language.empty()) out += "@" + t.language;
            return out;
        }
    }
    return {};
}

bool safe_local(std::string_view local) {
    return std::all_of(local.begin(), local.end(),
                       [](char c) { return is_alnum(c) || c == '_' || c == '-'; });
}

std::string compress_iri(const Graph& g, const std::string& iri) {
    for (const auto& [prefix, expansion] : g.prefixes()) {
        if (!expansion.empty() && iri.size() >= expansion.size() &&
            iri.compare(0, expansion.size(), expansion) == 0) {
            std::string_view local(iri.data() + expansion.size(),
                                   iri.size() - expansion.size());
            if (safe_local(local)) return prefix + ":" + std::string(local);
        }
    }
    return "<" + iri + ">";
}

std::string term_to_turtle(const Graph& g, const Term& t, bool predicate) {
    if (t.kind == TermKind::iri) {
        if (predicate && t.value == kRdfType) return "a";
        return compress_iri(g, t.value);
    }
    if (t.kind == TermKind::blank) return "_:" + t.value;
    std::string out = "\"" + escape_literal(t.value) + "\"";
    if (!t.datatype.empty()) out += "^^" + compress_iri(g, t.datatype);
    if (!t.language.empty()) out += "@" + t.language;
    return out;
}

}  // namespace

Graph parse_turtle(std::string_view text, std::string_view baseIri) {
    return Parser(text, baseIri).parse();
}

std::string serialize(const Graph& graph, Format format) {
    if (format == Format::ntriples) {
        std::vector<std::string> lines;
        lines.reserve(graph.size());
        for (const auto& t : graph) {
            lines.push_back(term_to_ntriples(t.subject) + " " + term_to_ntriples(t.predicate) +
                            " " + term_to_ntriples(t.object) + " .\n");
        }
        std::sort(lines.begin(), lines.end());
        std::string out;
        for (auto& l : lines) out += l;
        return out;
    }

    std::string out;
    for (const auto& [prefix, iri] : graph.prefixes())
        out += "@prefix " + prefix + ": <" + iri + "> .\n";
    if (!graph.prefixes().empty() && !graph.empty()) out += "\n";

    // the std::set ordering already clusters equal subjects and predicates
    const Triple* prev = nullptr;
    for (const auto& t : graph) {
        if (prev && prev->subject == t.subject) {
            if (prev->predicate == t.predicate) {
                out += ", " + term_to_turtle(graph, t.object, false);
            } else {
                out += " ;\n    " + term_to_turtle(graph, t.predicate, true) + " " +
                       term_to_turtle(graph, t.object, false);
            }
        } else {
            if (prev) out += " .\n";
            out += term_to_turtle(graph, t.subject, false) + " " +
                   term_to_turtle(graph, t.predicate, true) + " " +
                   term_to_turtle(graph, t.object, false);
        }
        prev = &t;
    }
    if (prev) out += " .\n";
    return out;
}

Triple describe_link(const std::string& resourceIri, const std::string& documentIri) {
    return {Term::iri(resourceIri), Term::iri(std::string(kSeeDocument)),
            Term::iri(documentIri)};
}

std::vector<Triple> replacement_links(const std::string& oldIri, const std::string& newIri) {
    if (oldIri == newIri) throw SameUri("replacement links require two distinct URIs");
    return {
        {Term::iri(newIri), Term::iri(std::string(kDctReplaces)), Term::iri(oldIri)},
        {Term::iri(oldIri), Term::iri(std::string(kDctIsReplacedBy)), Term::iri(newIri)},
    };
}

}  // namespace purlite::rdfmin
