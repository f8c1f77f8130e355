#include "purlite/server.hpp"

#include <httplib.h>
#include <unistd.h>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "purlite/conneg.hpp"
#include "purlite/idstore.hpp"
#include "purlite/rdfmin.hpp"
#include "purlite/urikit.hpp"

namespace purlite::server {

namespace {

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)); }

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    return std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
}

std::string percent_decode(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size() && is_hex(text[i + 1]) && is_hex(text[i + 2])) {
            out += static_cast<char>(hex_value(text[i + 1]) * 16 + hex_value(text[i + 2]));
            i += 2;
        } else {
            out += text[i];
        }
    }
    return out;
}

std::string percent_encode(std::string_view text) {
    std::string out;
    for (char c : text) {
        bool safe = std::isalnum(static_cast<unsigned char>(c)) ||
                    std::string_view("-._~").find(c) != std::string_view::npos;
        if (safe) {
            out += c;
        } else {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02X", static_cast<unsigned char>(c));
            out += buf;
        }
    }
    return out;
}

bool valid_pattern(std::string_view pattern) {
    if (pattern.empty() || pattern.front() != '/') return false;
    auto star = pattern.find('*');
    return star == std::string_view::npos || star == pattern.size() - 1;
}

// A template must expand to a parsable http(s) URI for any capture.
std::optional<std::string> template_problem(const std::string& tmpl, bool wildcard) {
    if (tmpl.find("$1") != std::string::npos && !wildcard)
        return "\"$1\" requires a pattern ending in \"*\"";
    try {
        auto probe = urikit::parse(redirector::expand_template(tmpl, "probe"));
        if (probe.scheme != "https" && probe.scheme != "http")
            return "template must be an absolute http(s) URI";
    } catch (const urikit::MalformedUri& e) {
        return std::string("template does not expand to a valid URI: ") + e.what();
    }
    return std::nullopt;
}

struct Snapshot {
    redirector::RuleSet ruleSet;
    std::string text;
};

std::string media_type_for(const std::filesystem::path& file) {
    auto ext = file.extension().string();
    if (ext == ".ttl") return "text/turtle";
    if (ext == ".nt") return "application/n-triples";
    if (ext == ".html" || ext == ".htm") return "text/html";
    if (ext == ".jsonld") return "application/ld+json";
    if (ext == ".json") return "application/json";
    if (ext == ".txt") return "text/plain";
    return "application/octet-stream";
}

std::string html_page(const std::string& title, const std::string& body) {
    return "<!DOCTYPE html>\n<html><head><title>" + title + "</title></head><body><h1>" +
           title + "</h1><p>" + body + "</p></body></html>\n";
}

void write_plan(const redirector::ResponsePlan& plan, const std::string& docBody,
                httplib::Response& res) {
    res.status = plan.status;
    if (plan.location) res.set_header("Location", *plan.location);
    res.set_header("Vary", "Accept");

    const std::string contentType = plan.contentType.value_or("text/plain");
    const bool machine = contentType == "text/turtle";

    switch (plan.bodyKind) {
        case redirector::BodyKind::none:
            if (plan.status / 100 == 3) {
                if (machine) {
                    res.set_content(rdfmin::serialize(plan.metadata, rdfmin::Format::turtle),
                                    "text/turtle");
                } else {
                    res.set_content(html_page("See Other",
                                              "<a href=\"" + *plan.location + "\">" +
                                                  *plan.location + "</a>"),
                                    "text/html");
                }
            }
            break;
        case redirector::BodyKind::tombstone:
            if (machine) {
                res.set_content(rdfmin::serialize(plan.metadata, rdfmin::Format::turtle),
                                "text/turtle");
            } else {
                res.set_content(html_page("410 Gone", plan.note), "text/html");
            }
            break;
        case redirector::BodyKind::movedNote:
            if (machine) {
                res.set_content(rdfmin::serialize(plan.metadata, rdfmin::Format::turtle),
                                "text/turtle");
            } else {
                res.set_content(html_page("301 Moved Permanently", plan.note), "text/html");
            }
            break;
        case redirector::BodyKind::document:
            res.set_content(docBody, contentType.c_str());
            break;
    }
}

}  // namespace

std::string RulesError::render(const std::vector<RuleDiagnostic>& items) {
    std::string out = "rules file invalid:";
    for (const auto& d : items)
        out += "\nline " + std::to_string(d.line) + ": " + d.code + ": " + d.message;
    return out;
}

std::vector<redirector::RedirectRule> load_rules(std::string_view text) {
    std::vector<RuleDiagnostic> problems;
    auto problem = [&](std::size_t line, const char* code, std::string message) {
        problems.push_back({line, code, std::move(message)});
    };

    struct VariantLine {
        std::size_t line;
        std::string pattern, mediaType, tmpl;
    };
    std::vector<redirector::RedirectRule> rules;
    std::vector<std::size_t> ruleLines;
    std::vector<VariantLine> variantLines;
    bool sawHeader = false;

    std::istringstream in{std::string(text)};
    std::string rawLine;
    std::size_t lineNo = 0;
    while (std::getline(in, rawLine)) {
        ++lineNo;
        if (!rawLine.empty() && rawLine.back() == '\r') rawLine.pop_back();

        // strip comments: '#' at line start or after whitespace
        std::string line;
        for (std::size_t i = 0; i < rawLine.size(); ++i) {
            if (rawLine[i] == '#' && (i == 0 || rawLine[i - 1] == ' ' || rawLine[i - 1] == '\t')) {
                break;
            }
            line += rawLine[i];
        }

        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;

        if (!sawHeader) {
            if (tokens.size() != 2 || tokens[0] != "purlite-rules" || tokens[1] != "1") {
                problem(lineNo, "syntax", "first directive must be \"purlite-rules 1\"");
                throw RulesError(std::move(problems));
            }
            sawHeader = true;
            continue;
        }

        if (tokens[0] == "rule") {
            if (tokens.size() < 3) {
                problem(lineNo, "syntax", "expected: rule <pattern> <state> [options]");
                continue;
            }
            redirector::RedirectRule rule;
            rule.pattern = tokens[1];
            if (!valid_pattern(rule.pattern)) {
                problem(lineNo, "syntax",
                        "pattern must be an absolute path with at most one trailing \"*\"");
                continue;
            }

            const std::string& state = tokens[2];
            std::map<std::string, std::string> opts;
            bool optsOk = true;
            for (std::size_t i = 3; i < tokens.size(); ++i) {
                auto eq = tokens[i].find('=');
                if (eq == std::string::npos || eq == 0) {
                    problem(lineNo, "syntax", "expected key=value, got \"" + tokens[i] + "\"");
                    optsOk = false;
                    break;
                }
                opts[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
            }
            if (!optsOk) continue;

            auto take = [&](const char* key) -> std::optional<std::string> {
                auto it = opts.find(key);
                if (it == opts.end()) return std::nullopt;
                auto value = it->second;
                opts.erase(it);
                return value;
            };

            if (state == "active") {
                rule.state = redirector::RuleState::active;
                rule.htmlTemplate = take("html");
                rule.genericTemplate = take("generic");
                rule.defaultMediaType = take("default");
            } else if (state == "moved") {
                rule.state = redirector::RuleState::moved;
                rule.successorTemplate = take("successor");
                if (!rule.successorTemplate) {
                    problem(lineNo, "syntax", "moved rules require successor=<template>");
                    continue;
                }
            } else if (state == "gone") {
                rule.state = redirector::RuleState::gone;
                auto reason = take("reason");
                if (!reason || reason->empty()) {
                    problem(lineNo, "syntax", "gone rules require a nonempty reason=<text>");
                    continue;
                }
                rule.reason = percent_decode(*reason);
            } else {
                problem(lineNo, "syntax", "unknown rule state \"" + state + "\"");
                continue;
            }
            if (!opts.empty()) {
                problem(lineNo, "syntax", "unknown option \"" + opts.begin()->first + "\"");
                continue;
            }

            for (const auto* tmpl : {&rule.htmlTemplate, &rule.genericTemplate,
                                     &rule.successorTemplate}) {
                if (!tmpl->has_value()) continue;
                if (auto bad = template_problem(**tmpl, rule.wildcard()))
                    problem(lineNo, "invalid-template", *bad);
            }

            for (std::size_t i = 0; i < rules.size(); ++i) {
                if (rules[i].pattern == rule.pattern)
                    problem(lineNo, "duplicate-pattern",
                            "pattern \"" + rule.pattern + "\" already declared on line " +
                                std::to_string(ruleLines[i]));
            }
            rules.push_back(std::move(rule));
            ruleLines.push_back(lineNo);
        } else if (tokens[0] == "variant") {
            if (tokens.size() != 4) {
                problem(lineNo, "syntax", "expected: variant <pattern> <media-type> <template>");
                continue;
            }
            if (!conneg::split_media_type(tokens[2])) {
                problem(lineNo, "syntax",
                        "\"" + tokens[2] + "\" is not a concrete type/subtype media type");
                continue;
            }
            variantLines.push_back({lineNo, tokens[1], tokens[2], tokens[3]});
        } else {
            problem(lineNo, "syntax", "unknown directive \"" + tokens[0] + "\"");
        }
    }

    if (!sawHeader && problems.empty())
        problem(0, "syntax", "missing \"purlite-rules 1\" header");

    // attach variants; declaration order within the file is preserved
    for (const auto& v : variantLines) {
        auto rule = std::find_if(rules.begin(), rules.end(),
                                 [&](const auto& r) { return r.pattern == v.pattern; });
        if (rule == rules.end()) {
            problem(v.line, "syntax", "variant for undeclared pattern \"" + v.pattern + "\"");
            continue;
        }
        bool dup = std::any_of(rule->variants.begin(), rule->variants.end(),
                               [&](const auto& existing) {
                                   return existing.mediaType == v.mediaType;
                               });
        if (dup) {
            problem(v.line, "syntax",
                    "duplicate variant media type \"" + v.mediaType + "\" for " + v.pattern);
            continue;
        }
        if (auto bad = template_problem(v.tmpl, rule->wildcard())) {
            problem(v.line, "invalid-template", *bad);
            continue;
        }
        rule->variants.push_back({v.mediaType, v.tmpl});
    }

    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& rule = rules[i];
        if (rule.state != redirector::RuleState::active) continue;
        if (rule.variants.empty() && !rule.htmlTemplate)
            problem(ruleLines[i], "syntax",
                    "active rule needs at least one variant or an html target");
        if (rule.defaultMediaType) {
            bool known = *rule.defaultMediaType == "text/html" && rule.htmlTemplate;
            for (const auto& v : rule.variants)
                known = known || v.mediaType == *rule.defaultMediaType;
            if (!known)
                problem(ruleLines[i], "syntax",
                        "default media type \"" + *rule.defaultMediaType +
                            "\" has no matching variant");
        }
    }

    if (!problems.empty()) throw RulesError(std::move(problems));
    return rules;
}

std::string rules_to_text(const std::vector<redirector::RedirectRule>& rules) {
    std::string out = "purlite-rules 1\n";
    for (const auto& rule : rules) {
        out += "rule " + rule.pattern;
        switch (rule.state) {
            case redirector::RuleState::active:
                out += " active";
                if (rule.htmlTemplate) out += " html=" + *rule.htmlTemplate;
                if (rule.genericTemplate) out += " generic=" + *rule.genericTemplate;
                if (rule.defaultMediaType) out += " default=" + *rule.defaultMediaType;
                out += "\n";
                for (const auto& v : rule.variants)
                    out += "variant " + rule.pattern + " " + v.mediaType + " " + v.target + "\n";
                break;
            case redirector::RuleState::moved:
                out += " moved successor=" + *rule.successorTemplate + "\n";
                break;
            case redirector::RuleState::gone:
                out += " gone reason=" + percent_encode(rule.reason) + "\n";
                break;
        }
    }
    return out;
}

ServerConfig parse_config(std::string_view text) {
    ServerConfig config;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key.empty()) continue;
        std::string value;
        std::getline(fields, value);
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
            value.erase(value.begin());
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t'))
            value.pop_back();
        auto fail = [&](const std::string& what) {
            throw ConfigError("config line " + std::to_string(lineNo) + ": " + what);
        };
        if (value.empty()) fail("missing value for \"" + key + "\"");

        if (key == "listen") {
            auto colon = value.rfind(':');
            if (colon == std::string::npos) fail("listen expects host:port");
            config.listenHost = value.substr(0, colon);
            try {
                config.listenPort = std::stoi(value.substr(colon + 1));
            } catch (...) {
                fail("listen port is not a number");
            }
        } else if (key == "public-base") {
            while (value.size() > 1 && value.back() == '/') value.pop_back();
            config.publicBase = value;
        } else if (key == "rules") {
            config.rulesPath = value;
        } else if (key == "ledger") {
            config.ledgerPath = value;
        } else if (key == "docroot") {
            config.docRoot = value;
        } else if (key == "admin-token") {
            config.adminToken = value;
        } else if (key == "strict-http") {
            if (value != "true" && value != "false") fail("strict-http expects true or false");
            config.strictHttp = value == "true";
        } else if (key == "machine-seed") {
            config.machineSeed = value;
        } else {
            fail("unknown key \"" + key + "\"");
        }
    }

    if (const char* env = std::getenv("PURLITE_ADMIN_TOKEN")) config.adminToken = env;
    if (config.rulesPath.empty()) throw ConfigError("config: \"rules\" path is required");
    if (config.ledgerPath.empty()) throw ConfigError("config: \"ledger\" path is required");
    if (config.adminToken.empty())
        throw ConfigError("config: \"admin-token\" (or PURLITE_ADMIN_TOKEN) is required");
    if (config.publicBase.empty()) config.publicBase = "https://" + config.listenHost;
    return config;
}

ServerConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

struct Service::Impl {
    explicit Impl(ServerConfig cfg) : config(std::move(cfg)) {}

    ServerConfig config;
    httplib::Server svr;

    std::mutex snapshotMutex;
    std::shared_ptr<const Snapshot> snapshot;

    std::mutex ledgerMutex;
    std::optional<idstore::Ledger> ledger;
    std::atomic<std::uint32_t> xidCounter{0};
    std::mt19937_64 entropy{std::random_device{}()};

    std::thread worker;
    int port = -1;
    bool bound = false;

    std::shared_ptr<const Snapshot> current() {
        std::lock_guard lock(snapshotMutex);
        return snapshot;
    }

    void swap_snapshot(std::shared_ptr<const Snapshot> next) {
        std::lock_guard lock(snapshotMutex);
        snapshot = std::move(next);
    }

    void persist_rules(const std::string& text) {
        auto tmp = config.rulesPath;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
            out << text;
            out.flush();
            if (!out) throw Error("cannot write rules file " + tmp.string());
        }
        std::filesystem::rename(tmp, config.rulesPath);
    }

    bool authorized(const httplib::Request& req) const {
        return req.get_header_value("X-Purlite-Token") == config.adminToken;
    }

    static std::string raw_path(const httplib::Request& req) {
        auto q = req.target.find('?');
        return req.target.substr(0, q);
    }

    std::optional<std::filesystem::path> doc_file(const std::string& path) const {
        if (!config.docRoot || path.find("..") != std::string::npos) return std::nullopt;
        auto file = *config.docRoot / path.substr(1);
        if (std::filesystem::is_regular_file(file)) return file;
        return std::nullopt;
    }

    void handle_get(const httplib::Request& req, httplib::Response& res) {
        const std::string path = raw_path(req);

        if (path == "/healthz") {
            res.set_content("ok\n", "text/plain");
            return;
        }
        if (path == "/admin/rules") {
            if (!authorized(req)) {
                res.status = 401;
                res.set_content("missing or invalid X-Purlite-Token\n", "text/plain");
                return;
            }
            res.set_content(current()->text, "text/plain");
            return;
        }
        if (path.rfind("/admin/", 0) == 0) {
            res.status = 404;
            return;
        }

        if (auto file = doc_file(path)) {
            std::ifstream in(*file, std::ios::binary);
            std::ostringstream body;
            body << in.rdbuf();
            res.set_content(body.str(), media_type_for(*file).c_str());
            return;
        }

        auto snap = current();
        auto ranges = conneg::parse_accept(req.get_header_value("Accept"));
        auto cls = redirector::classify(path, snap->ruleSet);
        if (!cls) {
            res.status = 404;
            return;
        }

        auto plan = redirector::plan(path, ranges, snap->ruleSet, cls->kind);
        std::string docBody;
        if (plan.bodyKind == redirector::BodyKind::document) {
            // same-host variant target without a backing file
            res.status = 404;
            return;
        }
        write_plan(plan, docBody, res);
    }

    void handle_mutation(const httplib::Request& req, httplib::Response& res) {
        const std::string path = raw_path(req);
        if (path.rfind("/admin/", 0) != 0) {
            res.status = 405;
            res.set_header("Allow", "GET, HEAD");
            return;
        }
        if (!authorized(req)) {
            res.status = 401;
            res.set_content("missing or invalid X-Purlite-Token\n", "text/plain");
            return;
        }

        if (req.method == "PUT" && path == "/admin/rules") {
            replace_rules(req, res);
        } else if (req.method == "POST" && path == "/admin/decommission") {
            decommission(req, res);
        } else if (req.method == "POST" && path == "/admin/mint") {
            mint(req, res);
        } else {
            res.status = 404;
        }
    }

    void replace_rules(const httplib::Request& req, httplib::Response& res) {
        try {
            auto rules = load_rules(req.body);
            auto next = std::make_shared<Snapshot>();
            next->ruleSet = {std::move(rules), config.publicBase};
            next->text = req.body;
            persist_rules(next->text);
            swap_snapshot(std::move(next));
            res.set_content("ok\n", "text/plain");
        } catch (const RulesError& e) {
            res.status = 422;
            res.set_content(std::string(e.what()) + "\n", "text/plain");
        }
    }

    void decommission(const httplib::Request& req, httplib::Response& res) {
        auto pattern = req.get_param_value("pattern");
        auto mode = req.get_param_value("mode");
        auto argument = mode == "gone" ? req.get_param_value("reason")
                                       : req.get_param_value("target");
        if (pattern.empty() || (mode != "moved" && mode != "gone") || argument.empty()) {
            res.status = 422;
            res.set_content("expected pattern, mode=moved|gone, and target|reason\n",
                            "text/plain");
            return;
        }

        auto snap = current();
        auto rules = snap->ruleSet.rules;
        auto rule = std::find_if(rules.begin(), rules.end(),
                                 [&](const auto& r) { return r.pattern == pattern; });
        if (rule == rules.end()) {
            res.status = 422;
            res.set_content("no rule with pattern " + pattern + "\n", "text/plain");
            return;
        }

        try {
            *rule = redirector::decommission(*rule,
                                             mode == "gone"
                                                 ? redirector::DecommissionMode::gone
                                                 : redirector::DecommissionMode::moved,
                                             argument);
        } catch (const redirector::AlreadyDecommissioned& e) {
            res.status = 409;
            res.set_content(std::string(e.what()) + "\n", "text/plain");
            return;
        } catch (const redirector::InvalidTemplate& e) {
            res.status = 422;
            res.set_content(std::string(e.what()) + "\n", "text/plain");
            return;
        }

        auto next = std::make_shared<Snapshot>();
        next->text = rules_to_text(rules);
        next->ruleSet = {std::move(rules), config.publicBase};
        persist_rules(next->text);
        swap_snapshot(std::move(next));

        // exact patterns name one accession identifier; block its random reuse
        if (pattern.find('*') == std::string::npos) {
            auto slash = pattern.rfind('/');
            std::string accession = pattern.substr(slash + 1);
            if (!accession.empty()) {
                std::lock_guard lock(ledgerMutex);
                if (ledger && !ledger->is_decommissioned(accession))
                    ledger->record_decommission(accession);
            }
        }
        res.set_content("ok\n", "text/plain");
    }

    void mint(const httplib::Request& req, httplib::Response& res) {
        auto name = req.get_param_value("strategy");
        std::string id;
        try {
            std::lock_guard lock(ledgerMutex);
            if (!ledger) throw Error("no ledger configured");
            if (name == "counter" || name == "fancy") {
                idstore::MintStrategy strategy;
                strategy.kind = name == "counter" ? idstore::StrategyKind::counter
                                                  : idstore::StrategyKind::fancyCounter;
                strategy.name = name;
                id = idstore::mint_counter(strategy, *ledger);
            } else if (name == "random") {
                idstore::MintStrategy strategy;
                strategy.kind = idstore::StrategyKind::randomLedger;
                strategy.length = 3;
                id = idstore::mint_random(strategy, *ledger,
                                          [this]() { return entropy(); });
            } else if (name == "xid") {
                id = idstore::mint_stateless_time(
                    config.machineSeed, static_cast<std::uint16_t>(::getpid()),
                    static_cast<std::uint64_t>(std::time(nullptr)),
                    xidCounter.fetch_add(1) & 0xFFFFFF);
                if (!ledger->was_issued(id)) ledger->record_issue(id);
            } else {
                res.status = 422;
                res.set_content("strategy must be counter, fancy, random, or xid\n",
                                "text/plain");
                return;
            }
        } catch (const Error& e) {
            res.status = 409;
            res.set_content(std::string(e.what()) + "\n", "text/plain");
            return;
        }

        // fault hook for the crash-replay harness: die after the journal
        // write, before the response reaches the client
        if (std::getenv("PURLITE_FAULT_EXIT_AFTER_MINT_JOURNAL")) std::_Exit(121);

        res.set_content(id + "\n", "text/plain");
    }

    void install_handlers() {
        if (config.strictHttp) {
            svr.set_pre_routing_handler([this](const httplib::Request& req,
                                               httplib::Response& res) {
                if (req.get_header_value("X-Forwarded-Proto") == "https")
                    return httplib::Server::HandlerResponse::Unhandled;
                // refuse rather than 301-upgrade: an upgrade redirect would
                // teach clients that the http spelling works
                res.status = 421;
                res.set_header("Connection", "close");
                return httplib::Server::HandlerResponse::Handled;
            });
        }

        svr.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
            handle_get(req, res);
        });
        auto mutate = [this](const httplib::Request& req, httplib::Response& res) {
            handle_mutation(req, res);
        };
        svr.Post(".*", mutate);
        svr.Put(".*", mutate);
        auto reject = [](const httplib::Request&, httplib::Response& res) {
            res.status = 405;
            res.set_header("Allow", "GET, HEAD");
        };
        svr.Delete(".*", reject);
        svr.Patch(".*", reject);
    }
};

Service::Service(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

const ServerConfig& Service::config() const { return impl_->config; }

int Service::bind() {
    auto& impl = *impl_;
    std::ifstream rulesFile(impl.config.rulesPath, std::ios::binary);
    if (!rulesFile)
        throw ConfigError("cannot read rules file " + impl.config.rulesPath.string());
    std::ostringstream text;
    text << rulesFile.rdbuf();

    auto snapshot = std::make_shared<Snapshot>();
    snapshot->text = text.str();
    snapshot->ruleSet = {load_rules(snapshot->text), impl.config.publicBase};
    impl.swap_snapshot(std::move(snapshot));

    try {
        impl.ledger = idstore::Ledger::open(impl.config.ledgerPath);
    } catch (const idstore::LedgerError& e) {
        throw ConfigError(e.what());
    }

    impl.install_handlers();
    if (impl.config.listenPort == 0) {
        impl.port = impl.svr.bind_to_any_port(impl.config.listenHost);
    } else {
        if (!impl.svr.bind_to_port(impl.config.listenHost, impl.config.listenPort))
            throw ConfigError("cannot bind " + impl.config.listenHost + ":" +
                              std::to_string(impl.config.listenPort));
        impl.port = impl.config.listenPort;
    }
    if (impl.port <= 0)
        throw ConfigError("cannot bind " + impl.config.listenHost);
    impl.bound = true;
    return impl.port;
}

bool Service::run() { return impl_->svr.listen_after_bind(); }

int Service::start() {
    int port = impl_->bound ? impl_->port : bind();
    impl_->worker = std::thread([this] { impl_->svr.listen_after_bind(); });
    impl_->svr.wait_until_ready();
    return port;
}

void Service::stop() {
    impl_->svr.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

namespace {
std::atomic<Service*> g_running{nullptr};
void on_signal(int) {
    if (auto* service = g_running.load()) service->stop();
}
}  // namespace

int run_server(const ServerConfig& config) {
    try {
        Service service(config);
        int port = service.bind();
        std::printf("listening on %s:%d\n", service.config().listenHost.c_str(), port);
        std::fflush(stdout);
        g_running = &service;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        service.run();
        g_running = nullptr;
        return 0;
    } catch (const Error& e) {
        std::fprintf(stderr, "purlite: %s\n", e.what());
        return 2;
    }
}

}  // namespace purlite::server
