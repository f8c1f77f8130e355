#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "purlite/error.hpp"
#include "purlite/redirector.hpp"

namespace purlite::server {

struct ConfigError : Error {
    using Error::Error;
};

/// One problem found while loading a rules file.
struct RuleDiagnostic {
    std::size_t line;  // 1-based; 0 when the problem is file-global
    std::string code;  // "syntax" | "duplicate-pattern" | "invalid-template"
    std::string message;
};

/// Carries every diagnostic of a failed load, for 422 responses and the CLI.
class RulesError : public Error {
public:
    explicit RulesError(std::vector<RuleDiagnostic> items)
        : Error(render(items)), items(std::move(items)) {}

    std::vector<RuleDiagnostic> items;

private:
    static std::string render(const std::vector<RuleDiagnostic>& items);
};

/// Parse and validate a rules file:
///
///   purlite-rules 1
///   rule <pattern> active [html=<tmpl>] [generic=<tmpl>] [default=<media-type>]
///   variant <pattern> <media-type> <tmpl>
///   rule <pattern> moved successor=<tmpl>
///   rule <pattern> gone reason=<percent-encoded-text>
///
/// '#' starts a comment. Patterns are absolute paths with one optional
/// trailing '*'; templates are absolute http(s) URIs and may contain "$1"
/// when the pattern has a capture. Duplicate patterns, unknown fields,
/// variants without a rule, and templates that do not expand to a parsable
/// URI are all rejected.
std::vector<redirector::RedirectRule> load_rules(std::string_view text);

/// Regenerate file text from rules; load_rules(rules_to_text(r)) == r.
std::string rules_to_text(const std::vector<redirector::RedirectRule>& rules);

struct ServerConfig {
    std::string listenHost = "127.0.0.1";
    int listenPort = 0;  // 0 picks a free port
    std::string publicBase;  // https://... under which resource URIs are published
    std::filesystem::path rulesPath;
    std::filesystem::path ledgerPath;
    std::optional<std::filesystem::path> docRoot;
    std::string adminToken;
    bool strictHttp = false;
    std::string machineSeed = "purlite";  // stateless-id machine hash input
};

/// Key/value configuration, one "key value" pair per line, '#' comments.
/// Keys: listen host:port, public-base, rules, ledger, docroot, admin-token,
/// strict-http true|false, machine-seed. PURLITE_ADMIN_TOKEN in the
/// environment overrides the configured token.
ServerConfig parse_config(std::string_view text);
ServerConfig load_config(const std::filesystem::path& path);

/// The HTTP daemon: request handling on an immutable rule snapshot, an
/// admin API behind a shared-secret header, and single-writer ledger
/// minting. Snapshots swap atomically under PUT /admin/rules.
class Service {
public:
    explicit Service(ServerConfig config);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Bind the listener; returns the actual port. Throws ConfigError when
    /// rules or ledger fail to load.
    int bind();
    /// Serve on the calling thread until stop().
    bool run();
    /// Bind and serve on a background thread (tests).
    int start();
    void stop();

    const ServerConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// CLI entry: run until SIGINT/SIGTERM. Returns 0 on clean shutdown, 2 when
/// configuration or rules cannot be loaded.
int run_server(const ServerConfig& config);

}  // namespace purlite::server
