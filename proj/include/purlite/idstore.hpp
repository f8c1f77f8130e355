#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "purlite/erdi8.hpp"
#include "purlite/error.hpp"

namespace purlite::idstore {

struct LedgerError : Error {
    using Error::Error;
};
struct RetriesExhausted : Error {
    using Error::Error;
};

enum class StrategyKind { counter, fancyCounter, randomLedger, statelessTime, naturalKeyHash };

/// Settings for one minting scheme. The prefix, when present, must itself
/// be a valid identifier; prefix and numeral form one accession identifier.
struct MintStrategy {
    StrategyKind kind = StrategyKind::counter;
    std::string name = "counter";  // ledger checkpoint key
    std::string prefix;
    const erdi8::Alphabet* alphabet = &erdi8::Alphabet::standard();
    std::size_t length = 2;        // fancy and random: fixed identifier length
    std::size_t maxRetries = 32;   // random
    std::size_t digestBits = 64;   // natural-key hashing

    /// First identifier of the configured length; the counter's initial
    /// state and the fancy cycle's anchor.
    std::string start() const { return erdi8::from_within_index(0, length, *alphabet); }
};

/// Every identifier ever issued or withdrawn, plus per-strategy counter
/// cursors. Bound to a file, every mutation is journaled and flushed before
/// it returns, so a crash can never replay an identifier.
///
/// Journal format, one record per line:
///   I <id>                    issued
///   D <id>                    decommissioned
///   C <strategy-name> <id>    counter checkpoint
/// Unknown record kinds are fatal at load.
class Ledger {
public:
    /// Purely in-memory ledger (tests, dry runs).
    Ledger() = default;
    /// Replay the journal at path (created when absent) and keep it open
    /// for appending.
    static Ledger open(const std::filesystem::path& path);

    bool was_issued(const std::string& id) const { return issued_.count(id) > 0; }
    bool is_decommissioned(const std::string& id) const {
        return decommissioned_.count(id) > 0;
    }
    bool is_taken(const std::string& id) const {
        return was_issued(id) || is_decommissioned(id);
    }
    std::size_t issued_count() const { return issued_.size(); }
    std::optional<std::string> counter_state(const std::string& strategyName) const;

    void record_issue(const std::string& id);
    void record_decommission(const std::string& id);
    void record_counter(const std::string& strategyName, const std::string& state);
    /// One flushed append covering several records, so a counter checkpoint
    /// and its issue land together.
    void record_batch(const std::vector<std::string>& lines);

private:
    void apply(const std::string& line, std::size_t lineNo);
    void append(const std::string& text);

    std::set<std::string> issued_;
    std::set<std::string> decommissioned_;
    std::map<std::string, std::string> counters_;
    std::filesystem::path path_;
    bool persistent_ = false;
};

/// Draws uniform 64-bit words; the seam tests use to make minting
/// deterministic.
using EntropySource = std::function<std::uint64_t()>;

/// Counter-based minting (plain or fancy). The checkpoint is written ahead
/// of the return value. Plain counters store the next identifier to issue;
/// fancy counters store the cycle position and never issue the anchor.
std::string mint_counter(const MintStrategy& strategy, Ledger& ledger);

/// Uniform draw over the valid identifiers of the configured length,
/// rejecting anything that exists or has existed before. Throws
/// RetriesExhausted when maxRetries draws all collide - the signal to raise
/// the length.
std::string mint_random(const MintStrategy& strategy, Ledger& ledger, EntropySource entropy);

/// SHA-256 of data; also the machine-hash primitive for stateless ids.
std::array<std::uint8_t, 32> sha256(std::string_view data);

/// Stateless time-ordered identifier from an explicit 12-byte layout:
/// 4-byte big-endian seconds, 3-byte machine hash, 2-byte process id,
/// 3-byte big-endian counter, re-encoded with minimum length 1. Ordinal
/// order of ids from one process is creation order.
std::string mint_stateless_time_raw(std::uint32_t seconds,
                                    const std::array<std::uint8_t, 3>& machineHash,
                                    std::uint16_t processId, std::uint32_t counter,
                                    const erdi8::Alphabet& alphabet = erdi8::Alphabet::standard());

/// As above, with the machine hash derived from an operator-supplied seed
/// (first three bytes of its SHA-256).
std::string mint_stateless_time(std::string_view machineSeed, std::uint16_t processId,
                                std::uint64_t secondsSinceEpoch, std::uint32_t counter,
                                const erdi8::Alphabet& alphabet = erdi8::Alphabet::standard());

/// Deterministic identifier from a natural key: SHA-256 over the fields
/// joined with the 0x1F unit separator, truncated to digestBits, re-encoded.
/// digestBits below 24 are refused - truncating to a handful of bytes is a
/// collision trap, not a feature.
std::string mint_natural_key(const std::vector<std::string>& fields, std::size_t digestBits,
                             const erdi8::Alphabet& alphabet = erdi8::Alphabet::standard());

/// Birthday bound: 1 - exp(-k(k-1) / (2*spaceSize)).
double collision_probability(std::uint64_t k, double spaceSize);

}  // namespace purlite::idstore
