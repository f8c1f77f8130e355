#include "purlite/idstore.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace purlite::idstore {

namespace {

// fopen in append mode + explicit flush keeps every record on one write.
void append_line(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw LedgerError("cannot open ledger journal " + path.string());
    out << text;
    out.flush();
    if (!out) throw LedgerError("cannot append to ledger journal " + path.string());
}

bool plausible_id(const std::string& id) {
    return !id.empty() && id.find(' ') == std::string::npos;
}

}  // namespace

Ledger Ledger::open(const std::filesystem::path& path) {
    Ledger ledger;
    ledger.path_ = path;
    ledger.persistent_ = true;

    std::ifstream in(path, std::ios::binary);
    if (in) {
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.empty()) continue;
            ledger.apply(line, lineNo);
        }
    } else {
        append_line(path, "");  // create the journal now so open errors surface early
    }
    return ledger;
}

void Ledger::apply(const std::string& line, std::size_t lineNo) {
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    auto fail = [&](const std::string& what) {
        throw LedgerError("ledger line " + std::to_string(lineNo) + ": " + what);
    };

    if (kind == "I" || kind == "D") {
        std::string id, extra;
        fields >> id;
        if (id.empty() || fields >> extra) fail("expected exactly one identifier");
        (kind == "I" ? issued_ : decommissioned_).insert(id);
    } else if (kind == "C") {
        std::string name, state, extra;
        fields >> name >> state;
        if (name.empty() || state.empty() || fields >> extra)
            fail("expected strategy name and state");
        counters_[name] = state;
    } else {
        fail("unknown record kind \"" + kind + "\"");
    }
}

std::optional<std::string> Ledger::counter_state(const std::string& strategyName) const {
    auto it = counters_.find(strategyName);
    if (it == counters_.end()) return std::nullopt;
    return it->second;
}

void Ledger::append(const std::string& text) {
    if (persistent_) append_line(path_, text);
}

void Ledger::record_issue(const std::string& id) {
    if (!plausible_id(id)) throw LedgerError("refusing to journal malformed id");
    append("I " + id + "\n");
    issued_.insert(id);
}

void Ledger::record_decommission(const std::string& id) {
    if (!plausible_id(id)) throw LedgerError("refusing to journal malformed id");
    append("D " + id + "\n");
    decommissioned_.insert(id);
}

void Ledger::record_counter(const std::string& strategyName, const std::string& state) {
    append("C " + strategyName + " " + state + "\n");
    counters_[strategyName] = state;
}

void Ledger::record_batch(const std::vector<std::string>& lines) {
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    append(text);
    std::size_t lineNo = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) apply(line, ++lineNo);
}

std::string mint_counter(const MintStrategy& strategy, Ledger& ledger) {
    if (strategy.kind != StrategyKind::counter && strategy.kind != StrategyKind::fancyCounter)
        throw Error("mint_counter requires a counter strategy");
    if (!strategy.prefix.empty() && !erdi8::validate(strategy.prefix, *strategy.alphabet))
        throw erdi8::InvalidId("strategy prefix must be a valid identifier");

    const std::string start = strategy.start();
    std::string state = ledger.counter_state(strategy.name).value_or(start);

    // Identifiers already on the ledger are skipped, whoever issued them:
    // the ledger, not the cursor, is the uniqueness authority.
    std::string numeral, nextState, id;
    if (strategy.kind == StrategyKind::counter) {
        numeral = state;  // the cursor is the next identifier to issue
        while (ledger.is_taken(strategy.prefix + numeral))
            numeral = erdi8::increment(numeral, *strategy.alphabet);
        nextState = erdi8::increment(numeral, *strategy.alphabet);
    } else {
        numeral = state;  // the cursor is the cycle position
        do {  // fancy_next throws SpaceExhausted once the cycle closes
            numeral = erdi8::fancy_next(numeral, start, *strategy.alphabet);
        } while (ledger.is_taken(strategy.prefix + numeral));
        nextState = numeral;
    }

    id = strategy.prefix + numeral;
    // checkpoint first: if the process dies after this write, replay moves
    // the cursor past the id and it can never be issued twice
    ledger.record_batch({"C " + strategy.name + " " + nextState, "I " + id});
    return id;
}

std::string mint_random(const MintStrategy& strategy, Ledger& ledger, EntropySource entropy) {
    if (strategy.kind != StrategyKind::randomLedger)
        throw Error("mint_random requires the randomLedger strategy");
    if (!strategy.prefix.empty() && !erdi8::validate(strategy.prefix, *strategy.alphabet))
        throw erdi8::InvalidId("strategy prefix must be a valid identifier");

    const erdi8::BigInt space = erdi8::space_size(strategy.length, *strategy.alphabet);
    const std::size_t bits = mpz_sizeinbase(space.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;

    for (std::size_t attempt = 0; attempt < strategy.maxRetries; ++attempt) {
        // rejection sampling on exactly `bits` random bits keeps the draw uniform
        erdi8::BigInt draw = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t word = entropy();
            erdi8::BigInt chunk;
            mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
            draw = (draw << 64) | chunk;
        }
        draw >>= (words * 64 - bits);
        if (draw >= space) continue;

        std::string id =
            strategy.prefix + erdi8::from_within_index(draw, strategy.length, *strategy.alphabet);
        if (ledger.is_taken(id)) continue;
        ledger.record_issue(id);
        return id;
    }
    throw RetriesExhausted("no free identifier after " + std::to_string(strategy.maxRetries) +
                           " attempts; the space is too dense, raise the length");
}

std::array<std::uint8_t, 32> sha256(std::string_view data) {
    std::array<std::uint8_t, 32> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != digest.size())
        throw Error("SHA-256 digest failed");
    return digest;
}

std::string mint_stateless_time_raw(std::uint32_t seconds,
                                    const std::array<std::uint8_t, 3>& machineHash,
                                    std::uint16_t processId, std::uint32_t counter,
                                    const erdi8::Alphabet& alphabet) {
    std::array<std::uint8_t, 12> bytes = {
        static_cast<std::uint8_t>(seconds >> 24),  static_cast<std::uint8_t>(seconds >> 16),
        static_cast<std::uint8_t>(seconds >> 8),   static_cast<std::uint8_t>(seconds),
        machineHash[0],                            machineHash[1],
        machineHash[2],                            static_cast<std::uint8_t>(processId >> 8),
        static_cast<std::uint8_t>(processId),      static_cast<std::uint8_t>(counter >> 16),
        static_cast<std::uint8_t>(counter >> 8),   static_cast<std::uint8_t>(counter),
    };
    char hex[25];
    for (std::size_t i = 0; i < bytes.size(); ++i)
        std::snprintf(hex + 2 * i, 3, "%02x", bytes[i]);
    return erdi8::reencode_hex(std::string_view(hex, 24), 1, alphabet);
}

std::string mint_stateless_time(std::string_view machineSeed, std::uint16_t processId,
                                std::uint64_t secondsSinceEpoch, std::uint32_t counter,
                                const erdi8::Alphabet& alphabet) {
    auto digest = sha256(machineSeed);
    return mint_stateless_time_raw(static_cast<std::uint32_t>(secondsSinceEpoch),
                                   {digest[0], digest[1], digest[2]}, processId,
                                   counter & 0xFFFFFF, alphabet);
}

std::string mint_natural_key(const std::vector<std::string>& fields, std::size_t digestBits,
                             const erdi8::Alphabet& alphabet) {
    if (fields.empty()) throw Error("natural-key minting requires at least one field");
    if (digestBits < 24 || digestBits > 256 || digestBits % 8 != 0)
        throw Error("digestBits must be a multiple of 8 between 24 and 256");

    std::string joined;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) joined += '\x1f';  // unit separator: ["ab","c"] != ["a","bc"]
        joined += fields[i];
    }
    auto digest = sha256(joined);

    std::string hex;
    for (std::size_t i = 0; i < digestBits / 8; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return erdi8::reencode_hex(hex, 1, alphabet);
}

double collision_probability(std::uint64_t k, double spaceSize) {
    if (spaceSize < 1.0) throw Error("spaceSize must be at least 1");
    if (k < 2) return 0.0;
    double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
    return -std::expm1(-pairs / spaceSize);
}

}  // namespace purlite::idstore
