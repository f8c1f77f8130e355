#include "purlite/erdi8.hpp"

#include <algorithm>
#include <cstring>

namespace purlite::erdi8 {

namespace {

constexpr std::string_view kStandardSymbols = "23456789abcdefghijkmnopqrstuvwxyz";
constexpr std::string_view kSafeSymbols = "23456789bcdfghjkmnpqrstvwxyz";
constexpr std::size_t kLetterStart = 8;

// Golden ratio fixed at ten decimals so the stride is reproducible.
constexpr unsigned long kPhiDen = 10000000000UL;
constexpr unsigned long kPhiNum = 16180339887UL;

std::string quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

}  // namespace

Alphabet::Alphabet(std::string_view symbols, std::size_t letterStart)
    : symbols_(symbols), letter_start_(letterStart) {
    std::fill(std::begin(index_), std::end(index_), -1);
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        index_[static_cast<unsigned char>(symbols_[i])] = static_cast<int>(i);
}

const Alphabet& Alphabet::standard() {
    static const Alphabet a(kStandardSymbols, kLetterStart);
    return a;
}

const Alphabet& Alphabet::safe() {
    static const Alphabet a(kSafeSymbols, kLetterStart);
    return a;
}

int Alphabet::index_of(char c) const { return index_[static_cast<unsigned char>(c)]; }

int Alphabet::letter_index(char c) const {
    int i = index_of(c);
    return i >= static_cast<int>(letter_start_) ? i - static_cast<int>(letter_start_) : -1;
}

bool validate(std::string_view text, const Alphabet& alphabet) {
    if (text.empty() || !alphabet.is_letter(text.front())) return false;
    return std::all_of(text.begin(), text.end(), [&](char c) { return alphabet.contains(c); });
}

BigInt space_size(std::size_t length, const Alphabet& alphabet) {
    if (length == 0) throw Error("space_size: length must be positive");
    BigInt s;
    mpz_ui_pow_ui(s.get_mpz_t(), alphabet.size(), length - 1);
    return s * static_cast<unsigned long>(alphabet.letter_count());
}

BigInt within_index(std::string_view id, const Alphabet& alphabet) {
    if (!validate(id, alphabet)) throw InvalidId("not a valid identifier: " + quote(id));
    BigInt idx = alphabet.letter_index(id.front());
    for (std::size_t i = 1; i < id.size(); ++i)
        idx = idx * static_cast<unsigned long>(alphabet.size()) + alphabet.index_of(id[i]);
    return idx;
}

std::string from_within_index(const BigInt& index, std::size_t length, const Alphabet& alphabet) {
    if (length == 0) throw Error("from_within_index: length must be positive");
    if (index < 0 || index >= space_size(length, alphabet))
        throw Error("from_within_index: index out of range for length");
    std::string out(length, '\0');
    BigInt rest = index;
    for (std::size_t i = length; i-- > 1;) {
        unsigned long digit =
            mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), alphabet.size());
        out[i] = alphabet.symbol(digit);
    }
    out[0] = alphabet.letter(rest.get_ui());
    return out;
}

BigInt ordinal(std::string_view id, std::size_t minLength, const Alphabet& alphabet) {
    if (minLength == 0) throw Error("ordinal: minLength must be positive");
    if (!validate(id, alphabet)) throw InvalidId("not a valid identifier: " + quote(id));
    if (id.size() < minLength)
        throw LengthBelowMinimum("identifier " + quote(id) + " shorter than minimum length " +
                                 std::to_string(minLength));
    BigInt total = 0;
    BigInt s = space_size(minLength, alphabet);
    for (std::size_t n = minLength; n < id.size(); ++n) {
        total += s;
        s *= static_cast<unsigned long>(alphabet.size());
    }
    return total + within_index(id, alphabet);
}

std::string from_ordinal(const BigInt& value, std::size_t minLength, const Alphabet& alphabet) {
    if (minLength == 0) throw Error("from_ordinal: minLength must be positive");
    if (value < 0) throw Error("from_ordinal: ordinal must be nonnegative");
    BigInt rest = value;
    std::size_t length = minLength;
    BigInt s = space_size(length, alphabet);
    while (rest >= s) {
        rest -= s;
        s *= static_cast<unsigned long>(alphabet.size());
        ++length;
    }
    return from_within_index(rest, length, alphabet);
}

std::string increment(std::string_view id, const Alphabet& alphabet) {
    return from_ordinal(ordinal(id, id.size(), alphabet) + 1, id.size(), alphabet);
}

BigInt fancy_stride(std::size_t length, const Alphabet& alphabet) {
    BigInt s = space_size(length, alphabet);
    // ceil(S / phi) in exact integer arithmetic.
    BigInt p = s * kPhiDen;
    mpz_cdiv_q_ui(p.get_mpz_t(), p.get_mpz_t(), kPhiNum);
    for (;;) {
        if (mpz_probab_prime_p(p.get_mpz_t(), 40) > 0) {
            BigInt g;
            mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), s.get_mpz_t());
            if (g == 1) return p;
        }
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
}

std::string fancy_next(std::string_view id, std::string_view start, const Alphabet& alphabet) {
    if (!validate(id, alphabet)) throw InvalidId("not a valid identifier: " + quote(id));
    if (!validate(start, alphabet)) throw InvalidId("not a valid identifier: " + quote(start));
    if (id.size() != start.size())
        throw LengthMismatch("fancy counting requires equal lengths: " + quote(id) + " vs " +
                             quote(start));
    BigInt s = space_size(id.size(), alphabet);
    BigInt next = (within_index(id, alphabet) + fancy_stride(id.size(), alphabet)) % s;
    if (next == within_index(start, alphabet))
        throw SpaceExhausted("full cycle of length-" + std::to_string(id.size()) +
                             " identifiers completed");
    return from_within_index(next, id.size(), alphabet);
}

std::string reencode_hex(std::string_view hexText, std::size_t minLength,
                         const Alphabet& alphabet) {
    std::string digits;
    digits.reserve(hexText.size());
    for (char c : hexText) {
        if (c == '-') continue;  // UUID grouping
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            throw InvalidHex("not a hexadecimal string: " + quote(hexText));
        digits += c;
    }
    if (digits.empty()) throw InvalidHex("empty hexadecimal input");
    BigInt value;
    mpz_set_str(value.get_mpz_t(), digits.c_str(), 16);
    return from_ordinal(value, minLength, alphabet);
}

}  // namespace purlite::erdi8
