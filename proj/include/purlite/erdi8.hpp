#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

#include "purlite/error.hpp"

namespace purlite::erdi8 {

/// Arbitrary-precision nonnegative ordinal. Re-encoded digests can exceed
/// any machine word, so ordinals are GMP integers throughout.
using BigInt = mpz_class;

struct InvalidId : Error {
    using Error::Error;
};
struct LengthBelowMinimum : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct SpaceExhausted : Error {
    using Error::Error;
};
struct InvalidHex : Error {
    using Error::Error;
};

/// A base-33 (or reduced base-28) identifier alphabet: eight digits first,
/// then lowercase letters. None of {0, O, 1, I, l} ever appears.
class Alphabet {
public:
    /// "23456789abcdefghijkmnopqrstuvwxyz" - 8 digits, 25 letters.
    static const Alphabet& standard();
    /// Standard minus the vowels {a,e,i,o,u} - 8 digits, 20 letters.
    static const Alphabet& safe();

    std::string_view symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    std::size_t letter_start() const { return letter_start_; }
    std::size_t letter_count() const { return symbols_.size() - letter_start_; }

    bool contains(char c) const { return index_of(c) >= 0; }
    bool is_letter(char c) const { return index_of(c) >= static_cast<int>(letter_start_); }
    /// Index of c within the full symbol sequence, -1 when absent.
    int index_of(char c) const;
    /// Index of c within the letter block only, -1 when absent or a digit.
    int letter_index(char c) const;
    char symbol(std::size_t i) const { return symbols_[i]; }
    char letter(std::size_t i) const { return symbols_[letter_start_ + i]; }

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

private:
    Alphabet(std::string_view symbols, std::size_t letterStart);

    std::string symbols_;
    std::size_t letter_start_;
    int index_[256];
};

/// True iff text is a well-formed identifier: nonempty, every character a
/// member of the alphabet, and the first character a letter.
bool validate(std::string_view text, const Alphabet& alphabet = Alphabet::standard());

/// Number of identifiers of exactly the given length: letters * size^(length-1).
BigInt space_size(std::size_t length, const Alphabet& alphabet = Alphabet::standard());

/// Position of id within the space of identifiers of its own length, in
/// counting order (first character ranges over letters, the rest over the
/// full alphabet).
BigInt within_index(std::string_view id, const Alphabet& alphabet = Alphabet::standard());

/// Inverse of within_index for a fixed length.
std::string from_within_index(const BigInt& index, std::size_t length,
                              const Alphabet& alphabet = Alphabet::standard());

/// Global counting-order position of id among all identifiers of length >=
/// minLength: all shorter spaces come first, then within_index. Bijective
/// onto the nonnegative integers for a fixed minLength.
BigInt ordinal(std::string_view id, std::size_t minLength,
               const Alphabet& alphabet = Alphabet::standard());

/// Inverse of ordinal.
std::string from_ordinal(const BigInt& value, std::size_t minLength,
                         const Alphabet& alphabet = Alphabet::standard());

/// Successor in counting order. Overflow of the last identifier of a length
/// rolls over to the first identifier one character longer.
std::string increment(std::string_view id, const Alphabet& alphabet = Alphabet::standard());

/// Stride for full-cycle ("fancy") counting: the smallest prime p with
/// p >= ceil(S/phi) and gcd(p, S) = 1, where S is the per-length space size
/// and phi is the golden ratio 1.6180339887. Coprimality makes repeated
/// stride addition a permutation of the fixed-length space.
BigInt fancy_stride(std::size_t length, const Alphabet& alphabet = Alphabet::standard());

/// Next identifier on the full-cycle walk that began at start. Throws
/// SpaceExhausted once the walk would return to start, i.e. after every
/// identifier of the length has been visited exactly once.
std::string fancy_next(std::string_view id, std::string_view start,
                       const Alphabet& alphabet = Alphabet::standard());

/// Re-encode a hexadecimal value (UUID hyphens permitted) as an identifier:
/// the hex digits are read as one big-endian integer and mapped through
/// from_ordinal. Injective for inputs of a fixed width.
std::string reencode_hex(std::string_view hexText, std::size_t minLength = 1,
                         const Alphabet& alphabet = Alphabet::standard());

}  // namespace purlite::erdi8
