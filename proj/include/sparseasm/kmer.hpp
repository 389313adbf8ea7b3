#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sparseasm {

/// 2-bit nucleotide code: A=0, C=1, G=2, T=3.
using Base = std::uint8_t;

inline constexpr int kMinK = 15;
inline constexpr int kMaxK = 63;
inline constexpr int kMaxSkip = 16;

inline constexpr char kBaseChars[4] = {'A', 'C', 'G', 'T'};

/// Returns the 2-bit code of an upper- or lower-case nucleotide, or -1.
constexpr int base_code(char c) noexcept {
    switch (c) {
        case 'A': case 'a': return 0;
        case 'C': case 'c': return 1;
        case 'G': case 'g': return 2;
        case 'T': case 't': return 3;
        default: return -1;
    }
}

constexpr char base_char(Base b) noexcept { return kBaseChars[b & 3u]; }
constexpr Base complement(Base b) noexcept { return static_cast<Base>(3u - (b & 3u)); }

enum class Side : std::uint8_t { left, right };

constexpr Side opposite(Side s) noexcept { return s == Side::left ? Side::right : Side::left; }

/// Throws std::invalid_argument unless k is odd and within [kMinK, kMaxK].
void check_k(int k);
/// Throws std::invalid_argument unless 1 <= g <= kMaxSkip.
void check_g(int g);

std::string reverse_complement(std::string_view seq);

/// Set of nucleotides, one bit per base (bit 0 = A ... bit 3 = T).
class BaseSet {
public:
    constexpr BaseSet() = default;
    constexpr explicit BaseSet(std::uint8_t bits) : bits_(bits & 0xFu) {}

    static constexpr BaseSet of(Base b) { return BaseSet(static_cast<std::uint8_t>(1u << (b & 3u))); }

    constexpr bool contains(Base b) const { return (bits_ >> (b & 3u)) & 1u; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return __builtin_popcount(bits_); }
    /// The lowest base in the set; meaningful only when non-empty.
    constexpr Base first() const { return static_cast<Base>(__builtin_ctz(bits_ | 0x10u)); }
    constexpr std::uint8_t bits() const { return bits_; }
    constexpr BaseSet complemented() const {
        return BaseSet(static_cast<std::uint8_t>(((bits_ & 1u) << 3) | ((bits_ & 2u) << 1) |
                                                 ((bits_ & 4u) >> 1) | ((bits_ & 8u) >> 3)));
    }
    constexpr BaseSet with(Base b) const { return BaseSet(bits_ | (1u << (b & 3u))); }
    constexpr BaseSet without(Base b) const { return BaseSet(bits_ & ~(1u << (b & 3u))); }

    std::string to_string() const;

    friend constexpr bool operator==(BaseSet, BaseSet) = default;

private:
    std::uint8_t bits_ = 0;
};

/// Fixed-length DNA word packed at 2 bits per base, most significant base
/// first. words()[0] holds the high 64 bits, words()[1] the low 64 bits.
class Kmer {
public:
    using Words = std::array<std::uint64_t, 2>;

    Kmer() = default;

    static Kmer pack(std::string_view seq, int k);
    static Kmer from_words(const Words& words, int k);

    int k() const { return k_; }
    const Words& words() const { return words_; }
    Base base(int i) const;
    std::string decode() const;

    Kmer revcomp() const;
    /// right: drop the leftmost base and append b; left: drop the rightmost
    /// base and prepend b.
    Kmer shift_append(Base b, Side side) const;

    friend bool operator==(const Kmer&, const Kmer&) = default;
    friend std::strong_ordering operator<=>(const Kmer& a, const Kmer& b) {
        if (auto c = a.k_ <=> b.k_; c != 0) return c;
        return a.words_ <=> b.words_;
    }

private:
    Words words_{};
    std::uint8_t k_ = 0;
};

struct CanonicalKmer {
    Kmer kmer;
    bool flipped = false;
};

/// min(x, revcomp(x)); flipped is set when x itself is not the stored form.
CanonicalKmer canonical(const Kmer& x);

/// Canonical forms of every k-length window of seq, computed by rolling.
/// seq must be pure ACGT.
std::vector<CanonicalKmer> canonical_kmers(std::string_view seq, int k);

/// Up to kMaxSkip slots of nucleotide-presence bits. Slot d (1-based) records
/// bases observed d positions past the k-mer boundary on one side.
class NeighborField {
public:
    constexpr NeighborField() = default;
    constexpr explicit NeighborField(std::uint64_t raw) : bits_(raw) {}

    BaseSet get(int offset) const;
    NeighborField with(int offset, Base b) const;
    void set(int offset, Base b);
    void clear(int offset, Base b);

    /// Same field seen from the reverse-complement strand: each slot's bases
    /// are complemented, slot positions stay.
    NeighborField complemented() const;
    /// Number of leading slots holding exactly one base.
    int unambiguous_prefix(int g) const;

    std::uint64_t raw() const { return bits_; }
    bool empty() const { return bits_ == 0; }

    friend bool operator==(NeighborField, NeighborField) = default;

private:
    static void check_offset(int offset);
    std::uint64_t bits_ = 0;
};

}  // namespace sparseasm
