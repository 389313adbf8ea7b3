#include "sparseasm/kmer.hpp"

#include <stdexcept>

namespace sparseasm {

namespace {

using u128 = unsigned __int128;

u128 to_u128(const Kmer::Words& w) { return (static_cast<u128>(w[0]) << 64) | w[1]; }

Kmer::Words to_words(u128 v) {
    return {static_cast<std::uint64_t>(v >> 64), static_cast<std::uint64_t>(v)};
}

u128 mask_for(int k) {
    return k >= 64 ? ~static_cast<u128>(0) : ((static_cast<u128>(1) << (2 * k)) - 1);
}

// Reverses the order of the 32 2-bit groups in a 64-bit word.
std::uint64_t reverse_pairs(std::uint64_t x) {
    x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
    x = ((x >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((x & 0x0F0F0F0F0F0F0F0FULL) << 4);
    return __builtin_bswap64(x);
}

u128 revcomp_value(u128 v, int k) {
    const u128 c = ~v;
    const auto hi = static_cast<std::uint64_t>(c >> 64);
    const auto lo = static_cast<std::uint64_t>(c);
    const u128 rev = (static_cast<u128>(reverse_pairs(lo)) << 64) | reverse_pairs(hi);
    return rev >> (128 - 2 * k);
}

}  // namespace

void check_k(int k) {
    if (k < kMinK || k > kMaxK || k % 2 == 0)
        throw std::invalid_argument("k must be odd and in [15, 63], got " + std::to_string(k));
}

void check_g(int g) {
    if (g < 1 || g > kMaxSkip)
        throw std::invalid_argument("g must be in [1, 16], got " + std::to_string(g));
}

std::string reverse_complement(std::string_view seq) {
    std::string out(seq.size(), 'N');
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int c = base_code(seq[seq.size() - 1 - i]);
        out[i] = c < 0 ? 'N' : base_char(complement(static_cast<Base>(c)));
    }
    return out;
}

std::string BaseSet::to_string() const {
    std::string s = "{";
    for (Base b = 0; b < 4; ++b) {
        if (!contains(b)) continue;
        if (s.size() > 1) s += ',';
        s += base_char(b);
    }
    return s + "}";
}

Kmer Kmer::pack(std::string_view seq, int k) {
    check_k(k);
    if (seq.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("sequence length " + std::to_string(seq.size()) +
                                    " does not match k=" + std::to_string(k));
    u128 v = 0;
    for (char ch : seq) {
        const int c = base_code(ch);
        if (c < 0) throw std::invalid_argument(std::string("non-ACGT base '") + ch + "' in k-mer");
        v = (v << 2) | static_cast<u128>(c);
    }
    Kmer out;
    out.words_ = to_words(v);
    out.k_ = static_cast<std::uint8_t>(k);
    return out;
}

Kmer Kmer::from_words(const Words& words, int k) {
    check_k(k);
    if ((to_u128(words) & ~mask_for(k)) != 0)
        throw std::invalid_argument("k-mer words carry bits beyond k");
    Kmer out;
    out.words_ = words;
    out.k_ = static_cast<std::uint8_t>(k);
    return out;
}

Base Kmer::base(int i) const {
    return static_cast<Base>((to_u128(words_) >> (2 * (k_ - 1 - i))) & 3u);
}

std::string Kmer::decode() const {
    std::string s(k_, 'A');
    u128 v = to_u128(words_);
    for (int i = k_ - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = base_char(static_cast<Base>(v & 3u));
        v >>= 2;
    }
    return s;
}

Kmer Kmer::revcomp() const {
    Kmer out = *this;
    out.words_ = to_words(revcomp_value(to_u128(words_), k_));
    return out;
}

Kmer Kmer::shift_append(Base b, Side side) const {
    u128 v = to_u128(words_);
    if (side == Side::right) {
        v = ((v << 2) | (b & 3u)) & mask_for(k_);
    } else {
        v = (v >> 2) | (static_cast<u128>(b & 3u) << (2 * (k_ - 1)));
    }
    Kmer out = *this;
    out.words_ = to_words(v);
    return out;
}

CanonicalKmer canonical(const Kmer& x) {
    Kmer rc = x.revcomp();
    if (rc.words() < x.words()) return {rc, true};
    return {x, false};
}

std::vector<CanonicalKmer> canonical_kmers(std::string_view seq, int k) {
    std::vector<CanonicalKmer> out;
    if (seq.size() < static_cast<std::size_t>(k)) return out;
    out.reserve(seq.size() - k + 1);
    const u128 mask = mask_for(k);
    const int top = 2 * (k - 1);
    u128 fwd = 0, rev = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int c = base_code(seq[i]);
        if (c < 0) throw std::invalid_argument("non-ACGT base in sequence");
        fwd = ((fwd << 2) | static_cast<u128>(c)) & mask;
        rev = (rev >> 2) | (static_cast<u128>(3 - c) << top);
        if (i + 1 < static_cast<std::size_t>(k)) continue;
        const bool flip = rev < fwd;
        out.push_back({Kmer::from_words(to_words(flip ? rev : fwd), k), flip});
    }
    return out;
}

void NeighborField::check_offset(int offset) {
    if (offset < 1 || offset > kMaxSkip)
        throw std::invalid_argument("neighbor offset " + std::to_string(offset) +
                                    " outside [1, 16]");
}

BaseSet NeighborField::get(int offset) const {
    check_offset(offset);
    return BaseSet(static_cast<std::uint8_t>((bits_ >> (4 * (offset - 1))) & 0xFu));
}

NeighborField NeighborField::with(int offset, Base b) const {
    NeighborField f = *this;
    f.set(offset, b);
    return f;
}

void NeighborField::set(int offset, Base b) {
    check_offset(offset);
    bits_ |= std::uint64_t{1} << (4 * (offset - 1) + (b & 3u));
}

void NeighborField::clear(int offset, Base b) {
    check_offset(offset);
    bits_ &= ~(std::uint64_t{1} << (4 * (offset - 1) + (b & 3u)));
}

NeighborField NeighborField::complemented() const {
    // Per nibble: bit0<->bit3, bit1<->bit2.
    const std::uint64_t x = bits_;
    const std::uint64_t out = ((x & 0x1111111111111111ULL) << 3) |
                              ((x & 0x2222222222222222ULL) << 1) |
                              ((x & 0x4444444444444444ULL) >> 1) |
                              ((x & 0x8888888888888888ULL) >> 3);
    return NeighborField(out);
}

int NeighborField::unambiguous_prefix(int g) const {
    int d = 0;
    while (d < g && get(d + 1).size() == 1) ++d;
    return d;
}

}  // namespace sparseasm
