#include <doctest.h>

#include <random>
#include <stdexcept>
#include <string>

#include "sparseasm/kmer.hpp"

using namespace sparseasm;

namespace {

std::string random_dna(std::mt19937_64& rng, int n) {
    std::string s(static_cast<std::size_t>(n), 'A');
    for (auto& c : s) c = "ACGT"[rng() & 3u];
    return s;
}

std::string naive_revcomp(const std::string& s) {
    std::string r;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        switch (*it) {
            case 'A': r += 'T'; break;
            case 'C': r += 'G'; break;
            case 'G': r += 'C'; break;
            default: r += 'A'; break;
        }
    }
    return r;
}

int random_k(std::mt19937_64& rng) { return 15 + 2 * static_cast<int>(rng() % 25); }

}  // namespace

TEST_CASE("pack of all-A k-mer is all zero") {
    const Kmer x = Kmer::pack(std::string(15, 'A'), 15);
    CHECK(x.words()[0] == 0);
    CHECK(x.words()[1] == 0);
}

TEST_CASE("pack rejects bad input") {
    CHECK_THROWS_AS(Kmer::pack("ACGNACGTACGTACG", 15), std::invalid_argument);
    CHECK_THROWS_AS(Kmer::pack(std::string(16, 'A'), 16), std::invalid_argument);
    CHECK_THROWS_AS(Kmer::pack(std::string(13, 'A'), 13), std::invalid_argument);
    CHECK_THROWS_AS(Kmer::pack(std::string(65, 'A'), 65), std::invalid_argument);
    CHECK_THROWS_AS(Kmer::pack("ACGT", 15), std::invalid_argument);
    CHECK_THROWS_AS(check_g(0), std::invalid_argument);
    CHECK_THROWS_AS(check_g(17), std::invalid_argument);
}

TEST_CASE("decode inverts pack on random strings") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const int k = random_k(rng);
        const std::string s = random_dna(rng, k);
        const Kmer x = Kmer::pack(s, k);
        REQUIRE(x.decode() == s);
        for (int j = 0; j < k; ++j) REQUIRE(base_char(x.base(j)) == s[static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("revcomp") {
    CHECK(Kmer::pack("AAAAAAAAAAAAAAA", 15).revcomp().decode() == "TTTTTTTTTTTTTTT");
    CHECK(Kmer::pack("ACGTACGTACGTACG", 15).revcomp().decode() == "CGTACGTACGTACGT");
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        const int k = random_k(rng);
        const std::string s = random_dna(rng, k);
        const Kmer x = Kmer::pack(s, k);
        REQUIRE(x.revcomp().decode() == naive_revcomp(s));
        REQUIRE(x.revcomp().revcomp() == x);
        REQUIRE(x != x.revcomp());
    }
    CHECK(reverse_complement("ACCGTN") == "NACGGT");
}

TEST_CASE("canonical form") {
    const auto t = canonical(Kmer::pack("TTTTTTTTTTTTTTT", 15));
    CHECK(t.kmer.decode() == "AAAAAAAAAAAAAAA");
    CHECK(t.flipped);
    const auto a = canonical(Kmer::pack("AAAAAAAAAAAAAAC", 15));
    CHECK(a.kmer.decode() == "AAAAAAAAAAAAAAC");
    CHECK_FALSE(a.flipped);

    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        const int k = random_k(rng);
        const std::string s = random_dna(rng, k);
        const std::string rc = naive_revcomp(s);
        const Kmer x = Kmer::pack(s, k);
        const auto c = canonical(x);
        REQUIRE(c.kmer.decode() == std::min(s, rc));
        REQUIRE(c.flipped == (rc < s));
        REQUIRE(canonical(x.revcomp()).kmer == c.kmer);
        REQUIRE((x < x.revcomp()) == (s < rc));
    }
}

TEST_CASE("shift_append") {
    const Kmer a = Kmer::pack(std::string(15, 'A'), 15);
    CHECK(a.shift_append(3, Side::right).decode() == std::string(14, 'A') + "T");
    CHECK(a.shift_append(1, Side::left).decode() == "C" + std::string(14, 'A'));

    std::mt19937_64 rng(14);
    const std::string y = random_dna(rng, 41);
    Kmer x = Kmer::pack(random_dna(rng, 41), 41);
    for (char c : y) x = x.shift_append(static_cast<Base>(base_code(c)), Side::right);
    CHECK(x.decode() == y);

    for (int t = 0; t < 50; ++t) {
        const int k = random_k(rng);
        const std::string s = random_dna(rng, k + 40);
        Kmer r = Kmer::pack(s.substr(0, static_cast<std::size_t>(k)), k);
        for (int i = 0; i + k < static_cast<int>(s.size()); ++i) {
            r = r.shift_append(static_cast<Base>(base_code(s[static_cast<std::size_t>(i + k)])), Side::right);
            REQUIRE(r.decode() == s.substr(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(k)));
        }
        Kmer l = Kmer::pack(s.substr(s.size() - static_cast<std::size_t>(k)), k);
        for (int i = static_cast<int>(s.size()) - k - 1; i >= 0; --i) {
            l = l.shift_append(static_cast<Base>(base_code(s[static_cast<std::size_t>(i)])), Side::left);
            REQUIRE(l.decode() == s.substr(static_cast<std::size_t>(i), static_cast<std::size_t>(k)));
        }
    }
}

TEST_CASE("canonical_kmers matches per-window packing") {
    std::mt19937_64 rng(15);
    for (int t = 0; t < 20; ++t) {
        const int k = random_k(rng);
        const std::string s = random_dna(rng, 200);
        const auto all = canonical_kmers(s, k);
        REQUIRE(all.size() == s.size() - static_cast<std::size_t>(k) + 1);
        for (std::size_t i = 0; i < all.size(); ++i) {
            const auto want = canonical(Kmer::pack(s.substr(i, static_cast<std::size_t>(k)), k));
            REQUIRE(all[i].kmer == want.kmer);
            REQUIRE(all[i].flipped == want.flipped);
        }
    }
    CHECK_THROWS_AS(canonical_kmers("ACGTNACGTACGTACGTACG", 15), std::invalid_argument);
}

TEST_CASE("NeighborField slots") {
    NeighborField f;
    CHECK(f.get(5).empty());
    f.set(3, 0);
    CHECK(f.get(3) == BaseSet::of(0));
    f.set(3, 1);
    CHECK(f.get(3) == BaseSet(0b0011));
    CHECK(f.get(3).size() == 2);
    f.clear(3, 0);
    CHECK(f.get(3) == BaseSet::of(1));
    CHECK_THROWS_AS(f.get(0), std::invalid_argument);
    CHECK_THROWS_AS(f.get(17), std::invalid_argument);

    NeighborField p;
    p.set(1, 0);
    p.set(2, 2);
    p.set(3, 0);
    p.set(3, 3);
    CHECK(p.unambiguous_prefix(16) == 2);
    CHECK(p.complemented().get(1) == BaseSet::of(3));
    CHECK(p.complemented().get(3) == BaseSet(0b1001));
    CHECK(p.complemented().complemented() == p);
}

TEST_CASE("NeighborField setting bits never clears bits") {
    std::mt19937_64 rng(16);
    NeighborField f;
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t before = f.raw();
        f.set(1 + static_cast<int>(rng() % 16), static_cast<Base>(rng() & 3u));
        REQUIRE((f.raw() & before) == before);
    }
}
