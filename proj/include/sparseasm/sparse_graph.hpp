#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparseasm/kmer.hpp"
#include "sparseasm/reads.hpp"

namespace sparseasm {

/// k: k-mer length; g: skip distance between stored e-k-mers. g=1 is the
/// standard dense de Bruijn graph.
struct GraphParams {
    int k = 41;
    int g = 16;

    void validate() const;
};

struct BuildOptions {
    /// Pre-sizes the index for roughly expected_genome_size / g nodes.
    std::uint64_t expected_genome_size = 0;
    /// Perturbs slot order only; the stored node set never depends on it.
    std::uint64_t hash_seed = 0;
};

/// Extended k-mer: canonical key, g neighbor slots per side, coverage.
/// Neighbor fields are kept relative to the canonical orientation of key.
struct EKmerNode {
    Kmer::Words key{};
    NeighborField left;
    NeighborField right;
    std::uint16_t coverage = 0;
    std::uint8_t flags = 0;

    static constexpr std::uint8_t kOccupied = 1;
    static constexpr std::uint8_t kVisited = 2;

    bool occupied() const { return flags & kOccupied; }
    bool visited() const { return flags & kVisited; }
    void set_visited(bool v) { flags = v ? (flags | kVisited) : (flags & ~kVisited); }
    void bump_coverage() {
        if (coverage != UINT16_MAX) ++coverage;
    }

    /// Field on `side` as seen when walking the node in the given orientation.
    NeighborField field(Side side, bool flipped) const {
        if (!flipped) return side == Side::left ? left : right;
        return (side == Side::left ? right : left).complemented();
    }
    /// Records base b observed `offset` positions off `side` of the oriented k-mer.
    void record(Side side, bool flipped, int offset, Base b) {
        if (!flipped) {
            (side == Side::left ? left : right).set(offset, b);
        } else {
            (side == Side::left ? right : left).set(offset, complement(b));
        }
    }
    void unrecord(Side side, bool flipped, int offset, Base b) {
        if (!flipped) {
            (side == Side::left ? left : right).clear(offset, b);
        } else {
            (side == Side::left ? right : left).clear(offset, complement(b));
        }
    }
};

template <class Node>
struct BasicNodeRef {
    Node* node = nullptr;
    bool flipped = false;
};
using NodeRef = BasicNodeRef<EKmerNode>;
using ConstNodeRef = BasicNodeRef<const EKmerNode>;

/// Sparse de Bruijn graph: open-addressing hash index from canonical k-mer to
/// EKmerNode with linear probing. Node pointers are invalidated by insert()
/// and erase().
class SparseGraph {
public:
    explicit SparseGraph(GraphParams params, BuildOptions options = {});

    const GraphParams& params() const { return params_; }
    int k() const { return params_.k; }
    int g() const { return params_.g; }
    std::uint64_t hash_seed() const { return seed_; }

    std::size_t node_count() const { return size_; }
    std::size_t capacity() const { return slots_.size(); }

    std::uint64_t total_bases_ingested() const { return bases_ingested_; }
    std::uint64_t reads_ingested() const { return reads_ingested_; }
    std::uint64_t reads_skipped() const { return reads_skipped_; }

    EKmerNode* find(const Kmer::Words& key);
    const EKmerNode* find(const Kmer::Words& key) const;

    /// Canonicalizes x and returns the node plus whether x is the reverse
    /// complement of the stored key.
    std::optional<NodeRef> lookup(const Kmer& x);
    std::optional<ConstNodeRef> lookup(const Kmer& x) const;

    /// Inserts a fresh node (coverage 0) or returns the existing one.
    EKmerNode& insert(const Kmer& canonical_key);
    bool erase(const Kmer::Words& key);

    /// Sparse ingestion of one read; reads shorter than k are counted and
    /// skipped.
    void add_read(std::string_view seq);

    Kmer key_of(const EKmerNode& node) const { return Kmer::from_words(node.key, params_.k); }
    Kmer oriented(const EKmerNode& node, bool flipped) const {
        Kmer key = key_of(node);
        return flipped ? key.revcomp() : key;
    }

    /// Keys in ascending order: the deterministic iteration order used by
    /// traversal, cleanup and the binary dump.
    std::vector<Kmer::Words> sorted_keys() const;
    void clear_visited();

    template <class F>
    void for_each_node(F&& f) {
        for (auto& s : slots_)
            if (s.occupied()) f(s);
    }
    template <class F>
    void for_each_node(F&& f) const {
        for (const auto& s : slots_)
            if (s.occupied()) f(s);
    }

private:
    std::size_t home(const Kmer::Words& key) const;
    std::size_t probe(const Kmer::Words& key) const;
    void grow();

    GraphParams params_;
    std::uint64_t seed_;
    std::vector<EKmerNode> slots_;
    std::size_t size_ = 0;
    std::uint64_t bases_ingested_ = 0;
    std::uint64_t reads_ingested_ = 0;
    std::uint64_t reads_skipped_ = 0;
};

SparseGraph build_graph(const ReadSet& reads, const GraphParams& params,
                        const BuildOptions& options = {});

/// Threads the reads through the finished node set again: coverage becomes
/// the number of read k-mer occurrences hitting each node, and every such
/// occurrence records its neighbor bases, so nodes created late still learn
/// the context of earlier reads.
void remap_coverage(SparseGraph& graph, const ReadSet& reads);

struct StepResult {
    enum class Kind : std::uint8_t { next, branch, dead_end };

    Kind kind = Kind::dead_end;
    /// Successor k-mer in walking orientation; valid when kind == next.
    Kmer next;
    /// Bases consumed from the neighbor field, nearest first.
    std::string consumed;
    int branch_offset = 0;
    BaseSet branch_bases;
};

/// One move along the sparse graph from node (in orientation `flipped`)
/// towards `direction`: consumes single-base slots and returns the first
/// stored k-mer, or Branch at the first multi-base slot, or DeadEnd.
StepResult step(const SparseGraph& graph, const EKmerNode& node, bool flipped, Side direction);
StepResult step(const SparseGraph& graph, const Kmer& oriented, Side direction);

/// A path through the neighbor slots of one node, ending either at a stored
/// k-mer (next) or nowhere.
struct PathEnd {
    std::string bases;
    std::optional<Kmer> next;
};

/// Enumerates every slot-bit path from `oriented` towards `direction`,
/// stopping each path at its first stored k-mer. At most max_paths ends are
/// produced.
std::vector<PathEnd> explore_paths(const SparseGraph& graph, const Kmer& oriented, Side direction,
                                   std::size_t max_paths = 64);

struct MemoryEstimate {
    int k = 0;
    int g = 0;
    std::uint64_t n_bases = 0;  // N used in the model formulas
    std::size_t node_count = 0;
    std::size_t index_capacity = 0;
    int bits_per_node = 0;
    double s1_bits = 0;        // N * (2k + 8)
    double s2_bits = 0;        // N/g * (2k + 8g)
    double measured_bits = 0;  // node_count * bits_per_node

    double s1_per_base() const { return n_bases ? s1_bits / n_bases : 0.0; }
    double s2_per_base() const { return n_bases ? s2_bits / n_bases : 0.0; }
    double measured_per_base() const { return n_bases ? measured_bits / n_bases : 0.0; }
    /// Bytes actually reserved by the index (capacity * slot size).
    std::size_t index_bytes = 0;
};

/// Bits per stored node in the actual layout: key words, two 4g-bit fields,
/// 16-bit coverage and one mark bit.
int node_layout_bits(int k, int g);

/// n_bases is N in the model; pass the genome size when known.
MemoryEstimate memory_estimate(const SparseGraph& graph, std::uint64_t n_bases);

/// Little-endian binary dump: "SPDBGRPH" magic, u32 version, u32 k, u32 g,
/// u64 node_count, then node records sorted by key (u64 key_hi, u64 key_lo,
/// u64 left, u64 right, u16 coverage).
void write_graph(std::ostream& out, const SparseGraph& graph);
SparseGraph read_graph(std::istream& in);

}  // namespace sparseasm
