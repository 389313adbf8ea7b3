#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_map>

#include "sparseasm/reads.hpp"
#include "sparseasm/sparse_graph.hpp"

namespace sparseasm {

struct CleanupParams {
    /// Longest dead-ending limb (in e-k-mers) that remove_tips may delete.
    int max_tip_span = 2;
    /// Node hops a bubble search may take before giving up.
    int max_search_depth = 8;
    /// A branch survives only with coverage >= ratio * its heaviest sibling.
    double branch_cov_ratio = 0.2;
    bool use_branch_coverage_bits = false;

    void validate() const;
};

/// Per-node read counts for every (side, slot, base), in the canonical
/// orientation of the node. Counters saturate at 255.
class BranchCoverage {
public:
    using Counts = std::array<std::array<std::array<std::uint8_t, 4>, kMaxSkip>, 2>;

    bool empty() const { return table_.empty(); }
    std::size_t size() const { return table_.size(); }

    const Counts* find(const Kmer::Words& key) const;
    Counts& at(const Kmer::Words& key) { return table_[key]; }

    /// Bytes held by the side table (approximate).
    std::size_t bytes() const { return table_.size() * (sizeof(Counts) + sizeof(Kmer::Words) + 16); }

private:
    struct KeyHash {
        std::size_t operator()(const Kmer::Words& w) const {
            return static_cast<std::size_t>(w[0] * 0x9e3779b97f4a7c15ULL ^ (w[1] + 0x632be59bd9b4e019ULL));
        }
    };
    std::unordered_map<Kmer::Words, Counts, KeyHash> table_;
};

/// Threads every read through the graph and counts which neighbor base each
/// read showed at every slot of every stored k-mer it covers.
BranchCoverage remap_branch_coverage(const SparseGraph& graph, const ReadSet& reads);

/// At each multi-base slot on `side` of the node, clears bases that lead
/// nowhere provided a sibling base leads to a stored e-k-mer. Returns the
/// number of bits cleared.
std::size_t prune_dead_bits(SparseGraph& graph, const Kmer& oriented, Side side);
std::size_t prune_all_dead_bits(SparseGraph& graph);

/// Deletes dead-ending limbs of at most max_tip_span e-k-mers hanging off a
/// branch with a heavier sibling. Returns the number of nodes removed.
std::size_t remove_tips(SparseGraph& graph, const CleanupParams& params);

/// Best-first search from every node whose slots fork into exactly two
/// stored successors; on
/// reaching an already-seen node, backtracks to the nearest common ancestor
/// and deletes the lighter limb (ties: the lexically larger divergent base
/// goes). Tiny loops are collapsed by the same rule. Returns merges.
std::size_t pop_bubbles(SparseGraph& graph, const CleanupParams& params);

/// Clears branch bases read fewer than ratio * max-sibling times. Throws
/// std::logic_error when a node has no counts.
std::size_t screen_spurious(SparseGraph& graph, const BranchCoverage& coverage, const CleanupParams& params);

struct CleanupReport {
    std::size_t dead_bits = 0;
    std::size_t tips = 0;
    std::size_t bubbles = 0;
    std::size_t spurious_bits = 0;
    std::size_t nodes_before = 0;
    std::size_t nodes_after = 0;
    std::size_t branch_table_bytes = 0;
};

/// BFS passes (dead bits, tips, bubbles) and then, when reads are given and
/// use_branch_coverage_bits is set, branch-coverage screening.
CleanupReport clean_graph(SparseGraph& graph, const CleanupParams& params, bool bfs,
                          const ReadSet* reads_for_rs = nullptr);

}  // namespace sparseasm
