#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparseasm/cleanup.hpp"
#include "sparseasm/reads.hpp"
#include "sparseasm/sim_eval.hpp"
#include "sparseasm/sparse_graph.hpp"

namespace sparseasm {

struct Contig {
    std::string seq;
    Kmer::Words start_key{};
    std::size_t nodes = 0;
    double mean_coverage = 0.0;

    std::size_t length() const { return seq.size(); }
};

/// Walks every unvisited node (sorted key order) left then right until a
/// branch, a dead end, a visited node, or a node whose own back step does
/// not return (a junction). Contigs shorter than min_len are
/// dropped; the rest come back in their lexically smaller strand, longest
/// first.
std::vector<Contig> traverse_contigs(SparseGraph& graph, std::size_t min_len = 0);

/// N50 over lengths strictly greater than min_len; 0 when none qualify.
std::uint64_t n50(std::vector<std::uint64_t> lengths, std::uint64_t min_len = 100);

struct ContigStats {
    std::uint64_t longest = 0;
    std::uint64_t count_gt100 = 0;
    std::uint64_t sum_gt100 = 0;
    std::uint64_t count_gt10k = 0;
    std::uint64_t sum_gt10k = 0;
    double mean_size = 0.0;  // over contigs > 100 bp
    std::uint64_t n50 = 0;
};

ContigStats contig_stats(const std::vector<Contig>& contigs);

struct AssemblyOptions {
    GraphParams graph;
    CleanupParams cleanup;
    bool bfs = false;
    bool rs = false;
    std::size_t min_len = 100;
    /// N for the memory model; 0 falls back to the reference length or, failing
    /// that, the assembled length.
    std::uint64_t expected_genome_size = 0;
    std::uint64_t hash_seed = 0;

    void validate() const;
};

struct AssemblyReport {
    AssemblyOptions options;
    std::size_t nodes_built = 0;
    std::size_t nodes_final = 0;
    CleanupReport cleanup;
    ContigStats stats;
    std::optional<AssemblyEval> eval;
    MemoryEstimate memory;
    double wall_seconds = 0.0;
};

struct AssemblyResult {
    std::vector<Contig> contigs;
    AssemblyReport report;
};

/// Build, remap coverage, optional cleanup, traverse, and (with a reference)
/// evaluate. Throws std::invalid_argument on an empty read set.
AssemblyResult assemble_pipeline(const ReadSet& reads, const AssemblyOptions& options,
                                 const Genome* reference = nullptr);

/// Headers: contig_<index> len=<L> cov=<mean node coverage>.
void write_contigs_fasta(std::ostream& out, const std::vector<Contig>& contigs);

}  // namespace sparseasm
