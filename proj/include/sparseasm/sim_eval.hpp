#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sparseasm/reads.hpp"

namespace sparseasm {

struct Chromosome {
    std::string name;
    std::string seq;
};
using Genome = std::vector<Chromosome>;

std::uint64_t genome_length(const Genome& genome);

/// Uniform iid ACGT string drawn from mt19937_64(seed); byte-stable across
/// platforms because only raw engine output is used.
std::string random_genome(std::uint64_t length, std::uint64_t seed);

struct SimConfig {
    double coverage = 35.0;
    int read_length = 70;
    double error_rate = 0.01;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SeededError {
    std::uint32_t offset = 0;  // position in the read as emitted
    char original = 'A';       // base before substitution

    bool operator==(const SeededError&) const = default;
};

struct ReadTruth {
    std::string id;
    std::string chrom;
    std::uint64_t origin = 0;  // 0-based start on the forward strand
    char strand = '+';
    std::vector<SeededError> errors;

    bool operator==(const ReadTruth&) const = default;
};

struct GroundTruth {
    std::vector<ReadTruth> reads;  // same order as the simulated ReadSet
};

struct Simulation {
    ReadSet reads;
    GroundTruth truth;
};

/// ceil(|genome| * coverage / read_length) reads at uniform starts and
/// strands, then independent per-base substitutions at error_rate.
Simulation simulate_reads(const Genome& genome, const SimConfig& config);
Simulation simulate_reads(std::string_view genome, const SimConfig& config);

/// Tab-separated sidecar: id, chrom, origin, strand, error offsets, original
/// bases ("." when a read carries no errors).
void write_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_truth(std::istream& in);

struct DenoiseEval {
    std::uint64_t input_reads = 0;
    std::uint64_t output_reads = 0;
    std::uint64_t dropped_reads = 0;
    std::uint64_t input_bases = 0;
    std::uint64_t output_bases = 0;
    std::uint64_t total_errors = 0;
    /// Seeded errors absent from the surviving output (corrected, trimmed, or dropped).
    std::uint64_t eliminated = 0;
    /// Subset of eliminated that left by trimming or dropping.
    std::uint64_t eliminated_by_trimming = 0;
    std::uint64_t surviving_errors = 0;
    /// Input bases missing from the output.
    std::uint64_t trimmed_bases = 0;
    /// Surviving bases that disagree with the truth at originally correct positions.
    std::uint64_t introduced = 0;
    double mean_out_len = 0.0;

    double eliminated_pct() const { return total_errors ? 100.0 * eliminated / total_errors : 100.0; }
    double introduced_pct() const { return total_errors ? 100.0 * introduced / total_errors : 0.0; }
    double trimmed_pct() const { return input_bases ? 100.0 * trimmed_bases / input_bases : 0.0; }
};

/// Output reads are matched to inputs by id; clip_left/clip_right locate
/// surviving bases in the input read. Throws std::runtime_error on unknown ids.
DenoiseEval evaluate_denoising(const ReadSet& input, const GroundTruth& truth, const ReadSet& output);

struct ContigAlignment {
    std::size_t contig = 0;
    std::size_t length = 0;
    bool anchored = false;
    std::string chrom;
    std::int64_t ref_start = 0;
    char strand = '+';
    std::uint64_t mismatches = 0;
};

struct AssemblyEval {
    std::size_t contigs_evaluated = 0;
    double coverage_pct = 0.0;
    std::size_t e_ge1 = 0;
    std::size_t e_ge3 = 0;
    std::size_t e_ge5 = 0;
    std::vector<ContigAlignment> alignments;
};

/// Contigs longer than min_len are anchored by the most supported exact
/// seed_k diagonal (either strand) and compared base-by-base without gaps.
/// Coverage is the percentage of reference positions under an aligned contig
/// base; unanchored contigs count every base as an error.
AssemblyEval evaluate_assembly(const std::vector<std::string>& contigs, const Genome& reference,
                               int seed_k = 31, std::size_t min_len = 100);

}  // namespace sparseasm
