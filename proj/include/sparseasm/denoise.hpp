#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparseasm/reads.hpp"
#include "sparseasm/sim_eval.hpp"
#include "sparseasm/sparse_graph.hpp"

namespace sparseasm {

enum class DenoiseDirection : std::uint8_t { forward, both };

struct DenoiseParams {
    int k = 17;
    int g = 16;
    int solid_threshold = 3;
    int max_substitutions = 1;
    DenoiseDirection direction = DenoiseDirection::both;

    void validate() const;
};

struct RoundSpec {
    int k = 17;
    int g = 16;
    int solid_threshold = 3;

    bool operator==(const RoundSpec&) const = default;
};

/// Ordered denoising rounds; k must be non-decreasing.
using RoundSchedule = std::vector<RoundSpec>;

void validate_schedule(const RoundSchedule& schedule);
/// Parses "k:g[:threshold],..." e.g. "17:16,31:14".
RoundSchedule parse_schedule(std::string_view text, int default_threshold = 3);
std::string format_schedule(const RoundSchedule& schedule);

/// Default schedules: 70 bp and 50 bp reads (two rounds) and the
/// three-round pre-assembly cleanup.
RoundSchedule default_schedule_70bp();
RoundSchedule default_schedule_50bp();
RoundSchedule default_schedule_assembly();

enum class Solidity : std::uint8_t { solid, dubious };

Solidity classify(const EKmerNode& node, const DenoiseParams& params);

enum class ReadOutcome : std::uint8_t {
    unchanged,
    corrected,
    trimmed,
    corrected_and_trimmed,
    no_anchor,  // no solid e-k-mer anywhere in the read
    too_short,  // shorter than k; passed through
};

struct CorrectionResult {
    std::string seq;
    std::uint32_t trimmed = 0;  // bases cut from the end of the read
    std::uint32_t substitutions = 0;
    ReadOutcome outcome = ReadOutcome::unchanged;
};

/// One left-to-right pass: walks the read from solid anchor to solid anchor;
/// where the continuation is dubious, tries every single-base substitution
/// among the next bases and applies it only if exactly one reaches a solid
/// e-k-mer; otherwise truncates after the last solid anchor. Bases before the
/// first anchor are left for the reverse pass.
CorrectionResult correct_read(std::string_view read, const SparseGraph& graph, const DenoiseParams& params);

struct DenoiseOptions {
    DenoiseDirection direction = DenoiseDirection::both;
    unsigned threads = 1;
    /// Reads shorter than k + g after trimming are dropped.
    bool drop_short = true;
};

struct RoundReport {
    RoundSpec spec;
    std::uint64_t reads_in = 0;
    std::uint64_t reads_out = 0;
    std::uint64_t dropped = 0;
    std::uint64_t substitutions = 0;
    std::uint64_t trimmed_bases = 0;
    std::uint64_t peak_nodes = 0;
    std::size_t index_capacity = 0;
    double wall_seconds = 0.0;
    /// Accounting against the original input after this round, when truth is known.
    std::optional<DenoiseEval> eval;
};

struct DenoiseReport {
    std::vector<RoundReport> rounds;
    std::optional<DenoiseEval> cumulative;
    double wall_seconds = 0.0;
    std::uint64_t peak_nodes = 0;
};

struct RoundOutput {
    ReadSet reads;
    RoundReport report;
};

/// Builds a fresh graph from reads, remaps coverage, corrects every read.
RoundOutput denoise_round(const ReadSet& reads, const RoundSpec& spec, const DenoiseOptions& options = {});

struct DenoiseOutput {
    ReadSet reads;
    DenoiseReport report;
};

/// Chains denoise_round over the schedule. When truth is given the report
/// carries error accounting against the original reads.
DenoiseOutput hybrid_denoise(const ReadSet& reads, const RoundSchedule& schedule,
                             const GroundTruth* truth = nullptr, const DenoiseOptions& options = {});

}  // namespace sparseasm
