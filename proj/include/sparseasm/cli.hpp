#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sparseasm {

enum class ReportFormat : std::uint8_t { table, structured };

struct PipelineConfig {
    std::string subcommand;

    // Graph and denoising.
    int k = 41;
    int g = 16;
    int solid_threshold = 3;
    std::string schedule;  // "k:g[:t],..."; empty means no denoising before assembly
    bool forward_only = false;
    unsigned threads = 1;

    // Cleanup.
    bool bfs = false;
    bool rs = false;
    int max_tip_span = 2;
    int max_search_depth = 8;
    double branch_cov_ratio = 0.2;

    std::size_t min_contig_len = 100;
    std::uint64_t expected_genome_size = 0;
    std::uint64_t seed = 1;

    // Simulation.
    std::uint64_t genome_length = 0;
    double coverage = 35.0;
    int read_length = 70;
    double error_rate = 0.01;

    // Paths.
    std::vector<std::string> inputs;
    std::string output;
    std::string reference;
    std::string truth;
    std::string genome_out;
    std::string denoised;  // evaluate: denoised reads
    std::string contigs;   // evaluate: contig FASTA
    std::string report;    // structured report path

    ReportFormat format = ReportFormat::table;

    /// Checks every downstream precondition for the chosen subcommand.
    void validate() const;
};

/// Parses argv into a config. Throws CLI::ParseError (or std::invalid_argument
/// for values rejected by validate()).
PipelineConfig parse_command_line(int argc, const char* const* argv);

/// Executes one subcommand. Returns 0 on success; on failure prints the error,
/// removes partially written outputs and returns nonzero.
int run(const PipelineConfig& config, std::ostream& out, std::ostream& err);

/// argv front-end: parse + run, with usage on bad flags.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparseasm
