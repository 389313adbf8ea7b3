#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sparseasm/reads.hpp"
#include "sparseasm/sim_eval.hpp"

namespace sparseasm {

struct IngestStats {
    std::uint64_t records = 0;
    std::uint64_t reads = 0;
    std::uint64_t bases = 0;
    /// ACGT fragments shorter than the minimum, dropped.
    std::uint64_t short_fragments = 0;
};

/// Whole file as text; paths ending in .gz are inflated.
std::string read_text_file(const std::string& path);

/// FASTA or FASTQ (detected from the first record). Sequences are uppercased
/// and split at non-ACGT characters; fragments shorter than min_fragment are
/// dropped. A record split into several fragments yields ids "<name>.<n>".
/// A "trim=L:R" header token sets clip_left/clip_right. Throws
/// std::runtime_error with source:line context on malformed input.
ReadSet parse_reads(std::string_view text, const std::string& source, int min_fragment,
                    IngestStats* stats = nullptr);

/// Reads every file; throws when the combined set is empty.
ReadSet ingest(const std::vector<std::string>& paths, int min_fragment, IngestStats* stats = nullptr);

/// Multi-record FASTA as chromosomes (sequence uppercased, not split).
Genome parse_fasta_genome(std::string_view text, const std::string& source);
Genome read_genome(const std::string& path);

void write_fasta(std::ostream& out, const Genome& genome, std::size_t width = 80);
/// FASTQ when every read has qualities, FASTA otherwise. Reads with nonzero
/// clips carry a "trim=L:R" header token.
void write_reads(std::ostream& out, const ReadSet& reads);

}  // namespace sparseasm
