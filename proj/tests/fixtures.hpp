#pragma once

#include <string>
#include <vector>

#include "sparseasm/reads.hpp"
#include "sparseasm/sparse_graph.hpp"

namespace fixtures {

/// True when `read` re-threads through the graph: starting at its first
/// stored k-mer, step() chaining rightwards reproduces the rest of the read
/// and chaining from the reverse complement reproduces the bases before it.
bool threads_through(const sparseasm::SparseGraph& graph, const std::string& read);
/// Same walk, started from the stored k-mer at `offset` of seq.
bool threads_from(const sparseasm::SparseGraph& graph, const std::string& seq, std::size_t offset);

/// Denoising graph with k=17, g=16 built from copies of a template T, a
/// competing high-coverage variant, and one erroneous read.
struct CorrectionCase {
    sparseasm::SparseGraph graph{sparseasm::GraphParams{17, 16}};
    sparseasm::ReadSet reads;
    std::string read;      // the erroneous read
    std::string expected;  // what correction should produce
    int error_index = 0;   // position of the seeded substitution in `read`
};

/// T x10, U x10 (T with the 2nd and 3rd bases after the first e-k-mer set to
/// G), R x1 (T with the 3rd base after the first e-k-mer changed C->A).
/// Correcting R must restore the C; reaching U needs two edits.
CorrectionCase one_edit_case();

/// T x10, T2 x10 (R with the 5th base after the first e-k-mer changed), R x1.
/// Two single edits reach solid e-k-mers, so R must be cut after its anchor.
CorrectionCase ambiguous_case();

/// Reads over a 400 bp backbone (k=31, g=16) with a bubble (one read
/// carrying a substitution), a one-node tip (one read with an error near its
/// end), and a tiny loop (one chimeric read that jumps back 60 bases).
struct CleanupCase {
    std::string backbone;
    sparseasm::ReadSet reads;
};
CleanupCase bubble_tip_loop_case();

/// Backbone of 49 clean reads' worth of coverage plus one read with a
/// substitution in the middle.
CleanupCase single_bubble_case();

/// 300 bp backbone at roughly 50X plus one read that follows the backbone
/// for 60 bases and then continues into tail_len unrelated bases.
CleanupCase divergent_tail_case(int tail_len);

}  // namespace fixtures
