#include "fixtures.hpp"

#include "sparseasm/sim_eval.hpp"

namespace fixtures {

using namespace sparseasm;

namespace {

char other_than(char a, char b) {
    for (char c : {'A', 'C', 'G', 'T'})
        if (c != a && c != b) return c;
    return 'A';
}

void add_copies(ReadSet& reads, const std::string& seq, int n, const std::string& tag) {
    for (int i = 0; i < n; ++i) reads.push_back({tag + std::to_string(i), seq, {}});
}

CorrectionCase finish(CorrectionCase c) {
    for (const auto& r : c.reads) c.graph.add_read(r.seq);
    remap_coverage(c.graph, c.reads);
    return c;
}

// Nodes of a 60 bp template under k=17, g=16 sit at 0, 16 and 32; a 49 bp
// read ends exactly on the last one. Offset d after the first e-k-mer is
// index 16 + d.
std::string correction_template() {
    std::string t = random_genome(60, 2024);
    t[19] = 'C';
    if (t[18] == 'G') t[18] = 'T';
    if (t[21] == 'A') t[21] = 'C';
    return t;
}

bool walk_matches(const SparseGraph& graph, Kmer cur, const std::string& want) {
    std::string walked = cur.decode();
    while (walked.size() < want.size()) {
        const StepResult s = step(graph, cur, Side::right);
        walked += s.consumed;
        if (s.kind != StepResult::Kind::next) break;
        cur = s.next;
    }
    return walked.size() >= want.size() && walked.compare(0, want.size(), want) == 0;
}

}  // namespace

bool threads_through(const SparseGraph& graph, const std::string& read) {
    const std::size_t k = static_cast<std::size_t>(graph.k());
    for (std::size_t i = 0; i + k <= read.size(); ++i) {
        const Kmer x = Kmer::pack(std::string_view(read).substr(i, k), graph.k());
        if (graph.lookup(x)) return threads_from(graph, read, i);
    }
    return false;
}

bool threads_from(const SparseGraph& graph, const std::string& seq, std::size_t offset) {
    const std::size_t k = static_cast<std::size_t>(graph.k());
    if (offset + k > seq.size()) return false;
    const Kmer x = Kmer::pack(std::string_view(seq).substr(offset, k), graph.k());
    if (!graph.lookup(x) || !walk_matches(graph, x, seq.substr(offset))) return false;
    return offset == 0 || walk_matches(graph, x.revcomp(), reverse_complement(seq.substr(0, offset + k)));
}

CorrectionCase one_edit_case() {
    const std::string t = correction_template();
    std::string u = t;
    u[18] = 'G';
    u[19] = 'G';
    std::string r = t.substr(0, 49);
    r[19] = 'A';

    CorrectionCase c;
    add_copies(c.reads, t, 10, "t");
    add_copies(c.reads, u, 10, "u");
    add_copies(c.reads, r, 1, "r");
    c.read = r;
    c.expected = t.substr(0, 49);
    c.error_index = 19;
    return finish(std::move(c));
}

CorrectionCase ambiguous_case() {
    const std::string t = correction_template();
    std::string r = t.substr(0, 49);
    r[19] = 'A';
    std::string t2 = t;
    t2[19] = 'A';
    t2[21] = other_than(t[21], 'A');

    CorrectionCase c;
    add_copies(c.reads, t, 10, "t");
    add_copies(c.reads, t2, 10, "v");
    add_copies(c.reads, r, 1, "r");
    c.read = r;
    c.expected = r.substr(0, 17);
    c.error_index = 19;
    return finish(std::move(c));
}

namespace {

// Reads of length 100 starting every `step` bases, on alternating strands.
void tile(ReadSet& reads, const std::string& backbone, int step, int rounds) {
    int id = 0;
    for (int round = 0; round < rounds; ++round) {
        for (std::size_t p = static_cast<std::size_t>(round); p + 100 <= backbone.size(); p += step) {
            std::string s = backbone.substr(p, 100);
            if (id % 2) s = reverse_complement(s);
            reads.push_back({"b" + std::to_string(id++), s, {}});
        }
        if (backbone.size() >= 100) {
            reads.push_back({"b" + std::to_string(id++), backbone.substr(backbone.size() - 100), {}});
        }
    }
}

char flip(char c) { return c == 'A' ? 'C' : 'A'; }

}  // namespace

CleanupCase bubble_tip_loop_case() {
    CleanupCase c;
    c.backbone = random_genome(400, 77);
    tile(c.reads, c.backbone, 4, 2);

    std::string bubble = c.backbone.substr(100, 100);
    bubble[50] = flip(bubble[50]);
    c.reads.push_back({"bubble", bubble, {}});

    // Every k-mer from index 15 on holds the error, so exactly one node
    // is created past the last backbone hit and the read ends there.
    std::string tip = c.backbone.substr(220, 62);
    tip[45] = flip(tip[45]);
    c.reads.push_back({"tip", tip, {}});

    // Runs forward to 330, then jumps back to 270 and continues.
    const std::string loop = c.backbone.substr(280, 50) + c.backbone.substr(270, 50);
    c.reads.push_back({"loop", loop, {}});
    return c;
}

CleanupCase single_bubble_case() {
    CleanupCase c;
    c.backbone = random_genome(300, 91);
    for (int i = 0; i < 49; ++i) {
        std::string s = c.backbone.substr(static_cast<std::size_t>(i * 200 / 48), 100);
        if (i % 2) s = reverse_complement(s);
        c.reads.push_back({"c" + std::to_string(i), s, {}});
    }
    std::string bad = c.backbone.substr(100, 100);
    bad[50] = flip(bad[50]);
    c.reads.push_back({"bad", bad, {}});
    return c;
}

CleanupCase divergent_tail_case(int tail_len) {
    CleanupCase c;
    c.backbone = random_genome(300, 57);
    tile(c.reads, c.backbone, 4, 2);
    c.reads.push_back({"tail", c.backbone.substr(100, 60) + random_genome(static_cast<std::uint64_t>(tail_len), 58), {}});
    return c;
}

}  // namespace fixtures
