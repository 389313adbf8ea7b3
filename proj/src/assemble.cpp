#include "sparseasm/assemble.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace sparseasm {

namespace {

struct Extension {
    std::string bases;
    double cov_sum = 0;
    std::size_t nodes = 0;
};

Extension extend(SparseGraph& graph, const Kmer& start) {
    Extension ext;
    Kmer cur = start;
    while (true) {
        const StepResult s = step(graph, cur, Side::right);
        ext.bases += s.consumed;
        if (s.kind != StepResult::Kind::next) break;
        const auto ref = graph.lookup(s.next);
        if (ref->node->visited()) break;
        const StepResult back = step(graph, s.next, Side::left);
        if (back.kind != StepResult::Kind::next || back.next != cur) break;
        ref->node->set_visited(true);
        ext.cov_sum += ref->node->coverage;
        ++ext.nodes;
        cur = s.next;
    }
    return ext;
}

}  // namespace

std::vector<Contig> traverse_contigs(SparseGraph& graph, std::size_t min_len) {
    std::vector<Contig> contigs;
    for (const auto& key : graph.sorted_keys()) {
        EKmerNode* node = graph.find(key);
        if (node->visited()) continue;
        node->set_visited(true);
        const Kmer x = graph.key_of(*node);
        const double own_cov = node->coverage;

        const Extension left = extend(graph, x.revcomp());
        const Extension right = extend(graph, x);

        Contig c;
        c.seq = reverse_complement(left.bases) + x.decode() + right.bases;
        c.start_key = key;
        c.nodes = 1 + left.nodes + right.nodes;
        c.mean_coverage = (own_cov + left.cov_sum + right.cov_sum) / static_cast<double>(c.nodes);
        if (c.seq.size() < min_len) continue;
        std::string rc = reverse_complement(c.seq);
        if (rc < c.seq) c.seq = std::move(rc);
        contigs.push_back(std::move(c));
    }
    std::stable_sort(contigs.begin(), contigs.end(), [](const Contig& a, const Contig& b) {
        if (a.seq.size() != b.seq.size()) return a.seq.size() > b.seq.size();
        return a.seq < b.seq;
    });
    return contigs;
}

std::uint64_t n50(std::vector<std::uint64_t> lengths, std::uint64_t min_len) {
    std::erase_if(lengths, [&](std::uint64_t l) { return l <= min_len; });
    if (lengths.empty()) return 0;
    std::sort(lengths.begin(), lengths.end(), std::greater<>());
    std::uint64_t total = 0;
    for (auto l : lengths) total += l;
    std::uint64_t run = 0;
    for (auto l : lengths) {
        run += l;
        if (2 * run >= total) return l;
    }
    return lengths.back();
}

ContigStats contig_stats(const std::vector<Contig>& contigs) {
    ContigStats s;
    std::vector<std::uint64_t> lengths;
    for (const auto& c : contigs) {
        const std::uint64_t l = c.length();
        lengths.push_back(l);
        s.longest = std::max(s.longest, l);
        if (l > 100) {
            ++s.count_gt100;
            s.sum_gt100 += l;
        }
        if (l > 10000) {
            ++s.count_gt10k;
            s.sum_gt10k += l;
        }
    }
    s.mean_size = s.count_gt100 ? static_cast<double>(s.sum_gt100) / static_cast<double>(s.count_gt100) : 0.0;
    s.n50 = n50(std::move(lengths), 100);
    return s;
}

void AssemblyOptions::validate() const {
    graph.validate();
    cleanup.validate();
}

AssemblyResult assemble_pipeline(const ReadSet& reads, const AssemblyOptions& options, const Genome* reference) {
    options.validate();
    if (reads.empty()) throw std::invalid_argument("assembly needs at least one read");
    const auto t0 = std::chrono::steady_clock::now();

    AssemblyResult out;
    AssemblyReport& rep = out.report;
    rep.options = options;

    SparseGraph graph = build_graph(reads, options.graph, {options.expected_genome_size, options.hash_seed});
    remap_coverage(graph, reads);
    rep.nodes_built = graph.node_count();

    CleanupParams cp = options.cleanup;
    cp.use_branch_coverage_bits = options.rs;
    if (options.bfs || options.rs) rep.cleanup = clean_graph(graph, cp, options.bfs, &reads);
    rep.nodes_final = graph.node_count();

    std::uint64_t n = options.expected_genome_size;
    if (n == 0 && reference) n = genome_length(*reference);
    out.contigs = traverse_contigs(graph, options.min_len);
    if (n == 0)
        for (const auto& c : out.contigs) n += c.length();
    rep.memory = memory_estimate(graph, n);
    // Peak structure is the graph as built, before cleanup.
    rep.memory.node_count = rep.nodes_built;
    rep.memory.measured_bits = static_cast<double>(rep.nodes_built) * rep.memory.bits_per_node;
    rep.stats = contig_stats(out.contigs);

    if (reference) {
        std::vector<std::string> seqs;
        seqs.reserve(out.contigs.size());
        for (const auto& c : out.contigs) seqs.push_back(c.seq);
        rep.eval = evaluate_assembly(seqs, *reference, 31, 100);
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void write_contigs_fasta(std::ostream& out, const std::vector<Contig>& contigs) {
    char cov[32];
    for (std::size_t i = 0; i < contigs.size(); ++i) {
        std::snprintf(cov, sizeof cov, "%.2f", contigs[i].mean_coverage);
        out << ">contig_" << (i + 1) << " len=" << contigs[i].length() << " cov=" << cov << '\n';
        const std::string& s = contigs[i].seq;
        for (std::size_t p = 0; p < s.size(); p += 80) out << s.substr(p, 80) << '\n';
    }
}

}  // namespace sparseasm
