#include <doctest.h>

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fixtures.hpp"
#include "sparseasm/assemble.hpp"
#include "sparseasm/cleanup.hpp"
#include "sparseasm/denoise.hpp"
#include "sparseasm/sim_eval.hpp"

using namespace sparseasm;

namespace {

SparseGraph graph_of(const fixtures::CleanupCase& c, int k, int g, std::uint64_t seed = 0) {
    SparseGraph graph = build_graph(c.reads, GraphParams{k, g}, {0, seed});
    remap_coverage(graph, c.reads);
    return graph;
}

std::size_t off_backbone_nodes(const SparseGraph& graph, const std::string& backbone) {
    std::set<Kmer::Words> on;
    for (const auto& c : canonical_kmers(backbone, graph.k())) on.insert(c.kmer.words());
    std::size_t n = 0;
    for (const auto& key : graph.sorted_keys()) n += !on.contains(key);
    return n;
}

bool is_backbone(const std::vector<Contig>& contigs, const std::string& backbone) {
    return contigs.size() == 1 &&
           (contigs[0].seq == backbone || contigs[0].seq == reverse_complement(backbone));
}

std::string dump(const SparseGraph& graph) {
    std::ostringstream out;
    write_graph(out, graph);
    return out.str();
}

bool clean_read(const std::string& id) { return id.size() > 1 && id[0] == 'b' && std::isdigit(static_cast<unsigned char>(id[1])); }

// Two reads sharing a 31 bp stem in canonical orientation, forking A/C
// right after it.
SparseGraph fork_graph(Kmer& stem) {
    std::uint64_t seed = 500;
    std::string prefix;
    do prefix = random_genome(31, seed++);
    while (canonical(Kmer::pack(prefix, 31)).flipped);
    stem = Kmer::pack(prefix, 31);
    SparseGraph graph(GraphParams{31, 16});
    graph.add_read(prefix + "A" + random_genome(40, 600));
    graph.add_read(prefix + "C" + random_genome(40, 601));
    return graph;
}

}  // namespace

TEST_CASE("parameter validation") {
    CleanupParams p;
    CHECK_NOTHROW(p.validate());
    p.max_tip_span = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.branch_cov_ratio = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.branch_cov_ratio = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("linear graph has no tips, bubbles or dead bits") {
    fixtures::CleanupCase c;
    c.backbone = random_genome(2000, 41);
    for (std::size_t p = 0; p + 100 <= c.backbone.size(); p += 10)
        c.reads.push_back({"b" + std::to_string(p), c.backbone.substr(p, 100), {}});
    SparseGraph graph = graph_of(c, 31, 16);
    const std::string before = dump(graph);
    CHECK(prune_all_dead_bits(graph) == 0);
    CHECK(remove_tips(graph, {}) == 0);
    CHECK(pop_bubbles(graph, {}) == 0);
    CHECK(dump(graph) == before);
}

TEST_CASE("short tip is removed and the backbone survives") {
    const fixtures::CleanupCase c = fixtures::divergent_tail_case(20);
    SparseGraph graph = graph_of(c, 31, 16);
    const std::size_t extra = off_backbone_nodes(graph, c.backbone);
    REQUIRE(extra >= 1);
    REQUIRE(extra <= 2);
    CHECK(remove_tips(graph, {}) == extra);
    CHECK(off_backbone_nodes(graph, c.backbone) == 0);
    prune_all_dead_bits(graph);
    for (const auto& r : c.reads)
        if (clean_read(r.id)) REQUIRE(fixtures::threads_through(graph, r.seq));
    CHECK(is_backbone(traverse_contigs(graph), c.backbone));
}

TEST_CASE("tip length boundary") {
    const fixtures::CleanupCase c = fixtures::divergent_tail_case(60);
    SparseGraph probe = graph_of(c, 31, 16);
    const int extra = static_cast<int>(off_backbone_nodes(probe, c.backbone));
    REQUIRE(extra >= 3);

    CleanupParams p;
    p.max_tip_span = extra - 1;
    SparseGraph kept = graph_of(c, 31, 16);
    CHECK(remove_tips(kept, p) == 0);
    CHECK(kept.node_count() == probe.node_count());

    p.max_tip_span = extra;
    SparseGraph cut = graph_of(c, 31, 16);
    CHECK(remove_tips(cut, p) == static_cast<std::size_t>(extra));
    CHECK(off_backbone_nodes(cut, c.backbone) == 0);
}

TEST_CASE("bubble from one erroneous read keeps the majority allele") {
    const fixtures::CleanupCase c = fixtures::single_bubble_case();
    SparseGraph graph = graph_of(c, 31, 16);
    REQUIRE(off_backbone_nodes(graph, c.backbone) > 0);
    CHECK(traverse_contigs(graph).size() > 1);
    graph.clear_visited();

    CHECK(pop_bubbles(graph, {}) == 1);
    prune_all_dead_bits(graph);
    CHECK(off_backbone_nodes(graph, c.backbone) == 0);
    for (const auto& r : c.reads)
        if (r.id != "bad") REQUIRE(fixtures::threads_through(graph, r.seq));
    CHECK(is_backbone(traverse_contigs(graph), c.backbone));
}

TEST_CASE("branch, reconvergence and tiny loop reduce to one chain") {
    const fixtures::CleanupCase c = fixtures::bubble_tip_loop_case();
    SparseGraph graph = graph_of(c, 31, 16);
    CHECK(traverse_contigs(graph).size() > 1);
    graph.clear_visited();

    const CleanupReport rep = clean_graph(graph, {}, true);
    CHECK(rep.tips >= 1);
    CHECK(rep.bubbles >= 2);
    CHECK(rep.nodes_after <= rep.nodes_before);
    CHECK(off_backbone_nodes(graph, c.backbone) == 0);

    int dead_ends = 0;
    for (const auto& key : graph.sorted_keys()) {
        const Kmer x = Kmer::from_words(key, 31);
        for (const Kmer& o : {x, x.revcomp()}) {
            const StepResult s = step(graph, o, Side::right);
            REQUIRE(s.kind != StepResult::Kind::branch);
            dead_ends += s.kind == StepResult::Kind::dead_end;
        }
    }
    CHECK(dead_ends == 2);
    for (const auto& r : c.reads)
        if (clean_read(r.id)) REQUIRE(fixtures::threads_through(graph, r.seq));
    CHECK(is_backbone(traverse_contigs(graph), c.backbone));
}

TEST_CASE("spurious branch screening") {
    Kmer stem;
    SparseGraph graph = fork_graph(stem);
    BranchCoverage cov;
    for (const auto& key : graph.sorted_keys()) (void)cov.at(key);
    REQUIRE(graph.find(stem.words())->right.get(1) == BaseSet(0b0011));

    SUBCASE("49 against 1 clears the minority base") {
        cov.at(stem.words())[1][0][0] = 49;
        cov.at(stem.words())[1][0][1] = 1;
        std::map<Kmer::Words, std::pair<NeighborField, NeighborField>> before;
        graph.for_each_node([&](const EKmerNode& n) { before[n.key] = {n.left, n.right}; });
        CHECK(screen_spurious(graph, cov, {}) == 1);
        CHECK(graph.find(stem.words())->right.get(1) == BaseSet::of(0));
        graph.for_each_node([&](const EKmerNode& n) {
            if (n.key == stem.words()) return;
            CHECK(before.at(n.key) == std::pair{n.left, n.right});
        });
    }
    SUBCASE("30 against 25 keeps both") {
        cov.at(stem.words())[1][0][0] = 30;
        cov.at(stem.words())[1][0][1] = 25;
        const std::string before = dump(graph);
        CHECK(screen_spurious(graph, cov, {}) == 0);
        CHECK(dump(graph) == before);
    }
    SUBCASE("missing counts are an error") {
        CHECK_THROWS_AS(screen_spurious(graph, BranchCoverage{}, {}), std::logic_error);
    }
}

TEST_CASE("branch coverage counts reads per base") {
    const fixtures::CleanupCase c = fixtures::single_bubble_case();
    SparseGraph graph = graph_of(c, 31, 16);
    const BranchCoverage cov = remap_branch_coverage(graph, c.reads);
    CHECK(cov.size() == graph.node_count());
    CHECK(cov.bytes() > 0);

    CleanupParams p;
    p.use_branch_coverage_bits = true;
    const CleanupReport rep = clean_graph(graph, p, false, &c.reads);
    CHECK(rep.spurious_bits >= 1);
    CHECK(rep.branch_table_bytes == cov.bytes());
    CHECK_THROWS_AS(clean_graph(graph, p, false, nullptr), std::logic_error);
}

TEST_CASE("cleanup never adds nodes") {
    const std::string genome = random_genome(30000, 42);
    const Simulation sim = simulate_reads(genome, SimConfig{30.0, 100, 0.01, 43});
    SparseGraph graph = build_graph(sim.reads, GraphParams{31, 16});
    remap_coverage(graph, sim.reads);
    std::size_t n = graph.node_count();
    auto shrinks = [&](std::size_t) {
        const std::size_t now = graph.node_count();
        CHECK(now <= n);
        n = now;
    };
    shrinks(prune_all_dead_bits(graph));
    shrinks(remove_tips(graph, {}));
    shrinks(pop_bubbles(graph, {}));
    shrinks(remove_tips(graph, {}));
    shrinks(prune_all_dead_bits(graph));
    const BranchCoverage cov = remap_branch_coverage(graph, sim.reads);
    shrinks(screen_spurious(graph, cov, {}));
}

TEST_CASE("cleanup outcome does not depend on index order") {
    const std::string genome = random_genome(30000, 44);
    const Simulation sim = simulate_reads(genome, SimConfig{30.0, 100, 0.01, 45});
    fixtures::CleanupCase noisy{genome, sim.reads};
    for (const auto* c : {&noisy}) {
        SparseGraph a = graph_of(*c, 31, 16, 0);
        SparseGraph b = graph_of(*c, 31, 16, 987654321);
        REQUIRE(dump(a) == dump(b));
        CleanupParams p;
        p.use_branch_coverage_bits = true;
        const CleanupReport ra = clean_graph(a, p, true, &c->reads);
        const CleanupReport rb = clean_graph(b, p, true, &c->reads);
        CHECK(ra.bubbles == rb.bubbles);
        CHECK(ra.tips == rb.tips);
        CHECK(dump(a) == dump(b));
    }
    const fixtures::CleanupCase fig = fixtures::bubble_tip_loop_case();
    SparseGraph a = graph_of(fig, 31, 16, 1);
    SparseGraph b = graph_of(fig, 31, 16, 2);
    clean_graph(a, {}, true);
    clean_graph(b, {}, true);
    CHECK(dump(a) == dump(b));
}

TEST_CASE("cleanup on denoised noisy data cuts contigs and keeps coverage") {
    const Genome ref{{"chr1", random_genome(150000, 46)}};
    const Simulation sim = simulate_reads(ref, SimConfig{50.0, 100, 0.01, 47});
    DenoiseOptions dopt;
    dopt.threads = 4;
    const DenoiseOutput den = hybrid_denoise(sim.reads, default_schedule_assembly(), nullptr, dopt);
    AssemblyOptions opt;
    opt.graph = {41, 16};
    const AssemblyResult plain = assemble_pipeline(den.reads, opt, &ref);
    opt.bfs = true;
    const AssemblyResult cleaned = assemble_pipeline(den.reads, opt, &ref);
    CHECK(cleaned.contigs.size() < plain.contigs.size());
    CHECK(cleaned.report.eval->coverage_pct >= plain.report.eval->coverage_pct - 0.1);
    CHECK(cleaned.report.nodes_final <= cleaned.report.nodes_built);
}
