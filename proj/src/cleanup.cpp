#include "sparseasm/cleanup.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparseasm {

namespace {

// Path ends explored per node and side. Chimeric reads can set bits in most
// slots, so the path tree may be wide.
constexpr std::size_t kPathBudget = std::size_t{1} << 16;

struct Oriented {
    Kmer::Words key{};
    bool flipped = false;

    friend auto operator<=>(const Oriented&, const Oriented&) = default;
};

Oriented ident(const Kmer& x) {
    const CanonicalKmer c = canonical(x);
    return {c.kmer.words(), c.flipped};
}

std::uint16_t coverage_of(const SparseGraph& graph, const Kmer& x) {
    const auto ref = graph.lookup(x);
    return ref ? ref->node->coverage : 0;
}

/// Distinct stored k-mers reachable through the slots on `side`.
std::vector<Kmer> successors(const SparseGraph& graph, const Kmer& x, Side side) {
    std::vector<Kmer> out;
    for (const auto& end : explore_paths(graph, x, side, kPathBudget)) {
        if (!end.next) continue;
        if (std::find(out.begin(), out.end(), *end.next) == out.end()) out.push_back(*end.next);
    }
    return out;
}

int branching_slots(NeighborField field, int g) {
    int n = 0;
    for (int d = 1; d <= g; ++d)
        if (field.get(d).size() > 1) ++n;
    return n;
}

/// One in-edge from prev and exactly one out-edge.
bool is_simple(const SparseGraph& graph, const Kmer& x, const Kmer& prev) {
    const auto in = successors(graph, x, Side::left);
    if (in.size() != 1 || ident(in[0]) != ident(prev)) return false;
    return successors(graph, x, Side::right).size() == 1;
}

template <class F>
void for_each_orientation(SparseGraph& graph, F&& f) {
    for (const auto& key : graph.sorted_keys()) {
        const Kmer fwd = Kmer::from_words(key, graph.k());
        for (const Kmer& x : {fwd, fwd.revcomp()}) {
            if (!graph.find(key)) break;
            f(x);
        }
    }
}

/// Walks back from a dead-ending node over single-in, single-out nodes. The
/// limb goes when it spans at most max_tip_span nodes and the node it hangs
/// from leads somewhere heavier than the limb. A limb whose junction no
/// longer steps into it (its bits are shadowed by a nearer stored k-mer)
/// counts as hanging from that junction too.
std::size_t trim_tip_from(SparseGraph& graph, const Kmer& tip, const CleanupParams& params) {
    if (!successors(graph, tip, Side::right).empty()) return 0;
    std::vector<Kmer> limb{tip};
    std::uint16_t max_cov = coverage_of(graph, tip);
    Kmer cur = tip;
    while (true) {
        const auto in = successors(graph, cur, Side::left);
        if (in.size() != 1) return 0;
        const Kmer p = in[0];
        const Oriented p_id = ident(p);
        if (std::any_of(limb.begin(), limb.end(), [&](const Kmer& n) { return ident(n) == p_id; })) return 0;
        const auto outs = successors(graph, p, Side::right);
        const bool interior = outs.size() == 1 && ident(outs[0]) == ident(cur) &&
                              successors(graph, p, Side::left).size() == 1;
        if (!interior) {
            bool heavier = false;
            for (const Kmer& o : outs)
                if (ident(o) != ident(cur) && coverage_of(graph, o) > max_cov) heavier = true;
            if (!heavier) return 0;
            std::size_t removed = 0;
            for (const Kmer& n : limb)
                if (graph.erase(canonical(n).kmer.words())) ++removed;
            prune_dead_bits(graph, p, Side::right);
            return removed;
        }
        if (static_cast<int>(limb.size()) >= params.max_tip_span) return 0;
        limb.push_back(p);
        max_cov = std::max(max_cov, coverage_of(graph, p));
        cur = p;
    }
}

struct Visit {
    Kmer x;
    int parent = -1;
    int dist = 0;
    int hops = 0;
    std::string edge;  // bases consumed from the parent
};

std::vector<int> chain_to(const std::vector<Visit>& v, int i) {
    std::vector<int> c;
    for (; i >= 0; i = v[i].parent) c.push_back(i);
    std::reverse(c.begin(), c.end());
    return c;
}

struct Limb {
    std::vector<Kmer> nodes;
    std::string first_edge;
    double cov = 0;
};

/// Resolves the collision of search node i reaching seen node j via `bases`.
bool resolve_collision(SparseGraph& graph, const std::vector<Visit>& v, int i, int j, const std::string& bases) {
    const auto ci = chain_to(v, i);
    const auto cj = chain_to(v, j);

    Limb a;
    Limb b;
    Kmer nca;
    Kmer join = v[j].x;
    const auto loop_at = std::find(ci.begin(), ci.end(), j);
    if (loop_at != ci.end()) {
        nca = v[j].x;
        for (auto it = loop_at + 1; it != ci.end(); ++it) b.nodes.push_back(v[*it].x);
        if (b.nodes.empty()) return false;
        b.first_edge = v[*(loop_at + 1)].edge;
    } else {
        std::size_t c = 0;
        while (c + 1 < ci.size() && c + 1 < cj.size() && ci[c + 1] == cj[c + 1]) ++c;
        nca = v[ci[c]].x;
        for (std::size_t t = c + 1; t + 1 < cj.size(); ++t) a.nodes.push_back(v[cj[t]].x);
        a.first_edge = c + 1 < cj.size() - 1 ? v[cj[c + 1]].edge : v[j].edge;
        for (std::size_t t = c + 1; t < ci.size(); ++t) b.nodes.push_back(v[ci[t]].x);
        b.first_edge = c + 1 < ci.size() ? v[ci[c + 1]].edge : bases;
        if (a.nodes.empty() && b.nodes.empty()) return false;
    }

    const double root_cov = coverage_of(graph, nca);
    for (Limb* limb : {&a, &b}) {
        if (limb->nodes.empty()) {
            limb->cov = root_cov;
            continue;
        }
        double sum = 0;
        for (const Kmer& n : limb->nodes) sum += coverage_of(graph, n);
        limb->cov = sum / static_cast<double>(limb->nodes.size());
    }

    Limb* loser = nullptr;
    if (a.cov != b.cov) {
        loser = a.cov < b.cov ? &a : &b;
    } else if (a.first_edge.empty()) {
        loser = &b;
    } else {
        const auto mm = std::mismatch(a.first_edge.begin(), a.first_edge.end(), b.first_edge.begin(), b.first_edge.end());
        const bool a_smaller = mm.first != a.first_edge.end() && mm.second != b.first_edge.end() && *mm.first < *mm.second;
        loser = a_smaller ? &b : &a;
    }
    if (loser->nodes.empty()) return false;

    std::vector<Kmer> run;
    Kmer prev = nca;
    for (const Kmer& n : loser->nodes) {
        if (!is_simple(graph, n, prev)) break;
        run.push_back(n);
        prev = n;
    }
    if (run.empty()) return false;
    const Kmer after = run.size() < loser->nodes.size() ? loser->nodes[run.size()] : join;

    for (const Kmer& n : run) graph.erase(canonical(n).kmer.words());
    prune_dead_bits(graph, nca, Side::right);
    if (graph.lookup(after)) prune_dead_bits(graph, after, Side::left);
    return true;
}

bool bubble_search(SparseGraph& graph, const Kmer& root, const CleanupParams& params) {
    std::vector<Visit> v;
    std::map<Oriented, int> seen;
    using Item = std::pair<int, int>;  // (dist, index)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
    v.push_back({root, -1, 0, 0, {}});
    seen.emplace(ident(root), 0);
    frontier.push({0, 0});

    while (!frontier.empty()) {
        const int i = frontier.top().second;
        frontier.pop();
        if (v[i].hops >= params.max_search_depth) continue;
        const Kmer x = v[i].x;
        for (const auto& end : explore_paths(graph, x, Side::right, kPathBudget)) {
            if (!end.next) continue;
            const Oriented id = ident(*end.next);
            if (const auto it = seen.find(id); it != seen.end()) {
                if (resolve_collision(graph, v, i, it->second, end.bases)) return true;
                continue;
            }
            const int idx = static_cast<int>(v.size());
            v.push_back({*end.next, i, v[i].dist + static_cast<int>(end.bases.size()), v[i].hops + 1, end.bases});
            seen.emplace(id, idx);
            frontier.push({v[idx].dist, idx});
        }
    }
    return false;
}

}  // namespace

void CleanupParams::validate() const {
    if (max_tip_span < 1) throw std::invalid_argument("max_tip_span must be at least 1");
    if (max_search_depth < 1) throw std::invalid_argument("max_search_depth must be at least 1");
    if (!(branch_cov_ratio > 0.0 && branch_cov_ratio < 1.0))
        throw std::invalid_argument("branch_cov_ratio must lie strictly between 0 and 1");
}

const BranchCoverage::Counts* BranchCoverage::find(const Kmer::Words& key) const {
    const auto it = table_.find(key);
    return it == table_.end() ? nullptr : &it->second;
}

BranchCoverage remap_branch_coverage(const SparseGraph& graph, const ReadSet& reads) {
    BranchCoverage cov;
    const int k = graph.k();
    const int g = graph.g();
    auto bump = [](std::uint8_t& c) {
        if (c != UINT8_MAX) ++c;
    };
    for (const auto& r : reads) {
        if (r.seq.size() < static_cast<std::size_t>(k)) continue;
        const auto kms = canonical_kmers(r.seq, k);
        const long len = static_cast<long>(r.seq.size());
        for (std::size_t p = 0; p < kms.size(); ++p) {
            if (!graph.find(kms[p].kmer.words())) continue;
            auto& counts = cov.at(kms[p].kmer.words());
            const bool flipped = kms[p].flipped;
            const long pos = static_cast<long>(p);
            for (int d = 1; d <= g; ++d) {
                if (pos + k - 1 + d < len) {
                    const auto b = static_cast<Base>(base_code(r.seq[pos + k - 1 + d]));
                    bump(counts[flipped ? 0 : 1][d - 1][flipped ? complement(b) : b]);
                }
                if (pos - d >= 0) {
                    const auto b = static_cast<Base>(base_code(r.seq[pos - d]));
                    bump(counts[flipped ? 1 : 0][d - 1][flipped ? complement(b) : b]);
                }
            }
        }
    }
    graph.for_each_node([&](const EKmerNode& n) { cov.at(n.key); });
    return cov;
}

std::size_t prune_dead_bits(SparseGraph& graph, const Kmer& oriented, Side side) {
    const auto ref = graph.lookup(oriented);
    if (!ref) return 0;
    const auto ends = explore_paths(graph, oriented, side, kPathBudget);
    if (ends.size() >= kPathBudget) return 0;
    std::array<BaseSet, kMaxSkip + 1> live{};
    for (const auto& end : ends) {
        if (!end.next) continue;
        for (std::size_t t = 0; t < end.bases.size(); ++t)
            live[t + 1] = live[t + 1].with(static_cast<Base>(base_code(end.bases[t])));
    }
    const NeighborField field = ref->node->field(side, ref->flipped);
    std::size_t cleared = 0;
    for (int d = 1; d <= graph.g(); ++d) {
        const BaseSet slot = field.get(d);
        if (slot.size() < 2 || live[d].empty()) continue;
        for (Base b = 0; b < 4; ++b) {
            if (slot.contains(b) && !live[d].contains(b)) {
                ref->node->unrecord(side, ref->flipped, d, b);
                ++cleared;
            }
        }
    }
    return cleared;
}

std::size_t prune_all_dead_bits(SparseGraph& graph) {
    std::size_t cleared = 0;
    for (const auto& key : graph.sorted_keys()) {
        const Kmer x = Kmer::from_words(key, graph.k());
        cleared += prune_dead_bits(graph, x, Side::right);
        cleared += prune_dead_bits(graph, x, Side::left);
    }
    return cleared;
}

std::size_t remove_tips(SparseGraph& graph, const CleanupParams& params) {
    params.validate();
    std::size_t removed = 0;
    for_each_orientation(graph, [&](const Kmer& x) { removed += trim_tip_from(graph, x, params); });
    return removed;
}

std::size_t pop_bubbles(SparseGraph& graph, const CleanupParams& params) {
    params.validate();
    std::size_t merges = 0;
    for (int pass = 0; pass < 4; ++pass) {
        std::size_t pass_merges = 0;
        for_each_orientation(graph, [&](const Kmer& r) {
            for (int guard = 0; guard < 8 && graph.lookup(r); ++guard) {
                const auto ref = graph.lookup(r);
                if (branching_slots(ref->node->field(Side::right, ref->flipped), graph.g()) == 0) break;
                if (successors(graph, r, Side::right).size() != 2) break;
                if (!bubble_search(graph, r, params)) break;
                ++pass_merges;
            }
        });
        merges += pass_merges;
        if (pass_merges == 0) break;
    }
    return merges;
}

std::size_t screen_spurious(SparseGraph& graph, const BranchCoverage& coverage, const CleanupParams& params) {
    params.validate();
    if (coverage.empty() && graph.node_count() > 0)
        throw std::logic_error("branch coverage was not collected for this graph");
    std::size_t cleared = 0;
    graph.for_each_node([&](EKmerNode& node) {
        const auto* counts = coverage.find(node.key);
        if (!counts) throw std::logic_error("branch coverage missing for a stored e-k-mer");
        for (int s = 0; s < 2; ++s) {
            NeighborField& field = s == 0 ? node.left : node.right;
            for (int d = 1; d <= graph.g(); ++d) {
                const BaseSet slot = field.get(d);
                if (slot.size() < 2) continue;
                const auto& c = (*counts)[s][d - 1];
                int max_count = 0;
                for (Base b = 0; b < 4; ++b)
                    if (slot.contains(b)) max_count = std::max<int>(max_count, c[b]);
                for (Base b = 0; b < 4; ++b) {
                    if (slot.contains(b) && c[b] < params.branch_cov_ratio * max_count) {
                        field.clear(d, b);
                        ++cleared;
                    }
                }
            }
        }
    });
    return cleared;
}

CleanupReport clean_graph(SparseGraph& graph, const CleanupParams& params, bool bfs, const ReadSet* reads_for_rs) {
    params.validate();
    CleanupReport rep;
    rep.nodes_before = graph.node_count();
    if (bfs) {
        rep.dead_bits += prune_all_dead_bits(graph);
        rep.tips += remove_tips(graph, params);
        rep.bubbles += pop_bubbles(graph, params);
        rep.tips += remove_tips(graph, params);
        rep.dead_bits += prune_all_dead_bits(graph);
    }
    if (params.use_branch_coverage_bits) {
        if (!reads_for_rs) throw std::logic_error("branch-coverage screening needs the reads");
        const BranchCoverage cov = remap_branch_coverage(graph, *reads_for_rs);
        rep.branch_table_bytes = cov.bytes();
        rep.spurious_bits += screen_spurious(graph, cov, params);
        if (bfs) {
            rep.tips += remove_tips(graph, params);
            rep.dead_bits += prune_all_dead_bits(graph);
        }
    }
    rep.nodes_after = graph.node_count();
    return rep;
}

}  // namespace sparseasm
