#include "sparseasm/denoise.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sparseasm {

namespace {

enum class Reach : std::uint8_t { solid, dubious, none };

struct ReachResult {
    Reach kind = Reach::none;
    int shift = 0;  // shift of the first stored hit
};

constexpr int kMaxBeyondPaths = 256;

/// Follows the read past an anchor (optionally with one substituted base) and
/// reports the first stored k-mer met within `limit` shifts. Once the read runs
/// out, the anchor's own neighbor slots supply the bases.
class PathProber {
public:
    PathProber(const SparseGraph& graph, const DenoiseParams& params)
        : graph_(graph), params_(params), limit_(std::min(params.g, graph.k())) {}

    int limit() const { return limit_; }

    ReachResult reach(const Kmer& anchor, NeighborField field, std::string_view tail, int edit_at,
                      Base edit_base) const {
        Kmer cur = anchor;
        const int m = static_cast<int>(tail.size());
        const int inside = std::min(limit_, m);
        for (int d = 1; d <= inside; ++d) {
            const Base b = d == edit_at ? edit_base : static_cast<Base>(base_code(tail[d - 1]));
            cur = cur.shift_append(b, Side::right);
            // Shifts before an edit repeat the unmodified path, which had no hit there.
            if (d < edit_at) continue;
            if (const auto ref = graph_.lookup(cur)) return {is_solid(*ref->node) ? Reach::solid : Reach::dubious, d};
        }
        if (m >= limit_) return {};
        int budget = kMaxBeyondPaths;
        return beyond(cur, field, m + 1, budget);
    }

    bool is_solid(const EKmerNode& n) const { return classify(n, params_) == Solidity::solid; }

private:
    ReachResult beyond(const Kmer& cur, NeighborField field, int d, int& budget) const {
        if (d > limit_ || budget <= 0) return {};
        const BaseSet slot = field.get(d);
        ReachResult best;
        for (Base b = 0; b < 4; ++b) {
            if (!slot.contains(b) || --budget < 0) continue;
            const Kmer nxt = cur.shift_append(b, Side::right);
            if (const auto ref = graph_.lookup(nxt)) {
                if (is_solid(*ref->node)) return {Reach::solid, d};
                if (best.kind == Reach::none) best = {Reach::dubious, d};
                continue;
            }
            const ReachResult sub = beyond(nxt, field, d + 1, budget);
            if (sub.kind == Reach::solid) return sub;
            if (best.kind == Reach::none) best = sub;
        }
        return best;
    }

    const SparseGraph& graph_;
    const DenoiseParams& params_;
    int limit_;
};

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void DenoiseParams::validate() const {
    check_k(k);
    check_g(g);
    if (solid_threshold < 2) throw std::invalid_argument("solid threshold must be at least 2");
    if (max_substitutions != 1) throw std::invalid_argument("only one substitution per correction step is supported");
}

void validate_schedule(const RoundSchedule& schedule) {
    if (schedule.empty()) throw std::invalid_argument("denoising schedule is empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        DenoiseParams{schedule[i].k, schedule[i].g, schedule[i].solid_threshold}.validate();
        if (i > 0 && schedule[i].k < schedule[i - 1].k)
            throw std::invalid_argument("k must be non-decreasing across denoising rounds");
    }
}

RoundSchedule parse_schedule(std::string_view text, int default_threshold) {
    RoundSchedule out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        std::vector<int> parts;
        std::istringstream fields(item);
        std::string f;
        while (std::getline(fields, f, ':')) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(f, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != f.size())
                throw std::invalid_argument("bad schedule entry '" + item + "'; expected k:g[:threshold]");
            parts.push_back(v);
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw std::invalid_argument("bad schedule entry '" + item + "'; expected k:g[:threshold]");
        out.push_back({parts[0], parts[1], parts.size() == 3 ? parts[2] : default_threshold});
    }
    validate_schedule(out);
    return out;
}

std::string format_schedule(const RoundSchedule& schedule) {
    std::string s;
    for (const auto& r : schedule) {
        if (!s.empty()) s += ',';
        s += std::to_string(r.k) + ':' + std::to_string(r.g) + ':' + std::to_string(r.solid_threshold);
    }
    return s;
}

RoundSchedule default_schedule_70bp() { return {{17, 16, 3}, {31, 14, 3}}; }
RoundSchedule default_schedule_50bp() { return {{17, 9, 3}, {25, 9, 3}}; }
RoundSchedule default_schedule_assembly() { return {{15, 13, 3}, {17, 16, 3}, {45, 16, 3}}; }

Solidity classify(const EKmerNode& node, const DenoiseParams& params) {
    return node.coverage >= params.solid_threshold ? Solidity::solid : Solidity::dubious;
}

CorrectionResult correct_read(std::string_view read, const SparseGraph& graph, const DenoiseParams& params) {
    CorrectionResult res;
    res.seq = std::string(read);
    const int k = graph.k();
    if (read.size() < static_cast<std::size_t>(k)) {
        res.outcome = ReadOutcome::too_short;
        return res;
    }
    const PathProber prober(graph, params);
    std::string& s = res.seq;
    const int len = static_cast<int>(s.size());

    // First solid anchor.
    int pos = -1;
    ConstNodeRef node;
    Kmer anchor;
    {
        const auto kms = canonical_kmers(s, k);
        for (std::size_t p = 0; p < kms.size(); ++p) {
            const EKmerNode* n = graph.find(kms[p].kmer.words());
            if (n && prober.is_solid(*n)) {
                pos = static_cast<int>(p);
                node = {n, kms[p].flipped};
                anchor = kms[p].flipped ? kms[p].kmer.revcomp() : kms[p].kmer;
                break;
            }
        }
    }
    if (pos < 0) {
        res.trimmed = static_cast<std::uint32_t>(len);
        s.clear();
        res.outcome = ReadOutcome::no_anchor;
        return res;
    }

    auto advance = [&](int shift) {
        for (int d = 0; d < shift; ++d)
            anchor = anchor.shift_append(static_cast<Base>(base_code(s[pos + k + d])), Side::right);
        pos += shift;
        const auto ref = graph.lookup(anchor);
        node = {ref->node, ref->flipped};
    };

    while (true) {
        const int end = pos + k;
        const int m = len - end;
        if (m == 0) break;
        const NeighborField field = node.node->field(Side::right, node.flipped);
        const std::string_view tail = std::string_view(s).substr(static_cast<std::size_t>(end));

        const ReachResult plain = prober.reach(anchor, field, tail, 0, 0);
        if (plain.kind == Reach::solid) {
            if (plain.shift > m) break;  // verified through the read end
            advance(plain.shift);
            continue;
        }

        // The error must sit at or before the first (dubious) hit.
        const int max_d = plain.kind == Reach::dubious && plain.shift <= m ? plain.shift
                                                                           : std::min(prober.limit(), m);
        int found = 0;
        int fix_at = 0;
        Base fix_base = 0;
        int fix_shift = 0;
        for (int d = 1; d <= max_d && found < 2; ++d) {
            const auto orig = static_cast<Base>(base_code(s[end + d - 1]));
            for (Base b = 0; b < 4 && found < 2; ++b) {
                if (b == orig) continue;
                const ReachResult r = prober.reach(anchor, field, tail, d, b);
                if (r.kind != Reach::solid) continue;
                ++found;
                fix_at = d;
                fix_base = b;
                fix_shift = r.shift;
            }
        }
        if (found != 1) {
            res.trimmed = static_cast<std::uint32_t>(m);
            s.resize(static_cast<std::size_t>(end));
            break;
        }
        s[end + fix_at - 1] = base_char(fix_base);
        ++res.substitutions;
        if (fix_shift > m) break;
        advance(fix_shift);
    }

    if (res.substitutions > 0) {
        res.outcome = res.trimmed > 0 ? ReadOutcome::corrected_and_trimmed : ReadOutcome::corrected;
    } else {
        res.outcome = res.trimmed > 0 ? ReadOutcome::trimmed : ReadOutcome::unchanged;
    }
    return res;
}

RoundOutput denoise_round(const ReadSet& reads, const RoundSpec& spec, const DenoiseOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const DenoiseParams params{spec.k, spec.g, spec.solid_threshold, 1, options.direction};
    params.validate();

    SparseGraph graph(GraphParams{spec.k, spec.g});
    for (const auto& r : reads) graph.add_read(r.seq);
    remap_coverage(graph, reads);

    struct Slot {
        ReadRecord rec;
        bool keep = true;
        std::uint32_t subs = 0;
        std::uint32_t trimmed = 0;
    };
    std::vector<Slot> slots(reads.size());
    const auto min_keep = static_cast<std::size_t>(spec.k + spec.g);

    parallel_for(reads.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Slot& out = slots[i];
            out.rec = reads[i];
            ReadRecord& rec = out.rec;
            if (rec.seq.size() < static_cast<std::size_t>(spec.k)) continue;

            CorrectionResult fwd = correct_read(rec.seq, graph, params);
            std::uint32_t cut_left = 0;
            out.subs += fwd.substitutions;
            std::string seq = std::move(fwd.seq);
            if (params.direction == DenoiseDirection::both && seq.size() >= static_cast<std::size_t>(spec.k)) {
                CorrectionResult back = correct_read(reverse_complement(seq), graph, params);
                cut_left = back.trimmed;
                out.subs += back.substitutions;
                seq = reverse_complement(back.seq);
            }
            out.trimmed = static_cast<std::uint32_t>(rec.seq.size() - seq.size());
            if (!rec.qual.empty()) rec.qual = rec.qual.substr(cut_left, seq.size());
            rec.clip_left += cut_left;
            rec.clip_right += static_cast<std::uint32_t>(rec.seq.size() - seq.size() - cut_left);
            rec.seq = std::move(seq);
            if (rec.seq.empty() || (options.drop_short && out.trimmed > 0 && rec.seq.size() < min_keep))
                out.keep = false;
        }
    });

    RoundOutput result;
    RoundReport& rep = result.report;
    rep.spec = spec;
    rep.reads_in = reads.size();
    rep.peak_nodes = graph.node_count();
    rep.index_capacity = graph.capacity();
    result.reads.reserve(reads.size());
    for (auto& s : slots) {
        rep.substitutions += s.subs;
        rep.trimmed_bases += s.trimmed;
        if (!s.keep) {
            ++rep.dropped;
            rep.trimmed_bases += s.rec.seq.size();
            continue;
        }
        result.reads.push_back(std::move(s.rec));
    }
    rep.reads_out = result.reads.size();
    rep.wall_seconds = seconds_since(t0);
    return result;
}

DenoiseOutput hybrid_denoise(const ReadSet& reads, const RoundSchedule& schedule, const GroundTruth* truth,
                             const DenoiseOptions& options) {
    validate_schedule(schedule);
    const auto t0 = std::chrono::steady_clock::now();
    DenoiseOutput out;
    out.reads = reads;
    for (const auto& spec : schedule) {
        RoundOutput round = denoise_round(out.reads, spec, options);
        out.reads = std::move(round.reads);
        if (truth) round.report.eval = evaluate_denoising(reads, *truth, out.reads);
        out.report.peak_nodes = std::max(out.report.peak_nodes, round.report.peak_nodes);
        out.report.rounds.push_back(std::move(round.report));
    }
    if (truth) out.report.cumulative = out.report.rounds.back().eval;
    out.report.wall_seconds = seconds_since(t0);
    return out;
}

}  // namespace sparseasm
