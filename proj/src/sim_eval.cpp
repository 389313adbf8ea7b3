#include "sparseasm/sim_eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "sparseasm/kmer.hpp"

namespace sparseasm {

namespace {

// Raw mt19937_64 output only; std distributions are not portable.
struct Rng {
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    std::uint64_t below(std::uint64_t n) { return engine() % n; }
    double unit() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
    std::mt19937_64 engine;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

}  // namespace

std::uint64_t genome_length(const Genome& genome) {
    std::uint64_t n = 0;
    for (const auto& c : genome) n += c.seq.size();
    return n;
}

std::string random_genome(std::uint64_t length, std::uint64_t seed) {
    if (length == 0) throw std::invalid_argument("genome length must be positive");
    std::mt19937_64 engine(seed);
    std::string s(length, 'A');
    std::uint64_t word = 0;
    int left = 0;
    for (auto& ch : s) {
        if (left == 0) {
            word = engine();
            left = 32;
        }
        ch = base_char(static_cast<Base>(word >> 62));
        word <<= 2;
        --left;
    }
    return s;
}

void SimConfig::validate() const {
    if (!(coverage > 0.0)) throw std::invalid_argument("coverage must be positive");
    if (read_length < 1) throw std::invalid_argument("read length must be positive");
    if (error_rate < 0.0 || error_rate > 0.1) throw std::invalid_argument("error rate must be in [0, 0.1]");
}

Simulation simulate_reads(const Genome& genome, const SimConfig& config) {
    config.validate();
    const auto r = static_cast<std::uint64_t>(config.read_length);
    // Cumulative count of valid start positions per chromosome.
    std::vector<std::uint64_t> starts;
    std::uint64_t total_starts = 0;
    for (const auto& c : genome) {
        if (c.seq.size() >= r) total_starts += c.seq.size() - r + 1;
        starts.push_back(total_starts);
    }
    if (total_starts == 0) throw std::invalid_argument("genome is shorter than the read length");

    const double want = static_cast<double>(genome_length(genome)) * config.coverage / static_cast<double>(r);
    const auto n_reads = static_cast<std::uint64_t>(std::ceil(want - 1e-9));

    Rng rng(config.seed);
    Simulation sim;
    sim.reads.reserve(n_reads);
    sim.truth.reads.reserve(n_reads);
    for (std::uint64_t i = 0; i < n_reads; ++i) {
        const std::uint64_t pick = rng.below(total_starts);
        const auto ci = static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), pick) - starts.begin());
        const std::uint64_t before = ci == 0 ? 0 : starts[ci - 1];
        const std::uint64_t origin = pick - before;
        const bool minus = rng.below(2) == 1;

        std::string seq = genome[ci].seq.substr(origin, r);
        if (minus) seq = reverse_complement(seq);

        ReadTruth t;
        t.id = "r" + std::to_string(i + 1);
        t.chrom = genome[ci].name;
        t.origin = origin;
        t.strand = minus ? '-' : '+';
        for (std::uint32_t p = 0; p < seq.size(); ++p) {
            if (!(rng.unit() < config.error_rate)) continue;
            const int orig = base_code(seq[p]);
            const auto alt = static_cast<Base>((orig + 1 + static_cast<int>(rng.below(3))) % 4);
            t.errors.push_back({p, seq[p]});
            seq[p] = base_char(alt);
        }
        ReadRecord rec;
        rec.id = t.id;
        rec.qual.assign(seq.size(), 'I');
        rec.seq = std::move(seq);
        sim.reads.push_back(std::move(rec));
        sim.truth.reads.push_back(std::move(t));
    }
    return sim;
}

Simulation simulate_reads(std::string_view genome, const SimConfig& config) {
    return simulate_reads(Genome{{"chr1", std::string(genome)}}, config);
}

void write_truth(std::ostream& out, const GroundTruth& truth) {
    out << "#id\tchrom\torigin\tstrand\terror_offsets\toriginal_bases\n";
    for (const auto& t : truth.reads) {
        out << t.id << '\t' << t.chrom << '\t' << t.origin << '\t' << t.strand << '\t';
        if (t.errors.empty()) {
            out << ".\t.\n";
            continue;
        }
        for (std::size_t i = 0; i < t.errors.size(); ++i) out << (i ? "," : "") << t.errors[i].offset;
        out << '\t';
        for (const auto& e : t.errors) out << e.original;
        out << '\n';
    }
}

GroundTruth read_truth(std::istream& in) {
    GroundTruth truth;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto f = split(line, '\t');
        if (f.size() != 6 || (f[3] != "+" && f[3] != "-"))
            throw std::runtime_error("malformed truth record at line " + std::to_string(lineno));
        ReadTruth t;
        t.id = f[0];
        t.chrom = f[1];
        t.origin = std::stoull(f[2]);
        t.strand = f[3][0];
        if (f[4] != ".") {
            const auto offs = split(f[4], ',');
            if (offs.size() != f[5].size())
                throw std::runtime_error("error offsets and bases disagree at line " + std::to_string(lineno));
            for (std::size_t i = 0; i < offs.size(); ++i)
                t.errors.push_back({static_cast<std::uint32_t>(std::stoul(offs[i])), f[5][i]});
        }
        truth.reads.push_back(std::move(t));
    }
    return truth;
}

DenoiseEval evaluate_denoising(const ReadSet& input, const GroundTruth& truth, const ReadSet& output) {
    if (input.size() != truth.reads.size()) throw std::runtime_error("truth does not match input read count");
    std::unordered_map<std::string, std::size_t> by_id;
    by_id.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i].id != truth.reads[i].id)
            throw std::runtime_error("truth id " + truth.reads[i].id + " does not match read " + input[i].id);
        by_id.emplace(input[i].id, i);
    }

    DenoiseEval ev;
    ev.input_reads = input.size();
    std::vector<const ReadRecord*> out_of(input.size(), nullptr);
    for (const auto& o : output) {
        const auto it = by_id.find(o.id);
        if (it == by_id.end()) throw std::runtime_error("output read " + o.id + " has no input record");
        const auto& in = input[it->second];
        if (static_cast<std::size_t>(o.clip_left) + o.clip_right + o.seq.size() != in.seq.size())
            throw std::runtime_error("output read " + o.id + " clip offsets do not match its input length");
        out_of[it->second] = &o;
    }

    std::uint64_t out_len_sum = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const std::string& in = input[i].seq;
        std::string clean = in;
        std::vector<bool> seeded(in.size(), false);
        for (const auto& e : truth.reads[i].errors) {
            clean[e.offset] = e.original;
            seeded[e.offset] = true;
        }
        ev.input_bases += in.size();
        ev.total_errors += truth.reads[i].errors.size();

        const ReadRecord* o = out_of[i];
        const std::size_t lo = o ? o->clip_left : in.size();
        const std::size_t hi = o ? in.size() - o->clip_right : in.size();
        if (o) {
            ++ev.output_reads;
            out_len_sum += o->seq.size();
            ev.output_bases += o->seq.size();
        } else {
            ++ev.dropped_reads;
        }
        ev.trimmed_bases += in.size() - (hi - lo);
        for (std::size_t p = 0; p < in.size(); ++p) {
            const bool kept = p >= lo && p < hi;
            if (!kept) {
                if (seeded[p]) {
                    ++ev.eliminated;
                    ++ev.eliminated_by_trimming;
                }
                continue;
            }
            const char now = o->seq[p - lo];
            if (seeded[p]) {
                if (now == clean[p]) ++ev.eliminated;
                else ++ev.surviving_errors;
            } else if (now != clean[p]) {
                ++ev.introduced;
            }
        }
    }
    ev.mean_out_len = ev.output_reads ? static_cast<double>(out_len_sum) / static_cast<double>(ev.output_reads) : 0.0;
    return ev;
}

AssemblyEval evaluate_assembly(const std::vector<std::string>& contigs, const Genome& reference, int seed_k,
                               std::size_t min_len) {
    check_k(seed_k);
    struct Hit {
        std::uint32_t chrom;
        std::uint32_t pos;
        bool flipped;
        bool unique;
    };
    struct WordsHash {
        std::size_t operator()(const Kmer::Words& w) const {
            return std::hash<std::uint64_t>{}(w[0] * 0x9E3779B97F4A7C15ULL ^ w[1]);
        }
    };
    std::unordered_map<Kmer::Words, Hit, WordsHash> index;
    index.reserve(genome_length(reference));
    for (std::uint32_t ci = 0; ci < reference.size(); ++ci) {
        const std::string& s = reference[ci].seq;
        // Windows containing non-ACGT bases are skipped.
        std::size_t run_start = 0;
        for (std::size_t i = 0; i <= s.size(); ++i) {
            if (i < s.size() && base_code(s[i]) >= 0) continue;
            if (i - run_start >= static_cast<std::size_t>(seed_k)) {
                const auto kms = canonical_kmers(std::string_view(s).substr(run_start, i - run_start), seed_k);
                for (std::size_t j = 0; j < kms.size(); ++j) {
                    auto [it, fresh] = index.try_emplace(
                        kms[j].kmer.words(),
                        Hit{ci, static_cast<std::uint32_t>(run_start + j), kms[j].flipped, true});
                    if (!fresh) it->second.unique = false;
                }
            }
            run_start = i + 1;
        }
    }

    std::vector<std::vector<bool>> covered;
    for (const auto& c : reference) covered.emplace_back(c.seq.size(), false);

    AssemblyEval ev;
    for (std::size_t idx = 0; idx < contigs.size(); ++idx) {
        const std::string& contig = contigs[idx];
        if (contig.size() <= min_len) continue;
        ++ev.contigs_evaluated;
        ContigAlignment al;
        al.contig = idx;
        al.length = contig.size();

        const auto L = static_cast<std::int64_t>(contig.size());
        std::map<std::tuple<std::uint32_t, char, std::int64_t>, std::size_t> votes;
        std::size_t run_start = 0;
        for (std::size_t i = 0; i <= contig.size(); ++i) {
            if (i < contig.size() && base_code(contig[i]) >= 0) continue;
            if (i - run_start >= static_cast<std::size_t>(seed_k)) {
                const auto kms = canonical_kmers(std::string_view(contig).substr(run_start, i - run_start), seed_k);
                for (std::size_t j = 0; j < kms.size(); ++j) {
                    const auto it = index.find(kms[j].kmer.words());
                    if (it == index.end() || !it->second.unique) continue;
                    const Hit& h = it->second;
                    const auto off = static_cast<std::int64_t>(run_start + j);
                    if (h.flipped == kms[j].flipped) {
                        ++votes[{h.chrom, '+', static_cast<std::int64_t>(h.pos) - off}];
                    } else {
                        ++votes[{h.chrom, '-', static_cast<std::int64_t>(h.pos) - (L - off - seed_k)}];
                    }
                }
            }
            run_start = i + 1;
        }

        if (votes.empty()) {
            al.mismatches = contig.size();
        } else {
            auto best = votes.begin();
            for (auto it = votes.begin(); it != votes.end(); ++it)
                if (it->second > best->second) best = it;
            const auto [ci, strand, start] = best->first;
            al.anchored = true;
            al.chrom = reference[ci].name;
            al.strand = strand;
            al.ref_start = start;
            const std::string oriented = strand == '+' ? contig : reverse_complement(contig);
            const std::string& ref = reference[ci].seq;
            for (std::int64_t j = 0; j < L; ++j) {
                const std::int64_t rp = start + j;
                if (rp < 0 || rp >= static_cast<std::int64_t>(ref.size())) {
                    ++al.mismatches;
                    continue;
                }
                if (ref[static_cast<std::size_t>(rp)] != oriented[static_cast<std::size_t>(j)]) ++al.mismatches;
                covered[ci][static_cast<std::size_t>(rp)] = true;
            }
        }
        if (al.mismatches >= 1) ++ev.e_ge1;
        if (al.mismatches >= 3) ++ev.e_ge3;
        if (al.mismatches >= 5) ++ev.e_ge5;
        ev.alignments.push_back(std::move(al));
    }

    std::uint64_t hit = 0, total = 0;
    for (const auto& v : covered) {
        total += v.size();
        hit += static_cast<std::uint64_t>(std::count(v.begin(), v.end(), true));
    }
    ev.coverage_pct = total ? 100.0 * static_cast<double>(hit) / static_cast<double>(total) : 0.0;
    return ev;
}

}  // namespace sparseasm
