#include "sparseasm/sparse_graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace sparseasm {

namespace {

constexpr double kMaxLoad = 0.7;
constexpr std::size_t kMinCapacity = 1024;
constexpr char kMagic[8] = {'S', 'P', 'D', 'B', 'G', 'R', 'P', 'H'};
constexpr std::uint32_t kDumpVersion = 1;

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

template <class T>
void put_le(std::ostream& out, T v) {
    std::array<char, sizeof(T)> buf{};
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf.data(), buf.size());
}

template <class T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (!in) throw std::runtime_error("truncated graph dump");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
}

}  // namespace

void GraphParams::validate() const {
    check_k(k);
    check_g(g);
}

SparseGraph::SparseGraph(GraphParams params, BuildOptions options)
    : params_(params), seed_(options.hash_seed) {
    params_.validate();
    std::size_t want = kMinCapacity;
    if (options.expected_genome_size > 0) {
        const auto nodes = options.expected_genome_size / static_cast<std::uint64_t>(params_.g);
        want = std::max<std::size_t>(want, static_cast<std::size_t>(nodes / kMaxLoad) + 1);
    }
    slots_.resize(std::bit_ceil(want));
}

std::size_t SparseGraph::home(const Kmer::Words& key) const {
    const std::uint64_t h = mix64(key[0] ^ mix64(key[1] ^ seed_));
    return static_cast<std::size_t>(h) & (slots_.size() - 1);
}

std::size_t SparseGraph::probe(const Kmer::Words& key) const {
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = home(key);
    while (slots_[i].occupied() && slots_[i].key != key) i = (i + 1) & mask;
    return i;
}

EKmerNode* SparseGraph::find(const Kmer::Words& key) {
    EKmerNode& s = slots_[probe(key)];
    return s.occupied() ? &s : nullptr;
}

const EKmerNode* SparseGraph::find(const Kmer::Words& key) const {
    const EKmerNode& s = slots_[probe(key)];
    return s.occupied() ? &s : nullptr;
}

std::optional<NodeRef> SparseGraph::lookup(const Kmer& x) {
    const CanonicalKmer c = canonical(x);
    if (EKmerNode* n = find(c.kmer.words())) return NodeRef{n, c.flipped};
    return std::nullopt;
}

std::optional<ConstNodeRef> SparseGraph::lookup(const Kmer& x) const {
    const CanonicalKmer c = canonical(x);
    if (const EKmerNode* n = find(c.kmer.words())) return ConstNodeRef{n, c.flipped};
    return std::nullopt;
}

void SparseGraph::grow() {
    std::vector<EKmerNode> old(slots_.size() * 2);
    old.swap(slots_);
    for (auto& s : old) {
        if (!s.occupied()) continue;
        slots_[probe(s.key)] = s;
    }
}

EKmerNode& SparseGraph::insert(const Kmer& canonical_key) {
    if (canonical_key.k() != params_.k) throw std::invalid_argument("k-mer length does not match graph k");
    if (static_cast<double>(size_ + 1) > kMaxLoad * static_cast<double>(slots_.size())) grow();
    EKmerNode& s = slots_[probe(canonical_key.words())];
    if (!s.occupied()) {
        s = EKmerNode{};
        s.key = canonical_key.words();
        s.flags = EKmerNode::kOccupied;
        ++size_;
    }
    return s;
}

bool SparseGraph::erase(const Kmer::Words& key) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = probe(key);
    if (!slots_[i].occupied()) return false;
    slots_[i] = EKmerNode{};
    --size_;
    // Backward-shift deletion keeps probe chains intact without tombstones.
    std::size_t j = i;
    while (true) {
        j = (j + 1) & mask;
        if (!slots_[j].occupied()) break;
        const std::size_t h = home(slots_[j].key);
        const bool stays = (i <= j) ? (i < h && h <= j) : (i < h || h <= j);
        if (stays) continue;
        slots_[i] = slots_[j];
        slots_[j] = EKmerNode{};
        i = j;
    }
    return true;
}

std::vector<Kmer::Words> SparseGraph::sorted_keys() const {
    std::vector<Kmer::Words> keys;
    keys.reserve(size_);
    for_each_node([&](const EKmerNode& n) { keys.push_back(n.key); });
    std::sort(keys.begin(), keys.end());
    return keys;
}

void SparseGraph::clear_visited() {
    for_each_node([](EKmerNode& n) { n.set_visited(false); });
}

void SparseGraph::add_read(std::string_view seq) {
    const int k = params_.k;
    const int g = params_.g;
    ++reads_ingested_;
    bases_ingested_ += seq.size();
    if (seq.size() < static_cast<std::size_t>(k)) {
        ++reads_skipped_;
        return;
    }
    const auto kmers = canonical_kmers(seq, k);
    const long n = static_cast<long>(kmers.size());
    const long len = static_cast<long>(seq.size());

    auto visit = [&](long pos, EKmerNode& node, bool flipped) {
        for (int d = 1; d <= g; ++d) {
            if (pos - d >= 0)
                node.record(Side::left, flipped, d, static_cast<Base>(base_code(seq[pos - d])));
            if (pos + k - 1 + d < len)
                node.record(Side::right, flipped, d, static_cast<Base>(base_code(seq[pos + k - 1 + d])));
        }
    };

    long prev = -1;
    while (true) {
        // After visiting a node the next window is the g k-mers its right
        // field implies; the read's own first window is offsets 0..g-1.
        const long lo = prev < 0 ? 0 : prev + 1;
        const long hi = std::min(prev < 0 ? g - 1L : prev + g, n - 1);
        if (lo > n - 1) break;
        long hit = -1;
        for (long j = lo; j <= hi; ++j) {
            if (find(kmers[j].kmer.words())) {
                hit = j;
                break;
            }
        }
        if (hit >= 0) {
            EKmerNode* node = find(kmers[hit].kmer.words());
            node->bump_coverage();
            visit(hit, *node, kmers[hit].flipped);
            prev = hit;
            continue;
        }
        const long at = prev < 0 ? 0 : prev + g;
        if (at > n - 1) break;  // tail is implied by prev's right field
        EKmerNode& node = insert(kmers[at].kmer);
        node.coverage = 1;
        visit(at, node, kmers[at].flipped);
        prev = at;
    }
}

SparseGraph build_graph(const ReadSet& reads, const GraphParams& params, const BuildOptions& options) {
    SparseGraph graph(params, options);
    for (const auto& r : reads) graph.add_read(r.seq);
    return graph;
}

void remap_coverage(SparseGraph& graph, const ReadSet& reads) {
    const int k = graph.k();
    const int g = graph.g();
    graph.for_each_node([](EKmerNode& n) { n.coverage = 0; });
    for (const auto& r : reads) {
        if (r.seq.size() < static_cast<std::size_t>(k)) continue;
        const auto kmers = canonical_kmers(r.seq, k);
        const long len = static_cast<long>(r.seq.size());
        for (std::size_t p = 0; p < kmers.size(); ++p) {
            EKmerNode* n = graph.find(kmers[p].kmer.words());
            if (!n) continue;
            n->bump_coverage();
            const long pos = static_cast<long>(p);
            const bool flipped = kmers[p].flipped;
            for (int d = 1; d <= g; ++d) {
                if (pos - d >= 0) n->record(Side::left, flipped, d, static_cast<Base>(base_code(r.seq[pos - d])));
                if (pos + k - 1 + d < len)
                    n->record(Side::right, flipped, d, static_cast<Base>(base_code(r.seq[pos + k - 1 + d])));
            }
        }
    }
}

StepResult step(const SparseGraph& graph, const Kmer& oriented, Side direction) {
    const auto ref = graph.lookup(oriented);
    if (!ref) throw std::invalid_argument("step() from a k-mer that is not stored");
    const NeighborField field = ref->node->field(direction, ref->flipped);
    StepResult out;
    Kmer cur = oriented;
    for (int d = 1; d <= graph.g(); ++d) {
        const BaseSet bases = field.get(d);
        if (bases.empty()) break;
        if (bases.size() > 1) {
            out.kind = StepResult::Kind::branch;
            out.branch_offset = d;
            out.branch_bases = bases;
            return out;
        }
        const Base b = bases.first();
        cur = cur.shift_append(b, direction);
        out.consumed.push_back(base_char(b));
        if (graph.lookup(cur)) {
            out.kind = StepResult::Kind::next;
            out.next = cur;
            return out;
        }
    }
    out.kind = StepResult::Kind::dead_end;
    return out;
}

StepResult step(const SparseGraph& graph, const EKmerNode& node, bool flipped, Side direction) {
    return step(graph, graph.oriented(node, flipped), direction);
}

std::vector<PathEnd> explore_paths(const SparseGraph& graph, const Kmer& oriented, Side direction,
                                   std::size_t max_paths) {
    const auto ref = graph.lookup(oriented);
    if (!ref) throw std::invalid_argument("explore_paths() from a k-mer that is not stored");
    const NeighborField field = ref->node->field(direction, ref->flipped);
    std::vector<PathEnd> ends;
    std::string bases;

    auto dfs = [&](auto&& self, const Kmer& cur, int d) -> void {
        if (ends.size() >= max_paths) return;
        const BaseSet slot = d <= graph.g() ? field.get(d) : BaseSet{};
        if (slot.empty()) {
            if (!bases.empty()) ends.push_back({bases, std::nullopt});
            return;
        }
        for (Base b = 0; b < 4; ++b) {
            if (!slot.contains(b)) continue;
            const Kmer nxt = cur.shift_append(b, direction);
            bases.push_back(base_char(b));
            if (graph.lookup(nxt)) {
                ends.push_back({bases, nxt});
            } else {
                self(self, nxt, d + 1);
            }
            bases.pop_back();
            if (ends.size() >= max_paths) return;
        }
    };
    dfs(dfs, oriented, 1);
    return ends;
}

int node_layout_bits(int k, int g) {
    const int key_words = k <= 32 ? 1 : 2;
    return 64 * key_words + 2 * 4 * g + 16 + 1;
}

MemoryEstimate memory_estimate(const SparseGraph& graph, std::uint64_t n_bases) {
    MemoryEstimate m;
    m.k = graph.k();
    m.g = graph.g();
    m.n_bases = n_bases;
    m.node_count = graph.node_count();
    m.index_capacity = graph.capacity();
    m.index_bytes = graph.capacity() * sizeof(EKmerNode);
    m.bits_per_node = node_layout_bits(m.k, m.g);
    const double n = static_cast<double>(n_bases);
    m.s1_bits = n * (2.0 * m.k + 4.0 * 2.0);
    m.s2_bits = n / m.g * (2.0 * m.k + 4.0 * 2.0 * m.g);
    m.measured_bits = static_cast<double>(m.node_count) * m.bits_per_node;
    return m;
}

void write_graph(std::ostream& out, const SparseGraph& graph) {
    out.write(kMagic, sizeof(kMagic));
    put_le<std::uint32_t>(out, kDumpVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(graph.k()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(graph.g()));
    put_le<std::uint64_t>(out, graph.node_count());
    for (const auto& key : graph.sorted_keys()) {
        const EKmerNode* n = graph.find(key);
        put_le<std::uint64_t>(out, key[0]);
        put_le<std::uint64_t>(out, key[1]);
        put_le<std::uint64_t>(out, n->left.raw());
        put_le<std::uint64_t>(out, n->right.raw());
        put_le<std::uint16_t>(out, n->coverage);
    }
    if (!out) throw std::runtime_error("failed writing graph dump");
}

SparseGraph read_graph(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(magic, magic + 8, kMagic)) throw std::runtime_error("not a sparse graph dump");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kDumpVersion) throw std::runtime_error("unsupported graph dump version " + std::to_string(version));
    GraphParams params;
    params.k = static_cast<int>(get_le<std::uint32_t>(in));
    params.g = static_cast<int>(get_le<std::uint32_t>(in));
    const auto count = get_le<std::uint64_t>(in);
    BuildOptions opts;
    opts.expected_genome_size = count * static_cast<std::uint64_t>(params.g);
    SparseGraph graph(params, opts);
    for (std::uint64_t i = 0; i < count; ++i) {
        Kmer::Words key{get_le<std::uint64_t>(in), get_le<std::uint64_t>(in)};
        EKmerNode& n = graph.insert(Kmer::from_words(key, params.k));
        n.left = NeighborField(get_le<std::uint64_t>(in));
        n.right = NeighborField(get_le<std::uint64_t>(in));
        n.coverage = get_le<std::uint16_t>(in);
    }
    return graph;
}

}  // namespace sparseasm
