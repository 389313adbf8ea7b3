#include "sparseasm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sparseasm/assemble.hpp"
#include "sparseasm/denoise.hpp"
#include "sparseasm/seqio.hpp"
#include "sparseasm/sim_eval.hpp"
#include "sparseasm/sparse_graph.hpp"

namespace sparseasm {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kDefaultDenoiseSchedule = "17:16,31:14";

void build_app(CLI::App& app, PipelineConfig& c) {
    app.require_subcommand(1);
    app.fallthrough(false);

    auto add_graph = [&](CLI::App* sub) {
        sub->add_option("-k,--kmer", c.k, "k-mer length (odd, 15..63)")->capture_default_str();
        sub->add_option("-g,--skip", c.g, "skip distance g (1..16)")->capture_default_str();
        sub->add_option("--genome-size", c.expected_genome_size, "expected genome size N for sizing and the memory model");
        sub->add_option("--seed", c.seed, "hash seed")->capture_default_str();
    };
    auto add_report = [&](CLI::App* sub) {
        sub->add_option("--report", c.report, "write the structured (JSON) report here");
        sub->add_option("--format", c.format, "stdout report format")
            ->transform(CLI::CheckedTransformer(
                std::map<std::string, ReportFormat>{{"table", ReportFormat::table}, {"structured", ReportFormat::structured}}))
            ->capture_default_str();
    };
    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("-i,--input", c.inputs, "FASTA/FASTQ read files (.gz allowed)")->required()->check(CLI::ExistingFile);
    };
    auto add_denoise = [&](CLI::App* sub, bool with_default) {
        auto* opt = sub->add_option("--schedule", c.schedule, "denoising rounds k:g[:threshold],...");
        if (with_default) opt->default_str(kDefaultDenoiseSchedule);
        sub->add_option("--threshold", c.solid_threshold, "default solidity threshold")->capture_default_str();
        sub->add_flag("--forward-only", c.forward_only, "skip the reverse-complement pass");
        sub->add_option("--threads", c.threads, "worker threads for read correction")->capture_default_str();
    };

    auto* sim = app.add_subcommand("simulate", "simulate reads with ground truth");
    sim->add_option("--genome-length", c.genome_length, "random genome length");
    sim->add_option("-r,--reference", c.reference, "reference FASTA instead of a random genome")->check(CLI::ExistingFile);
    sim->add_option("--coverage", c.coverage, "mean coverage X")->capture_default_str();
    sim->add_option("--read-length", c.read_length, "read length")->capture_default_str();
    sim->add_option("--error-rate", c.error_rate, "substitution rate per base")->capture_default_str();
    sim->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sim->add_option("-o,--output", c.output, "reads output (FASTQ)")->required();
    sim->add_option("--truth", c.truth, "ground truth sidecar (TSV)");
    sim->add_option("--genome-out", c.genome_out, "write the genome as FASTA");

    auto* den = app.add_subcommand("denoise", "multi-round sparse-graph read correction");
    add_inputs(den);
    add_denoise(den, true);
    den->add_option("-o,--output", c.output, "corrected reads")->required();
    den->add_option("--truth", c.truth, "ground truth sidecar for accounting")->check(CLI::ExistingFile);
    den->add_option("--genome-size", c.expected_genome_size, "genome size N for the memory model");
    add_report(den);

    auto* asmb = app.add_subcommand("assemble", "build, clean and traverse the sparse graph");
    add_inputs(asmb);
    add_graph(asmb);
    add_denoise(asmb, false);
    asmb->add_flag("--bfs", c.bfs, "tip, dead-branch and bubble removal");
    asmb->add_flag("--rs", c.rs, "screen low-coverage branches with per-branch counters");
    asmb->add_option("--max-tip-span", c.max_tip_span, "longest removable tip in e-k-mers")->capture_default_str();
    asmb->add_option("--max-search-depth", c.max_search_depth, "bubble search hop budget")->capture_default_str();
    asmb->add_option("--branch-ratio", c.branch_cov_ratio, "branch coverage ratio for screening")->capture_default_str();
    asmb->add_option("--min-len", c.min_contig_len, "shortest contig written")->capture_default_str();
    asmb->add_option("-r,--reference", c.reference, "reference FASTA for evaluation")->check(CLI::ExistingFile);
    asmb->add_option("-o,--output", c.output, "contig FASTA")->required();
    add_report(asmb);

    auto* ev = app.add_subcommand("evaluate", "score denoised reads or contigs against ground truth");
    ev->add_option("-i,--input", c.inputs, "original reads (denoising mode)")->check(CLI::ExistingFile);
    ev->add_option("--denoised", c.denoised, "denoised reads")->check(CLI::ExistingFile);
    ev->add_option("--truth", c.truth, "ground truth sidecar")->check(CLI::ExistingFile);
    ev->add_option("--contigs", c.contigs, "contig FASTA (assembly mode)")->check(CLI::ExistingFile);
    ev->add_option("-r,--reference", c.reference, "reference FASTA")->check(CLI::ExistingFile);
    ev->add_option("--min-len", c.min_contig_len, "shortest contig evaluated")->capture_default_str();
    add_report(ev);

    auto* st = app.add_subcommand("stats", "build a graph and print size and memory figures");
    add_inputs(st);
    add_graph(st);
    add_report(st);

    auto* dump = app.add_subcommand("dump-graph", "build a graph and write the binary dump");
    add_inputs(dump);
    add_graph(dump);
    dump->add_option("-o,--output", c.output, "graph dump")->required();

    for (auto* sub : app.get_subcommands({})) {
        sub->callback([&c, sub] { c.subcommand = sub->get_name(); });
    }
}

std::string effective_schedule(const PipelineConfig& c) {
    if (!c.schedule.empty()) return c.schedule;
    return c.subcommand == "denoise" ? kDefaultDenoiseSchedule : "";
}

json config_json(const PipelineConfig& c) {
    json j;
    j["subcommand"] = c.subcommand;
    if (c.subcommand == "simulate") {
        j["genome_length"] = c.genome_length;
        j["reference"] = c.reference;
        j["coverage"] = c.coverage;
        j["read_length"] = c.read_length;
        j["error_rate"] = c.error_rate;
        j["seed"] = c.seed;
    } else {
        j["inputs"] = c.inputs;
        if (c.subcommand != "evaluate" && c.subcommand != "denoise") {
            j["k"] = c.k;
            j["g"] = c.g;
            j["hash_seed"] = c.seed;
        }
        if (c.subcommand == "denoise" || c.subcommand == "assemble") {
            j["schedule"] = effective_schedule(c).empty()
                                ? std::string()
                                : format_schedule(parse_schedule(effective_schedule(c), c.solid_threshold));
            j["direction"] = c.forward_only ? "forward" : "both";
        }
        if (c.subcommand == "assemble") {
            j["bfs"] = c.bfs;
            j["rs"] = c.rs;
            j["max_tip_span"] = c.max_tip_span;
            j["max_search_depth"] = c.max_search_depth;
            j["branch_cov_ratio"] = c.branch_cov_ratio;
            j["min_len"] = c.min_contig_len;
        }
        j["expected_genome_size"] = c.expected_genome_size;
        j["reference"] = c.reference;
        j["truth"] = c.truth;
    }
    j["output"] = c.output;
    return j;
}

std::string config_line(const PipelineConfig& c) {
    std::string s;
    const json j = config_json(c);
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_string() && it->get<std::string>().empty()) continue;
        if (!s.empty()) s += ' ';
        s += it.key() + '=' + (it->is_string() ? it->get<std::string>() : it->dump());
    }
    return s;
}

/// Output files created by this run; removed unless commit() is reached.
class OutputGuard {
public:
    ~OutputGuard() {
        if (committed_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }
    std::ofstream open(const std::string& path) {
        paths_.push_back(path);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        return f;
    }
    void commit() { committed_ = true; }

private:
    std::vector<std::string> paths_;
    bool committed_ = false;
};

void close_checked(std::ofstream& f, const std::string& path) {
    f.close();
    if (!f) throw std::runtime_error("failed writing " + path);
}

std::string fixed(double v, int prec) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
}

MemoryEstimate model_for(int k, int g, std::uint64_t n, std::size_t nodes, std::size_t capacity) {
    MemoryEstimate m;
    m.k = k;
    m.g = g;
    m.n_bases = n;
    m.node_count = nodes;
    m.index_capacity = capacity;
    m.index_bytes = capacity * sizeof(EKmerNode);
    m.bits_per_node = node_layout_bits(k, g);
    m.s1_bits = static_cast<double>(n) * (2.0 * k + 8.0);
    m.s2_bits = static_cast<double>(n) / g * (2.0 * k + 8.0 * g);
    m.measured_bits = static_cast<double>(nodes) * m.bits_per_node;
    return m;
}

json memory_json(const MemoryEstimate& m) {
    return json{{"k", m.k},
                {"g", m.g},
                {"n_bases", m.n_bases},
                {"node_count", m.node_count},
                {"bits_per_node", m.bits_per_node},
                {"s1_bits_per_base", m.s1_per_base()},
                {"s2_bits_per_base", m.s2_per_base()},
                {"measured_bits_per_base", m.measured_per_base()},
                {"s1_mb", m.s1_bits / 8e6},
                {"s2_mb", m.s2_bits / 8e6},
                {"measured_mb", m.measured_bits / 8e6},
                {"index_capacity", m.index_capacity},
                {"index_mb", static_cast<double>(m.index_bytes) / 1e6}};
}

void print_memory(std::ostream& out, const MemoryEstimate& m, const char* n_source) {
    out << "memory model (k=" << m.k << ", g=" << m.g << ", N=" << m.n_bases << " " << n_source << ")\n";
    out << "  S1 dense   " << std::setw(10) << fixed(m.s1_per_base(), 3) << " bits/base  "
        << std::setw(10) << fixed(m.s1_bits / 8e6, 2) << " MB\n";
    out << "  S2 sparse  " << std::setw(10) << fixed(m.s2_per_base(), 3) << " bits/base  "
        << std::setw(10) << fixed(m.s2_bits / 8e6, 2) << " MB\n";
    out << "  measured   " << std::setw(10) << fixed(m.measured_per_base(), 3) << " bits/base  "
        << std::setw(10) << fixed(m.measured_bits / 8e6, 2) << " MB  (" << m.node_count << " nodes x "
        << m.bits_per_node << " bits)\n";
    out << "  index      " << std::setw(10) << m.index_capacity << " slots      " << std::setw(10)
        << fixed(static_cast<double>(m.index_bytes) / 1e6, 2) << " MB reserved\n";
}

json denoise_eval_json(const DenoiseEval& e) {
    return json{{"input_reads", e.input_reads},
                {"output_reads", e.output_reads},
                {"dropped_reads", e.dropped_reads},
                {"input_bases", e.input_bases},
                {"output_bases", e.output_bases},
                {"total_errors", e.total_errors},
                {"eliminated", e.eliminated},
                {"eliminated_pct", e.eliminated_pct()},
                {"eliminated_by_trimming", e.eliminated_by_trimming},
                {"surviving_errors", e.surviving_errors},
                {"trimmed_bases", e.trimmed_bases},
                {"trimmed_pct", e.trimmed_pct()},
                {"introduced", e.introduced},
                {"introduced_pct", e.introduced_pct()},
                {"mean_out_len", e.mean_out_len}};
}

void print_denoise_eval(std::ostream& out, const DenoiseEval& e) {
    out << "  errors seeded      " << e.total_errors << '\n';
    out << "  eliminated         " << e.eliminated << " (" << fixed(e.eliminated_pct(), 3) << "%), by trimming "
        << e.eliminated_by_trimming << '\n';
    out << "  introduced         " << e.introduced << " (" << fixed(e.introduced_pct(), 3) << "%)\n";
    out << "  trimmed bases      " << e.trimmed_bases << " (" << fixed(e.trimmed_pct(), 2) << "%)\n";
    out << "  reads in/out       " << e.input_reads << " / " << e.output_reads << " (dropped " << e.dropped_reads
        << ")\n";
    out << "  mean output length " << fixed(e.mean_out_len, 2) << '\n';
}

json assembly_eval_json(const AssemblyEval& e) {
    return json{{"coverage_definition", "reference positions under a seed-anchored gapless contig alignment"},
                {"contigs_evaluated", e.contigs_evaluated},
                {"coverage_pct", e.coverage_pct},
                {"e_ge1", e.e_ge1},
                {"e_ge3", e.e_ge3},
                {"e_ge5", e.e_ge5}};
}

json stats_json(const ContigStats& s) {
    return json{{"longest", s.longest},     {"count_gt100", s.count_gt100}, {"sum_gt100", s.sum_gt100},
                {"count_gt10k", s.count_gt10k}, {"sum_gt10k", s.sum_gt10k},   {"mean_size", s.mean_size},
                {"n50", s.n50}};
}

void print_contig_table(std::ostream& out, const ContigStats& s, const std::optional<AssemblyEval>& e) {
    out << std::left << std::setw(10) << "longest" << std::setw(10) << "n>100" << std::setw(12) << "sum>100"
        << std::setw(10) << "n>10k" << std::setw(12) << "sum>10k" << std::setw(10) << "mean" << std::setw(10)
        << "N50";
    if (e) out << std::setw(10) << "cov%" << std::setw(6) << "E>=1" << std::setw(6) << "E>=3" << "E>=5";
    out << '\n';
    out << std::setw(10) << s.longest << std::setw(10) << s.count_gt100 << std::setw(12) << s.sum_gt100
        << std::setw(10) << s.count_gt10k << std::setw(12) << s.sum_gt10k << std::setw(10) << fixed(s.mean_size, 1)
        << std::setw(10) << s.n50;
    if (e) out << std::setw(10) << fixed(e->coverage_pct, 2) << std::setw(6) << e->e_ge1 << std::setw(6) << e->e_ge3 << e->e_ge5;
    out << std::right << '\n';
    if (e) out << "coverage% = reference positions under a seed-anchored gapless contig alignment\n";
}

void emit_report(const PipelineConfig& c, const json& report, const std::string& table, std::ostream& out,
                 OutputGuard& guard) {
    if (c.format == ReportFormat::structured) {
        out << report.dump(2) << '\n';
    } else {
        out << table;
    }
    if (!c.report.empty()) {
        auto f = guard.open(c.report);
        f << report.dump(2) << '\n';
        close_checked(f, c.report);
    }
}

std::uint64_t total_bases(const ReadSet& reads) {
    std::uint64_t n = 0;
    for (const auto& r : reads) n += r.seq.size();
    return n;
}

int cmd_simulate(const PipelineConfig& c, std::ostream& out, OutputGuard& guard) {
    const Genome genome = c.reference.empty() ? Genome{{"chr1", random_genome(c.genome_length, c.seed)}}
                                              : read_genome(c.reference);
    SimConfig sc{c.coverage, c.read_length, c.error_rate, c.seed};
    const Simulation sim = simulate_reads(genome, sc);

    auto f = guard.open(c.output);
    write_reads(f, sim.reads);
    close_checked(f, c.output);
    if (!c.truth.empty()) {
        auto t = guard.open(c.truth);
        write_truth(t, sim.truth);
        close_checked(t, c.truth);
    }
    if (!c.genome_out.empty()) {
        auto gf = guard.open(c.genome_out);
        write_fasta(gf, genome);
        close_checked(gf, c.genome_out);
    }
    std::uint64_t errors = 0;
    for (const auto& t : sim.truth.reads) errors += t.errors.size();
    out << "config: " << config_line(c) << '\n';
    out << "genome bases " << genome_length(genome) << ", reads " << sim.reads.size() << ", seeded errors " << errors
        << '\n';
    return 0;
}

int cmd_denoise(const PipelineConfig& c, std::ostream& out, OutputGuard& guard) {
    const RoundSchedule schedule = parse_schedule(effective_schedule(c), c.solid_threshold);
    const ReadSet reads = ingest(c.inputs, schedule.front().k);
    GroundTruth truth;
    if (!c.truth.empty()) {
        std::ifstream tf(c.truth);
        truth = read_truth(tf);
    }
    DenoiseOptions opt;
    opt.direction = c.forward_only ? DenoiseDirection::forward : DenoiseDirection::both;
    opt.threads = c.threads;
    const DenoiseOutput res = hybrid_denoise(reads, schedule, c.truth.empty() ? nullptr : &truth, opt);

    auto f = guard.open(c.output);
    write_reads(f, res.reads);
    close_checked(f, c.output);

    const std::uint64_t n = c.expected_genome_size ? c.expected_genome_size : total_bases(reads);
    const char* n_source = c.expected_genome_size ? "genome size" : "ingested bases";

    json report;
    report["config"] = config_json(c);
    std::ostringstream table;
    table << "config: " << config_line(c) << '\n';
    table << "round  k   g   t   reads_in   reads_out  dropped  substitutions  trimmed_bases  nodes\n";
    json rounds = json::array();
    for (std::size_t i = 0; i < res.report.rounds.size(); ++i) {
        const RoundReport& r = res.report.rounds[i];
        table << std::setw(5) << (i + 1) << std::setw(4) << r.spec.k << std::setw(4) << r.spec.g << std::setw(4)
              << r.spec.solid_threshold << std::setw(11) << r.reads_in << std::setw(12) << r.reads_out << std::setw(9)
              << r.dropped << std::setw(15) << r.substitutions << std::setw(15) << r.trimmed_bases << std::setw(7)
              << r.peak_nodes << '\n';
        json jr{{"k", r.spec.k},
                {"g", r.spec.g},
                {"solid_threshold", r.spec.solid_threshold},
                {"reads_in", r.reads_in},
                {"reads_out", r.reads_out},
                {"dropped", r.dropped},
                {"substitutions", r.substitutions},
                {"trimmed_bases", r.trimmed_bases},
                {"nodes", r.peak_nodes},
                {"memory", memory_json(model_for(r.spec.k, r.spec.g, n, r.peak_nodes, r.index_capacity))}};
        if (r.eval) jr["eval"] = denoise_eval_json(*r.eval);
        rounds.push_back(std::move(jr));
    }
    report["rounds"] = std::move(rounds);
    if (res.report.cumulative) {
        table << "cumulative accounting against the input:\n";
        print_denoise_eval(table, *res.report.cumulative);
        report["cumulative"] = denoise_eval_json(*res.report.cumulative);
    }
    for (const RoundReport& r : res.report.rounds)
        print_memory(table, model_for(r.spec.k, r.spec.g, n, r.peak_nodes, r.index_capacity), n_source);
    table << "wall time " << fixed(res.report.wall_seconds, 2) << " s\n";
    emit_report(c, report, table.str(), out, guard);
    return 0;
}

int cmd_assemble(const PipelineConfig& c, std::ostream& out, OutputGuard& guard) {
    const std::string sched_text = effective_schedule(c);
    const RoundSchedule schedule = sched_text.empty() ? RoundSchedule{} : parse_schedule(sched_text, c.solid_threshold);
    ReadSet reads = ingest(c.inputs, schedule.empty() ? c.k : std::min(c.k, schedule.front().k));
    std::optional<DenoiseReport> denoise_report;
    if (!schedule.empty()) {
        DenoiseOptions opt;
        opt.direction = c.forward_only ? DenoiseDirection::forward : DenoiseDirection::both;
        opt.threads = c.threads;
        DenoiseOutput d = hybrid_denoise(reads, schedule, nullptr, opt);
        reads = std::move(d.reads);
        denoise_report = std::move(d.report);
    }
    std::optional<Genome> reference;
    if (!c.reference.empty()) reference = read_genome(c.reference);

    AssemblyOptions ao;
    ao.graph = {c.k, c.g};
    ao.cleanup = {c.max_tip_span, c.max_search_depth, c.branch_cov_ratio, c.rs};
    ao.bfs = c.bfs;
    ao.rs = c.rs;
    ao.min_len = c.min_contig_len;
    ao.expected_genome_size = c.expected_genome_size;
    ao.hash_seed = c.seed;
    const AssemblyResult res = assemble_pipeline(reads, ao, reference ? &*reference : nullptr);

    auto f = guard.open(c.output);
    write_contigs_fasta(f, res.contigs);
    close_checked(f, c.output);

    const char* n_source = c.expected_genome_size ? "genome size" : reference ? "reference length" : "assembled length";
    json report;
    report["config"] = config_json(c);
    if (denoise_report) {
        json rounds = json::array();
        for (const auto& r : denoise_report->rounds)
            rounds.push_back({{"k", r.spec.k}, {"g", r.spec.g}, {"reads_out", r.reads_out},
                              {"substitutions", r.substitutions}, {"trimmed_bases", r.trimmed_bases},
                              {"nodes", r.peak_nodes}});
        report["denoise_rounds"] = std::move(rounds);
    }
    const auto& rep = res.report;
    report["graph"] = {{"nodes_built", rep.nodes_built},
                       {"nodes_final", rep.nodes_final},
                       {"dead_bits_cleared", rep.cleanup.dead_bits},
                       {"tip_nodes_removed", rep.cleanup.tips},
                       {"bubbles_merged", rep.cleanup.bubbles},
                       {"spurious_bits_cleared", rep.cleanup.spurious_bits},
                       {"branch_table_mb", static_cast<double>(rep.cleanup.branch_table_bytes) / 1e6}};
    report["contigs"] = stats_json(rep.stats);
    if (rep.eval) report["evaluation"] = assembly_eval_json(*rep.eval);
    report["memory"] = memory_json(rep.memory);

    std::ostringstream table;
    table << "config: " << config_line(c) << '\n';
    if (denoise_report)
        table << "denoised reads: " << reads.size() << " after " << denoise_report->rounds.size() << " round(s)\n";
    table << "nodes built " << rep.nodes_built << ", after cleanup " << rep.nodes_final << " (tips "
          << rep.cleanup.tips << ", bubbles " << rep.cleanup.bubbles << ", dead bits " << rep.cleanup.dead_bits
          << ", spurious bits " << rep.cleanup.spurious_bits << ")\n";
    print_contig_table(table, rep.stats, rep.eval);
    print_memory(table, rep.memory, n_source);
    if (rep.cleanup.branch_table_bytes)
        table << "  branch counters " << fixed(static_cast<double>(rep.cleanup.branch_table_bytes) / 1e6, 2)
              << " MB\n";
    table << "wall time " << fixed(rep.wall_seconds, 2) << " s\n";
    emit_report(c, report, table.str(), out, guard);
    return 0;
}

int cmd_evaluate(const PipelineConfig& c, std::ostream& out, OutputGuard& guard) {
    json report;
    report["config"] = config_json(c);
    std::ostringstream table;
    table << "config: " << config_line(c) << '\n';
    if (!c.denoised.empty()) {
        const ReadSet input = ingest(c.inputs, 1);
        const ReadSet output = parse_reads(read_text_file(c.denoised), c.denoised, 0);
        std::ifstream tf(c.truth);
        const DenoiseEval e = evaluate_denoising(input, read_truth(tf), output);
        print_denoise_eval(table, e);
        report["denoising"] = denoise_eval_json(e);
    }
    if (!c.contigs.empty()) {
        const Genome contigs = read_genome(c.contigs);
        std::vector<std::string> seqs;
        std::vector<Contig> as_contigs;
        for (const auto& chr : contigs) {
            seqs.push_back(chr.seq);
            as_contigs.push_back({chr.seq});
        }
        const AssemblyEval e = evaluate_assembly(seqs, read_genome(c.reference), 31, c.min_contig_len);
        const ContigStats s = contig_stats(as_contigs);
        print_contig_table(table, s, e);
        report["contigs"] = stats_json(s);
        report["evaluation"] = assembly_eval_json(e);
    }
    emit_report(c, report, table.str(), out, guard);
    return 0;
}

int cmd_stats(const PipelineConfig& c, std::ostream& out, OutputGuard& guard) {
    IngestStats is;
    const ReadSet reads = ingest(c.inputs, c.k, &is);
    SparseGraph graph = build_graph(reads, {c.k, c.g}, {c.expected_genome_size, c.seed});
    const std::uint64_t n = c.expected_genome_size ? c.expected_genome_size : is.bases;
    const MemoryEstimate m = memory_estimate(graph, n);
    json report;
    report["config"] = config_json(c);
    report["reads"] = {{"records", is.records}, {"reads", is.reads}, {"bases", is.bases},
                       {"short_fragments", is.short_fragments}};
    report["memory"] = memory_json(m);
    std::ostringstream table;
    table << "config: " << config_line(c) << '\n';
    table << "records " << is.records << ", reads " << is.reads << ", bases " << is.bases << ", short fragments "
          << is.short_fragments << '\n';
    table << "nodes " << graph.node_count() << '\n';
    print_memory(table, m, c.expected_genome_size ? "genome size" : "ingested bases");
    emit_report(c, report, table.str(), out, guard);
    return 0;
}

int cmd_dump_graph(const PipelineConfig& c, std::ostream& out, OutputGuard& guard) {
    const ReadSet reads = ingest(c.inputs, c.k);
    SparseGraph graph = build_graph(reads, {c.k, c.g}, {c.expected_genome_size, c.seed});
    remap_coverage(graph, reads);
    auto f = guard.open(c.output);
    write_graph(f, graph);
    close_checked(f, c.output);
    const std::uint64_t n = c.expected_genome_size ? c.expected_genome_size : total_bases(reads);
    out << "config: " << config_line(c) << '\n';
    out << "nodes " << graph.node_count() << '\n';
    print_memory(out, memory_estimate(graph, n), c.expected_genome_size ? "genome size" : "ingested bases");
    return 0;
}

}  // namespace

void PipelineConfig::validate() const {
    const auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    if (subcommand == "simulate") {
        need(genome_length > 0 || !reference.empty(), "simulate needs --genome-length or --reference");
        SimConfig{coverage, read_length, error_rate, seed}.validate();
        need(!output.empty(), "simulate needs --output");
        return;
    }
    need(threads >= 1, "--threads must be at least 1");
    if (subcommand == "denoise" || subcommand == "assemble") {
        need(solid_threshold >= 2, "--threshold must be at least 2");
        if (!effective_schedule(*this).empty()) parse_schedule(effective_schedule(*this), solid_threshold);
    }
    if (subcommand == "evaluate") {
        need(!denoised.empty() || !contigs.empty(), "evaluate needs --denoised or --contigs");
        if (!denoised.empty()) need(!inputs.empty() && !truth.empty(), "--denoised needs --input and --truth");
        if (!contigs.empty()) need(!reference.empty(), "--contigs needs --reference");
        return;
    }
    if (subcommand == "assemble" || subcommand == "stats" || subcommand == "dump-graph") {
        GraphParams{k, g}.validate();
        CleanupParams{max_tip_span, max_search_depth, branch_cov_ratio, rs}.validate();
    }
    if (subcommand == "denoise" || subcommand == "assemble" || subcommand == "stats" || subcommand == "dump-graph") {
        need(!inputs.empty(), "at least one --input is required");
        return;
    }
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
}

PipelineConfig parse_command_line(int argc, const char* const* argv) {
    PipelineConfig c;
    CLI::App app{"Sparse de Bruijn graph read correction and assembly"};
    build_app(app, c);
    app.parse(argc, argv);
    c.validate();
    return c;
}

int run(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    OutputGuard guard;
    try {
        config.validate();
        int rc = 0;
        if (config.subcommand == "simulate") {
            rc = cmd_simulate(config, out, guard);
        } else if (config.subcommand == "denoise") {
            rc = cmd_denoise(config, out, guard);
        } else if (config.subcommand == "assemble") {
            rc = cmd_assemble(config, out, guard);
        } else if (config.subcommand == "evaluate") {
            rc = cmd_evaluate(config, out, guard);
        } else if (config.subcommand == "stats") {
            rc = cmd_stats(config, out, guard);
        } else {
            rc = cmd_dump_graph(config, out, guard);
        }
        if (rc == 0) guard.commit();
        return rc;
    } catch (const std::exception& e) {
        err << "error (" << config.subcommand << "): " << e.what() << '\n';
        return 1;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    PipelineConfig c;
    CLI::App app{"Sparse de Bruijn graph read correction and assembly"};
    build_app(app, c);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        std::vector<std::string> extras = app.remaining();
        for (const auto* sub : app.get_subcommands())
            for (const auto& x : sub->remaining()) extras.push_back(x);
        if (!extras.empty()) {
            err << "unrecognized arguments:";
            for (const auto& x : extras) err << ' ' << x;
            err << '\n';
        }
        err << e.what() << '\n';
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return e.get_exit_code();
    }
    return run(c, out, err);
}

}  // namespace sparseasm
