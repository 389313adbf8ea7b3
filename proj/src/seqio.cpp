#include "sparseasm/seqio.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sparseasm {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        line = text_.substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = end + 1;
        ++line_no_;
        return true;
    }
    std::size_t line_no() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

struct Header {
    std::string name;
    std::uint32_t clip_left = 0;
    std::uint32_t clip_right = 0;
};

Header parse_header(std::string_view line) {
    Header h;
    line.remove_prefix(1);
    std::istringstream in{std::string(line)};
    in >> h.name;
    std::string tok;
    while (in >> tok) {
        if (tok.rfind("trim=", 0) != 0) continue;
        const auto colon = tok.find(':');
        if (colon == std::string::npos) continue;
        h.clip_left = static_cast<std::uint32_t>(std::stoul(tok.substr(5, colon - 5)));
        h.clip_right = static_cast<std::uint32_t>(std::stoul(tok.substr(colon + 1)));
    }
    return h;
}

bool is_acgt(char c) { return c == 'A' || c == 'C' || c == 'G' || c == 'T'; }

void emit_record(const Header& h, std::string seq, std::string_view qual, int min_fragment, ReadSet& out,
                 IngestStats& stats) {
    ++stats.records;
    std::transform(seq.begin(), seq.end(), seq.begin(), [](unsigned char c) { return std::toupper(c); });
    if (std::all_of(seq.begin(), seq.end(), is_acgt)) {
        if (seq.size() < static_cast<std::size_t>(min_fragment)) {
            ++stats.short_fragments;
            return;
        }
        stats.bases += seq.size();
        ++stats.reads;
        out.push_back({h.name, std::move(seq), std::string(qual), h.clip_left, h.clip_right});
        return;
    }
    int part = 0;
    std::size_t i = 0;
    while (i < seq.size()) {
        while (i < seq.size() && !is_acgt(seq[i])) ++i;
        std::size_t j = i;
        while (j < seq.size() && is_acgt(seq[j])) ++j;
        if (j > i) {
            if (j - i < static_cast<std::size_t>(min_fragment)) {
                ++stats.short_fragments;
            } else {
                ++part;
                ++stats.reads;
                stats.bases += j - i;
                out.push_back({h.name + "." + std::to_string(part), seq.substr(i, j - i),
                               qual.empty() ? std::string() : std::string(qual.substr(i, j - i)), 0, 0});
            }
        }
        i = j;
    }
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::string read_text_file(const std::string& path) {
    if (ends_with(path, ".gz")) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw std::runtime_error("cannot open " + path);
        std::string text;
        char buf[1 << 16];
        int n = 0;
        while ((n = gzread(f, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(n));
        const bool bad = n < 0;
        gzclose(f);
        if (bad) throw std::runtime_error("corrupt gzip stream in " + path);
        return text;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ReadSet parse_reads(std::string_view text, const std::string& source, int min_fragment, IngestStats* stats) {
    IngestStats local;
    IngestStats& st = stats ? *stats : local;
    ReadSet out;
    LineReader lines(text);
    std::string_view line;

    while (lines.next(line) && line.empty()) {
    }
    if (line.empty()) return out;

    if (line.front() == '>') {
        Header h = parse_header(line);
        std::string seq;
        while (lines.next(line)) {
            if (!line.empty() && line.front() == '>') {
                emit_record(h, std::move(seq), {}, min_fragment, out, st);
                h = parse_header(line);
                seq.clear();
            } else {
                seq.append(line);
            }
        }
        emit_record(h, std::move(seq), {}, min_fragment, out, st);
        return out;
    }
    if (line.front() != '@') fail(source, lines.line_no(), "expected '>' or '@' at start of record");

    while (true) {
        const std::size_t at = lines.line_no();
        const Header h = parse_header(line);
        std::string_view seq;
        std::string_view plus;
        std::string_view qual;
        if (!lines.next(seq) || !lines.next(plus) || !lines.next(qual))
            fail(source, at, "truncated FASTQ record '" + h.name + "'");
        if (plus.empty() || plus.front() != '+')
            fail(source, at + 2, "missing '+' separator in FASTQ record '" + h.name + "'");
        if (qual.size() != seq.size())
            fail(source, at + 3, "quality length differs from sequence length in '" + h.name + "'");
        emit_record(h, std::string(seq), qual, min_fragment, out, st);
        do {
            if (!lines.next(line)) return out;
        } while (line.empty());
        if (line.front() != '@') fail(source, lines.line_no(), "expected '@' at start of FASTQ record");
    }
}

ReadSet ingest(const std::vector<std::string>& paths, int min_fragment, IngestStats* stats) {
    ReadSet all;
    for (const auto& p : paths) {
        ReadSet part = parse_reads(read_text_file(p), p, min_fragment, stats);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    if (all.empty()) throw std::runtime_error("no usable reads in input");
    return all;
}

Genome parse_fasta_genome(std::string_view text, const std::string& source) {
    Genome genome;
    LineReader lines(text);
    std::string_view line;
    while (lines.next(line)) {
        if (line.empty()) continue;
        if (line.front() == '>') {
            genome.push_back({parse_header(line).name, {}});
            continue;
        }
        if (genome.empty()) fail(source, lines.line_no(), "sequence before first FASTA header");
        auto& s = genome.back().seq;
        for (char c : line) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (genome.empty()) throw std::runtime_error(source + ": no FASTA records");
    return genome;
}

Genome read_genome(const std::string& path) { return parse_fasta_genome(read_text_file(path), path); }

void write_fasta(std::ostream& out, const Genome& genome, std::size_t width) {
    for (const auto& c : genome) {
        out << '>' << c.name << '\n';
        for (std::size_t p = 0; p < c.seq.size(); p += width) out << c.seq.substr(p, width) << '\n';
    }
}

void write_reads(std::ostream& out, const ReadSet& reads) {
    const bool fastq = std::all_of(reads.begin(), reads.end(), [](const ReadRecord& r) {
        return !r.qual.empty() || r.seq.empty();
    });
    for (const auto& r : reads) {
        out << (fastq ? '@' : '>') << r.id;
        if (r.clip_left || r.clip_right) out << " trim=" << r.clip_left << ':' << r.clip_right;
        out << '\n' << r.seq << '\n';
        if (fastq) out << "+\n" << r.qual << '\n';
    }
}

}  // namespace sparseasm
