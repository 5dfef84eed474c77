#include "gti/index_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

namespace gti {

namespace {

    class Writer {
      public:
        void u8(std::uint8_t v) { m_bytes.push_back(v); }
        void u32(std::uint32_t v)
        {
            for (int i = 0; i < 4; ++i) {
                m_bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
            }
        }
        void u64(std::uint64_t v)
        {
            for (int i = 0; i < 8; ++i) {
                m_bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
            }
        }
        void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
        void raw(char const* data, std::size_t n) { m_bytes.insert(m_bytes.end(), data, data + n); }
        auto take() -> std::vector<std::uint8_t> { return std::move(m_bytes); }

      private:
        std::vector<std::uint8_t> m_bytes;
    };

    class Reader {
      public:
        explicit Reader(std::vector<std::uint8_t> const& bytes) : m_bytes(bytes) {}

        void section(std::string name) { m_section = std::move(name); }
        [[nodiscard]] auto section() const -> std::string const& { return m_section; }
        [[nodiscard]] auto done() const -> bool { return m_pos == m_bytes.size(); }

        auto u8() -> std::uint8_t
        {
            need(1);
            return m_bytes[m_pos++];
        }
        auto u32() -> std::uint32_t
        {
            need(4);
            std::uint32_t v = 0;
            for (int i = 0; i < 4; ++i) {
                v |= static_cast<std::uint32_t>(m_bytes[m_pos++]) << (8 * i);
            }
            return v;
        }
        auto u64() -> std::uint64_t
        {
            need(8);
            std::uint64_t v = 0;
            for (int i = 0; i < 8; ++i) {
                v |= static_cast<std::uint64_t>(m_bytes[m_pos++]) << (8 * i);
            }
            return v;
        }
        auto f64() -> double { return std::bit_cast<double>(u64()); }

        /// Element count that must fit in the remaining bytes at `min_size` bytes each.
        auto count(std::size_t min_size) -> std::uint64_t
        {
            auto n = u64();
            if (min_size > 0 && n > (m_bytes.size() - m_pos) / min_size) {
                fail("count " + std::to_string(n) + " exceeds remaining file size");
            }
            return n;
        }

        [[noreturn]] void fail(std::string const& what) const { throw ParseError(m_section, what); }

      private:
        void need(std::size_t n) const
        {
            if (m_bytes.size() - m_pos < n) {
                fail("unexpected end of file");
            }
        }

        std::vector<std::uint8_t> const& m_bytes;
        std::size_t m_pos = 0;
        std::string m_section = "magic";
    };

    constexpr std::size_t kRecordBytes = 4 + 4 + 8 + 8;
    constexpr std::size_t kBlockBytes = 8 + 8 + 4 + 8 + 8;
    constexpr std::size_t kTermBytes = 4 + 8 + 8 + 8 + 8;

    auto trim_cr(std::string& line)
    {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
    }

    template <typename T>
    auto parse_number(std::string_view s, T& out) -> bool
    {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    }

}  // namespace

auto encode_index(DualIndex const& index) -> std::vector<std::uint8_t>
{
    Writer w;
    w.raw(kIndexMagic, sizeof(kIndexMagic));
    w.u32(kIndexFormatVersion);

    w.u64(index.num_docs);
    w.f64(index.avg_doc_length);
    w.f64(index.bm25.k1);
    w.f64(index.bm25.b);
    w.u32(index.block_size);
    w.u8(static_cast<std::uint8_t>(index.alignment.fill));
    w.u8(index.alignment.include_learned_zero ? 1 : 0);
    w.f64(index.alignment_stats.mean_bm25);
    w.f64(index.alignment_stats.mean_learned);
    w.f64(index.alignment_stats.scale_ratio);
    w.u64(index.alignment_stats.filled_count);

    w.u64(index.doc_lengths.size());
    for (auto len : index.doc_lengths) {
        w.u32(len);
    }

    w.u64(index.lists.size());
    for (auto const& list : index.lists) {
        w.u32(list.term);
        w.u64(list.records.size());
        w.u64(list.blocks.size());
        w.f64(list.max_bm25);
        w.f64(list.max_learned);
    }

    for (auto const& list : index.lists) {
        for (auto const& r : list.records) {
            w.u32(r.doc);
            w.u32(r.tf);
            w.f64(r.bm25);
            w.f64(r.learned);
        }
    }

    for (auto const& list : index.lists) {
        for (auto const& b : list.blocks) {
            w.u64(b.first);
            w.u64(b.last);
            w.u32(b.max_doc);
            w.f64(b.max_bm25);
            w.f64(b.max_learned);
        }
    }
    return w.take();
}

auto decode_index(std::vector<std::uint8_t> const& bytes) -> DualIndex
{
    Reader r(bytes);
    char magic[4];
    for (char& c : magic) {
        c = static_cast<char>(r.u8());
    }
    if (std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0) {
        r.fail("bad magic bytes");
    }
    r.section("version");
    auto version = r.u32();
    if (version != kIndexFormatVersion) {
        throw VersionError(version, kIndexFormatVersion);
    }

    DualIndex index;
    r.section("header");
    index.num_docs = r.u64();
    index.avg_doc_length = r.f64();
    index.bm25.k1 = r.f64();
    index.bm25.b = r.f64();
    index.block_size = r.u32();
    if (index.block_size == 0) {
        r.fail("block size is zero");
    }
    auto fill = r.u8();
    if (fill > static_cast<std::uint8_t>(FillMode::Scaled)) {
        r.fail("unknown alignment mode " + std::to_string(fill));
    }
    index.alignment.fill = static_cast<FillMode>(fill);
    auto keep = r.u8();
    if (keep > 1) {
        r.fail("invalid learned-zero flag");
    }
    index.alignment.include_learned_zero = keep == 1;
    index.alignment_stats.mean_bm25 = r.f64();
    index.alignment_stats.mean_learned = r.f64();
    index.alignment_stats.scale_ratio = r.f64();
    index.alignment_stats.filled_count = r.u64();

    r.section("doc lengths");
    auto ndocs = r.count(4);
    if (ndocs != index.num_docs) {
        r.fail("length table size does not match document count");
    }
    index.doc_lengths.resize(ndocs);
    for (auto& len : index.doc_lengths) {
        len = r.u32();
    }

    r.section("term table");
    auto nterms = r.count(kTermBytes);
    index.lists.resize(nterms);
    std::vector<std::uint64_t> num_blocks(nterms);
    for (std::size_t i = 0; i < nterms; ++i) {
        auto& list = index.lists[i];
        list.term = r.u32();
        if (i > 0 && list.term <= index.lists[i - 1].term) {
            r.fail("term ids not strictly increasing");
        }
        auto nrec = r.u64();
        num_blocks[i] = r.u64();
        if (nrec > bytes.size() / kRecordBytes || num_blocks[i] > bytes.size() / kBlockBytes) {
            r.fail("posting count exceeds file size");
        }
        list.records.resize(nrec);
        list.max_bm25 = r.f64();
        list.max_learned = r.f64();
    }

    r.section("postings");
    for (auto& list : index.lists) {
        for (std::size_t j = 0; j < list.records.size(); ++j) {
            auto& rec = list.records[j];
            rec.doc = r.u32();
            rec.tf = r.u32();
            rec.bm25 = r.f64();
            rec.learned = r.f64();
            if (rec.doc >= index.num_docs) {
                r.fail("doc id out of range in term " + std::to_string(list.term));
            }
            if (j > 0 && rec.doc <= list.records[j - 1].doc) {
                r.fail("doc ids not increasing in term " + std::to_string(list.term));
            }
        }
    }

    r.section("block tables");
    for (std::size_t i = 0; i < nterms; ++i) {
        auto& list = index.lists[i];
        list.blocks.resize(num_blocks[i]);
        std::uint64_t expect = 0;
        for (auto& b : list.blocks) {
            b.first = r.u64();
            b.last = r.u64();
            b.max_doc = r.u32();
            b.max_bm25 = r.f64();
            b.max_learned = r.f64();
            if (b.first != expect || b.last < b.first || b.last >= list.records.size()) {
                r.fail("block ranges do not partition term " + std::to_string(list.term));
            }
            expect = b.last + 1;
        }
        if (expect != list.records.size()) {
            r.fail("block ranges do not cover term " + std::to_string(list.term));
        }
    }
    r.section("trailer");
    if (!r.done()) {
        r.fail("trailing bytes after block tables");
    }
    return index;
}

void serialize_index(DualIndex const& index, std::filesystem::path const& path)
{
    auto bytes = encode_index(index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<char const*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

auto load_index(std::filesystem::path const& path) -> DualIndex
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes(
        (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_index(bytes);
}

auto read_corpus(std::istream& in) -> Corpus
{
    Corpus corpus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        trim_cr(line);
        if (line.empty()) {
            continue;
        }
        auto where = "corpus line " + std::to_string(lineno);
        auto tab = line.find('\t');
        std::string_view id_part = std::string_view(line).substr(0, tab);
        CorpusDocument doc;
        if (!parse_number(id_part, doc.id)) {
            throw ParseError(where, "bad doc id '" + std::string(id_part) + "'");
        }
        if (tab != std::string::npos) {
            std::istringstream fields(line.substr(tab + 1));
            std::string tok;
            while (fields >> tok) {
                auto c1 = tok.find(':');
                auto c2 = c1 == std::string::npos ? c1 : tok.find(':', c1 + 1);
                if (c2 == std::string::npos) {
                    throw ParseError(where, "expected term:tf:weight, got '" + tok + "'");
                }
                std::string_view sv(tok);
                CorpusPosting p;
                if (!parse_number(sv.substr(0, c1), p.term)
                    || !parse_number(sv.substr(c1 + 1, c2 - c1 - 1), p.tf)
                    || !parse_number(sv.substr(c2 + 1), p.learned)) {
                    throw ParseError(where, "malformed posting '" + tok + "'");
                }
                doc.postings.push_back(p);
            }
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

auto read_corpus(std::filesystem::path const& path) -> Corpus
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open corpus " + path.string());
    }
    return read_corpus(in);
}

void write_corpus(std::ostream& out, Corpus const& corpus)
{
    auto old = out.precision(17);
    for (auto const& doc : corpus) {
        out << doc.id << '\t';
        bool first = true;
        for (auto const& p : doc.postings) {
            if (!first) {
                out << ' ';
            }
            first = false;
            out << p.term << ':' << p.tf << ':' << p.learned;
        }
        out << '\n';
    }
    out.precision(old);
}

}  // namespace gti
