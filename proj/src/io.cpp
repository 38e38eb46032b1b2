#include "asln/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

namespace asln::io {

namespace {

constexpr char kMagic[5] = {'A', 'S', 'L', 'N', '1'};

struct Header {
    std::uint8_t kind;
    std::uint8_t nl_tag;
    std::uint8_t src_tag;
    std::uint64_t seed;
    std::uint64_t ns, nf, nx, T;
};

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated container file");
    return v;
}

void write_header(std::ofstream& out, const Header& h, std::uint32_t sections) {
    out.write(kMagic, 5);
    put(out, h.kind);
    put(out, h.nl_tag);
    put(out, h.src_tag);
    put(out, h.seed);
    put(out, h.ns);
    put(out, h.nf);
    put(out, h.nx);
    put(out, h.T);
    put(out, sections);
}

Header read_header(std::ifstream& in, std::uint32_t& sections) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kMagic, 5) != 0)
        throw std::runtime_error("not an ASLN1 container");
    Header h;
    h.kind = get<std::uint8_t>(in);
    h.nl_tag = get<std::uint8_t>(in);
    h.src_tag = get<std::uint8_t>(in);
    h.seed = get<std::uint64_t>(in);
    h.ns = get<std::uint64_t>(in);
    h.nf = get<std::uint64_t>(in);
    h.nx = get<std::uint64_t>(in);
    h.T = get<std::uint64_t>(in);
    sections = get<std::uint32_t>(in);
    return h;
}

void write_section(std::ofstream& out, const char tag[4], const Matrix& m) {
    out.write(tag, 4);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) put(out, m(i, j));
}

Matrix read_section(std::ifstream& in, std::string& tag) {
    char raw[4];
    in.read(raw, 4);
    if (!in) throw std::runtime_error("truncated container file");
    tag.assign(raw, 4);
    const auto rows = static_cast<Index>(get<std::uint64_t>(in));
    const auto cols = static_cast<Index>(get<std::uint64_t>(in));
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = get<double>(in);
    return m;
}

std::uint8_t nl_tag(Nonlinearity nl) { return static_cast<std::uint8_t>(nl); }
std::uint8_t src_tag(SourceKind s) { return static_cast<std::uint8_t>(s); }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

}  // namespace

void write_process(const GenerativeProcess& p, const std::string& path) {
    auto out = open_out(path);
    Header h{0, nl_tag(p.nonlinearity), src_tag(p.source.kind), p.seed,
             static_cast<std::uint64_t>(p.ns), static_cast<std::uint64_t>(p.nf),
             static_cast<std::uint64_t>(p.nx), 0};
    write_header(out, h, 3);
    write_section(out, "AMAT", p.A);
    write_section(out, "AOFF", p.offset);
    write_section(out, "BMAT", p.B);
}

GenerativeProcess read_process(const std::string& path) {
    auto in = open_in(path);
    std::uint32_t sections = 0;
    const Header h = read_header(in, sections);
    if (h.kind != 0) throw std::runtime_error("container does not hold a process");
    GenerativeProcess p;
    p.ns = static_cast<Index>(h.ns);
    p.nf = static_cast<Index>(h.nf);
    p.nx = static_cast<Index>(h.nx);
    p.nonlinearity = static_cast<Nonlinearity>(h.nl_tag);
    p.source = SourceDistribution::make(static_cast<SourceKind>(h.src_tag));
    p.seed = h.seed;
    std::string tag;
    for (std::uint32_t i = 0; i < sections; ++i) {
        const Matrix m = read_section(in, tag);
        if (tag == "AMAT") p.A = m;
        else if (tag == "AOFF") p.offset = m;
        else if (tag == "BMAT") p.B = m;
        else throw std::runtime_error("unexpected section " + tag);
    }
    return p;
}

void write_batch(const GenerativeProcess& p, const SampleBatch& b, const std::string& path) {
    auto out = open_out(path);
    Header h{1, nl_tag(p.nonlinearity), src_tag(p.source.kind), p.seed,
             static_cast<std::uint64_t>(p.ns), static_cast<std::uint64_t>(p.nf),
             static_cast<std::uint64_t>(p.nx), static_cast<std::uint64_t>(b.X.rows())};
    write_header(out, h, 4);
    write_section(out, "SMAT", b.S);
    write_section(out, "FMAT", b.F);
    write_section(out, "XMAT", b.X);
    write_section(out, "MEAN", b.input_mean);
}

SampleBatch read_batch(const std::string& path) {
    auto in = open_in(path);
    std::uint32_t sections = 0;
    const Header h = read_header(in, sections);
    if (h.kind != 1) throw std::runtime_error("container does not hold a batch");
    SampleBatch b;
    std::string tag;
    for (std::uint32_t i = 0; i < sections; ++i) {
        const Matrix m = read_section(in, tag);
        if (tag == "SMAT") b.S = m;
        else if (tag == "FMAT") b.F = m;
        else if (tag == "XMAT") b.X = m;
        else if (tag == "MEAN") b.input_mean = m;
        else throw std::runtime_error("unexpected section " + tag);
    }
    return b;
}

void write_weights(const encoders::PcaEncoder& pca, const encoders::IcaEncoder& ica,
                   const std::string& path) {
    auto out = open_out(path);
    Header h{2, nl_tag(ica.g), 0, 0, static_cast<std::uint64_t>(ica.separation.rows()), 0,
             static_cast<std::uint64_t>(pca.whitening.cols()), 0};
    write_header(out, h, 4);
    write_section(out, "WPCA", pca.whitening);
    write_section(out, "MEAN", pca.input_mean);
    write_section(out, "EIGV", pca.eigenvalues);
    write_section(out, "WICA", ica.separation);
}

void read_weights(const std::string& path, encoders::PcaEncoder& pca,
                  encoders::IcaEncoder& ica) {
    auto in = open_in(path);
    std::uint32_t sections = 0;
    const Header h = read_header(in, sections);
    if (h.kind != 2) throw std::runtime_error("container does not hold weights");
    ica.g = static_cast<Nonlinearity>(h.nl_tag);
    std::string tag;
    for (std::uint32_t i = 0; i < sections; ++i) {
        const Matrix m = read_section(in, tag);
        if (tag == "WPCA") pca.whitening = m;
        else if (tag == "MEAN") pca.input_mean = m;
        else if (tag == "EIGV") pca.eigenvalues = m;
        else if (tag == "WICA") ica.separation = m;
        else throw std::runtime_error("unexpected section " + tag);
    }
    // Reconstruct the eigenvector block from the whitening map.
    if (pca.eigenvalues.size() > 0 && pca.whitening.size() > 0)
        pca.principal_vectors =
            (pca.eigenvalues.array().sqrt().matrix().asDiagonal() * pca.whitening).transpose();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace asln::io
