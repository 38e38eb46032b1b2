#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asln/harness.hpp"
#include "asln/io.hpp"
#include "asln/svg.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace asln;
using namespace asln::harness;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ExperimentConfig tiny_config() {
    ExperimentConfig c;
    c.ns_values = {3};
    c.nx_values = {12, 24};
    c.nonlinearities = {Nonlinearity::Sign, Nonlinearity::Identity};
    c.samples = 600;
    c.seeds = {1};
    c.cascade = true;
    c.encoder.epochs_ica = 20;
    c.theory.eq12 = true;
    c.theory.eigenvalue_ratio = true;
    c.threads = 1;
    return c;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("toml parser handles the supported subset") {
    std::istringstream in(R"(# comment
title = "top level"
[grid]
ns = [10, 30]          # trailing comment
samples = 20000
ratio = 1.5
flag = true
name = "sign"
empty_note = "a # inside"
)");
    const auto table = parse_toml(in);
    CHECK(table.at("title").str == "top level");
    CHECK(table.at("grid.ns").array.size() == 2);
    CHECK(table.at("grid.ns").array[1].as_int() == 30);
    CHECK(table.at("grid.samples").as_int() == 20000);
    CHECK(table.at("grid.ratio").as_double() == doctest::Approx(1.5));
    CHECK(table.at("grid.flag").boolean);
    CHECK(table.at("grid.name").str == "sign");
    CHECK(table.at("grid.empty_note").str == "a # inside");
}

TEST_CASE("toml parser rejects malformed input") {
    auto reject = [](const char* text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_toml(in), config_error);
    };
    reject("[grid\nns = 1\n");
    reject("novalue\n");
    reject("x = [1, 2\n");
    reject("x = 12abc\n");
    reject(" = 3\n");
}

TEST_CASE("config mapping and validation") {
    std::istringstream in(R"(
[grid]
ns = [4]
nx = [16]
nonlinearity = ["sign", "relu"]
source = "uniform"
samples = 500
seeds = [7, 8]
[encoder]
mode = "oja"
eta_pca = 0.002
[theory]
eq12 = true
)");
    const auto config = config_from_toml(parse_toml(in));
    CHECK(config.ns_values == std::vector<Index>{4});
    CHECK(config.nx_values == std::vector<Index>{16});
    CHECK(config.nonlinearities.size() == 2);
    CHECK(config.encoder.mode == EncoderOptions::Mode::Oja);
    CHECK(config.encoder.eta_pca == doctest::Approx(0.002));
    CHECK(config.seeds == std::vector<std::uint64_t>{7, 8});
    CHECK(config.theory.eq12);

    ExperimentConfig bad = tiny_config();
    bad.nx_values = {2};  // smaller than ns
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = tiny_config();
    bad.seeds.clear();
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = tiny_config();
    bad.nx_over_ns = {10};  // both nx and nx_over_ns set
    CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("run_grid cardinality: 2x2 grid, one seed, four records") {
    const auto records = run_grid(tiny_config());
    CHECK(records.size() == 4);
    for (const auto& r : records) {
        INFO("cell ", r.cell, " status ", r.status);
        CHECK(r.ok());
    }
    // order is stable by (cell, seed)
    for (std::size_t i = 0; i < records.size(); ++i)
        CHECK(records[i].cell == static_cast<Index>(i));
}

TEST_CASE("identical configs give byte-identical CSV, independent of threads") {
    TempDir dir("asln_csv_det");
    const auto a = run_grid(tiny_config());
    emit_csv(a, dir.file("a.csv"));
    const auto b = run_grid(tiny_config());
    emit_csv(b, dir.file("b.csv"));
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));

    auto threaded = tiny_config();
    threaded.threads = 3;
    const auto c = run_grid(threaded);
    emit_csv(c, dir.file("c.csv"));
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("c.csv")));
}

TEST_CASE("seed isolation: adding a seed leaves existing records unchanged") {
    auto base = tiny_config();
    base.seeds = {1};
    auto extended = tiny_config();
    extended.seeds = {1, 9};

    const auto a = run_grid(base);
    const auto b = run_grid(extended);
    REQUIRE(b.size() == 2 * a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& lhs = a[i];
        const auto& rhs = b[2 * i];  // seed 1 comes first within each cell
        CHECK(lhs.seed == rhs.seed);
        CHECK(lhs.metrics.bss_mse == rhs.metrics.bss_mse);
        CHECK(lhs.metrics.subspace_error == rhs.metrics.subspace_error);
        CHECK(lhs.eq12_mse == rhs.eq12_mse);
        CHECK(lhs.eigenvalue_ratio == rhs.eigenvalue_ratio);
    }
}

TEST_CASE("emit_csv: line count, re-emission, exact float round trip") {
    TempDir dir("asln_csv_roundtrip");
    const auto records = run_grid(tiny_config());
    emit_csv(records, dir.file("r.csv"));
    const std::string text = slurp(dir.file("r.csv"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);  // header + 4 records

    emit_csv(records, dir.file("r2.csv"));
    CHECK(text == slurp(dir.file("r2.csv")));

    // parse back the bss_mse column (index 11) and compare bitwise
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    for (const auto& r : records) {
        REQUIRE(std::getline(lines, line));
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() == 18);
        if (!std::isnan(r.metrics.bss_mse))
            CHECK(std::stod(fields[11]) == r.metrics.bss_mse);
        if (!std::isnan(r.eq12_mse)) CHECK(std::stod(fields[15]) == r.eq12_mse);
    }
    CHECK_THROWS_AS(emit_csv({}, dir.file("empty.csv")), config_error);
}

TEST_CASE("failed cells are recorded and the run continues") {
    auto config = tiny_config();
    // oja with an absurd learning rate diverges; failures must not abort
    config.encoder.mode = EncoderOptions::Mode::Oja;
    config.encoder.eta_pca = 1e5;
    const auto records = run_grid(config);
    CHECK(records.size() == 4);
    int failed = 0;
    for (const auto& r : records)
        if (!r.ok()) ++failed;
    CHECK(failed == 4);
    TempDir dir("asln_failed");
    emit_csv(records, dir.file("f.csv"));  // still serializable
}

TEST_CASE("shipped preset configs match the built-in preset tables") {
    for (const std::string name : {"fig2", "fig3a", "fig3d", "fig4"}) {
        const auto built_in = preset_config(name, false);
        const auto from_file =
            load_config(std::string(ASLN_CONFIG_DIR) + "/" + name + ".toml");
        CHECK(from_file.ns_values == built_in.ns_values);
        CHECK(from_file.nx_values == built_in.nx_values);
        CHECK(from_file.nx_over_ns == built_in.nx_over_ns);
        CHECK(from_file.samples == built_in.samples);
        CHECK(from_file.seeds == built_in.seeds);
        CHECK(from_file.cascade == built_in.cascade);
        CHECK(from_file.encoder.mode == built_in.encoder.mode);
        CHECK(from_file.encoder.epochs_pca == built_in.encoder.epochs_pca);
        CHECK(from_file.theory.eq11 == built_in.theory.eq11);
        CHECK(from_file.theory.eq12 == built_in.theory.eq12);
        CHECK(from_file.theory.eigenvalue_ratio == built_in.theory.eigenvalue_ratio);
        CHECK(from_file.theory.perturbation == built_in.theory.perturbation);
    }
    CHECK_THROWS_AS(preset_config("fig9", false), config_error);
}

TEST_CASE("binary containers round-trip exactly") {
    TempDir dir("asln_io");
    const auto p = build_process(3, 20, 15, Nonlinearity::Relu,
                                 SourceDistribution::make(SourceKind::TruncatedNormal), 77);
    io::write_process(p, dir.file("p.bin"));
    const auto p2 = io::read_process(dir.file("p.bin"));
    CHECK(p2.A == p.A);
    CHECK(p2.offset == p.offset);
    CHECK(p2.B == p.B);
    CHECK(p2.nonlinearity == p.nonlinearity);
    CHECK(p2.source.kind == p.source.kind);
    CHECK(p2.seed == p.seed);

    const auto b = sample_batch(p, 50, 79);
    io::write_batch(p, b, dir.file("b.bin"));
    const auto b2 = io::read_batch(dir.file("b.bin"));
    CHECK(b2.S == b.S);
    CHECK(b2.F == b.F);
    CHECK(b2.X == b.X);
    CHECK(b2.input_mean == b.input_mean);

    const auto enc = encoders::pca_whiten_batch(b.X, 3);
    encoders::IcaEncoder ica{Matrix::Identity(3, 3), Nonlinearity::Cube};
    io::write_weights(enc, ica, dir.file("w.bin"));
    encoders::PcaEncoder enc2;
    encoders::IcaEncoder ica2;
    io::read_weights(dir.file("w.bin"), enc2, ica2);
    CHECK(enc2.whitening == enc.whitening);
    CHECK(enc2.input_mean == enc.input_mean);
    CHECK(ica2.separation == ica.separation);
    CHECK(ica2.g == Nonlinearity::Cube);

    CHECK_THROWS(io::read_process(dir.file("b.bin")));
}

TEST_CASE("svg chart is written and well-formed") {
    TempDir dir("asln_svg");
    const auto records = run_grid(tiny_config());
    svg::write_records_chart(records, dir.file("chart.svg"), "tiny");
    const std::string text = slurp(dir.file("chart.svg"));
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(text.find("polyline") != std::string::npos);
}

TEST_CASE("resolve_threads prefers the explicit request") {
    CHECK(resolve_threads(4) == 4);
    CHECK(resolve_threads(0) >= 1);
}
