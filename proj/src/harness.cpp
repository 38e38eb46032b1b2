#include "asln/harness.hpp"

#include "asln/io.hpp"
#include "asln/spectral.hpp"
#include "asln/svg.hpp"
#include "asln/theory.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace asln::harness {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Cell {
    Index index;
    Index ns, nx;
    Nonlinearity nl;
    SourceKind source;
    EncoderOptions::Mode mode;
};

std::vector<Cell> expand_cells(const ExperimentConfig& config) {
    std::vector<Index> nx_for_ns;
    std::vector<Cell> cells;
    Index index = 0;
    std::vector<EncoderOptions::Mode> modes;
    if (config.cascade && config.encoder.mode == EncoderOptions::Mode::Both)
        modes = {EncoderOptions::Mode::Batch, EncoderOptions::Mode::Oja};
    else
        modes = {config.encoder.mode == EncoderOptions::Mode::Oja ? EncoderOptions::Mode::Oja
                                                                  : EncoderOptions::Mode::Batch};
    for (Index ns : config.ns_values) {
        std::vector<Index> nxs = config.nx_values;
        if (!config.nx_over_ns.empty()) {
            nxs.clear();
            for (double m : config.nx_over_ns)
                nxs.push_back(static_cast<Index>(std::llround(m * static_cast<double>(ns))));
        }
        for (Index nx : nxs)
            for (Nonlinearity nl : config.nonlinearities)
                for (SourceKind source : config.sources)
                    for (auto mode : modes) cells.push_back({index++, ns, nx, nl, source, mode});
    }
    return cells;
}

ExperimentRecord run_cell(const ExperimentConfig& config, const Cell& cell,
                          std::uint64_t seed) {
    ExperimentRecord rec;
    rec.cell = cell.index;
    rec.seed = seed;
    rec.ns = cell.ns;
    rec.nf = cell.nx;
    rec.nx = cell.nx;
    rec.samples = config.samples;
    rec.nonlinearity = cell.nl;
    rec.source = cell.source;
    rec.mode = cell.mode;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto& th = config.theory;
        const bool need_gt = th.eq11 || th.eigenvalue_ratio || th.perturbation;
        const auto process = build_process(cell.ns, cell.nx, cell.nx, cell.nl,
                                           SourceDistribution::make(cell.source), seed);
        const std::uint64_t batch_seed = Rng::derive(seed, "batch");

        Matrix X, S;
        GroundTruth gt;
        if (need_gt) {
            const SampleBatch batch = sample_batch(process, config.samples, batch_seed);
            gt = ground_truth_decomposition(process, batch);
            X = batch.X;
            S = batch.S;
        } else {
            InputSample sample = sample_inputs(process, config.samples, batch_seed);
            X = std::move(sample.X);
            S = std::move(sample.S);
        }

        // Linear inversion (or plain PCA when no cascade is requested).
        Matrix principal;  // nx x ns subspace actually used by this record
        if (config.cascade) {
            encoders::CascadeConfig cc;
            cc.mode = cell.mode == EncoderOptions::Mode::Oja
                          ? encoders::CascadeConfig::Mode::Oja
                          : encoders::CascadeConfig::Mode::Batch;
            cc.oja.eta = config.encoder.eta_pca;
            cc.oja.epochs = config.encoder.epochs_pca;
            cc.oja.batch_size = config.encoder.batch_size;
            cc.oja.seed = Rng::derive(seed, "oja");
            cc.ica.eta = config.encoder.eta_ica;
            cc.ica.epochs = config.encoder.epochs_ica;
            cc.ica.batch_size = config.encoder.batch_size;
            cc.ica.g = config.encoder.g;
            cc.ica.seed = Rng::derive(seed, "ica");
            cc.train_fraction = config.encoder.train_fraction;

            const Matrix* reference = need_gt ? &gt.U_L : nullptr;
            auto result = encoders::cascade(X, cell.ns, cc, reference);
            rec.pca_log = std::move(result.pca_log);
            rec.ica_log = std::move(result.ica_log);
            principal = result.pca.principal_vectors;

            // Held-out evaluation on the rows the encoders never saw.
            const Index t_train = std::max<Index>(
                2, static_cast<Index>(std::floor(cc.train_fraction * X.rows())));
            const Index t_eval = X.rows() - t_train;
            const Matrix u_eval = t_eval > 1 ? result.estimates.bottomRows(t_eval)
                                             : result.estimates;
            const Matrix s_eval = t_eval > 1 ? S.bottomRows(t_eval) : S;
            const auto alignment = metrics::align_sources(u_eval, s_eval);
            const Matrix u_aligned = metrics::apply_alignment(u_eval, alignment);
            rec.metrics.bss_mse = metrics::bss_mse(u_aligned, s_eval);
            const Matrix cov = metrics::source_encoder_cov(u_aligned, s_eval, true);
            double diag_min = std::numeric_limits<double>::infinity();
            double offdiag_max = 0.0;
            for (Index i = 0; i < cov.rows(); ++i)
                for (Index j = 0; j < cov.cols(); ++j) {
                    if (i == j)
                        diag_min = std::min(diag_min, cov(i, j));
                    else
                        offdiag_max = std::max(offdiag_max, cov(i, j));
                }
            rec.metrics.diag_cov_min = diag_min;
            rec.metrics.offdiag_cov_max = offdiag_max;
        } else {
            principal = encoders::pca_whiten_batch(X, cell.ns).principal_vectors;
        }

        if (need_gt) {
            rec.metrics.subspace_error = metrics::subspace_error(principal, gt.U_L);
            if (th.eq11)
                rec.eq11_mse =
                    theory::error_cov_general(gt.BH, process.B, gt.Sigma).per_element_mse;
            if (th.eigenvalue_ratio)
                rec.eigenvalue_ratio = theory::eigenvalue_ratio(gt.BH, process.B, gt.Sigma);
            if (th.perturbation) {
                Matrix noise = process.B * gt.Sigma * process.B.transpose();
                noise = 0.5 * (noise + noise.transpose());
                rec.subspace_error_estimate =
                    theory::subspace_error_estimate(gt.U_L, gt.S_L, noise);
            }
        }
        if (th.eq12 && is_odd(cell.nl)) {
            const auto coeffs = theory::gaussian_coefficients(cell.nl);
            rec.eq12_mse = theory::error_cov_asymptotic(
                                cell.ns, cell.nx, coeffs, Matrix::Identity(cell.ns, cell.ns))
                               .per_element_mse;
        }
    } catch (const std::exception& e) {
        std::string what = e.what();
        for (auto& c : what)
            if (c == ',' || c == '\n') c = ';';
        rec.status = what;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

}  // namespace

ExperimentRecord::ExperimentRecord()
    : metrics{kNan, kNan, kNan, kNan},
      eq11_mse(kNan),
      eq12_mse(kNan),
      eigenvalue_ratio(kNan),
      subspace_error_estimate(kNan) {}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw config_error("config: seeds must be non-empty");
    if (ns_values.empty()) throw config_error("config: ns must be non-empty");
    if (nx_values.empty() == nx_over_ns.empty())
        throw config_error("config: exactly one of nx / nx_over_ns must be given");
    if (samples < 4) throw config_error("config: samples must be at least 4");
    if (nonlinearities.empty() || sources.empty())
        throw config_error("config: nonlinearity and source must be non-empty");
    for (Index ns : ns_values) {
        if (ns < 1) throw config_error("config: ns must be positive");
        if (!nx_values.empty()) {
            for (Index nx : nx_values)
                if (nx < ns)
                    throw config_error("config: every cell must satisfy ns <= nx (= nf)");
        } else {
            for (double m : nx_over_ns)
                if (m < 1.0) throw config_error("config: nx_over_ns entries must be >= 1");
        }
    }
    if (encoder.train_fraction <= 0.0 || encoder.train_fraction > 1.0)
        throw config_error("config: train_fraction must be in (0, 1]");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ASLN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<ExperimentRecord> run_grid(const ExperimentConfig& config) {
    config.validate();
    const auto cells = expand_cells(config);

    struct Task {
        const Cell* cell;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto& cell : cells)
        for (std::uint64_t seed : config.seeds) tasks.push_back({&cell, seed});

    std::vector<ExperimentRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
            records[i] = run_cell(config, *tasks[i].cell, tasks[i].seed);
    };

    const int threads = resolve_threads(config.threads);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
    }
    return records;
}

namespace {

std::string csv_field(double v) { return io::format_double(v); }

}  // namespace

const char* name(EncoderOptions::Mode mode) {
    switch (mode) {
        case EncoderOptions::Mode::Batch: return "batch";
        case EncoderOptions::Mode::Oja: return "oja";
        case EncoderOptions::Mode::Both: return "both";
    }
    return "?";
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    if (records.empty()) throw config_error("emit_csv: no records");
    std::ofstream out(path, std::ios::binary);  // binary: stable newlines
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << "cell,seed,ns,nf,nx,samples,nonlinearity,source,mode,status,"
        << "subspace_error,bss_mse,diag_cov_min,offdiag_cov_max,"
        << "eq11_mse,eq12_mse,eigenvalue_ratio,subspace_error_estimate\n";
    for (const auto& r : records) {
        out << r.cell << ',' << r.seed << ',' << r.ns << ',' << r.nf << ',' << r.nx << ','
            << r.samples << ',' << asln::name(r.nonlinearity) << ',' << asln::name(r.source)
            << ',' << name(r.mode) << ',' << r.status << ','
            << csv_field(r.metrics.subspace_error) << ',' << csv_field(r.metrics.bss_mse)
            << ',' << csv_field(r.metrics.diag_cov_min) << ','
            << csv_field(r.metrics.offdiag_cov_max) << ',' << csv_field(r.eq11_mse) << ','
            << csv_field(r.eq12_mse) << ',' << csv_field(r.eigenvalue_ratio) << ','
            << csv_field(r.subspace_error_estimate) << '\n';
    }
}

void emit_curves_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_curves_csv: cannot open " + path);
    out << "cell,seed,mode,stage,epoch,metric,weight_change\n";
    for (const auto& r : records) {
        for (const auto& e : r.pca_log)
            out << r.cell << ',' << r.seed << ',' << name(r.mode) << ",pca," << e.epoch << ','
                << csv_field(e.metric) << ',' << csv_field(e.weight_change) << '\n';
        for (const auto& e : r.ica_log)
            out << r.cell << ',' << r.seed << ',' << name(r.mode) << ",ica," << e.epoch << ','
                << csv_field(e.metric) << ',' << csv_field(e.weight_change) << '\n';
    }
}

ExperimentConfig preset_config(const std::string& preset, bool paper_scale) {
    ExperimentConfig c;
    c.nonlinearities = {Nonlinearity::Sign};
    c.sources = {SourceKind::Uniform};
    if (preset == "fig2") {
        c.ns_values = {10};
        c.nx_values = paper_scale ? std::vector<Index>{100, 300, 1000, 3000, 10000}
                                  : std::vector<Index>{100, 300, 1000};
        c.samples = paper_scale ? 100000 : 20000;
        c.seeds.clear();
        for (std::uint64_t s = 1; s <= 20; ++s) c.seeds.push_back(s);
        c.cascade = false;
        c.theory.eigenvalue_ratio = true;
        c.theory.perturbation = true;
    } else if (preset == "fig3a") {
        c.ns_values = paper_scale ? std::vector<Index>{100} : std::vector<Index>{10};
        c.nx_over_ns = {10, 30, 100};
        if (!paper_scale) c.nx_over_ns = {10, 30, 100};
        c.samples = paper_scale ? 100000 : 20000;
        c.seeds = paper_scale ? std::vector<std::uint64_t>{1, 2, 3, 4, 5}
                              : std::vector<std::uint64_t>{1, 2, 3, 4, 5};
        c.cascade = true;
        c.theory.eq12 = true;
    } else if (preset == "fig3d") {
        c.ns_values = paper_scale ? std::vector<Index>{10, 30, 100}
                                  : std::vector<Index>{10, 30};
        c.nx_over_ns = paper_scale ? std::vector<double>{3, 10, 30, 100}
                                   : std::vector<double>{10, 30};
        c.samples = paper_scale ? 200000 : 20000;
        c.seeds = paper_scale
                      ? std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                                                   11, 12, 13, 14, 15, 16, 17, 18, 19, 20}
                      : std::vector<std::uint64_t>{1, 2, 3};
        c.cascade = true;
        c.theory.eq11 = true;
        c.theory.eq12 = true;
    } else if (preset == "fig4") {
        c.ns_values = paper_scale ? std::vector<Index>{100} : std::vector<Index>{20};
        c.nx_values = paper_scale ? std::vector<Index>{3000} : std::vector<Index>{500};
        c.samples = paper_scale ? 100000 : 20000;
        c.seeds = {1, 2, 3, 4, 5};
        c.cascade = true;
        c.encoder.mode = EncoderOptions::Mode::Both;
        c.encoder.epochs_pca = 40;
        c.theory.eq12 = true;
        c.theory.perturbation = true;
        c.theory.eigenvalue_ratio = false;
    } else {
        throw config_error("unknown preset: " + preset);
    }
    return c;
}

std::vector<ExperimentRecord> run_preset(const std::string& preset, bool paper_scale,
                                         const std::string& out_dir, bool svg, int threads,
                                         const std::vector<std::uint64_t>& seed_override) {
    ExperimentConfig config = preset_config(preset, paper_scale);
    config.threads = threads;
    if (!seed_override.empty()) config.seeds = seed_override;
    std::filesystem::create_directories(out_dir);
    const auto records = run_grid(config);
    emit_csv(records, out_dir + "/" + preset + ".csv");
    if (preset == "fig4") emit_curves_csv(records, out_dir + "/" + preset + "_curves.csv");
    if (svg) svg::write_records_chart(records, out_dir + "/" + preset + ".svg", preset);
    return records;
}

namespace {

std::vector<Index> index_list(const TomlValue& v) {
    std::vector<Index> out;
    if (v.type == TomlValue::Type::Array)
        for (const auto& item : v.array) out.push_back(static_cast<Index>(item.as_int()));
    else
        out.push_back(static_cast<Index>(v.as_int()));
    return out;
}

std::vector<double> double_list(const TomlValue& v) {
    std::vector<double> out;
    if (v.type == TomlValue::Type::Array)
        for (const auto& item : v.array) out.push_back(item.as_double());
    else
        out.push_back(v.as_double());
    return out;
}

std::vector<std::string> string_list(const TomlValue& v) {
    std::vector<std::string> out;
    if (v.type == TomlValue::Type::Array)
        for (const auto& item : v.array) out.push_back(item.str);
    else
        out.push_back(v.str);
    return out;
}

}  // namespace

ExperimentConfig config_from_toml(const TomlTable& table) {
    ExperimentConfig c;
    c.nx_values.clear();
    auto has = [&](const std::string& key) { return table.count(key) > 0; };
    auto at = [&](const std::string& key) -> const TomlValue& { return table.at(key); };

    if (has("grid.ns")) c.ns_values = index_list(at("grid.ns"));
    if (has("grid.nx")) c.nx_values = index_list(at("grid.nx"));
    if (has("grid.nx_over_ns")) c.nx_over_ns = double_list(at("grid.nx_over_ns"));
    if (has("grid.nonlinearity")) {
        c.nonlinearities.clear();
        for (const auto& s : string_list(at("grid.nonlinearity")))
            c.nonlinearities.push_back(nonlinearity_from_name(s));
    }
    if (has("grid.source")) {
        c.sources.clear();
        for (const auto& s : string_list(at("grid.source")))
            c.sources.push_back(source_from_name(s));
    }
    if (has("grid.samples")) c.samples = static_cast<Index>(at("grid.samples").as_int());
    if (has("grid.seeds")) {
        c.seeds.clear();
        for (Index s : index_list(at("grid.seeds")))
            c.seeds.push_back(static_cast<std::uint64_t>(s));
    }

    if (has("encoder.mode")) {
        const std::string m = at("encoder.mode").str;
        if (m == "batch") c.encoder.mode = EncoderOptions::Mode::Batch;
        else if (m == "oja") c.encoder.mode = EncoderOptions::Mode::Oja;
        else if (m == "both") c.encoder.mode = EncoderOptions::Mode::Both;
        else throw config_error("config: unknown encoder mode '" + m + "'");
    }
    if (has("encoder.eta_pca")) c.encoder.eta_pca = at("encoder.eta_pca").as_double();
    if (has("encoder.eta_ica")) c.encoder.eta_ica = at("encoder.eta_ica").as_double();
    if (has("encoder.epochs_pca"))
        c.encoder.epochs_pca = static_cast<int>(at("encoder.epochs_pca").as_int());
    if (has("encoder.epochs_ica"))
        c.encoder.epochs_ica = static_cast<int>(at("encoder.epochs_ica").as_int());
    if (has("encoder.batch_size"))
        c.encoder.batch_size = static_cast<Index>(at("encoder.batch_size").as_int());
    if (has("encoder.g")) c.encoder.g = nonlinearity_from_name(at("encoder.g").str);
    if (has("encoder.train_fraction"))
        c.encoder.train_fraction = at("encoder.train_fraction").as_double();

    if (has("pipeline.cascade")) c.cascade = at("pipeline.cascade").boolean;
    if (has("theory.eq11")) c.theory.eq11 = at("theory.eq11").boolean;
    if (has("theory.eq12")) c.theory.eq12 = at("theory.eq12").boolean;
    if (has("theory.eigenvalue_ratio"))
        c.theory.eigenvalue_ratio = at("theory.eigenvalue_ratio").boolean;
    if (has("theory.perturbation")) c.theory.perturbation = at("theory.perturbation").boolean;

    if (has("output.csv")) c.csv_path = at("output.csv").str;
    if (has("output.svg")) c.svg_path = at("output.svg").str;
    if (has("output.curves")) c.curves_path = at("output.curves").str;
    if (has("run.threads")) c.threads = static_cast<int>(at("run.threads").as_int());

    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_toml(parse_toml_file(path));
}

}  // namespace asln::harness
