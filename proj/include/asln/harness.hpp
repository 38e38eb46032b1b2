#pragma once

#include "asln/config.hpp"
#include "asln/encoders.hpp"
#include "asln/generative.hpp"
#include "asln/metrics.hpp"
#include "asln/nonlinearity.hpp"
#include "asln/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace asln::harness {

struct EncoderOptions {
    enum class Mode { Batch, Oja, Both };
    Mode mode = Mode::Batch;
    double eta_pca = 1e-3;
    double eta_ica = 0.02;
    int epochs_pca = 30;
    int epochs_ica = 150;
    Index batch_size = 256;
    Nonlinearity g = Nonlinearity::Cube;
    double train_fraction = 0.5;
};

struct TheoryOptions {
    bool eq11 = false;
    bool eq12 = false;
    bool eigenvalue_ratio = false;
    bool perturbation = false;
};

/// One experiment grid: the cartesian product of ns x nx x nonlinearity x
/// source, each cell run once per seed. nx is given either directly or as
/// multiples of ns (nx_over_ns); nf = nx always.
struct ExperimentConfig {
    std::vector<Index> ns_values{10};
    std::vector<Index> nx_values;
    std::vector<double> nx_over_ns;
    std::vector<Nonlinearity> nonlinearities{Nonlinearity::Sign};
    std::vector<SourceKind> sources{SourceKind::Uniform};
    Index samples = 20000;  // draws per batch (T)
    std::vector<std::uint64_t> seeds{1};
    bool cascade = true;
    EncoderOptions encoder;
    TheoryOptions theory;
    std::string csv_path;
    std::string svg_path;
    std::string curves_path;
    int threads = 0;  // 0: --threads / ASLN_THREADS / hardware

    void validate() const;
};

struct ExperimentRecord {
    Index cell = 0;
    std::uint64_t seed = 0;
    Index ns = 0, nf = 0, nx = 0, samples = 0;
    Nonlinearity nonlinearity = Nonlinearity::Sign;
    SourceKind source = SourceKind::Uniform;
    EncoderOptions::Mode mode = EncoderOptions::Mode::Batch;
    std::string status = "ok";
    metrics::MetricsRecord metrics;
    double eq11_mse;
    double eq12_mse;
    double eigenvalue_ratio;
    double subspace_error_estimate;
    double wall_ms = 0.0;  // informational only; never serialized
    encoders::TrainLog pca_log, ica_log;

    ExperimentRecord();
    bool ok() const { return status == "ok"; }
};

/// Runs every (cell, seed) pair of the grid in a worker pool; the result
/// order is (cell index, seed index) regardless of completion order.
/// Per-cell failures are captured in the record status.
std::vector<ExperimentRecord> run_grid(const ExperimentConfig& config);

/// CSV with a fixed, documented column order; floats carry 17 significant
/// digits so re-parsing recovers them exactly. Identical records produce
/// identical bytes.
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

/// Per-epoch training curves (fig4-style runs).
void emit_curves_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

/// Figure presets at desk scale (paper_scale restores the published grids).
/// Known names: fig2, fig3a, fig3d, fig4.
ExperimentConfig preset_config(const std::string& name, bool paper_scale);

/// Runs a preset and writes its outputs under out_dir (CSV always, curves
/// for fig4, SVG when svg is set). A non-empty seed_override replaces the
/// preset's seed list.
std::vector<ExperimentRecord> run_preset(const std::string& name, bool paper_scale,
                                         const std::string& out_dir, bool svg = false,
                                         int threads = 0,
                                         const std::vector<std::uint64_t>& seed_override = {});

ExperimentConfig config_from_toml(const TomlTable& table);
ExperimentConfig load_config(const std::string& path);

const char* name(EncoderOptions::Mode mode);
int resolve_threads(int requested);

}  // namespace asln::harness
