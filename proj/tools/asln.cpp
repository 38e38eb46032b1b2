#include "asln/generative.hpp"
#include "asln/harness.hpp"
#include "asln/io.hpp"
#include "asln/oracles.hpp"
#include "asln/svg.hpp"
#include "asln/theory.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

using namespace asln;

int run_gen(Index ns, Index nf, Index nx, const std::string& nl, const std::string& src,
            Index samples, std::uint64_t seed, const std::string& out_dir) {
    const auto process = build_process(ns, nf, nx, nonlinearity_from_name(nl),
                                       SourceDistribution::make(source_from_name(src)), seed);
    if (samples <= 0) samples = default_sample_count(nf);
    const auto batch = sample_batch(process, samples, Rng::derive(seed, "batch"));
    std::filesystem::create_directories(out_dir);
    io::write_process(process, out_dir + "/process.bin");
    io::write_batch(process, batch, out_dir + "/batch.bin");
    std::printf("wrote %s/process.bin and %s/batch.bin (ns=%lld nf=%lld nx=%lld T=%lld)\n",
                out_dir.c_str(), out_dir.c_str(), static_cast<long long>(ns),
                static_cast<long long>(nf), static_cast<long long>(nx),
                static_cast<long long>(samples));
    return 0;
}

int run_theory(Index ns, Index nx, const std::string& nl_name) {
    std::printf("%-10s %12s %12s %12s\n", "function", "E[f']", "E[f^2]", "E[f''']");
    for (auto nl : {Nonlinearity::Sign, Nonlinearity::Cube, Nonlinearity::Relu,
                    Nonlinearity::Tanh, Nonlinearity::Identity}) {
        const auto c = theory::gaussian_coefficients(nl);
        std::printf("%-10s %12.8f %12.8f %12.8f\n", name(nl), c.f_prime, c.f_sq, c.f_third);
    }
    if (ns > 0 && nx > 0) {
        const auto nl = nonlinearity_from_name(nl_name);
        std::printf("\npredictions for ns=%lld nx=nf=%lld %s (Delta = I):\n",
                    static_cast<long long>(ns), static_cast<long long>(nx), name(nl));
        if (is_odd(nl)) {
            const auto pred = theory::error_cov_asymptotic(
                ns, nx, theory::gaussian_coefficients(nl), Matrix::Identity(ns, ns));
            std::printf("  per-element mse  %.8f\n", pred.per_element_mse);
            std::printf("  finite-width     %.8f\n", pred.finite_width_term);
            std::printf("  finite-source    %.8f\n", pred.finite_source_term);
        } else {
            std::printf("  closed form needs an odd function; run the pipeline and use the\n"
                        "  measured-covariance prediction instead\n");
        }
    }
    return 0;
}

int finish_grid(const std::vector<harness::ExperimentRecord>& records) {
    int failed = 0;
    double compute_ms = 0.0;
    for (const auto& r : records) {
        compute_ms += r.wall_ms;
        if (!r.ok()) {
            ++failed;
            std::fprintf(stderr, "cell %lld seed %llu failed: %s\n",
                         static_cast<long long>(r.cell),
                         static_cast<unsigned long long>(r.seed), r.status.c_str());
        }
    }
    std::printf("%zu records, %d failed, %.1f s compute\n", records.size(), failed,
                compute_ms / 1000.0);
    return failed == 0 ? 0 : 1;
}

void print_lemma_report(const oracles::LemmaReport& report) {
    std::printf("lemma %d: %s%s\n", report.lemma, report.pass ? "pass" : "FAIL",
                report.inconclusive ? " (inconclusive)" : "");
    for (const auto& c : report.checks)
        std::printf("  %-55s predicted %12.6g measured %12.6g tol %.3g -> %s\n",
                    c.name.c_str(), c.predicted, c.measured, c.tolerance,
                    c.pass ? "pass" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear PCA->ICA inversion of two-layer nonlinear mixing processes"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "dump a generative process and one sample batch");
    Index g_ns = 10, g_nf = 1000, g_nx = 1000, g_samples = 0;
    std::uint64_t g_seed = 1;
    std::string g_nl = "sign", g_src = "uniform", g_out = "gen_out";
    gen->add_option("--ns", g_ns, "source dimensionality");
    gen->add_option("--nf", g_nf, "basis dimensionality");
    gen->add_option("--nx", g_nx, "input dimensionality");
    gen->add_option("--nonlinearity", g_nl, "sign|cube|relu|tanh|identity");
    gen->add_option("--source", g_src, "uniform|truncated-normal|gaussian");
    gen->add_option("--samples", g_samples, "draws (default max(1e5, 20*nf))");
    gen->add_option("--seed", g_seed, "process seed");
    gen->add_option("--out", g_out, "output directory");

    // theory
    auto* th = app.add_subcommand("theory", "print coefficient and prediction tables");
    Index t_ns = 0, t_nx = 0;
    std::string t_nl = "sign";
    th->add_option("--ns", t_ns, "source dimensionality for predictions");
    th->add_option("--nx", t_nx, "input dimensionality for predictions");
    th->add_option("--nonlinearity", t_nl, "basis function for predictions");

    // run
    auto* run = app.add_subcommand("run", "run an experiment grid from a TOML config");
    std::string r_config, r_csv, r_svg;
    int r_threads = 0;
    std::uint64_t r_seed = 0;
    run->add_option("config", r_config, "config file")->required();
    run->add_option("--csv", r_csv, "override CSV output path");
    run->add_option("--svg", r_svg, "write an SVG summary chart");
    run->add_option("--threads", r_threads, "worker threads (ASLN_THREADS as fallback)");
    run->add_option("--seed", r_seed, "replace the config seed list with one seed");

    // preset
    auto* preset = app.add_subcommand("preset", "run a figure preset");
    std::string p_name, p_out = "preset_out";
    bool p_paper = false, p_svg = false;
    int p_threads = 0;
    std::uint64_t p_seed = 0;
    preset->add_option("name", p_name, "fig2|fig3a|fig3d|fig4")->required();
    preset->add_flag("--paper-scale", p_paper, "published grid sizes instead of desk scale");
    preset->add_option("--out", p_out, "output directory");
    preset->add_flag("--svg", p_svg, "also write an SVG chart");
    preset->add_option("--threads", p_threads, "worker threads");
    preset->add_option("--seed", p_seed, "replace the preset seed list with one seed");

    // lemma
    auto* lemma = app.add_subcommand("lemma", "numerical lemma verification");
    int l_id = 3;
    Index l_ns = 10, l_nf = 1000, l_samples = 1000000;
    std::uint64_t l_seed = 1;
    std::string l_g = "cube", l_src = "uniform", l_fn = "quartic";
    double l_c = 0.3, l_sigma_v = 1.0, l_sigma_w = 1.0;
    int l_nmax = 8;
    lemma->add_option("id", l_id, "1, 2, or 3")->required();
    lemma->add_option("--ns", l_ns, "source dimensionality (lemma 1/3)");
    lemma->add_option("--nf", l_nf, "basis dimensionality (lemma 3)");
    lemma->add_option("--seed", l_seed, "seed");
    lemma->add_option("--g", l_g, "function for lemma 2 (identity|cube|tanh)");
    lemma->add_option("--c", l_c, "correlation for lemma 2");
    lemma->add_option("--sigma-v", l_sigma_v, "std of v (lemma 2)");
    lemma->add_option("--sigma-w", l_sigma_w, "std of w (lemma 2)");
    lemma->add_option("--nmax", l_nmax, "series truncation (lemma 2)");
    lemma->add_option("--samples", l_samples, "Monte-Carlo draws");
    lemma->add_option("--source", l_src, "source distribution (lemma 1)");
    lemma->add_option("--function", l_fn, "quartic|cross (lemma 1)");

    try {
        app.parse(argc, argv);

        if (*gen) return run_gen(g_ns, g_nf, g_nx, g_nl, g_src, g_samples, g_seed, g_out);
        if (*th) return run_theory(t_ns, t_nx, t_nl);
        if (*run) {
            auto config = harness::load_config(r_config);
            if (r_threads > 0) config.threads = r_threads;
            if (run->count("--seed") > 0) config.seeds = {r_seed};
            if (!r_csv.empty()) config.csv_path = r_csv;
            if (!r_svg.empty()) config.svg_path = r_svg;
            const auto records = harness::run_grid(config);
            if (config.csv_path.empty()) config.csv_path = "records.csv";
            harness::emit_csv(records, config.csv_path);
            if (!config.curves_path.empty())
                harness::emit_curves_csv(records, config.curves_path);
            if (!config.svg_path.empty())
                svg::write_records_chart(records, config.svg_path, r_config);
            return finish_grid(records);
        }
        if (*preset) {
            std::vector<std::uint64_t> seed_override;
            if (preset->count("--seed") > 0) seed_override.push_back(p_seed);
            const auto records = harness::run_preset(p_name, p_paper, p_out, p_svg,
                                                     p_threads, seed_override);
            return finish_grid(records);
        }
        if (*lemma) {
            using oracles::TestFunction;
            if (l_id == 1) {
                const auto report = oracles::lemma1_probe(
                    SourceDistribution::make(source_from_name(l_src)),
                    l_fn == "cross" ? TestFunction::QuarticCross : TestFunction::QuarticSingle,
                    {l_ns, 4 * l_ns, 16 * l_ns}, l_samples, l_seed);
                print_lemma_report(report);
                return report.pass && !report.inconclusive ? 0 : 1;
            }
            if (l_id == 2) {
                const auto result =
                    oracles::lemma2_series(nonlinearity_from_name(l_g), l_sigma_v, l_sigma_w,
                                           l_c, l_nmax, l_samples, l_seed);
                std::printf("series (n_max=%d)      %.12f\n", l_nmax, result.series);
                std::printf("monte-carlo estimate  %.12f +- %.2e\n", result.mc_estimate,
                            result.mc_std_error);
                const bool consistent =
                    std::abs(result.series - result.mc_estimate) <= 3.0 * result.mc_std_error;
                std::printf("within 3 standard errors: %s\n", consistent ? "yes" : "NO");
                return consistent ? 0 : 1;
            }
            if (l_id == 3) {
                Rng rng(l_seed, "A");
                Matrix a(l_nf, l_ns);
                const double sd = 1.0 / std::sqrt(static_cast<double>(l_ns));
                for (Index i = 0; i < l_nf; ++i)
                    for (Index j = 0; j < l_ns; ++j) a(i, j) = sd * rng.gaussian();
                const auto report = oracles::lemma3_check(a);
                print_lemma_report(report);
                return report.pass ? 0 : 1;
            }
            std::fprintf(stderr, "lemma id must be 1, 2, or 3\n");
            return 2;
        }
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
