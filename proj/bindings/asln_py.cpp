#include "asln/encoders.hpp"
#include "asln/generative.hpp"
#include "asln/harness.hpp"
#include "asln/metrics.hpp"
#include "asln/oracles.hpp"
#include "asln/spectral.hpp"
#include "asln/theory.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace asln;

PYBIND11_MODULE(_asln, m) {
    m.doc() = "Linear PCA->ICA inversion of two-layer nonlinear mixing processes";

    py::enum_<Nonlinearity>(m, "Nonlinearity")
        .value("sign", Nonlinearity::Sign)
        .value("cube", Nonlinearity::Cube)
        .value("relu", Nonlinearity::Relu)
        .value("tanh", Nonlinearity::Tanh)
        .value("identity", Nonlinearity::Identity);

    py::enum_<SourceKind>(m, "SourceKind")
        .value("uniform", SourceKind::Uniform)
        .value("truncated_normal", SourceKind::TruncatedNormal)
        .value("gaussian", SourceKind::Gaussian);

    // spectral kernel
    py::class_<spectral::SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("eigenvalues", &spectral::SpectralDecomposition::eigenvalues)
        .def_readonly("eigenvectors", &spectral::SpectralDecomposition::eigenvectors);
    py::class_<spectral::SvdDecomposition>(m, "SvdDecomposition")
        .def_readonly("u", &spectral::SvdDecomposition::u)
        .def_readonly("singular_values", &spectral::SvdDecomposition::singular_values)
        .def_readonly("v", &spectral::SvdDecomposition::v);
    m.def("sym_eig", [](const Matrix& mat, std::optional<Index> k) {
              return spectral::sym_eig(mat, k);
          },
          py::arg("m"), py::arg("k") = py::none());
    m.def("svd_thin", &spectral::svd_thin, py::arg("m"));
    m.def("pinv", &spectral::pinv, py::arg("m"), py::arg("tol") = 1e-12);
    m.def("hadamard_pow", &spectral::hadamard_pow, py::arg("m"), py::arg("n"));

    // generative process
    py::class_<SourceDistribution>(m, "SourceDistribution")
        .def_static("make", &SourceDistribution::make, py::arg("kind"))
        .def_readonly("kind", &SourceDistribution::kind)
        .def_readonly("kurtosis", &SourceDistribution::kurtosis);
    py::class_<GenerativeProcess>(m, "GenerativeProcess")
        .def_readonly("ns", &GenerativeProcess::ns)
        .def_readonly("nf", &GenerativeProcess::nf)
        .def_readonly("nx", &GenerativeProcess::nx)
        .def_readonly("A", &GenerativeProcess::A)
        .def_readonly("offset", &GenerativeProcess::offset)
        .def_readonly("B", &GenerativeProcess::B)
        .def_readonly("nonlinearity", &GenerativeProcess::nonlinearity)
        .def_readonly("seed", &GenerativeProcess::seed);
    py::class_<SampleBatch>(m, "SampleBatch")
        .def_readonly("S", &SampleBatch::S)
        .def_readonly("F", &SampleBatch::F)
        .def_readonly("X", &SampleBatch::X)
        .def_readonly("input_mean", &SampleBatch::input_mean);
    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("H", &GroundTruth::H)
        .def_readonly("Sigma", &GroundTruth::Sigma)
        .def_readonly("BH", &GroundTruth::BH)
        .def_readonly("U_L", &GroundTruth::U_L)
        .def_readonly("S_L", &GroundTruth::S_L)
        .def_readonly("sigma_unstable", &GroundTruth::sigma_unstable);
    m.def("build_process",
          [](Index ns, Index nf, Index nx, Nonlinearity nl, SourceKind source,
             std::uint64_t seed) {
              return build_process(ns, nf, nx, nl, SourceDistribution::make(source), seed);
          },
          py::arg("ns"), py::arg("nf"), py::arg("nx"),
          py::arg("nonlinearity") = Nonlinearity::Sign,
          py::arg("source") = SourceKind::Uniform, py::arg("seed") = 1);
    m.def("sample_batch", &sample_batch, py::arg("process"), py::arg("samples"),
          py::arg("seed"));
    m.def("ground_truth_decomposition", &ground_truth_decomposition, py::arg("process"),
          py::arg("batch"));

    // closed-form predictions
    py::class_<theory::GaussianCoefficients>(m, "GaussianCoefficients")
        .def_readonly("f_prime", &theory::GaussianCoefficients::f_prime)
        .def_readonly("f_sq", &theory::GaussianCoefficients::f_sq)
        .def_readonly("f_third", &theory::GaussianCoefficients::f_third)
        .def_readonly("odd", &theory::GaussianCoefficients::odd);
    py::class_<theory::ErrorPrediction>(m, "ErrorPrediction")
        .def_readonly("cov_eps", &theory::ErrorPrediction::cov_eps)
        .def_readonly("per_element_mse", &theory::ErrorPrediction::per_element_mse)
        .def_readonly("finite_width_term", &theory::ErrorPrediction::finite_width_term)
        .def_readonly("finite_source_term", &theory::ErrorPrediction::finite_source_term);
    py::class_<theory::PerturbationReport>(m, "PerturbationReport")
        .def_readonly("correction", &theory::PerturbationReport::correction)
        .def_readonly("corrected_major_eigenvalues",
                      &theory::PerturbationReport::corrected_major_eigenvalues)
        .def_readonly("corrected_major_vectors",
                      &theory::PerturbationReport::corrected_major_vectors)
        .def_readonly("subspace_error_estimate",
                      &theory::PerturbationReport::subspace_error_estimate);
    m.def("gaussian_coefficients", &theory::gaussian_coefficients, py::arg("nonlinearity"));
    m.def("anisotropy_delta", &theory::anisotropy_delta, py::arg("B"), py::arg("U_A"));
    m.def("error_cov_general", &theory::error_cov_general, py::arg("BH"), py::arg("B"),
          py::arg("Sigma"));
    m.def("error_cov_asymptotic", &theory::error_cov_asymptotic, py::arg("ns"), py::arg("nf"),
          py::arg("coeffs"), py::arg("delta"));
    m.def("eigenvalue_ratio", &theory::eigenvalue_ratio, py::arg("BH"), py::arg("B"),
          py::arg("Sigma"));
    m.def("perturbation_correction", &theory::perturbation_correction, py::arg("U_L"),
          py::arg("S_L"), py::arg("noise_cov"));
    m.def("subspace_error_estimate", &theory::subspace_error_estimate, py::arg("U_L"),
          py::arg("S_L"), py::arg("noise_cov"));

    // encoders
    py::class_<encoders::PcaEncoder>(m, "PcaEncoder")
        .def_readonly("principal_vectors", &encoders::PcaEncoder::principal_vectors)
        .def_readonly("eigenvalues", &encoders::PcaEncoder::eigenvalues)
        .def_readonly("whitening", &encoders::PcaEncoder::whitening)
        .def_readonly("input_mean", &encoders::PcaEncoder::input_mean)
        .def("encode", &encoders::PcaEncoder::encode, py::arg("X"));
    py::class_<encoders::IcaEncoder>(m, "IcaEncoder")
        .def_readonly("separation", &encoders::IcaEncoder::separation)
        .def("encode", &encoders::IcaEncoder::encode, py::arg("U"));
    py::class_<encoders::TrainLogEntry>(m, "TrainLogEntry")
        .def_readonly("epoch", &encoders::TrainLogEntry::epoch)
        .def_readonly("metric", &encoders::TrainLogEntry::metric)
        .def_readonly("weight_change", &encoders::TrainLogEntry::weight_change);
    m.def("pca_whiten_batch", &encoders::pca_whiten_batch, py::arg("X"), py::arg("k"));
    m.def("oja_train",
          [](const Matrix& X, Index k, double eta, int epochs, Index batch_size,
             std::uint64_t seed) {
              encoders::OjaConfig cfg{eta, epochs, batch_size, seed};
              return encoders::oja_train(X, k, cfg);
          },
          py::arg("X"), py::arg("k"), py::arg("eta") = 1e-3, py::arg("epochs") = 20,
          py::arg("batch_size") = 256, py::arg("seed") = 0);
    m.def("amari_train",
          [](const Matrix& U, double eta, int epochs, Index batch_size, Nonlinearity g,
             std::uint64_t seed) {
              encoders::AmariConfig cfg{eta, epochs, batch_size, g, seed};
              return encoders::amari_train(U, cfg);
          },
          py::arg("U"), py::arg("eta") = 0.02, py::arg("epochs") = 150,
          py::arg("batch_size") = 256, py::arg("g") = Nonlinearity::Cube,
          py::arg("seed") = 0);
    m.def("cascade",
          [](const Matrix& X, Index k, const std::string& mode, double eta_pca,
             double eta_ica, int epochs_pca, int epochs_ica, Index batch_size,
             Nonlinearity g, double train_fraction, std::uint64_t seed) {
              encoders::CascadeConfig cfg;
              cfg.mode = mode == "oja" ? encoders::CascadeConfig::Mode::Oja
                                       : encoders::CascadeConfig::Mode::Batch;
              cfg.oja = {eta_pca, epochs_pca, batch_size, Rng::derive(seed, "oja")};
              cfg.ica = {eta_ica, epochs_ica, batch_size, g, Rng::derive(seed, "ica")};
              cfg.train_fraction = train_fraction;
              auto result = encoders::cascade(X, k, cfg);
              return py::make_tuple(result.estimates, result.pca, result.ica);
          },
          py::arg("X"), py::arg("k"), py::arg("mode") = "batch", py::arg("eta_pca") = 1e-3,
          py::arg("eta_ica") = 0.02, py::arg("epochs_pca") = 30,
          py::arg("epochs_ica") = 150, py::arg("batch_size") = 256,
          py::arg("g") = Nonlinearity::Cube, py::arg("train_fraction") = 0.5,
          py::arg("seed") = 0);

    // metrics
    py::class_<metrics::Alignment>(m, "Alignment")
        .def_readonly("permutation", &metrics::Alignment::permutation)
        .def_readonly("signs", &metrics::Alignment::signs)
        .def_readonly("score", &metrics::Alignment::score);
    m.def("subspace_error", &metrics::subspace_error, py::arg("P"), py::arg("U"));
    m.def("align_sources", &metrics::align_sources, py::arg("u_hat"), py::arg("s"));
    m.def("apply_alignment", &metrics::apply_alignment, py::arg("u_hat"),
          py::arg("alignment"));
    m.def("bss_mse", &metrics::bss_mse, py::arg("u_aligned"), py::arg("s"));
    m.def("source_encoder_cov", &metrics::source_encoder_cov, py::arg("u_hat"), py::arg("s"),
          py::arg("absolute") = false);

    // lemma oracles
    py::class_<oracles::LemmaCheck>(m, "LemmaCheck")
        .def_readonly("name", &oracles::LemmaCheck::name)
        .def_readonly("predicted", &oracles::LemmaCheck::predicted)
        .def_readonly("measured", &oracles::LemmaCheck::measured)
        .def_readonly("tolerance", &oracles::LemmaCheck::tolerance)
        .def_readonly("pass_", &oracles::LemmaCheck::pass);
    py::class_<oracles::LemmaReport>(m, "LemmaReport")
        .def_readonly("lemma", &oracles::LemmaReport::lemma)
        .def_readonly("checks", &oracles::LemmaReport::checks)
        .def_readonly("pass_", &oracles::LemmaReport::pass)
        .def_readonly("inconclusive", &oracles::LemmaReport::inconclusive);
    py::class_<oracles::Lemma2Result>(m, "Lemma2Result")
        .def_readonly("series", &oracles::Lemma2Result::series)
        .def_readonly("mc_estimate", &oracles::Lemma2Result::mc_estimate)
        .def_readonly("mc_std_error", &oracles::Lemma2Result::mc_std_error);
    m.def("lemma2_series", &oracles::lemma2_series, py::arg("g"), py::arg("sigma_v") = 1.0,
          py::arg("sigma_w") = 1.0, py::arg("c") = 0.3, py::arg("n_max") = 8,
          py::arg("mc_samples") = 1000000, py::arg("seed") = 1);
    m.def("lemma3_check", &oracles::lemma3_check, py::arg("A"));

    py::register_exception<dimension_error>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<singularity_error>(m, "SingularityError", PyExc_RuntimeError);
    py::register_exception<alignment_error>(m, "AlignmentError", PyExc_RuntimeError);
}
