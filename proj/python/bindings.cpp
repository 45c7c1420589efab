// SPDX-License-Identifier: Apache-2.0
//
// gmmce - Gaussian mixture model channel estimation library
// Copyright (C) 2026 gmmce contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gmmce/channel_model.hpp"
#include "gmmce/dataset_io.hpp"
#include "gmmce/errors.hpp"
#include "gmmce/estimators.hpp"
#include "gmmce/gmm.hpp"
#include "gmmce/harness.hpp"

namespace py = pybind11;

namespace {

constexpr double kDeg2Rad = 3.14159265358979323846 / 180.0;

gmmce::InitStrategy parse_init(const std::string &name) {
    if (name == "random-responsibility")
        return gmmce::InitStrategy::kRandomResponsibility;
    if (name == "kmeans")
        return gmmce::InitStrategy::kKMeansSeeded;
    throw gmmce::ConfigError("unknown init strategy '" + name + "'");
}

Eigen::MatrixXcd dataset_channels(const gmmce::ChannelDataset &ds) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(ds.size()), ds.n_antennas);
    for (std::size_t m = 0; m < ds.size(); ++m)
        out.row(static_cast<Eigen::Index>(m)) = ds.samples[m].channel.transpose();
    return out;
}

gmmce::ChannelDataset dataset_from_matrix(const Eigen::MatrixXcd &channels) {
    gmmce::ChannelDataset ds;
    ds.n_antennas = static_cast<int>(channels.cols());
    ds.samples.resize(static_cast<std::size_t>(channels.rows()));
    for (Eigen::Index m = 0; m < channels.rows(); ++m)
        ds.samples[static_cast<std::size_t>(m)].channel = channels.row(m).transpose();
    return ds;
}

py::dict sweep_to_dict(const gmmce::SweepResult &result) {
    py::dict out;
    out["axis"] = result.axis == gmmce::SweepAxis::kSnrDb ? "snr_db" : "k_components";
    out["axis_values"] = result.axis_values;
    py::dict columns;
    for (const auto &[name, values] : result.mse)
        columns[py::str(name)] = values;
    out["mse"] = columns;
    out["metadata"] = result.metadata;
    return out;
}

} // namespace

PYBIND11_MODULE(_gmmce, m) {
    m.doc() = "GMM conditional-mean channel estimation core";

    py::register_exception<gmmce::Error>(m, "Error");

    py::class_<gmmce::ChannelDataset>(m, "Dataset")
        .def_static(
            "generate",
            [](int antennas, int clusters, double spread_deg, std::size_t samples,
               std::uint64_t seed, int quadrature_points, bool retain_covariances, int threads) {
                gmmce::ModelConfig cfg;
                cfg.antennas = antennas;
                cfg.clusters = clusters;
                cfg.spread = spread_deg * kDeg2Rad;
                cfg.quadrature_points = quadrature_points;
                cfg.seed = seed;
                cfg.retain_covariances = retain_covariances;
                return gmmce::generate_dataset(cfg, samples, threads);
            },
            py::arg("antennas"), py::arg("clusters"), py::arg("spread_deg"), py::arg("samples"),
            py::arg("seed") = 0, py::arg("quadrature_points") = 0,
            py::arg("retain_covariances") = true, py::arg("threads") = 1,
            "Generate spatial-model channel samples (normalized to E||h||^2 = N)")
        .def_static("from_channels", &dataset_from_matrix, py::arg("channels"),
                    "Build a dataset from an (M, N) complex array")
        .def_static("load", &gmmce::read_dataset, py::arg("path"))
        .def_static("import_csv", &gmmce::import_csv, py::arg("path"), py::arg("antennas"))
        .def("save", &gmmce::write_dataset, py::arg("path"))
        .def("normalize", &gmmce::normalize_dataset)
        .def(
            "split",
            [](const gmmce::ChannelDataset &ds, double train_fraction, std::uint64_t seed) {
                gmmce::Rng rng(seed);
                return gmmce::split_dataset(ds, train_fraction, rng);
            },
            py::arg("train_fraction"), py::arg("seed"))
        .def("channels", &dataset_channels, "All samples as an (M, N) complex array")
        .def(
            "covariance",
            [](const gmmce::ChannelDataset &ds, std::size_t index) -> py::object {
                if (index >= ds.size())
                    throw py::index_error();
                if (!ds.samples[index].covariance)
                    return py::none();
                return py::cast(ds.samples[index].covariance->mat());
            },
            py::arg("index"), "Retained generative covariance of one sample, or None")
        .def("__len__", [](const gmmce::ChannelDataset &ds) { return ds.size(); })
        .def_readonly("n_antennas", &gmmce::ChannelDataset::n_antennas)
        .def_readonly("normalized", &gmmce::ChannelDataset::normalized)
        .def("mean_squared_norm", &gmmce::ChannelDataset::mean_squared_norm);

    py::class_<gmmce::GmmModel>(m, "Gmm")
        .def_static(
            "fit",
            [](const gmmce::ChannelDataset &ds, int components, int max_iterations,
               double rel_tolerance, double ridge_scale, const std::string &init,
               std::uint64_t seed, int threads) {
                gmmce::EmConfig cfg;
                cfg.max_iterations = max_iterations;
                cfg.rel_tolerance = rel_tolerance;
                cfg.ridge_scale = ridge_scale;
                cfg.init = parse_init(init);
                cfg.seed = seed;
                auto result = gmmce::fit_em(ds, components, cfg, threads);
                return py::make_tuple(std::move(result.model), result.log_likelihood_trace);
            },
            py::arg("dataset"), py::arg("components"), py::arg("max_iterations") = 500,
            py::arg("rel_tolerance") = 1e-6, py::arg("ridge_scale") = 1e-6,
            py::arg("init") = "random-responsibility", py::arg("seed") = 0, py::arg("threads") = 1,
            "EM fit; returns (model, per-iteration average log-likelihood trace)")
        .def_static("load", &gmmce::load_model, py::arg("path"))
        .def("save", &gmmce::save_model, py::arg("path"))
        .def_property_readonly("weights", [](const gmmce::GmmModel &g) { return g.weights; })
        .def("mean", [](const gmmce::GmmModel &g, int k) { return g.means.at(static_cast<std::size_t>(k)); },
             py::arg("component"))
        .def(
            "covariance",
            [](const gmmce::GmmModel &g, int k) { return g.covariances.at(static_cast<std::size_t>(k)).mat(); },
            py::arg("component"))
        .def_property_readonly("n_components", &gmmce::GmmModel::n_components)
        .def_property_readonly("dim", &gmmce::GmmModel::dim)
        .def("log_likelihood", &gmmce::log_likelihood, py::arg("dataset"))
        .def(
            "responsibilities",
            [](const gmmce::GmmModel &g, const Eigen::VectorXcd &y, double sigma_sq) {
                const auto noise = gmmce::NoiseModel::isotropic(sigma_sq, y.size());
                return gmmce::responsibilities(g, y, noise.covariance);
            },
            py::arg("y"), py::arg("sigma_sq"))
        .def(
            "receive_pdf",
            [](const gmmce::GmmModel &g, double sigma_sq) {
                return gmmce::receive_pdf(g, gmmce::NoiseModel::isotropic(sigma_sq, g.dim()).covariance);
            },
            py::arg("sigma_sq"))
        .def(
            "sample",
            [](const gmmce::GmmModel &g, std::size_t count, std::uint64_t seed) {
                gmmce::Rng rng(seed);
                const auto draws = gmmce::sample_gmm(g, rng, count);
                Eigen::MatrixXcd out(static_cast<Eigen::Index>(count), g.dim());
                for (std::size_t i = 0; i < draws.size(); ++i)
                    out.row(static_cast<Eigen::Index>(i)) = draws[i].transpose();
                return out;
            },
            py::arg("count"), py::arg("seed"))
        .def(
            "estimate",
            [](const gmmce::GmmModel &g, const Eigen::MatrixXcd &observations, double sigma_sq) {
                const gmmce::GmmCmeEngine engine(
                    g, gmmce::NoiseModel::isotropic(sigma_sq, g.dim()));
                Eigen::MatrixXcd out(observations.rows(), observations.cols());
                for (Eigen::Index r = 0; r < observations.rows(); ++r)
                    out.row(r) = engine.estimate(observations.row(r).transpose()).channel.transpose();
                return out;
            },
            py::arg("observations"), py::arg("sigma_sq"),
            "Conditional-mean estimates for rows of an (M, N) observation array");

    m.def("steering_vector", &gmmce::steering_vector, py::arg("theta"), py::arg("n_antennas"));
    m.def(
        "cluster_covariance",
        [](const std::vector<double> &angles, const std::vector<double> &gains, double spread,
           int n_antennas, int quadrature_points) {
            gmmce::ClusterParams params{angles, gains, spread};
            if (quadrature_points == 0)
                quadrature_points = gmmce::default_quadrature_points(n_antennas);
            return gmmce::cluster_covariance(params, n_antennas, quadrature_points).mat();
        },
        py::arg("angles"), py::arg("gains"), py::arg("spread"), py::arg("n_antennas"),
        py::arg("quadrature_points") = 0);
    m.def(
        "sample_covariance",
        [](const gmmce::ChannelDataset &ds) { return gmmce::sample_covariance(ds).mat(); },
        py::arg("dataset"));
    m.def(
        "lmmse_estimate",
        [](const Eigen::MatrixXcd &cov, double sigma_sq, const Eigen::MatrixXcd &observations) {
            const gmmce::LmmseEngine engine(gmmce::HermitianMatrix(cov),
                                            gmmce::NoiseModel::isotropic(sigma_sq, cov.rows()));
            Eigen::MatrixXcd out(observations.rows(), observations.cols());
            for (Eigen::Index r = 0; r < observations.rows(); ++r)
                out.row(r) = engine.estimate(observations.row(r).transpose()).channel.transpose();
            return out;
        },
        py::arg("covariance"), py::arg("sigma_sq"), py::arg("observations"));
    m.def(
        "dft_dictionary",
        [](int n_antennas, int oversampling) {
            return gmmce::dft_dictionary(n_antennas, oversampling).atoms;
        },
        py::arg("n_antennas"), py::arg("oversampling") = 4);
    m.def(
        "omp_genie",
        [](const Eigen::VectorXcd &y, const Eigen::MatrixXcd &atoms,
           const Eigen::VectorXcd &h_true, int max_sparsity) {
            gmmce::Dictionary dict{static_cast<int>(atoms.rows()),
                                   static_cast<int>(atoms.cols()), atoms};
            auto est = gmmce::omp_genie(y, dict, h_true, max_sparsity);
            return py::make_tuple(std::move(est.channel),
                                  static_cast<int>(est.aux.at("sparsity")));
        },
        py::arg("y"), py::arg("atoms"), py::arg("h_true"), py::arg("max_sparsity"),
        "Genie-aided OMP; returns (estimate, chosen sparsity)");
    m.def(
        "normalized_mse",
        [](const Eigen::MatrixXcd &truths, const Eigen::MatrixXcd &estimates) {
            if (truths.rows() != estimates.rows() || truths.cols() != estimates.cols())
                throw gmmce::LengthMismatch("normalized_mse: shape mismatch");
            return (truths - estimates).squaredNorm() /
                   (static_cast<double>(truths.rows()) * static_cast<double>(truths.cols()));
        },
        py::arg("truths"), py::arg("estimates"));

    m.def(
        "sweep_snr",
        [](const std::string &config_text) {
            const auto cfg = gmmce::parse_config_text(config_text);
            const auto result = gmmce::run_snr_sweep(cfg);
            if (!cfg.output_path.empty())
                gmmce::emit_csv(result, cfg.output_path);
            return sweep_to_dict(result);
        },
        py::arg("config_text"),
        "Run an SNR sweep from flat key-value config text; writes CSV when 'out' is set");
    m.def(
        "sweep_k",
        [](const std::string &config_text) {
            const auto cfg = gmmce::parse_config_text(config_text);
            const auto result = gmmce::run_k_sweep(cfg);
            if (!cfg.output_path.empty())
                gmmce::emit_csv(result, cfg.output_path);
            return sweep_to_dict(result);
        },
        py::arg("config_text"),
        "Run a mixture-size sweep from flat key-value config text; writes CSV when 'out' is set");

    m.attr("__version__") = "0.1.0";
}
