/*
 * Copyright 2026 The famscore Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "famscore/cli.hpp"
#include "famscore/error.hpp"
#include "famscore/evaluation.hpp"
#include "famscore/methods.hpp"
#include "famscore/relatedness.hpp"
#include "famscore/report.hpp"
#include "famscore/simulator.hpp"

namespace py = pybind11;
using namespace famscore;

namespace {

using RowMajorInt8 = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

ScaledMatrix as_scaled(const Eigen::MatrixXd& x) { return ScaledMatrix(x, ScaleKind::RowStandardized); }

FamilyStructure as_families(std::size_t n, const std::vector<IndexList>& families) {
    return FamilyStructure(n, families);
}

std::vector<IndexList> family_lists(const FamilyStructure& fam) { return fam.families(); }

methods::MethodOptions options(double delta, bool strict, const std::string& median_scope) {
    methods::MethodOptions o;
    o.delta = delta;
    o.clamp_negative = !strict;
    if (median_scope == "all") o.median_scope = methods::MedianScope::AllEntries;
    else if (median_scope != "offdiag") throw Error(ErrorCode::InvalidArgument, "median_scope is offdiag or all");
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Family-robust ancestry scores";
    m.attr("__version__") = std::string(cli::kVersion);

    // handles kept for the life of the interpreter
    static const py::handle validation = py::exception<Error>(m, "ValidationError", PyExc_ValueError).release();
    static const py::handle numerical = py::exception<Error>(m, "NumericalError", PyExc_ArithmeticError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            if (is_numerical(e.code())) py::set_error(numerical, e.what());
            else py::set_error(validation, e.what());
        }
    });

    m.def(
        "scale_genotypes",
        [](const RowMajorInt8& g, bool drop_monomorphic_snps, const std::string& missing) {
            GenotypeMatrix gm = GenotypeMatrix::with_default_ids(g);
            if (drop_monomorphic_snps) gm = drop_monomorphic(gm);
            if (missing != "mean" && missing != "reject") throw Error(ErrorCode::InvalidArgument, "missing is mean or reject");
            return scale_genotypes(gm, missing == "mean" ? MissingPolicy::MeanImpute : MissingPolicy::Reject).values();
        },
        py::arg("genotypes"), py::arg("drop_monomorphic") = true, py::arg("missing") = "mean",
        "Row-standardize a SNPs x individuals genotype matrix (0/1/2, -1 missing).");

    m.def(
        "detect_families",
        [](const Eigen::MatrixXd& x, double eta) {
            return family_lists(relatedness::detect_families(relatedness::pairwise_correlations(as_scaled(x)), eta));
        },
        py::arg("x"), py::arg("eta") = relatedness::kDefaultEta,
        "Families as connected components of pairs with column correlation above eta.");

    m.def(
        "ancestry_scores",
        [](const Eigen::MatrixXd& x, const std::vector<IndexList>& families, const std::string& method, Index k,
           double delta, bool strict, const std::string& median_scope) {
            const auto sx = as_scaled(x);
            const auto fam = relatedness::assign_representatives(as_families(static_cast<std::size_t>(x.cols()), families), sx);
            const auto r = methods::run_method(methods::parse_method(method), sx, fam, k, options(delta, strict, median_scope));
            py::dict out;
            out["scores"] = r.scores;
            out["values"] = r.values;
            out["singular_values"] = r.singular_values();
            out["value_kind"] = r.value_kind == methods::ValueKind::Singular ? "singular" : "eigen";
            return out;
        },
        py::arg("x"), py::arg("families"), py::arg("method"), py::arg("k"), py::arg("delta") = 0.001,
        py::arg("strict") = false, py::arg("median_scope") = "offdiag",
        "Scores (n x k) of one method: naive, sp, pcair, fw, fw-geo, ms, cpw or fa.");

    m.def(
        "simulate",
        [](std::uint64_t seed, const py::kwargs& settings) {
            std::map<std::string, std::string> entries;
            for (const auto& [key, value] : settings) entries[py::str(key)] = py::str(value);
            auto cfg = io::sim_config_from(entries);
            cfg.seed = seed;
            const auto data = sim::simulate_dataset(cfg);
            py::dict out;
            out["genotypes"] = RowMajorInt8(data.genotypes.values());
            out["strata"] = data.strata;
            out["families"] = family_lists(data.pedigree);
            return out;
        },
        py::arg("seed"),
        "Simulate a dataset; keyword settings use the config file keys (snps, individuals, prop, ...).");

    m.def(
        "swiss",
        [](const Eigen::MatrixXd& scores, const std::vector<int>& strata, Index components) {
            return eval::swiss(scores, strata, components).per_component;
        },
        py::arg("scores"), py::arg("strata"), py::arg("components") = eval::kMetricComponents);

    m.def(
        "rse",
        [](const Eigen::MatrixXd& scores, const std::vector<int>& strata, const IndexList& related,
           const IndexList& unrelated, Index components) {
            return eval::rse(scores, strata, {related, unrelated}, components).per_component;
        },
        py::arg("scores"), py::arg("strata"), py::arg("related"), py::arg("unrelated"),
        py::arg("components") = eval::kMetricComponents);

    m.def(
        "instability",
        [](const Eigen::MatrixXd& x, const std::vector<IndexList>& families, const std::string& method, Index components) {
            const auto sx = as_scaled(x);
            const auto fam = relatedness::assign_representatives(as_families(static_cast<std::size_t>(x.cols()), families), sx);
            return eval::instability(sx, fam, methods::parse_method(method), components).instability;
        },
        py::arg("x"), py::arg("families"), py::arg("method"), py::arg("components") = eval::kInstabilityComponents);

    m.def(
        "individual_scree",
        [](const Eigen::MatrixXd& scores, const Eigen::VectorXd& singular_values, double span) {
            methods::AncestryResult r;
            r.scores = scores;
            r.values = singular_values;
            const auto s = eval::individual_scree(r, span);
            return py::make_tuple(s.raw, s.smoothed);
        },
        py::arg("scores"), py::arg("singular_values"), py::arg("span") = eval::kDefaultSpan,
        "Raw (v d)^2 values and their loess-smoothed log10 curves.");

    m.def(
        "scatter_svg",
        [](const Eigen::VectorXd& x, const Eigen::VectorXd& y, const std::vector<std::string>& colors,
           const std::string& title) {
            if (x.size() != y.size() || (!colors.empty() && colors.size() != static_cast<std::size_t>(x.size()))) {
                throw Error(ErrorCode::DimensionMismatch, "x, y and colors must have one entry per point");
            }
            report::ScatterData data;
            data.title = title;
            for (Index i = 0; i < x.size(); ++i) {
                data.points.push_back({x(i), y(i), colors.empty() ? "#000000" : colors[static_cast<std::size_t>(i)]});
            }
            return report::render_scatter(data);
        },
        py::arg("x"), py::arg("y"), py::arg("colors") = std::vector<std::string>{}, py::arg("title") = "");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command line in-process; returns (exit code, stdout, stderr).");
}
