#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "solvembed/catalog.hpp"
#include "solvembed/curvature.hpp"
#include "solvembed/embed.hpp"
#include "solvembed/errors.hpp"
#include "solvembed/io.hpp"

namespace py = pybind11;
using namespace solvembed;
using nlohmann::json;

namespace {

py::dict cert_to_dict(const EmbeddingCertificate& cert) {
    py::dict d;
    d["N"] = cert.N;
    d["achieved_c"] = cert.achieved_c;
    d["bracket_residual"] = cert.bracket_residual;
    d["pullback_residual"] = cert.pullback_residual;
    d["faithfulness_margin"] = cert.faithfulness_margin;
    d["metric"] = to_string(cert.metric_kind);
    d["accepted"] = cert.accepted;
    d["failures"] = cert.failures;
    d["summary"] = cert.summary();
    return d;
}

py::dict embed_result_to_dict(const EmbedResult& result) {
    py::dict d;
    d["N"] = result.rep.N;
    d["mats"] = result.rep.mats;
    d["basis"] = result.rep.basis.B;
    d["dim_a"] = result.rep.basis.dim_a;
    d["certificate"] = cert_to_dict(result.certificate);
    d["target_c"] = result.plan.target_c;
    d["stage_scales"] = result.plan.stage_scales;
    d["stage_constants"] = result.plan.stage_constants;
    d["min_feasible_c"] = result.plan.min_feasible_c;
    d["min_feasible_t"] = result.plan.min_feasible_t;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "faithful isometric lower-triangular realizations of metric solvable Lie algebras";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "SolvembedError");

    py::class_<MetricLieAlgebra>(m, "MetricLieAlgebra")
        .def_static(
            "from_brackets",
            [](int dim, const std::vector<std::tuple<int, int, int, double>>& entries,
               const Mat& gram, const std::vector<std::string>& labels) {
                std::vector<BracketEntry> es;
                es.reserve(entries.size());
                for (const auto& [i, j, k, v] : entries) {
                    es.push_back(BracketEntry{i, j, k, v});
                }
                return MetricLieAlgebra::from_brackets(dim, es, gram, labels);
            },
            py::arg("dim"), py::arg("entries"), py::arg("gram"),
            py::arg("labels") = std::vector<std::string>{},
            "Build from bracket entries (i, j, k, value) with i < j; the bracket "
            "[e_i, e_j] = sum_k value * e_k is completed antisymmetrically.")
        .def_static(
            "from_ad",
            [](const std::vector<Mat>& ad, const Mat& gram,
               const std::vector<std::string>& labels) {
                return MetricLieAlgebra::from_ad(ad, gram, labels);
            },
            py::arg("ad"), py::arg("gram"), py::arg("labels") = std::vector<std::string>{})
        .def_property_readonly("dim", &MetricLieAlgebra::dim)
        .def_property_readonly("labels", &MetricLieAlgebra::labels)
        .def("gram", &MetricLieAlgebra::gram)
        .def("ad", &MetricLieAlgebra::ad, py::arg("i"))
        .def("bracket", &MetricLieAlgebra::bracket, py::arg("x"), py::arg("y"))
        .def("ip", &MetricLieAlgebra::ip, py::arg("x"), py::arg("y"))
        .def("__repr__", [](const MetricLieAlgebra& alg) {
            return "<MetricLieAlgebra dim=" + std::to_string(alg.dim()) + ">";
        });

    py::class_<SolvableSplit>(m, "SolvableSplit")
        .def(py::init([](std::vector<int> a, std::vector<int> n) {
                 SolvableSplit s;
                 s.a_indices = std::move(a);
                 s.n_indices = std::move(n);
                 return s;
             }),
             py::arg("a"), py::arg("n"))
        .def_readwrite("a_indices", &SolvableSplit::a_indices)
        .def_readwrite("n_indices", &SolvableSplit::n_indices);

    m.def(
        "validate_algebra",
        [](const MetricLieAlgebra& alg, double tol) {
            const ValidationReport r = validate_algebra(alg, tol);
            py::dict d;
            d["jacobi_residual"] = r.jacobi_residual;
            d["derived_series_length"] = r.derived_series_length;
            d["solvable"] = r.solvable;
            d["completely_solvable"] = r.completely_solvable;
            d["nilpotent"] = r.nilpotent;
            return d;
        },
        py::arg("alg"), py::arg("tol") = kDefaultTol);

    m.def(
        "validate_split",
        [](const MetricLieAlgebra& alg, const SolvableSplit& split, double tol) {
            const ConditionsReport r = validate_split(alg, split, tol);
            py::list out;
            for (const ConditionCheck& c : r.checks) {
                py::dict d;
                d["name"] = c.name;
                d["passed"] = c.passed;
                d["witness"] = c.witness;
                out.append(d);
            }
            return out;
        },
        py::arg("alg"), py::arg("split"), py::arg("tol") = kDefaultTol);

    m.def(
        "embed",
        [](const MetricLieAlgebra& alg, const SolvableSplit& split,
           std::optional<double> scale, const std::string& metric) {
            EmbedOptions options;
            options.scale = scale;
            options.metric = metric_kind_from_string(metric);
            options.tolerances = Tolerances::defaults();
            return embed_result_to_dict(embed(alg, split, options));
        },
        py::arg("alg"), py::arg("split"), py::arg("scale") = py::none(),
        py::arg("metric") = "einstein",
        "Construct and certify a faithful isometric lower-triangular realization.");

    m.def(
        "ricci",
        [](const MetricLieAlgebra& alg) {
            const RicciData d = ricci(alg);
            return py::make_tuple(d.frame, d.ricci);
        },
        py::arg("alg"),
        "Returns (frame, ricci): the Ricci operator in a gram-orthonormal frame.");

    m.def(
        "einstein_check",
        [](const MetricLieAlgebra& alg, double tol) { return einstein_check(alg, tol); },
        py::arg("alg"), py::arg("tol") = 1e-8);

    m.def(
        "soliton_data",
        [](const MetricLieAlgebra& nilalg, double tol) {
            const RicciData d = soliton_data(nilalg, tol);
            const Mat D_orig =
                d.frame * (*d.soliton_derivation) * d.frame.transpose() * nilalg.gram();
            py::dict out;
            out["c"] = *d.soliton_c;
            out["derivation"] = D_orig;
            out["frame"] = d.frame;
            out["ricci"] = d.ricci;
            return out;
        },
        py::arg("nilalg"), py::arg("tol") = kDefaultTol);

    m.def(
        "soliton_extension",
        [](const MetricLieAlgebra& nilalg, double tol) {
            return soliton_extension(nilalg, tol);
        },
        py::arg("nilalg"), py::arg("tol") = 1e-8);

    m.def(
        "rank_one_extension",
        [](const MetricLieAlgebra& nilalg, const Mat& D, bool normalize) {
            return rank_one_extension(nilalg, D, normalize);
        },
        py::arg("nilalg"), py::arg("derivation"), py::arg("normalize") = false);

    m.def("two_step_canonical_derivation",
          [](const MetricLieAlgebra& nilalg) { return two_step_canonical_derivation(nilalg); },
          py::arg("nilalg"));

    m.def(
        "example",
        [](const std::string& name) {
            const CatalogEntry e = example(name);
            py::dict d;
            d["name"] = e.name;
            d["alg"] = e.alg;
            d["split"] = e.split.has_value() ? py::cast(*e.split) : py::none();
            d["derivation"] =
                e.canonical_derivation.has_value() ? py::cast(*e.canonical_derivation)
                                                   : py::none();
            const auto [alg, split] = e.embeddable();
            d["embeddable_alg"] = alg;
            d["embeddable_split"] = split;
            return d;
        },
        py::arg("name"));

    m.def("catalog_names", &catalog_names);

    m.def("random_two_step", &random_two_step, py::arg("seed"), py::arg("dim_v"),
          py::arg("dim_z"));

    m.def(
        "algebra_from_json",
        [](const std::string& text) {
            json j;
            try {
                j = json::parse(text);
            } catch (const json::exception& e) {
                throw ParseError(std::string("invalid JSON: ") + e.what());
            }
            ParsedAlgebra pa = parse_algebra(j);
            return py::make_tuple(pa.alg,
                                  pa.split.has_value() ? py::cast(*pa.split) : py::none());
        },
        py::arg("text"));

    m.def(
        "algebra_to_json",
        [](const MetricLieAlgebra& alg, std::optional<SolvableSplit> split) {
            return serialize_algebra(alg, split).dump(2);
        },
        py::arg("alg"), py::arg("split") = py::none());

    m.def(
        "embedding_to_json",
        [](const MetricLieAlgebra& alg, const SolvableSplit& split,
           std::optional<double> scale, const std::string& metric) {
            EmbedOptions options;
            options.scale = scale;
            options.metric = metric_kind_from_string(metric);
            options.tolerances = Tolerances::defaults();
            const EmbedResult result = embed(alg, split, options);
            return serialize_embedding(result.rep, result.certificate).dump(2);
        },
        py::arg("alg"), py::arg("split"), py::arg("scale") = py::none(),
        py::arg("metric") = "einstein");

    m.def(
        "verify_embedding",
        [](const std::string& embedding_json, const std::string& algebra_json) {
            json je, ja;
            try {
                je = json::parse(embedding_json);
                ja = json::parse(algebra_json);
            } catch (const json::exception& e) {
                throw ParseError(std::string("invalid JSON: ") + e.what());
            }
            const ParsedAlgebra pa = parse_algebra(ja);
            const ParsedEmbedding emb = parse_embedding(je);
            const Representation rep = embedding_to_representation(emb, pa.alg);
            const EmbeddingCertificate cert =
                certify(pa.alg, rep, emb.metric, Tolerances::defaults());
            return cert_to_dict(cert);
        },
        py::arg("embedding_json"), py::arg("algebra_json"),
        "Independently re-certify a serialized embedding against its algebra.");
}
