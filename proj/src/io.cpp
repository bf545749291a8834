#include "solvembed/io.hpp"

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "solvembed/errors.hpp"

namespace solvembed {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* name, const char* ctx) {
    if (!j.is_object()) {
        throw SchemaError(std::string(ctx) + " must be a JSON object");
    }
    auto it = j.find(name);
    if (it == j.end()) {
        throw SchemaError(std::string(ctx) + " is missing field '" + name + "'");
    }
    return *it;
}

int require_int(const json& j, const char* what) {
    if (!j.is_number_integer()) {
        throw SchemaError(std::string(what) + " must be an integer");
    }
    return j.get<int>();
}

double require_number(const json& j, const char* what) {
    if (!j.is_number()) {
        throw SchemaError(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

Mat parse_matrix(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) {
        throw SchemaError(std::string(what) + " must be a non-empty array of rows");
    }
    const int rows = static_cast<int>(j.size());
    int cols = -1;
    Mat M;
    for (int r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array()) {
            throw SchemaError(std::string(what) + " row " + std::to_string(r) +
                              " must be an array");
        }
        if (cols < 0) {
            cols = static_cast<int>(row.size());
            if (cols == 0) {
                throw SchemaError(std::string(what) + " rows must be non-empty");
            }
            M = Mat::Zero(rows, cols);
        } else if (static_cast<int>(row.size()) != cols) {
            throw SchemaError(std::string(what) + " rows have inconsistent lengths");
        }
        for (int c = 0; c < cols; ++c) {
            M(r, c) = require_number(row[c], what);
        }
    }
    return M;
}

json matrix_to_json(const Mat& M) {
    json rows = json::array();
    for (int r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<int> parse_index_list(const json& j, const char* what, int dim) {
    if (!j.is_array()) {
        throw SchemaError(std::string(what) + " must be an array of indices");
    }
    std::vector<int> out;
    for (const json& item : j) {
        const int v = require_int(item, what);
        if (v < 0 || v >= dim) {
            throw SchemaError(std::string(what) + " index " + std::to_string(v) +
                              " is out of range for dimension " + std::to_string(dim));
        }
        out.push_back(v);
    }
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "' for reading");
    }
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace

ParsedAlgebra parse_algebra(const json& j) {
    if (!j.is_object()) throw SchemaError("algebra document must be a JSON object");
    const int dim = require_int(require_field(j, "dim", "algebra"), "dim");
    if (dim < 1) throw SchemaError("dim must be at least 1");

    std::vector<std::string> labels;
    if (j.contains("labels")) {
        const json& jl = j.at("labels");
        if (!jl.is_array() || static_cast<int>(jl.size()) != dim) {
            throw SchemaError("labels must be an array of dim strings");
        }
        for (const json& item : jl) {
            if (!item.is_string()) throw SchemaError("labels must be strings");
            labels.push_back(item.get<std::string>());
        }
    }

    std::vector<BracketEntry> entries;
    const json& jb = require_field(j, "brackets", "algebra");
    if (!jb.is_array()) throw SchemaError("brackets must be an array");
    for (size_t idx = 0; idx < jb.size(); ++idx) {
        const json& item = jb[idx];
        const std::string ctx = "brackets[" + std::to_string(idx) + "]";
        const int i = require_int(require_field(item, "i", ctx.c_str()), "i");
        const int jj = require_int(require_field(item, "j", ctx.c_str()), "j");
        if (i < 0 || i >= dim || jj < 0 || jj >= dim) {
            throw SchemaError(ctx + " references an index outside [0, dim)");
        }
        if (i >= jj) {
            throw SchemaError(ctx + " must have i < j (only the upper pairs are stored)");
        }
        const json& coeffs = require_field(item, "coeffs", ctx.c_str());
        if (!coeffs.is_object()) throw SchemaError(ctx + ".coeffs must be an object");
        for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
            int k = -1;
            try {
                size_t pos = 0;
                k = std::stoi(it.key(), &pos);
                if (pos != it.key().size()) k = -1;
            } catch (...) {
                k = -1;
            }
            if (k < 0 || k >= dim) {
                throw SchemaError(ctx + ".coeffs key '" + it.key() +
                                  "' is not an index in [0, dim)");
            }
            const double v = require_number(it.value(), (ctx + ".coeffs value").c_str());
            if (v != 0.0) entries.push_back(BracketEntry{i, jj, k, v});
        }
    }

    const Mat gram = parse_matrix(require_field(j, "gram", "algebra"), "gram");
    if (gram.rows() != dim || gram.cols() != dim) {
        throw SchemaError("gram must be a dim x dim matrix");
    }

    ParsedAlgebra out{MetricLieAlgebra::from_brackets(dim, entries, gram, labels),
                      std::nullopt};
    validate_algebra(out.alg, kDefaultTol);

    if (j.contains("split")) {
        const json& js = j.at("split");
        SolvableSplit split;
        split.a_indices = parse_index_list(require_field(js, "a", "split"), "split.a", dim);
        split.n_indices = parse_index_list(require_field(js, "n", "split"), "split.n", dim);
        out.split = std::move(split);
    }
    return out;
}

ParsedAlgebra parse_algebra_file(const std::string& path) {
    return parse_algebra(load_json_file(path));
}

json serialize_algebra(const MetricLieAlgebra& alg,
                       const std::optional<SolvableSplit>& split) {
    json j;
    j["dim"] = alg.dim();
    if (!alg.labels().empty()) j["labels"] = alg.labels();
    json brackets = json::array();
    for (int i = 0; i < alg.dim(); ++i) {
        for (int q = i + 1; q < alg.dim(); ++q) {
            json coeffs = json::object();
            for (int k = 0; k < alg.dim(); ++k) {
                const double v = alg.structure(i, q, k);
                if (v != 0.0) coeffs[std::to_string(k)] = v;
            }
            if (!coeffs.empty()) {
                brackets.push_back(json{{"i", i}, {"j", q}, {"coeffs", std::move(coeffs)}});
            }
        }
    }
    j["brackets"] = std::move(brackets);
    j["gram"] = matrix_to_json(alg.gram());
    if (split.has_value()) {
        j["split"] = json{{"a", split->a_indices}, {"n", split->n_indices}};
    }
    return j;
}

json serialize_embedding(const Representation& rep, const EmbeddingCertificate& cert) {
    json j;
    j["N"] = rep.N;
    j["c"] = cert.achieved_c;
    j["metric"] = to_string(cert.metric_kind);
    json basis = json::array();
    for (int p = 0; p < rep.basis.dim(); ++p) {
        json col = json::array();
        for (int r = 0; r < rep.basis.dim(); ++r) col.push_back(rep.basis.B(r, p));
        basis.push_back(std::move(col));
    }
    j["basis_order"] = std::move(basis);
    json mats = json::array();
    for (const Mat& M : rep.mats) mats.push_back(matrix_to_json(M));
    j["mats"] = std::move(mats);
    j["certificate"] = json{{"accepted", cert.accepted},
                            {"N", cert.N},
                            {"achieved_c", cert.achieved_c},
                            {"metric", to_string(cert.metric_kind)},
                            {"bracket_residual", cert.bracket_residual},
                            {"pullback_residual", cert.pullback_residual},
                            {"faithfulness_margin", cert.faithfulness_margin},
                            {"failures", cert.failures}};
    return j;
}

ParsedEmbedding parse_embedding(const json& j) {
    if (!j.is_object()) throw SchemaError("embedding document must be a JSON object");
    ParsedEmbedding out;
    out.N = require_int(require_field(j, "N", "embedding"), "N");
    if (out.N < 1) throw SchemaError("N must be at least 1");
    out.c = require_number(require_field(j, "c", "embedding"), "c");
    const json& jm = require_field(j, "metric", "embedding");
    if (!jm.is_string()) throw SchemaError("metric must be a string");
    out.metric = metric_kind_from_string(jm.get<std::string>());

    const json& jb = require_field(j, "basis_order", "embedding");
    if (!jb.is_array() || jb.empty()) {
        throw SchemaError("basis_order must be a non-empty array of vectors");
    }
    const int dim = static_cast<int>(jb.size());
    out.basis_change = Mat::Zero(dim, dim);
    for (int p = 0; p < dim; ++p) {
        const json& col = jb[p];
        if (!col.is_array() || static_cast<int>(col.size()) != dim) {
            throw SchemaError("basis_order vectors must all have length dim");
        }
        for (int r = 0; r < dim; ++r) {
            out.basis_change(r, p) = require_number(col[r], "basis_order entry");
        }
    }

    const json& jmats = require_field(j, "mats", "embedding");
    if (!jmats.is_array() || static_cast<int>(jmats.size()) != dim) {
        throw SchemaError("mats must contain one matrix per basis vector");
    }
    for (int p = 0; p < dim; ++p) {
        Mat M = parse_matrix(jmats[p], "mats");
        if (M.rows() != out.N || M.cols() != out.N) {
            throw SchemaError("mats[" + std::to_string(p) + "] must be N x N");
        }
        out.mats.push_back(std::move(M));
    }
    return out;
}

ParsedEmbedding parse_embedding_file(const std::string& path) {
    return parse_embedding(load_json_file(path));
}

Representation embedding_to_representation(const ParsedEmbedding& emb,
                                            const MetricLieAlgebra& alg) {
    const int dim = alg.dim();
    if (emb.basis_change.rows() != dim || emb.basis_change.cols() != dim) {
        throw DimensionMismatch("embedding basis does not match the algebra dimension");
    }
    if (static_cast<int>(emb.mats.size()) != dim) {
        throw DimensionMismatch("embedding does not provide one matrix per basis vector");
    }
    // ordered_coords inverts the basis through B^T * gram, which requires the
    // listed basis to be orthonormal for the algebra's inner product.
    const Mat test = emb.basis_change.transpose() * alg.gram() * emb.basis_change;
    if ((test - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-6) {
        throw SchemaError("basis_order must be orthonormal for the algebra's inner product");
    }

    OrderedBasis ob;
    ob.B = emb.basis_change;
    ob.dim_a = 0;
    Representation rep{alg, std::move(ob), emb.N, emb.mats,
                       {TargetBlock{0, emb.N, "parsed"}}};
    return rep;
}

}  // namespace solvembed
