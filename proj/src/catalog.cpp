#include "solvembed/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "solvembed/embed.hpp"
#include "solvembed/errors.hpp"

namespace solvembed {

namespace {

// Parses "family(n)" and returns n, or -1 when the name is not of that shape.
int family_parameter(const std::string& name, const std::string& family) {
    const size_t flen = family.size();
    if (name.size() < flen + 3 || name.compare(0, flen, family) != 0 ||
        name[flen] != '(' || name.back() != ')') {
        return -1;
    }
    const std::string inner = name.substr(flen + 1, name.size() - flen - 2);
    if (inner.empty() ||
        !std::all_of(inner.begin(), inner.end(),
                     [](unsigned char ch) { return std::isdigit(ch) != 0; })) {
        return -1;
    }
    try {
        return std::stoi(inner);
    } catch (...) {
        return -1;
    }
}

CatalogEntry make_rh(const std::string& name, int n) {
    if (n < 2) throw UnknownName("rh(n) requires n >= 2");
    std::vector<BracketEntry> entries;
    std::vector<std::string> labels = {"A"};
    for (int i = 1; i < n; ++i) {
        entries.push_back(BracketEntry{0, i, i, 1.0});
        labels.push_back("X" + std::to_string(i));
    }
    MetricLieAlgebra alg =
        MetricLieAlgebra::from_brackets(n, entries, Mat::Identity(n, n), labels);
    SolvableSplit split;
    split.a_indices = {0};
    for (int i = 1; i < n; ++i) split.n_indices.push_back(i);
    return CatalogEntry{name, std::move(alg), std::move(split), std::nullopt};
}

CatalogEntry make_heisenberg(const std::string& name, int d) {
    if (d < 3 || d % 2 == 0) throw UnknownName("heisenberg(d) requires odd d >= 3");
    const int m = (d - 1) / 2;
    std::vector<BracketEntry> entries;
    std::vector<std::string> labels;
    for (int i = 0; i < m; ++i) labels.push_back("X" + std::to_string(i + 1));
    for (int i = 0; i < m; ++i) labels.push_back("Y" + std::to_string(i + 1));
    labels.push_back("Z");
    for (int i = 0; i < m; ++i) entries.push_back(BracketEntry{i, m + i, 2 * m, 1.0});
    MetricLieAlgebra alg =
        MetricLieAlgebra::from_brackets(d, entries, Mat::Identity(d, d), labels);
    Mat D = two_step_canonical_derivation(alg);
    return CatalogEntry{name, std::move(alg), std::nullopt, std::move(D)};
}

CatalogEntry make_heisenberg_ext() {
    // Basis (A, X, Y, Z): [A,X] = X, [A,Y] = Y, [A,Z] = 2Z, [X,Y] = Z.
    std::vector<BracketEntry> entries = {
        BracketEntry{0, 1, 1, 1.0},
        BracketEntry{0, 2, 2, 1.0},
        BracketEntry{0, 3, 3, 2.0},
        BracketEntry{1, 2, 3, 1.0},
    };
    MetricLieAlgebra alg = MetricLieAlgebra::from_brackets(
        4, entries, Mat::Identity(4, 4), {"A", "X", "Y", "Z"});
    SolvableSplit split;
    split.a_indices = {0};
    split.n_indices = {1, 2, 3};
    return CatalogEntry{"heisenberg_ext", std::move(alg), std::move(split), std::nullopt};
}

CatalogEntry make_filiform4() {
    // Basis (e1..e4): [e1,e2] = e3, [e1,e3] = e4.
    std::vector<BracketEntry> entries = {
        BracketEntry{0, 1, 2, 1.0},
        BracketEntry{0, 2, 3, 1.0},
    };
    MetricLieAlgebra alg = MetricLieAlgebra::from_brackets(
        4, entries, Mat::Identity(4, 4), {"e1", "e2", "e3", "e4"});
    Vec d(4);
    d << 1.0, 1.0, 2.0, 3.0;
    Mat D = d.asDiagonal();
    return CatalogEntry{"filiform4", std::move(alg), std::nullopt, std::move(D)};
}

CatalogEntry make_filiform4_ext() {
    std::vector<BracketEntry> entries = {
        BracketEntry{0, 1, 1, 1.0},
        BracketEntry{0, 2, 2, 1.0},
        BracketEntry{0, 3, 3, 2.0},
        BracketEntry{0, 4, 4, 3.0},
        BracketEntry{1, 2, 3, 1.0},
        BracketEntry{1, 3, 4, 1.0},
    };
    MetricLieAlgebra alg = MetricLieAlgebra::from_brackets(
        5, entries, Mat::Identity(5, 5), {"A", "e1", "e2", "e3", "e4"});
    SolvableSplit split;
    split.a_indices = {0};
    split.n_indices = {1, 2, 3, 4};
    return CatalogEntry{"filiform4_ext", std::move(alg), std::move(split), std::nullopt};
}

// Shared construction for the triangular families.  `basis` holds n x n
// matrices; brackets are matrix commutators expanded over the basis, where
// the first `n_diag_like` entries span the diagonal part and the rest are the
// elementary strictly lower matrices in a fixed order.
MetricLieAlgebra triangular_from_matrices(const std::vector<Mat>& basis,
                                          int n,
                                          int diag_count,
                                          const std::vector<std::pair<int, int>>& lower_pos,
                                          const Mat& gram,
                                          const std::vector<std::string>& labels) {
    const int dim = static_cast<int>(basis.size());
    std::vector<BracketEntry> entries;
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const Mat C = basis[i] * basis[j] - basis[j] * basis[i];
            // Commutators of triangular basis elements have no diagonal part
            // here; everything expands over the elementary lower matrices.
            for (int b = 0; b < static_cast<int>(lower_pos.size()); ++b) {
                const double v = C(lower_pos[b].first, lower_pos[b].second);
                if (v != 0.0) {
                    entries.push_back(BracketEntry{i, j, diag_count + b, v});
                }
            }
        }
    }
    (void)n;
    return MetricLieAlgebra::from_brackets(dim, entries, gram, labels);
}

std::pair<MetricLieAlgebra, SolvableSplit> build_iwasawa(int n, bool trace_free) {
    std::vector<Mat> basis;
    std::vector<std::string> labels;
    const int diag_count = trace_free ? n - 1 : n;
    if (trace_free) {
        for (int m = 0; m < n - 1; ++m) {
            Mat H = Mat::Zero(n, n);
            H(m, m) = 1.0;
            H(m + 1, m + 1) = -1.0;
            basis.push_back(std::move(H));
            labels.push_back("H" + std::to_string(m + 1));
        }
    } else {
        for (int m = 0; m < n; ++m) {
            Mat H = Mat::Zero(n, n);
            H(m, m) = 1.0;
            basis.push_back(std::move(H));
            labels.push_back("D" + std::to_string(m + 1));
        }
    }
    std::vector<std::pair<int, int>> lower_pos;
    for (int d = 1; d < n; ++d) {
        for (int s = 0; s + d < n; ++s) {
            const int r = s + d;
            Mat E = Mat::Zero(n, n);
            E(r, s) = 1.0;
            basis.push_back(std::move(E));
            labels.push_back("E" + std::to_string(r + 1) + std::to_string(s + 1));
            lower_pos.emplace_back(r, s);
        }
    }
    const int dim = static_cast<int>(basis.size());

    // Inner product: twice the trace form between diagonal parts, the trace
    // form on the strictly lower part, diagonal and lower orthogonal.
    Mat gram = Mat::Zero(dim, dim);
    for (int i = 0; i < diag_count; ++i) {
        for (int j = 0; j < diag_count; ++j) {
            gram(i, j) = 2.0 * (basis[i].cwiseProduct(basis[j])).sum();
        }
    }
    for (int b = 0; b < static_cast<int>(lower_pos.size()); ++b) {
        gram(diag_count + b, diag_count + b) = 1.0;
    }

    MetricLieAlgebra alg =
        triangular_from_matrices(basis, n, diag_count, lower_pos, gram, labels);
    SolvableSplit split;
    for (int i = 0; i < diag_count; ++i) split.a_indices.push_back(i);
    for (int i = diag_count; i < dim; ++i) split.n_indices.push_back(i);
    return {std::move(alg), std::move(split)};
}

CatalogEntry make_iwasawa(const std::string& name, int n) {
    if (n < 2) throw UnknownName("triangular_iwasawa(n) requires n >= 2");
    auto [alg, split] = build_iwasawa(n, /*trace_free=*/true);
    return CatalogEntry{name, std::move(alg), std::move(split), std::nullopt};
}

}  // namespace

std::pair<MetricLieAlgebra, SolvableSplit> CatalogEntry::embeddable() const {
    if (split.has_value()) return {alg, *split};
    if (canonical_derivation.has_value()) {
        return rank_one_extension(alg, *canonical_derivation, /*normalize=*/false);
    }
    throw SchemaError("catalog entry carries neither a split nor a derivation");
}

CatalogEntry example(const std::string& name) {
    if (int n = family_parameter(name, "rh"); n >= 0) return make_rh(name, n);
    if (int n = family_parameter(name, "heisenberg"); n >= 0) {
        return make_heisenberg(name, n);
    }
    if (name == "heisenberg_ext") return make_heisenberg_ext();
    if (name == "filiform4") return make_filiform4();
    if (name == "filiform4_ext") return make_filiform4_ext();
    if (int n = family_parameter(name, "triangular_iwasawa"); n >= 0) {
        return make_iwasawa(name, n);
    }
    throw UnknownName("unrecognized example name: " + name);
}

std::vector<std::string> catalog_names() {
    return {"rh(2)",
            "rh(3)",
            "rh(4)",
            "rh(5)",
            "heisenberg(3)",
            "heisenberg(5)",
            "heisenberg_ext",
            "filiform4",
            "filiform4_ext",
            "triangular_iwasawa(2)",
            "triangular_iwasawa(3)"};
}

MetricLieAlgebra random_two_step(std::uint64_t seed, int dim_v, int dim_z) {
    if (dim_v < 2 || dim_z < 1) {
        throw SchemaError("random_two_step requires dim_v >= 2 and dim_z >= 1");
    }
    SplitMix64 rng(seed);
    const int dim = dim_v + dim_z;
    std::vector<BracketEntry> entries;
    for (int m = 0; m < dim_z; ++m) {
        while (true) {
            std::vector<BracketEntry> form;
            bool nonzero = false;
            for (int i = 0; i < dim_v; ++i) {
                for (int j = i + 1; j < dim_v; ++j) {
                    const int v = static_cast<int>(rng.next_int(-2, 2));
                    if (v != 0) {
                        form.push_back(BracketEntry{i, j, dim_v + m, static_cast<double>(v)});
                        nonzero = true;
                    }
                }
            }
            if (nonzero) {
                entries.insert(entries.end(), form.begin(), form.end());
                break;
            }
        }
    }
    std::vector<std::string> labels;
    for (int i = 0; i < dim_v; ++i) labels.push_back("v" + std::to_string(i + 1));
    for (int m = 0; m < dim_z; ++m) labels.push_back("z" + std::to_string(m + 1));
    return MetricLieAlgebra::from_brackets(dim, entries, Mat::Identity(dim, dim), labels);
}

std::pair<MetricLieAlgebra, SolvableSplit> full_triangular(int n) {
    if (n < 2) throw SchemaError("full_triangular requires n >= 2");
    return build_iwasawa(n, /*trace_free=*/false);
}

}  // namespace solvembed
