#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "solvembed/embed.hpp"

namespace solvembed {

struct ParsedAlgebra {
    MetricLieAlgebra alg;
    std::optional<SolvableSplit> split;
};

/// Interchange schema:
///   { "dim": n, "labels": [...]?, "brackets": [{"i":0,"j":1,"coeffs":{"2":1.0}}],
///     "gram": [[...]], "split": {"a":[...], "n":[...]}? }
/// Indices are 0-based; bracket pairs are stored for i < j only.
/// Throws ParseError on unreadable input, SchemaError on structural problems,
/// and validation errors (JacobiViolation, NotPositiveDefinite, ...) on
/// mathematically inadmissible data.
ParsedAlgebra parse_algebra(const nlohmann::json& j);
ParsedAlgebra parse_algebra_file(const std::string& path);

nlohmann::json serialize_algebra(const MetricLieAlgebra& alg,
                                 const std::optional<SolvableSplit>& split);

/// Embedding output:
///   { "N":, "c":, "metric":"einstein"|"frobenius", "basis_order":[[...]...],
///     "mats":[[[...]...]...], "certificate":{...} }
/// basis_order lists the ordered basis vectors in original coordinates.
nlohmann::json serialize_embedding(const Representation& rep,
                                   const EmbeddingCertificate& cert);

struct ParsedEmbedding {
    int N = 0;
    double c = 0.0;
    MetricKind metric = MetricKind::Einstein;
    Mat basis_change;           ///< columns = ordered basis vectors
    std::vector<Mat> mats;
};

ParsedEmbedding parse_embedding(const nlohmann::json& j);
ParsedEmbedding parse_embedding_file(const std::string& path);

/// Reassembles a Representation from a parsed embedding against the source
/// algebra it claims to represent (basis metadata is reconstructed so the
/// verification checks can run; no pipeline state is involved).
Representation embedding_to_representation(const ParsedEmbedding& emb,
                                           const MetricLieAlgebra& alg);

}  // namespace solvembed
