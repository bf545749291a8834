#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solvembed/lie_algebra.hpp"

namespace solvembed {

/// A worked example: either a solvable algebra with its designated split, or
/// a nilpotent algebra together with the canonical derivation of its
/// designated rank-one extension.
struct CatalogEntry {
    std::string name;
    MetricLieAlgebra alg;
    std::optional<SolvableSplit> split;     ///< present for solvable entries
    std::optional<Mat> canonical_derivation;///< present for nilpotent entries

    /// The algebra/split pair the embedding pipeline runs on: the entry
    /// itself when solvable, its rank-one extension otherwise.
    std::pair<MetricLieAlgebra, SolvableSplit> embeddable() const;
};

/// Recognized names: rh(n) for n >= 2, heisenberg(2m+1) for m >= 1,
/// heisenberg_ext, filiform4, filiform4_ext, triangular_iwasawa(n) for
/// n >= 2.  Throws UnknownName otherwise.
CatalogEntry example(const std::string& name);

/// Default instantiations of every catalog family, used by tests and the CLI
/// listing.
std::vector<std::string> catalog_names();

/// Deterministic two-step nilpotent algebra: dim_v generators, dim_z central
/// directions, skew bracket forms with small integer entries drawn from a
/// counter PRNG keyed by seed; gram is the identity.
MetricLieAlgebra random_two_step(std::uint64_t seed, int dim_v, int dim_z);

/// The full lower-triangular algebra t(n, R) with the fixed inner product
/// (twice the trace form on diagonals, trace form below), as a metric
/// algebra with the diagonal part as a and the strictly lower part as n.
/// Not a catalog entry; exposed for curvature experiments.
std::pair<MetricLieAlgebra, SolvableSplit> full_triangular(int n);

}  // namespace solvembed
