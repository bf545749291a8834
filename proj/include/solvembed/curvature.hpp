#pragma once

#include <optional>
#include <utility>

#include "solvembed/lie_algebra.hpp"

namespace solvembed {

/// Levi-Civita connection coefficients over a gram-orthonormal frame.
///
/// frame columns are the frame vectors in the original coordinates;
/// gamma[i](j, k) = <nabla_{u_i} u_j, u_k>.
struct ConnectionTable {
    Mat frame;
    std::vector<Mat> gamma;

    int dim() const { return static_cast<int>(frame.cols()); }

    /// Max violation of metric compatibility Gamma[i](j,k) + Gamma[i](k,j) = 0.
    double metric_compatibility_residual() const;

    /// Max violation of torsion-freeness against the frame brackets.
    double torsion_residual(const MetricLieAlgebra& alg) const;
};

/// Koszul formula on a gram-orthonormal frame:
/// 2 <nabla_{e_i} e_j, e_k> = <[e_i,e_j],e_k> - <[e_j,e_k],e_i> + <[e_k,e_i],e_j>.
ConnectionTable levi_civita(const MetricLieAlgebra& alg);

/// Ricci data in the orthonormal frame, with optional Einstein constant and
/// optional nilsoliton pair (c, D) satisfying Ric = c * Id + D.
struct RicciData {
    Mat frame;
    Mat ricci;
    std::optional<double> einstein_constant;
    std::optional<double> soliton_c;
    std::optional<Mat> soliton_derivation;  ///< frame coordinates
};

/// Ricci tensor Ric(X, Y) = sum_i <R(e_i, X) Y, e_i> with
/// R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_{[X,Y]}.
RicciData ricci(const MetricLieAlgebra& alg);

/// True iff ||Ric - lambda * Id||_max <= tol with lambda = tr(Ric) / dim;
/// lambda is returned either way.
std::pair<bool, double> einstein_check(const MetricLieAlgebra& alg, double tol = 1e-8);

/// Solves Ric = c * Id + D over (c, derivation space) by least squares on a
/// nilpotent algebra.  Throws Ambiguous when the solution set has positive
/// dimension (e.g. abelian input) and NotSoliton when the best residual
/// exceeds tol.
RicciData soliton_data(const MetricLieAlgebra& nilalg, double tol = kDefaultTol);

/// Builds the rank-one extension s = R A + n with ad A = s * D, where D is
/// the soliton derivation and the scalar s > 0 is found by a bracketed
/// bisection so that the extension is Einstein; certified by einstein_check.
/// Throws ExtensionNotEinstein when no bracketed root passes the check.
std::pair<MetricLieAlgebra, SolvableSplit> soliton_extension(const MetricLieAlgebra& nilalg,
                                                             double tol = 1e-8);

/// Same, but with an explicitly supplied derivation D (original basis
/// coordinates of the nilpotent algebra), bypassing soliton_data.
std::pair<MetricLieAlgebra, SolvableSplit> soliton_extension(const MetricLieAlgebra& nilalg,
                                                             const Mat& D,
                                                             double tol = 1e-8);

}  // namespace solvembed
