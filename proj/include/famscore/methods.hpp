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

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "famscore/core.hpp"

namespace famscore::methods {

enum class Method { Naive, SP, PCAiRLite, FWMatrix, FWGeometric, MS, CPW, FA };

inline constexpr std::array<Method, 8> kAllMethods = {Method::Naive, Method::SP,          Method::PCAiRLite,
                                                      Method::FWMatrix, Method::FWGeometric, Method::MS,
                                                      Method::CPW,   Method::FA};

/// CLI spelling: naive, sp, pcair, fw, fw-geo, ms, cpw, fa.
std::string_view method_name(Method m) noexcept;
Method parse_method(std::string_view name);

/// Whether the method's decomposition excludes some individuals, which are
/// then projected (SP, PCAiRLite, FA).
bool is_projection(Method m) noexcept;

enum class ValueKind { Singular, Eigen };

/// Ancestry scores for every input individual, rows in input order.
struct AncestryResult {
    Eigen::MatrixXd scores;  // n x k
    Eigen::VectorXd values;  // k, descending
    ValueKind value_kind = ValueKind::Singular;
    std::optional<Eigen::MatrixXd> loadings;  // p x k
    Method method = Method::Naive;
    Index markers = 0;
    std::vector<std::string> individual_ids;

    Index components() const noexcept { return scores.cols(); }
    /// Values on the singular-value scale; eigenvalues of a covariance are
    /// converted with d = sqrt((p - 1) * lambda).
    Eigen::VectorXd singular_values() const;
};

/// Which entries of M feed the substitute value.
enum class MedianScope { OffDiagonal, AllEntries };

struct MethodOptions {
    double delta = 0.001;  // ridge added to diag(M) by CPW
    MedianScope median_scope = MedianScope::OffDiagonal;
    // CPW: zero out negative eigenvalues of (substituted M22 - S) instead of failing
    bool clamp_negative = true;
};

// --- decompositions ------------------------------------------------------

AncestryResult naive_scores(const ScaledMatrix& x, Index k);

AncestryResult singleton_projection(const ScaledMatrix& x, const FamilyStructure& fam, Index k);

/// Decomposes the unrelated set (singletons plus fam's representatives).
AncestryResult pcair_lite(const ScaledMatrix& x, const FamilyStructure& fam, Index k);

// --- family whitening ----------------------------------------------------

/// Whitens each family's columns with the inverse square root of their
/// correlation matrix, then restores each column's original mean and sd.
ScaledMatrix family_whiten_matrix(const ScaledMatrix& x, const FamilyStructure& fam);

/// arccos(1 / sqrt(n_f)).
double rotation_angle(std::size_t family_size);

/// Rotates the columns of one family away from their mean direction to the
/// target angle, keeping each column's length. No recentering.
Eigen::MatrixXd rotate_family(const Eigen::MatrixXd& members);

/// rotate_family per family followed by the same mean/sd restoration as
/// family_whiten_matrix.
ScaledMatrix family_rotate_geometric(const ScaledMatrix& x, const FamilyStructure& fam);

// --- matrix substitution -------------------------------------------------

/// Median of the entries of M selected by scope.
double substitute_value(const Eigen::MatrixXd& m, MedianScope scope = MedianScope::OffDiagonal);

/// Replaces every co-family off-diagonal entry with substitute_value(M).
CovarianceMatrix matrix_substitution(const CovarianceMatrix& m, const FamilyStructure& fam,
                                     MedianScope scope = MedianScope::OffDiagonal);

AncestryResult ms_scores(const CovarianceMatrix& substituted, Index k,
                         const std::vector<std::string>& individual_ids = {});

// --- covariance-preserving whitening -------------------------------------

struct CpwTransform {
    ScaledMatrix y;             // X B', singleton columns copied from X
    Eigen::MatrixXd c;          // n_S x n_F
    Eigen::MatrixXd d;          // n_F x n_F
    CovarianceMatrix target;    // substituted covariance of the centered input (no ridge)
    double min_clamped_eigenvalue = 0.0;  // smallest eigenvalue of (M22~ - S) before clamping
};

/// Solves for B with singleton block I so that cov(X B') matches the
/// substituted covariance; delta is added to diag(M) before solving.
CpwTransform cpw_transform(const ScaledMatrix& x, const FamilyStructure& fam, const MethodOptions& options = {});

struct CpwResult {
    ScaledMatrix y;
    AncestryResult scores;
};

CpwResult cpw(const ScaledMatrix& x, const FamilyStructure& fam, Index k, const MethodOptions& options = {});

// --- family average projection -------------------------------------------

/// [X_S, one length-rescaled mean column per family] from the centered input.
Eigen::MatrixXd family_average_matrix(const ScaledMatrix& x, const FamilyStructure& fam);

AncestryResult family_average_scores(const ScaledMatrix& x, const FamilyStructure& fam, Index k);

// --- dispatch ------------------------------------------------------------

AncestryResult run_method(Method m, const ScaledMatrix& x, const FamilyStructure& fam, Index k,
                          const MethodOptions& options = {});

}  // namespace famscore::methods
