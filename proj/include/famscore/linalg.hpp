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

#include <Eigen/Dense>

#include "famscore/core.hpp"

namespace famscore::linalg {

/// Leading k singular triplets of A = U diag(D) V'.
struct ThinSvd {
    Eigen::MatrixXd u;  // p x k, orthonormal columns
    Eigen::VectorXd d;  // k, descending, >= 0
    Eigen::MatrixXd v;  // n x k, orthonormal columns
};

/// Leading k eigenpairs of a symmetric matrix, values descending.
struct SymEig {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

// Eigenvalues in [-kClampTolerance, 0) are treated as zero before square roots.
inline constexpr double kClampTolerance = 1e-8;
// Smallest eigenvalue accepted by sym_inv_sqrt after clamping.
inline constexpr double kInvSqrtFloor = 1e-10;

/// Flips columns of v so the largest-magnitude entry of each is positive
/// (lowest index wins ties); the matching columns of u, if given, follow.
void apply_sign_convention(Eigen::MatrixXd& v, Eigen::MatrixXd* u = nullptr);

ThinSvd thin_svd(const Eigen::MatrixXd& a, Index k);

SymEig sym_eig(const Eigen::MatrixXd& m, Index k);
SymEig sym_eig(const CovarianceMatrix& m, Index k);

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& p);
Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& p);

/// Square root of the positive part of a symmetric matrix: negative
/// eigenvalues of any size are set to zero first.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& p);

double min_eigenvalue(const Eigen::MatrixXd& m);

/// All eigenpairs, values descending, vectors under the sign convention.
SymEig full_sym_eig(const Eigen::MatrixXd& m);

/// Leading eigenpairs of H = [[A, B], [B', E]] when A = Q diag(lambda) Q' is
/// known in full. Takes lambda (descending), c = Q' B and E. Vectors come back
/// in the basis diag(Q, I): the first rows are coefficients on the columns of
/// Q, the last rows are the bordered coordinates. Eigenvalues are located by
/// inertia counting on the Schur complement and the vectors refined by
/// inverse iteration, so the cost is O(size * border^2) per pair.
SymEig bordered_top_eigenpairs(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& c, const Eigen::MatrixXd& e,
                               Index k);

}  // namespace famscore::linalg
