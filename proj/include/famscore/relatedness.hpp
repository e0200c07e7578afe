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

#include <vector>

#include <Eigen/Dense>

#include "famscore/core.hpp"

namespace famscore::relatedness {

inline constexpr double kDefaultEta = 0.4;

struct Edge {
    std::size_t j1;  // j1 < j2
    std::size_t j2;
    double corr;
};

/// Pairs whose genotype correlation exceeds eta, ordered by (j1, j2).
struct RelatednessGraph {
    std::vector<Edge> edges;
    double eta = kDefaultEta;
};

/// Column correlations of x (n x n, unit diagonal). Throws ZeroVarianceColumn.
Eigen::MatrixXd pairwise_correlations(const Eigen::MatrixXd& x);
Eigen::MatrixXd pairwise_correlations(const ScaledMatrix& x);

RelatednessGraph relatedness_graph(const Eigen::MatrixXd& corr, double eta = kDefaultEta);

/// Families are the connected components of the graph with at least two
/// members; representatives are chosen by assign_representatives.
FamilyStructure detect_families(const Eigen::MatrixXd& corr, double eta = kDefaultEta);

/// Picks, per family, the member with the smallest mean absolute
/// correlation to the rest of its family (lowest index on ties).
FamilyStructure assign_representatives(const FamilyStructure& fam, const Eigen::MatrixXd& corr);

/// Same rule, with within-family correlations computed from x's columns.
FamilyStructure assign_representatives(const FamilyStructure& fam, const ScaledMatrix& x);

/// Singletons plus one representative per family, ascending.
IndexList select_unrelated_set(const FamilyStructure& fam, const ScaledMatrix& x);

}  // namespace famscore::relatedness
