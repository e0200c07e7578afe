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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famscore/core.hpp"
#include "famscore/methods.hpp"

namespace famscore::eval {

inline constexpr Index kMetricComponents = 5;
inline constexpr Index kInstabilityComponents = 6;
inline constexpr double kDefaultSpan = 0.3;
inline constexpr double kLogFloor = 1e-300;

/// Per-component values and their mean over the first L components.
struct ComponentMetric {
    Eigen::VectorXd per_component;
    double mean = 0.0;
};

/// Within-stratum sum of squares over total sum of squares, per score
/// column. strata are 1-based labels.
ComponentMetric swiss(const Eigen::MatrixXd& scores, const std::vector<int>& strata,
                      Index components = kMetricComponents);

/// Individuals whose dispersion is compared (related) against a reference
/// group (unrelated).
struct Split {
    IndexList related;
    IndexList unrelated;
};

/// (family members, singletons); (related set, unrelated set) for PCAiRLite.
Split rse_split(methods::Method method, const FamilyStructure& fam);

/// Relateds squared error. Both groups are measured as mean squared deviation
/// from the stratum mean of the unrelated group. Strata with fewer than two
/// related individuals are left out of both sums.
ComponentMetric rse(const Eigen::MatrixXd& scores, const std::vector<int>& strata, const Split& split,
                    Index components = kMetricComponents);

struct InstabilityReport {
    Eigen::VectorXd instability;  // per component, >= 0
    IndexList members;            // family members, row order of gold/comparison
    Eigen::MatrixXd gold;         // |F| x L
    Eigen::MatrixXd comparison;   // |F| x L
    std::vector<std::string> warnings;
};

/// Compares comparison scores q against gold scores w (both n x L). Each q
/// column is sign-aligned to w over the singleton rows first.
InstabilityReport instability_from_scores(const Eigen::MatrixXd& q, const Eigen::MatrixXd& w,
                                          const FamilyStructure& fam);

/// Gold standard: one decomposition of singletons + j for every family
/// member j. Singleton rows hold the singleton-only reference decomposition.
Eigen::MatrixXd gold_standard_scores(const ScaledMatrix& x, const FamilyStructure& fam, Index components,
                                     std::vector<std::string>* warnings = nullptr);

/// One run of `method` on singletons + each whole family.
Eigen::MatrixXd family_run_scores(const ScaledMatrix& x, const FamilyStructure& fam, methods::Method method,
                                  Index components, const methods::MethodOptions& options = {},
                                  std::vector<std::string>* warnings = nullptr);

InstabilityReport instability(const ScaledMatrix& x, const FamilyStructure& fam, methods::Method method,
                              Index components = kInstabilityComponents, const methods::MethodOptions& options = {});

/// Local linear regression with tricube weights over the ceil(span * m)
/// nearest neighbours of each point.
Eigen::VectorXd loess_smooth(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double span = kDefaultSpan);

struct IndividualScree {
    Eigen::MatrixXd raw;       // n x k, (v_jl d_l)^2
    Eigen::MatrixXd smoothed;  // n x k, loess of log10(raw + kLogFloor) against l
};

/// The span is widened to 2/k when needed so every window holds two points.
IndividualScree individual_scree(const methods::AncestryResult& result, double span = kDefaultSpan);

}  // namespace famscore::eval
