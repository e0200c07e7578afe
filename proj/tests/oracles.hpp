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


// Independent reference computations used by the tests. Everything here is
// deliberately naive: loops, Eigen's Jacobi SVD, and whole-method reruns on
// column subsets.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "famscore/core.hpp"
#include "famscore/methods.hpp"
#include "famscore/simulator.hpp"

namespace oracle {

using famscore::FamilyStructure;
using famscore::Index;
using famscore::IndexList;
using famscore::ScaledMatrix;

inline Eigen::MatrixXd brute_covariance(const Eigen::MatrixXd& x) {
    const Index p = x.rows(), n = x.cols();
    std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < p; ++i) mean[j] += x(i, j);
        mean[j] /= static_cast<double>(p);
    }
    Eigen::MatrixXd m(n, n);
    for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
            double s = 0.0;
            for (Index i = 0; i < p; ++i) s += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
            m(a, b) = s / static_cast<double>(p - 1);
        }
    }
    return m;
}

inline double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::ArrayXd ca = a.array() - a.mean();
    const Eigen::ArrayXd cb = b.array() - b.mean();
    return (ca * cb).sum() / std::sqrt((ca * ca).sum() * (cb * cb).sum());
}

inline Eigen::MatrixXd centered(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd c = x;
    c.rowwise() -= c.colwise().mean();
    return c;
}

inline Eigen::MatrixXd columns(const Eigen::MatrixXd& x, const IndexList& cols) {
    Eigen::MatrixXd out(x.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = x.col(static_cast<Index>(cols[c]));
    return out;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Right singular vectors of the centered columns by one-sided Jacobi, with the
// largest entry of each column made positive.
struct Svd {
    Eigen::VectorXd d;
    Eigen::MatrixXd v;
};

inline Svd jacobi_svd(const Eigen::MatrixXd& a, Index k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    Svd out{svd.singularValues().head(k), svd.matrixV().leftCols(k)};
    for (Index l = 0; l < k; ++l) {
        Index arg = 0;
        out.v.col(l).cwiseAbs().maxCoeff(&arg);
        if (out.v(arg, l) < 0) out.v.col(l) *= -1.0;
    }
    return out;
}

// Flips each column of q whose dot product with the reference, over the given
// rows, is negative.
inline void align(Eigen::MatrixXd& q, const Eigen::MatrixXd& ref, const IndexList& rows) {
    for (Index l = 0; l < q.cols(); ++l) {
        double dot = 0.0;
        for (const auto r : rows) dot += q(static_cast<Index>(r), l) * ref(static_cast<Index>(r), l);
        if (dot < 0) q.col(l) *= -1.0;
    }
}

// Singleton-only decomposition, rows placed at the singletons; zero elsewhere.
inline Eigen::MatrixXd reference_rows(const ScaledMatrix& x, const FamilyStructure& fam, Index k) {
    const auto& s = fam.singletons();
    const auto svd = jacobi_svd(centered(columns(x.values(), s)), k);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.individuals(), k);
    for (std::size_t r = 0; r < s.size(); ++r) out.row(static_cast<Index>(s[r])) = svd.v.row(static_cast<Index>(r));
    return out;
}

// Gold standard by brute force: a separate SVD of the singletons plus each
// family member, keeping that member's row.
inline Eigen::MatrixXd gold_scores(const ScaledMatrix& x, const FamilyStructure& fam, Index k) {
    Eigen::MatrixXd out = reference_rows(x, fam, k);
    const auto& s = fam.singletons();
    for (const auto j : fam.family_members()) {
        IndexList cols = s;
        cols.push_back(j);
        auto svd = jacobi_svd(centered(columns(x.values(), cols)), k);
        Eigen::MatrixXd placed = Eigen::MatrixXd::Zero(x.individuals(), k);
        for (std::size_t r = 0; r < cols.size(); ++r) placed.row(static_cast<Index>(cols[r])) = svd.v.row(static_cast<Index>(r));
        align(placed, out, s);
        out.row(static_cast<Index>(j)) = placed.row(static_cast<Index>(j));
    }
    return out;
}

// Comparison scores by brute force: the full method rerun on the singletons
// plus each whole family.
inline Eigen::MatrixXd family_scores(const ScaledMatrix& x, const FamilyStructure& fam, famscore::methods::Method method,
                                     Index k, const famscore::methods::MethodOptions& options = {}) {
    Eigen::MatrixXd out = reference_rows(x, fam, k);
    const auto& s = fam.singletons();
    for (const auto& members : fam.families()) {
        IndexList cols = s;
        cols.insert(cols.end(), members.begin(), members.end());
        std::sort(cols.begin(), cols.end());
        const ScaledMatrix sub(columns(x.values(), cols), x.kind());
        const auto res = famscore::methods::run_method(method, sub, fam.subset(cols), k, options);
        Eigen::MatrixXd placed = Eigen::MatrixXd::Zero(x.individuals(), k);
        for (std::size_t r = 0; r < cols.size(); ++r) placed.row(static_cast<Index>(cols[r])) = res.scores.row(static_cast<Index>(r));
        align(placed, out, s);
        for (const auto j : members) out.row(static_cast<Index>(j)) = placed.row(static_cast<Index>(j));
    }
    return out;
}

// Plumbing generator: two groups of Gaussian columns whose means differ by
// shift along a random direction.
inline Eigen::MatrixXd two_strata_gaussian(Index p, Index n_per, double shift, std::mt19937_64& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::VectorXd dir(p);
    for (Index i = 0; i < p; ++i) dir(i) = z(rng);
    dir.normalize();
    Eigen::MatrixXd x(p, 2 * n_per);
    for (Index j = 0; j < 2 * n_per; ++j) {
        for (Index i = 0; i < p; ++i) x(i, j) = z(rng);
        if (j >= n_per) x.col(j) += shift * std::sqrt(static_cast<double>(p)) * dir;
    }
    return x;
}

inline Eigen::MatrixXd row_standardize(Eigen::MatrixXd x) {
    for (Index i = 0; i < x.rows(); ++i) {
        const double m = x.row(i).mean();
        x.row(i).array() -= m;
        const double sd = std::sqrt(x.row(i).squaredNorm() / static_cast<double>(x.cols() - 1));
        x.row(i) /= sd;
    }
    return x;
}

// Family-size census of the reference cohort: 2546 singletons, 417 pairs,
// 20 trios and one family of four, families dealt round-robin over strata.
inline famscore::sim::DesignPlan census_plan(int strata = 5) {
    famscore::sim::DesignPlan plan;
    const std::size_t singles = 2546;
    for (int k = 0; k < strata; ++k) {
        plan.singletons_per_stratum.push_back(singles / strata + (static_cast<std::size_t>(k) < singles % strata ? 1 : 0));
    }
    int next = 0;
    auto add = [&](std::size_t size, int count) {
        for (int c = 0; c < count; ++c) {
            plan.families.push_back({next + 1, size});
            next = (next + 1) % strata;
        }
    };
    add(2, 417);
    add(3, 20);
    add(4, 1);
    return plan;
}

// Small simulated cohort: per stratum `singles` unrelated individuals and the
// given family sizes.
inline famscore::sim::SimOutput small_cohort(famscore::Index snps, std::size_t singles,
                                             const std::vector<std::size_t>& sizes, std::uint64_t seed, int strata = 3) {
    famscore::sim::SimConfig cfg;
    cfg.snps = snps;
    cfg.strata = strata;
    cfg.seed = seed;
    cfg.fst = 0.02;
    famscore::sim::DesignPlan plan;
    plan.singletons_per_stratum.assign(static_cast<std::size_t>(strata), singles);
    int next = 0;
    for (const auto s : sizes) {
        plan.families.push_back({next + 1, s});
        next = (next + 1) % strata;
    }
    cfg.individuals = static_cast<Index>(plan.total());
    return famscore::sim::simulate_design(cfg, plan);
}

inline ScaledMatrix scaled(const famscore::GenotypeMatrix& g) {
    return famscore::scale_genotypes(famscore::drop_monomorphic(g));
}

// Largest share of a column's sum of squares carried by the given rows, over
// the first `components` columns.
inline double max_row_share(const Eigen::MatrixXd& scores, const IndexList& rows, Index components) {
    double best = 0.0;
    for (Index l = 0; l < std::min(components, scores.cols()); ++l) {
        double part = 0.0;
        for (const auto r : rows) part += scores(static_cast<Index>(r), l) * scores(static_cast<Index>(r), l);
        best = std::max(best, part / scores.col(l).squaredNorm());
    }
    return best;
}

}  // namespace oracle
