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

#include "famscore/relatedness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "famscore/error.hpp"

namespace famscore::relatedness {

namespace {

Eigen::MatrixXd unit_centered_columns(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd z = x;
    z.rowwise() -= z.colwise().sum() / static_cast<double>(z.rows());
    IndexList zero;
    for (Index j = 0; j < z.cols(); ++j) {
        const double norm = z.col(j).norm();
        if (!(norm > 0.0)) {
            zero.push_back(static_cast<std::size_t>(j));
            continue;
        }
        z.col(j) /= norm;
    }
    if (!zero.empty()) throw Error(ErrorCode::ZeroVarianceColumn, "constant individual column(s)", zero);
    return z;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Eigen::MatrixXd pairwise_correlations(const Eigen::MatrixXd& x) {
    if (x.rows() < 2) throw Error(ErrorCode::DimensionMismatch, "need at least 2 SNPs");
    const Eigen::MatrixXd z = unit_centered_columns(x);
    const Index n = z.cols();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    c.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
    c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
    c = c.cwiseMax(-1.0).cwiseMin(1.0);
    c.diagonal().setOnes();
    return c;
}

Eigen::MatrixXd pairwise_correlations(const ScaledMatrix& x) { return pairwise_correlations(x.values()); }

RelatednessGraph relatedness_graph(const Eigen::MatrixXd& corr, double eta) {
    if (corr.rows() != corr.cols()) throw Error(ErrorCode::DimensionMismatch, "correlation matrix must be square");
    RelatednessGraph graph;
    graph.eta = eta;
    const Index n = corr.rows();
    for (Index j1 = 0; j1 < n; ++j1) {
        for (Index j2 = j1 + 1; j2 < n; ++j2) {
            if (corr(j1, j2) > eta) {
                graph.edges.push_back({static_cast<std::size_t>(j1), static_cast<std::size_t>(j2), corr(j1, j2)});
            }
        }
    }
    return graph;
}

FamilyStructure detect_families(const Eigen::MatrixXd& corr, double eta) {
    const auto graph = relatedness_graph(corr, eta);
    const auto n = static_cast<std::size_t>(corr.rows());
    DisjointSets sets(n);
    for (const auto& e : graph.edges) sets.unite(e.j1, e.j2);

    std::vector<IndexList> by_root(n);
    for (std::size_t j = 0; j < n; ++j) by_root[sets.find(j)].push_back(j);
    std::vector<IndexList> families;
    for (auto& members : by_root) {
        if (members.size() >= 2) families.push_back(std::move(members));
    }
    return assign_representatives(FamilyStructure(n, std::move(families)), corr);
}

FamilyStructure assign_representatives(const FamilyStructure& fam, const Eigen::MatrixXd& corr) {
    if (static_cast<std::size_t>(corr.rows()) != fam.size() || corr.rows() != corr.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "correlation matrix does not match family structure");
    }
    IndexList reps;
    reps.reserve(fam.family_count());
    for (const auto& members : fam.families()) {
        std::size_t best = members.front();
        double best_mean = INFINITY;
        for (const auto j : members) {
            double total = 0.0;
            for (const auto other : members) {
                if (other != j) total += std::abs(corr(static_cast<Index>(j), static_cast<Index>(other)));
            }
            const double mean = total / static_cast<double>(members.size() - 1);
            if (mean < best_mean) {
                best_mean = mean;
                best = j;
            }
        }
        reps.push_back(best);
    }
    return fam.with_representatives(std::move(reps));
}

FamilyStructure assign_representatives(const FamilyStructure& fam, const ScaledMatrix& x) {
    if (static_cast<std::size_t>(x.individuals()) != fam.size()) {
        throw Error(ErrorCode::DimensionMismatch, "family structure size does not match matrix");
    }
    // only within-family correlations are needed
    const Index n = x.individuals();
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(n, n);
    for (const auto& members : fam.families()) {
        const Eigen::MatrixXd block = pairwise_correlations(select_columns(x.values(), members));
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = 0; b < members.size(); ++b) {
                corr(static_cast<Index>(members[a]), static_cast<Index>(members[b])) =
                    block(static_cast<Index>(a), static_cast<Index>(b));
            }
        }
    }
    return assign_representatives(fam, corr);
}

IndexList select_unrelated_set(const FamilyStructure& fam, const ScaledMatrix& x) {
    return assign_representatives(fam, x).unrelated();
}

}  // namespace famscore::relatedness
