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

#include "famscore/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "famscore/error.hpp"

namespace famscore {

namespace {

std::vector<std::string> default_ids(const std::string& prefix, Index count) {
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) ids.push_back(prefix + std::to_string(i + 1));
    return ids;
}

void require_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    seen.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!seen.insert(ids[i]).second) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string("duplicate ") + what + " id '" + ids[i] + "'", {i});
        }
    }
}

}  // namespace

GenotypeMatrix::GenotypeMatrix(GenotypeValues values, std::vector<std::string> snp_ids,
                               std::vector<std::string> individual_ids)
    : values_(std::move(values)),
      snp_ids_(std::move(snp_ids)),
      individual_ids_(std::move(individual_ids)) {
    if (values_.rows() < 2 || values_.cols() < 2) {
        throw Error(ErrorCode::DimensionMismatch,
                    "genotype matrix needs at least 2 SNPs and 2 individuals");
    }
    if (static_cast<Index>(snp_ids_.size()) != values_.rows() ||
        static_cast<Index>(individual_ids_.size()) != values_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "id count does not match matrix shape");
    }
    require_unique(snp_ids_, "SNP");
    require_unique(individual_ids_, "individual");
    for (Index j = 0; j < values_.cols(); ++j) {
        for (Index i = 0; i < values_.rows(); ++i) {
            const auto v = values_(i, j);
            if (v != kMissingGenotype && (v < 0 || v > 2)) {
                throw Error(ErrorCode::InvalidArgument,
                            "genotype value " + std::to_string(int{v}) + " outside {0,1,2} at SNP " +
                                snp_ids_[static_cast<std::size_t>(i)] + ", individual " +
                                individual_ids_[static_cast<std::size_t>(j)],
                            {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
            }
        }
    }
}

GenotypeMatrix GenotypeMatrix::with_default_ids(GenotypeValues values) {
    auto snps = default_ids("snp", values.rows());
    auto inds = default_ids("ind", values.cols());
    return GenotypeMatrix(std::move(values), std::move(snps), std::move(inds));
}

bool GenotypeMatrix::has_missing() const noexcept {
    return (values_.array() == kMissingGenotype).any();
}

ScaledMatrix::ScaledMatrix(Eigen::MatrixXd values, ScaleKind kind, std::vector<std::string> snp_ids,
                           std::vector<std::string> individual_ids)
    : values_(std::move(values)),
      kind_(kind),
      snp_ids_(std::move(snp_ids)),
      individual_ids_(std::move(individual_ids)) {
    if (snp_ids_.empty()) snp_ids_ = default_ids("snp", values_.rows());
    if (individual_ids_.empty()) individual_ids_ = default_ids("ind", values_.cols());
    if (static_cast<Index>(snp_ids_.size()) != values_.rows() ||
        static_cast<Index>(individual_ids_.size()) != values_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "id count does not match matrix shape");
    }
}

ScaledMatrix ScaledMatrix::rebind(Eigen::MatrixXd values, ScaleKind kind) const {
    return ScaledMatrix(std::move(values), kind, snp_ids_, individual_ids_);
}

FamilyStructure::FamilyStructure(std::size_t n, std::vector<IndexList> families,
                                 std::vector<std::string> family_ids)
    : n_(n) {
    if (!family_ids.empty() && family_ids.size() != families.size()) {
        throw Error(ErrorCode::DimensionMismatch, "family id count does not match family count");
    }
    std::vector<std::pair<IndexList, std::string>> fams;
    fams.reserve(families.size());
    for (std::size_t f = 0; f < families.size(); ++f) {
        IndexList members = std::move(families[f]);
        std::sort(members.begin(), members.end());
        if (members.size() < 2) {
            throw Error(ErrorCode::InvalidArgument, "family with fewer than 2 members", members);
        }
        std::string id = family_ids.empty() ? std::string() : std::move(family_ids[f]);
        fams.emplace_back(std::move(members), std::move(id));
    }
    std::sort(fams.begin(), fams.end(),
              [](const auto& a, const auto& b) { return a.first.front() < b.first.front(); });

    std::vector<char> used(n, 0);
    for (const auto& [members, id] : fams) {
        for (const auto j : members) {
            if (j >= n) throw Error(ErrorCode::InvalidArgument, "family member out of range", {j});
            if (used[j]) throw Error(ErrorCode::InvalidArgument, "individual in two families", {j});
            used[j] = 1;
        }
    }
    for (std::size_t f = 0; f < fams.size(); ++f) {
        families_.push_back(std::move(fams[f].first));
        family_ids_.push_back(fams[f].second.empty() ? "fam" + std::to_string(f + 1)
                                                     : std::move(fams[f].second));
        representatives_.push_back(families_.back().front());
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!used[j]) singletons_.push_back(j);
    }
}

FamilyStructure FamilyStructure::all_singletons(std::size_t n) { return FamilyStructure(n, {}); }

FamilyStructure FamilyStructure::with_representatives(IndexList reps) const {
    if (reps.size() != families_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one representative per family required");
    }
    for (std::size_t f = 0; f < reps.size(); ++f) {
        if (!std::binary_search(families_[f].begin(), families_[f].end(), reps[f])) {
            throw Error(ErrorCode::InvalidArgument, "representative not in its family", {reps[f]});
        }
    }
    FamilyStructure out = *this;
    out.representatives_ = std::move(reps);
    return out;
}

IndexList FamilyStructure::family_members() const {
    IndexList out;
    for (const auto& fam : families_) out.insert(out.end(), fam.begin(), fam.end());
    std::sort(out.begin(), out.end());
    return out;
}

IndexList FamilyStructure::unrelated() const {
    IndexList out = singletons_;
    out.insert(out.end(), representatives_.begin(), representatives_.end());
    std::sort(out.begin(), out.end());
    return out;
}

IndexList FamilyStructure::related() const {
    IndexList out;
    for (std::size_t f = 0; f < families_.size(); ++f) {
        for (const auto j : families_[f]) {
            if (j != representatives_[f]) out.push_back(j);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> FamilyStructure::family_size_of() const {
    std::vector<std::size_t> out(n_, 1);
    for (const auto& fam : families_) {
        for (const auto j : fam) out[j] = fam.size();
    }
    return out;
}

FamilyStructure FamilyStructure::subset(const IndexList& keep) const {
    std::vector<std::ptrdiff_t> new_index(n_, -1);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] >= n_) throw Error(ErrorCode::InvalidArgument, "subset index out of range", {keep[k]});
        new_index[keep[k]] = static_cast<std::ptrdiff_t>(k);
    }
    std::vector<IndexList> fams;
    std::vector<std::string> ids;
    IndexList reps;
    for (std::size_t f = 0; f < families_.size(); ++f) {
        IndexList members;
        for (const auto j : families_[f]) {
            if (new_index[j] >= 0) members.push_back(static_cast<std::size_t>(new_index[j]));
        }
        if (members.size() >= 2) {
            fams.push_back(members);
            ids.push_back(family_ids_[f]);
            const auto r = new_index[representatives_[f]];
            reps.push_back(r >= 0 ? static_cast<std::size_t>(r) : members.front());
        }
    }
    FamilyStructure out(keep.size(), std::move(fams), std::move(ids));
    // the constructor may reorder families; re-map representatives by membership
    IndexList ordered;
    for (const auto& fam : out.families()) {
        std::size_t rep = fam.front();
        for (const auto r : reps) {
            if (std::binary_search(fam.begin(), fam.end(), r)) rep = r;
        }
        ordered.push_back(rep);
    }
    return out.with_representatives(std::move(ordered));
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd values, CovarianceSource source, Index markers)
    : values_(std::move(values)), source_(source), markers_(markers) {
    if (values_.rows() != values_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "covariance matrix must be square");
    }
    const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
    if ((values_ - values_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorCode::InvalidArgument, "covariance matrix is not symmetric");
    }
    for (Index j = 0; j < values_.rows(); ++j) {
        if (values_(j, j) < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "negative variance on diagonal",
                        {static_cast<std::size_t>(j)});
        }
    }
}

namespace {

// Converts to reals, imputing each missing entry with its row mean.
Eigen::MatrixXd impute_to_real(const GenotypeMatrix& g) {
    const auto& raw = g.values();
    Eigen::MatrixXd x = raw.cast<double>();
    if (!g.has_missing()) return x;
    const Eigen::ArrayXXd present = (raw.array() != kMissingGenotype).cast<double>();
    const Eigen::VectorXd counts = present.rowwise().sum().matrix();
    const Eigen::VectorXd sums = (x.array() * present).rowwise().sum().matrix();
    for (Index j = 0; j < x.cols(); ++j) {
        for (Index i = 0; i < x.rows(); ++i) {
            if (raw(i, j) == kMissingGenotype) x(i, j) = counts(i) > 0 ? sums(i) / counts(i) : 0.0;
        }
    }
    return x;
}

}  // namespace

IndexList monomorphic_snps(const GenotypeMatrix& g) {
    const Eigen::MatrixXd x = impute_to_real(g);
    IndexList rows;
    const Eigen::VectorXd lo = x.rowwise().minCoeff();
    const Eigen::VectorXd hi = x.rowwise().maxCoeff();
    for (Index i = 0; i < x.rows(); ++i) {
        if (lo(i) == hi(i)) rows.push_back(static_cast<std::size_t>(i));
    }
    return rows;
}

GenotypeMatrix drop_snps(const GenotypeMatrix& g, const IndexList& rows) {
    std::vector<char> drop(static_cast<std::size_t>(g.snps()), 0);
    for (const auto r : rows) {
        if (r >= drop.size()) throw Error(ErrorCode::InvalidArgument, "SNP index out of range", {r});
        drop[r] = 1;
    }
    std::vector<Index> kept;
    std::vector<std::string> ids;
    for (Index i = 0; i < g.snps(); ++i) {
        if (!drop[static_cast<std::size_t>(i)]) {
            kept.push_back(i);
            ids.push_back(g.snp_ids()[static_cast<std::size_t>(i)]);
        }
    }
    GenotypeValues values(static_cast<Index>(kept.size()), g.individuals());
    for (std::size_t r = 0; r < kept.size(); ++r) values.row(static_cast<Index>(r)) = g.values().row(kept[r]);
    return GenotypeMatrix(std::move(values), std::move(ids), g.individual_ids());
}

GenotypeMatrix drop_monomorphic(const GenotypeMatrix& g) { return drop_snps(g, monomorphic_snps(g)); }

Eigen::MatrixXd standardize_rows(const Eigen::MatrixXd& values) {
    const Index n = values.cols();
    if (n < 2) throw Error(ErrorCode::DimensionMismatch, "need at least 2 individuals");
    Eigen::MatrixXd x = values;
    const Eigen::VectorXd mean = x.rowwise().sum() / static_cast<double>(n);
    x.colwise() -= mean;
    const Eigen::VectorXd ss = x.rowwise().squaredNorm();
    IndexList bad;
    for (Index i = 0; i < x.rows(); ++i) {
        // relative test so that already-standardized reals are not flagged by roundoff
        if (!(ss(i) > 1e-24 * std::max(1.0, mean(i) * mean(i)) * static_cast<double>(n))) {
            bad.push_back(static_cast<std::size_t>(i));
        }
    }
    if (!bad.empty()) {
        throw Error(ErrorCode::MonomorphicSnp, "zero-variance SNP rows; drop them with drop_monomorphic",
                    std::move(bad));
    }
    const Eigen::ArrayXd inv_sd = (ss.array() / static_cast<double>(n - 1)).sqrt().inverse();
    x.array().colwise() *= inv_sd;
    return x;
}

ScaledMatrix scale_genotypes(const GenotypeMatrix& g, MissingPolicy policy) {
    if (policy == MissingPolicy::Reject && g.has_missing()) {
        IndexList where;
        for (Index i = 0; i < g.snps(); ++i) {
            if ((g.values().row(i).array() == kMissingGenotype).any()) where.push_back(static_cast<std::size_t>(i));
        }
        throw Error(ErrorCode::InvalidArgument, "missing genotypes with policy Reject", std::move(where));
    }
    return ScaledMatrix(standardize_rows(impute_to_real(g)), ScaleKind::RowStandardized, g.snp_ids(),
                        g.individual_ids());
}

ScaledMatrix column_center(const ScaledMatrix& x) {
    Eigen::MatrixXd values = x.values();
    const Eigen::RowVectorXd mean = values.colwise().sum() / static_cast<double>(values.rows());
    values.rowwise() -= mean;
    return x.rebind(std::move(values), ScaleKind::ColumnCentered);
}

CovarianceMatrix covariance_matrix(const Eigen::MatrixXd& x) {
    const Index p = x.rows();
    if (p < 2) throw Error(ErrorCode::DimensionMismatch, "covariance needs at least 2 SNPs (divisor p - 1)");
    Eigen::MatrixXd centered = x;
    centered.rowwise() -= centered.colwise().sum() / static_cast<double>(p);
    const Index n = x.cols();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / static_cast<double>(p - 1));
    m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
    return CovarianceMatrix(std::move(m), CovarianceSource::Raw, p);
}

CovarianceMatrix covariance_matrix(const ScaledMatrix& x) {
    if (x.kind() == ScaleKind::ColumnCentered) {
        const Index p = x.snps();
        if (p < 2) throw Error(ErrorCode::DimensionMismatch, "covariance needs at least 2 SNPs (divisor p - 1)");
        const Index n = x.individuals();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        m.selfadjointView<Eigen::Lower>().rankUpdate(x.values().transpose(), 1.0 / static_cast<double>(p - 1));
        m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
        return CovarianceMatrix(std::move(m), CovarianceSource::Raw, p);
    }
    return covariance_matrix(x.values());
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const IndexList& cols) {
    Eigen::MatrixXd out(x.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (static_cast<Index>(cols[c]) >= x.cols()) {
            throw Error(ErrorCode::InvalidArgument, "column index out of range", {cols[c]});
        }
        out.col(static_cast<Index>(c)) = x.col(static_cast<Index>(cols[c]));
    }
    return out;
}

}  // namespace famscore
