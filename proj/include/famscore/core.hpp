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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace famscore {

using Index = Eigen::Index;
using IndexList = std::vector<std::size_t>;
using GenotypeValues = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr std::int8_t kMissingGenotype = -1;

/// Allele counts for p SNPs (rows) by n individuals (columns).
///
/// Entries are 0, 1, 2 or kMissingGenotype. Identifiers must be unique and
/// the matrix must have at least two SNPs and two individuals.
class GenotypeMatrix {
public:
    GenotypeMatrix(GenotypeValues values, std::vector<std::string> snp_ids,
                   std::vector<std::string> individual_ids);

    /// Builds a matrix with generated ids ("snp1", ... and "ind1", ...).
    static GenotypeMatrix with_default_ids(GenotypeValues values);

    Index snps() const noexcept { return values_.rows(); }
    Index individuals() const noexcept { return values_.cols(); }
    const GenotypeValues& values() const noexcept { return values_; }
    const std::vector<std::string>& snp_ids() const noexcept { return snp_ids_; }
    const std::vector<std::string>& individual_ids() const noexcept { return individual_ids_; }
    bool has_missing() const noexcept;

private:
    GenotypeValues values_;
    std::vector<std::string> snp_ids_;
    std::vector<std::string> individual_ids_;
};

enum class ScaleKind { RowStandardized, ColumnCentered, Whitened };

/// Real-valued p x n matrix derived from genotypes, tagged with how it was
/// produced. Identifiers travel with the values.
class ScaledMatrix {
public:
    ScaledMatrix(Eigen::MatrixXd values, ScaleKind kind, std::vector<std::string> snp_ids = {},
                 std::vector<std::string> individual_ids = {});

    Index snps() const noexcept { return values_.rows(); }
    Index individuals() const noexcept { return values_.cols(); }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    ScaleKind kind() const noexcept { return kind_; }
    const std::vector<std::string>& snp_ids() const noexcept { return snp_ids_; }
    const std::vector<std::string>& individual_ids() const noexcept { return individual_ids_; }

    /// Same ids, new values and kind.
    ScaledMatrix rebind(Eigen::MatrixXd values, ScaleKind kind) const;

private:
    Eigen::MatrixXd values_;
    ScaleKind kind_;
    std::vector<std::string> snp_ids_;
    std::vector<std::string> individual_ids_;
};

/// Partition of individuals 0..n-1 into singletons and disjoint families of
/// size >= 2. Each family has one representative; the unrelated set is the
/// singletons plus the representatives, the related set is everyone else.
class FamilyStructure {
public:
    FamilyStructure() = default;
    /// Families are normalized to ascending member order and sorted by their
    /// smallest member. Representatives default to the lowest index member.
    FamilyStructure(std::size_t n, std::vector<IndexList> families,
                    std::vector<std::string> family_ids = {});

    static FamilyStructure all_singletons(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::size_t family_count() const noexcept { return families_.size(); }
    const IndexList& singletons() const noexcept { return singletons_; }
    const std::vector<IndexList>& families() const noexcept { return families_; }
    const std::vector<std::string>& family_ids() const noexcept { return family_ids_; }
    const IndexList& representatives() const noexcept { return representatives_; }

    /// Replaces the representatives; reps[f] must belong to family f.
    FamilyStructure with_representatives(IndexList reps) const;

    IndexList family_members() const;
    IndexList unrelated() const;
    IndexList related() const;
    /// Size of the family each individual belongs to (1 for singletons).
    std::vector<std::size_t> family_size_of() const;

    /// Restricts to the given individuals (ascending); families that keep
    /// fewer than two members turn into singletons.
    FamilyStructure subset(const IndexList& keep) const;

private:
    std::size_t n_ = 0;
    IndexList singletons_;
    std::vector<IndexList> families_;
    std::vector<std::string> family_ids_;
    IndexList representatives_;
};

enum class CovarianceSource { Raw, Substituted };

/// Symmetric n x n sample covariance of individuals.
class CovarianceMatrix {
public:
    CovarianceMatrix(Eigen::MatrixXd values, CovarianceSource source, Index markers);

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    CovarianceSource source() const noexcept { return source_; }
    Index size() const noexcept { return values_.rows(); }
    /// Number of SNPs the covariance was computed from (divisor is markers - 1).
    Index markers() const noexcept { return markers_; }

private:
    Eigen::MatrixXd values_;
    CovarianceSource source_;
    Index markers_;
};

enum class MissingPolicy { Reject, MeanImpute };

/// Rows with zero variance (after mean imputation of missing entries).
IndexList monomorphic_snps(const GenotypeMatrix& g);

/// Copy of g without the listed SNP rows.
GenotypeMatrix drop_snps(const GenotypeMatrix& g, const IndexList& rows);

/// drop_snps(g, monomorphic_snps(g)).
GenotypeMatrix drop_monomorphic(const GenotypeMatrix& g);

/// Centers every row and scales it to sum of squares n - 1. Throws
/// MonomorphicSnp listing every zero-variance row.
Eigen::MatrixXd standardize_rows(const Eigen::MatrixXd& values);

ScaledMatrix scale_genotypes(const GenotypeMatrix& g,
                             MissingPolicy policy = MissingPolicy::MeanImpute);

ScaledMatrix column_center(const ScaledMatrix& x);

/// Xc' Xc / (p - 1) where Xc is x with centered columns.
CovarianceMatrix covariance_matrix(const ScaledMatrix& x);
CovarianceMatrix covariance_matrix(const Eigen::MatrixXd& x);

/// Columns of x in the given order.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const IndexList& cols);

}  // namespace famscore
