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

#include "famscore/methods.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "famscore/error.hpp"
#include "famscore/linalg.hpp"

namespace famscore::methods {

std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::Naive: return "naive";
        case Method::SP: return "sp";
        case Method::PCAiRLite: return "pcair";
        case Method::FWMatrix: return "fw";
        case Method::FWGeometric: return "fw-geo";
        case Method::MS: return "ms";
        case Method::CPW: return "cpw";
        case Method::FA: return "fa";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (const auto m : kAllMethods) {
        if (method_name(m) == name) return m;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

bool is_projection(Method m) noexcept {
    return m == Method::SP || m == Method::PCAiRLite || m == Method::FA;
}

Eigen::VectorXd AncestryResult::singular_values() const {
    if (value_kind == ValueKind::Singular) return values;
    return (values.array().max(0.0) * static_cast<double>(markers - 1)).sqrt().matrix();
}

namespace {

Eigen::MatrixXd centered_columns(const ScaledMatrix& x) {
    if (x.kind() == ScaleKind::ColumnCentered) return x.values();
    Eigen::MatrixXd c = x.values();
    c.rowwise() -= c.colwise().sum() / static_cast<double>(c.rows());
    return c;
}

void check_family_size(const ScaledMatrix& x, const FamilyStructure& fam) {
    if (static_cast<std::size_t>(x.individuals()) != fam.size()) {
        throw Error(ErrorCode::DimensionMismatch, "family structure covers " + std::to_string(fam.size()) +
                                                      " individuals, matrix has " +
                                                      std::to_string(x.individuals()));
    }
}

AncestryResult svd_result(const Eigen::MatrixXd& centered, Index k, Method m, const ScaledMatrix& x) {
    if (k < 0 || k > centered.cols()) {
        throw Error(ErrorCode::InvalidArgument, "k = " + std::to_string(k) + " exceeds the number of individuals");
    }
    auto svd = linalg::thin_svd(centered, k);
    AncestryResult out;
    out.scores = std::move(svd.v);
    out.values = std::move(svd.d);
    out.loadings = std::move(svd.u);
    out.method = m;
    out.markers = x.snps();
    out.individual_ids = x.individual_ids();
    return out;
}

// SVD of the chosen columns, then every individual projected as X' U D^-1.
// Rows of the decomposed individuals are the right singular vectors themselves.
AncestryResult project_from(const Eigen::MatrixXd& centered, const Eigen::MatrixXd& basis,
                            const IndexList& basis_members, Index k, Method m, const ScaledMatrix& x) {
    auto svd = linalg::thin_svd(basis, k);
    for (Index l = 0; l < k; ++l) {
        if (!(svd.d(l) > 1e-12 * std::max(1.0, svd.d(0)))) {
            throw Error(ErrorCode::DegenerateColumn,
                        "singular value " + std::to_string(l + 1) + " is zero; cannot project",
                        {static_cast<std::size_t>(l)});
        }
    }
    AncestryResult out;
    out.scores = centered.transpose() * svd.u * svd.d.cwiseInverse().asDiagonal();
    for (std::size_t r = 0; r < basis_members.size(); ++r) {
        out.scores.row(static_cast<Index>(basis_members[r])) = svd.v.row(static_cast<Index>(r));
    }
    out.values = std::move(svd.d);
    out.loadings = std::move(svd.u);
    out.method = m;
    out.markers = x.snps();
    out.individual_ids = x.individual_ids();
    return out;
}

void require_basis(std::size_t basis_size, Index k, const char* what) {
    if (basis_size < 2) {
        throw Error(ErrorCode::TooFewSingletons, std::string("need at least 2 ") + what + ", have " +
                                                     std::to_string(basis_size));
    }
    if (k < 0 || static_cast<std::size_t>(k) > basis_size - 1) {
        throw Error(ErrorCode::TooFewSingletons, "k = " + std::to_string(k) + " exceeds " + what +
                                                     " count - 1 = " + std::to_string(basis_size - 1));
    }
}

// Restores each rewritten family column to the mean and sd (divisor p - 1)
// of the column it replaced.
void restore_moments(Eigen::Ref<Eigen::VectorXd> rewritten, const Eigen::VectorXd& original) {
    const auto p = static_cast<double>(original.size());
    const double target_mean = original.sum() / p;
    const double target_sd = std::sqrt((original.array() - target_mean).square().sum() / (p - 1.0));
    const double mean = rewritten.sum() / p;
    const double sd = std::sqrt((rewritten.array() - mean).square().sum() / (p - 1.0));
    if (!(sd > 0.0)) throw Error(ErrorCode::DegenerateFamily, "rewritten family column has zero variance");
    rewritten = ((rewritten.array() - mean) * (target_sd / sd) + target_mean).matrix();
}

}  // namespace

AncestryResult naive_scores(const ScaledMatrix& x, Index k) {
    return svd_result(centered_columns(x), k, Method::Naive, x);
}

AncestryResult singleton_projection(const ScaledMatrix& x, const FamilyStructure& fam, Index k) {
    check_family_size(x, fam);
    const auto& singles = fam.singletons();
    require_basis(singles.size(), k, "singletons");
    const Eigen::MatrixXd centered = centered_columns(x);
    return project_from(centered, select_columns(centered, singles), singles, k, Method::SP, x);
}

AncestryResult pcair_lite(const ScaledMatrix& x, const FamilyStructure& fam, Index k) {
    check_family_size(x, fam);
    const IndexList unrelated = fam.unrelated();
    require_basis(unrelated.size(), k, "unrelated individuals");
    const Eigen::MatrixXd centered = centered_columns(x);
    return project_from(centered, select_columns(centered, unrelated), unrelated, k, Method::PCAiRLite, x);
}

ScaledMatrix family_whiten_matrix(const ScaledMatrix& x, const FamilyStructure& fam) {
    check_family_size(x, fam);
    Eigen::MatrixXd out = x.values();
    const auto p = static_cast<double>(x.snps());
    for (const auto& members : fam.families()) {
        const Eigen::MatrixXd cols = select_columns(x.values(), members);
        const Eigen::RowVectorXd mean = cols.colwise().sum() / p;
        Eigen::MatrixXd z = cols.rowwise() - mean;
        const Eigen::RowVectorXd sd = (z.colwise().squaredNorm() / (p - 1.0)).cwiseSqrt();
        for (Index c = 0; c < z.cols(); ++c) {
            if (!(sd(c) > 0.0)) {
                throw Error(ErrorCode::DegenerateFamily, "family member column has zero variance",
                            {members[static_cast<std::size_t>(c)]});
            }
        }
        z.array().rowwise() /= sd.array();
        Eigen::MatrixXd r = z.transpose() * z / (p - 1.0);
        r = 0.5 * (r + r.transpose());
        Eigen::MatrixXd whitening;
        try {
            whitening = linalg::sym_inv_sqrt(r);
        } catch (const Error& e) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "family correlation block is singular (duplicate members?)", members);
        }
        const Eigen::MatrixXd white = z * whitening;
        for (std::size_t c = 0; c < members.size(); ++c) {
            const auto col = static_cast<Index>(c);
            Eigen::VectorXd rewritten = white.col(col).array() * sd(col) + mean(col);
            out.col(static_cast<Index>(members[c])) = rewritten;
        }
    }
    return x.rebind(std::move(out), ScaleKind::Whitened);
}

double rotation_angle(std::size_t family_size) {
    if (family_size < 1) throw Error(ErrorCode::InvalidArgument, "family size must be positive");
    return std::acos(1.0 / std::sqrt(static_cast<double>(family_size)));
}

Eigen::MatrixXd rotate_family(const Eigen::MatrixXd& members) {
    const Index nf = members.cols();
    const Eigen::VectorXd lengths = members.colwise().norm().transpose();
    for (Index c = 0; c < nf; ++c) {
        if (!(lengths(c) > 0.0)) {
            throw Error(ErrorCode::DegenerateFamily, "zero-length member vector", {static_cast<std::size_t>(c)});
        }
    }
    const Eigen::VectorXd mean = members.rowwise().sum() / static_cast<double>(nf);
    const double mean_norm = mean.norm();
    if (!(mean_norm > 1e-12 * lengths.maxCoeff())) {
        throw Error(ErrorCode::DegenerateFamily, "family mean vector is zero");
    }
    const Eigen::VectorXd mean_dir = mean / mean_norm;
    const double theta = rotation_angle(static_cast<std::size_t>(nf));
    Eigen::MatrixXd out(members.rows(), nf);
    for (Index c = 0; c < nf; ++c) {
        const Eigen::VectorXd unit = members.col(c) / lengths(c);
        Eigen::VectorXd orth = unit - unit.dot(mean_dir) * mean_dir;
        const double orth_norm = orth.norm();
        if (!(orth_norm > 1e-12)) {
            throw Error(ErrorCode::DegenerateFamily, "member is parallel to the family mean vector",
                        {static_cast<std::size_t>(c)});
        }
        orth /= orth_norm;
        out.col(c) = (std::cos(theta) * mean_dir + std::sin(theta) * orth) * lengths(c);
    }
    return out;
}

ScaledMatrix family_rotate_geometric(const ScaledMatrix& x, const FamilyStructure& fam) {
    check_family_size(x, fam);
    Eigen::MatrixXd out = x.values();
    for (std::size_t f = 0; f < fam.family_count(); ++f) {
        const auto& members = fam.families()[f];
        Eigen::MatrixXd rotated;
        try {
            rotated = rotate_family(select_columns(x.values(), members));
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " in family " + fam.family_ids()[f], members);
        }
        for (std::size_t c = 0; c < members.size(); ++c) {
            const auto col = static_cast<Index>(members[c]);
            Eigen::VectorXd rewritten = rotated.col(static_cast<Index>(c));
            restore_moments(rewritten, x.values().col(col));
            out.col(col) = rewritten;
        }
    }
    return x.rebind(std::move(out), ScaleKind::Whitened);
}

double substitute_value(const Eigen::MatrixXd& m, MedianScope scope) {
    const Index n = m.rows();
    std::vector<double> entries;
    if (scope == MedianScope::OffDiagonal) {
        if (n < 2) throw Error(ErrorCode::DimensionMismatch, "no off-diagonal entries");
        entries.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
        for (Index j2 = 0; j2 < n; ++j2) {
            for (Index j1 = 0; j1 < j2; ++j1) entries.push_back(m(j1, j2));
        }
    } else {
        entries.assign(m.data(), m.data() + m.size());
    }
    const std::size_t half = entries.size() / 2;
    std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(half), entries.end());
    const double upper = entries[half];
    if (entries.size() % 2 == 1) return upper;
    const double lower = *std::max_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(half));
    return 0.5 * (lower + upper);
}

CovarianceMatrix matrix_substitution(const CovarianceMatrix& m, const FamilyStructure& fam, MedianScope scope) {
    if (static_cast<std::size_t>(m.size()) != fam.size()) {
        throw Error(ErrorCode::DimensionMismatch, "family structure does not match covariance size");
    }
    Eigen::MatrixXd out = m.values();
    if (fam.family_count() > 0) {
        const double value = substitute_value(m.values(), scope);
        for (const auto& members : fam.families()) {
            for (const auto a : members) {
                for (const auto b : members) {
                    if (a != b) out(static_cast<Index>(a), static_cast<Index>(b)) = value;
                }
            }
        }
    }
    return CovarianceMatrix(std::move(out), CovarianceSource::Substituted, m.markers());
}

AncestryResult ms_scores(const CovarianceMatrix& substituted, Index k, const std::vector<std::string>& individual_ids) {
    auto eig = linalg::sym_eig(substituted, k);
    AncestryResult out;
    out.scores = std::move(eig.vectors);
    out.values = std::move(eig.values);
    out.value_kind = ValueKind::Eigen;
    out.method = Method::MS;
    out.markers = substituted.markers();
    out.individual_ids = individual_ids;
    return out;
}

CpwTransform cpw_transform(const ScaledMatrix& x, const FamilyStructure& fam, const MethodOptions& options) {
    check_family_size(x, fam);
    if (options.delta < 0.0) throw Error(ErrorCode::InvalidArgument, "delta must be non-negative");
    const auto raw = covariance_matrix(x);
    const auto target = matrix_substitution(raw, fam, options.median_scope);
    const IndexList& singles = fam.singletons();
    const IndexList related = [&] {
        IndexList out;
        for (const auto& members : fam.families()) out.insert(out.end(), members.begin(), members.end());
        return out;
    }();
    const auto ns = static_cast<Index>(singles.size());
    const auto nf = static_cast<Index>(related.size());

    auto block = [](const Eigen::MatrixXd& m, const IndexList& rows, const IndexList& cols) {
        Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                out(static_cast<Index>(r), static_cast<Index>(c)) =
                    m(static_cast<Index>(rows[r]), static_cast<Index>(cols[c]));
            }
        }
        return out;
    };

    CpwTransform out{x.rebind(x.values(), ScaleKind::Whitened), Eigen::MatrixXd(ns, nf), Eigen::MatrixXd(nf, nf),
                     target};
    if (nf == 0) return out;

    Eigen::MatrixXd m11 = block(raw.values(), singles, singles);
    const Eigen::MatrixXd m12 = block(raw.values(), singles, related);
    Eigen::MatrixXd m22 = block(raw.values(), related, related);
    Eigen::MatrixXd t22 = block(target.values(), related, related);
    m11.diagonal().array() += options.delta;
    m22.diagonal().array() += options.delta;
    t22.diagonal().array() += options.delta;

    Eigen::MatrixXd solved(ns, nf);  // M11^-1 M12
    Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(nf, nf);
    if (ns > 0) {
        Eigen::LLT<Eigen::MatrixXd> llt(m11);
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorCode::NotPositiveDefinite, "singleton covariance block is not positive definite");
        }
        solved = llt.solve(m12);
        schur = m12.transpose() * solved;
        schur = 0.5 * (schur + schur.transpose());
    }
    const Eigen::MatrixXd residual = m22 - schur;
    const Eigen::MatrixXd residual_target = t22 - schur;

    Eigen::MatrixXd left;
    try {
        left = linalg::sym_inv_sqrt(residual);
    } catch (const Error&) {
        throw Error(ErrorCode::NotPositiveDefinite, "M22 - S is not positive definite; increase delta");
    }
    out.min_clamped_eigenvalue = linalg::min_eigenvalue(residual_target);
    Eigen::MatrixXd right;
    if (options.clamp_negative) {
        right = linalg::psd_sqrt(residual_target);
    } else {
        try {
            right = linalg::sym_sqrt(residual_target);
        } catch (const Error&) {
            throw Error(ErrorCode::NotPositiveDefinite, "substituted M22 - S is not positive semidefinite");
        }
    }
    out.d = left * right;
    out.c = ns > 0 ? Eigen::MatrixXd(solved * (Eigen::MatrixXd::Identity(nf, nf) - out.d)) : Eigen::MatrixXd(0, nf);

    const Eigen::MatrixXd xs = select_columns(x.values(), singles);
    const Eigen::MatrixXd xf = select_columns(x.values(), related);
    Eigen::MatrixXd yf = xf * out.d;
    if (ns > 0) yf.noalias() += xs * out.c;
    Eigen::MatrixXd y = x.values();
    for (Index c = 0; c < nf; ++c) y.col(static_cast<Index>(related[static_cast<std::size_t>(c)])) = yf.col(c);
    out.y = x.rebind(std::move(y), ScaleKind::Whitened);
    return out;
}

CpwResult cpw(const ScaledMatrix& x, const FamilyStructure& fam, Index k, const MethodOptions& options) {
    auto transform = cpw_transform(x, fam, options);
    auto scores = svd_result(centered_columns(transform.y), k, Method::CPW, transform.y);
    return {std::move(transform.y), std::move(scores)};
}

Eigen::MatrixXd family_average_matrix(const ScaledMatrix& x, const FamilyStructure& fam) {
    check_family_size(x, fam);
    const Eigen::MatrixXd centered = centered_columns(x);
    const auto& singles = fam.singletons();
    Eigen::MatrixXd out(centered.rows(), static_cast<Index>(singles.size() + fam.family_count()));
    out.leftCols(static_cast<Index>(singles.size())) = select_columns(centered, singles);
    for (std::size_t f = 0; f < fam.family_count(); ++f) {
        const Eigen::MatrixXd members = select_columns(centered, fam.families()[f]);
        const Eigen::VectorXd mean = members.rowwise().sum() / static_cast<double>(members.cols());
        const double typical_length = members.colwise().norm().sum() / static_cast<double>(members.cols());
        const double mean_norm = mean.norm();
        if (!(mean_norm > 1e-12 * std::max(1.0, typical_length))) {
            throw Error(ErrorCode::DegenerateFamily, "family mean vector is zero in family " + fam.family_ids()[f],
                        fam.families()[f]);
        }
        out.col(static_cast<Index>(singles.size() + f)) = mean * (typical_length / mean_norm);
    }
    return out;
}

AncestryResult family_average_scores(const ScaledMatrix& x, const FamilyStructure& fam, Index k) {
    const Eigen::MatrixXd averaged = family_average_matrix(x, fam);
    require_basis(static_cast<std::size_t>(averaged.cols()), k, "singletons plus families");
    // only the singleton columns of the basis are actual individuals
    return project_from(centered_columns(x), averaged, fam.singletons(), k, Method::FA, x);
}

AncestryResult run_method(Method m, const ScaledMatrix& x, const FamilyStructure& fam, Index k,
                          const MethodOptions& options) {
    switch (m) {
        case Method::Naive: return naive_scores(x, k);
        case Method::SP: return singleton_projection(x, fam, k);
        case Method::PCAiRLite: return pcair_lite(x, fam, k);
        case Method::FWMatrix: {
            auto out = naive_scores(family_whiten_matrix(x, fam), k);
            out.method = Method::FWMatrix;
            return out;
        }
        case Method::FWGeometric: {
            auto out = naive_scores(family_rotate_geometric(x, fam), k);
            out.method = Method::FWGeometric;
            return out;
        }
        case Method::MS: {
            check_family_size(x, fam);
            return ms_scores(matrix_substitution(covariance_matrix(x), fam, options.median_scope), k,
                             x.individual_ids());
        }
        case Method::CPW: return cpw(x, fam, k, options).scores;
        case Method::FA: return family_average_scores(x, fam, k);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace famscore::methods
