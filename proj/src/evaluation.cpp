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

#include "famscore/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "famscore/error.hpp"
#include "famscore/linalg.hpp"

namespace famscore::eval {

namespace {

void check_components(const Eigen::MatrixXd& scores, Index components) {
    if (components < 1 || components > scores.cols()) {
        throw Error(ErrorCode::InvalidArgument, "need " + std::to_string(components) + " score columns, have " +
                                                    std::to_string(scores.cols()));
    }
}

void check_strata(const Eigen::MatrixXd& scores, const std::vector<int>& strata) {
    if (static_cast<Index>(strata.size()) != scores.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "one stratum label per score row required");
    }
    for (std::size_t j = 0; j < strata.size(); ++j) {
        if (strata[j] < 1) throw Error(ErrorCode::InvalidArgument, "stratum labels are 1-based", {j});
    }
}

Eigen::MatrixXd centered_columns(const ScaledMatrix& x) {
    Eigen::MatrixXd c = x.values();
    c.rowwise() -= c.colwise().sum() / static_cast<double>(c.rows());
    return c;
}

void note_crossings(const Eigen::VectorXd& values, const std::string& label, std::vector<std::string>* warnings) {
    if (warnings == nullptr) return;
    for (Index l = 0; l + 1 < values.size(); ++l) {
        if (values(l) > 0.0 && (values(l) - values(l + 1)) / values(l) < 0.01) {
            warnings->push_back(label + ": components " + std::to_string(l + 1) + " and " + std::to_string(l + 2) +
                                " differ by less than 1%; index alignment may swap them");
        }
    }
}

}  // namespace

ComponentMetric swiss(const Eigen::MatrixXd& scores, const std::vector<int>& strata, Index components) {
    check_components(scores, components);
    check_strata(scores, strata);
    const int k = *std::max_element(strata.begin(), strata.end());
    ComponentMetric out;
    out.per_component.resize(components);
    for (Index l = 0; l < components; ++l) {
        const auto col = scores.col(l);
        std::vector<double> sums(static_cast<std::size_t>(k) + 1, 0.0);
        std::vector<double> counts(static_cast<std::size_t>(k) + 1, 0.0);
        double total = 0.0;
        for (Index j = 0; j < col.size(); ++j) {
            const auto s = static_cast<std::size_t>(strata[static_cast<std::size_t>(j)]);
            sums[s] += col(j);
            counts[s] += 1.0;
            total += col(j);
        }
        const double grand = total / static_cast<double>(col.size());
        double within = 0.0;
        double about_grand = 0.0;
        for (Index j = 0; j < col.size(); ++j) {
            const auto s = static_cast<std::size_t>(strata[static_cast<std::size_t>(j)]);
            const double dw = col(j) - sums[s] / counts[s];
            const double dt = col(j) - grand;
            within += dw * dw;
            about_grand += dt * dt;
        }
        if (!(about_grand > 0.0)) {
            throw Error(ErrorCode::DegenerateColumn, "score column has zero variance", {static_cast<std::size_t>(l)});
        }
        out.per_component(l) = within / about_grand;
    }
    out.mean = out.per_component.mean();
    return out;
}

Split rse_split(methods::Method method, const FamilyStructure& fam) {
    if (method == methods::Method::PCAiRLite) return {fam.related(), fam.unrelated()};
    return {fam.family_members(), fam.singletons()};
}

ComponentMetric rse(const Eigen::MatrixXd& scores, const std::vector<int>& strata, const Split& split,
                    Index components) {
    check_components(scores, components);
    check_strata(scores, strata);
    std::map<int, std::pair<IndexList, IndexList>> by_stratum;  // related, unrelated
    for (const auto j : split.related) by_stratum[strata.at(j)].first.push_back(j);
    for (const auto j : split.unrelated) by_stratum[strata.at(j)].second.push_back(j);

    ComponentMetric out;
    out.per_component.resize(components);
    for (Index l = 0; l < components; ++l) {
        double numerator = 0.0;
        double denominator = 0.0;
        bool any = false;
        for (const auto& [stratum, parts] : by_stratum) {
            const auto& [rel, unrel] = parts;
            if (rel.size() < 2) continue;
            if (unrel.size() < 2) {
                throw Error(ErrorCode::EmptyStratumPart,
                            "stratum " + std::to_string(stratum) + " has fewer than 2 unrelated individuals", unrel);
            }
            double mean = 0.0;
            for (const auto j : unrel) mean += scores(static_cast<Index>(j), l);
            mean /= static_cast<double>(unrel.size());
            double rel_ss = 0.0;
            for (const auto j : rel) rel_ss += std::pow(scores(static_cast<Index>(j), l) - mean, 2);
            double unrel_ss = 0.0;
            for (const auto j : unrel) unrel_ss += std::pow(scores(static_cast<Index>(j), l) - mean, 2);
            numerator += rel_ss / static_cast<double>(rel.size() - 1);
            denominator += unrel_ss / static_cast<double>(unrel.size() - 1);
            any = true;
        }
        if (!any) throw Error(ErrorCode::EmptyStratumPart, "no stratum has at least 2 related individuals");
        if (!(denominator > 0.0)) {
            throw Error(ErrorCode::DegenerateColumn, "unrelated scores have zero dispersion", {static_cast<std::size_t>(l)});
        }
        out.per_component(l) = std::sqrt(numerator / denominator);
    }
    out.mean = out.per_component.mean();
    return out;
}

InstabilityReport instability_from_scores(const Eigen::MatrixXd& q, const Eigen::MatrixXd& w,
                                          const FamilyStructure& fam) {
    if (q.rows() != w.rows() || q.cols() != w.cols() || static_cast<std::size_t>(q.rows()) != fam.size()) {
        throw Error(ErrorCode::DimensionMismatch, "gold and comparison scores must both be n x L");
    }
    InstabilityReport out;
    out.members = fam.family_members();
    if (out.members.empty()) throw Error(ErrorCode::InvalidArgument, "no family members to compare");
    const auto components = q.cols();
    Eigen::MatrixXd aligned = q;
    for (Index l = 0; l < components; ++l) {
        double agreement = 0.0;
        for (const auto j : fam.singletons()) agreement += q(static_cast<Index>(j), l) * w(static_cast<Index>(j), l);
        if (agreement < 0.0) aligned.col(l) *= -1.0;
    }
    out.gold = select_columns(w.transpose(), out.members).transpose();
    out.comparison = select_columns(aligned.transpose(), out.members).transpose();
    out.instability.resize(components);
    for (Index l = 0; l < components; ++l) {
        const double norm = out.comparison.col(l).squaredNorm();
        if (!(norm > 0.0)) {
            throw Error(ErrorCode::DegenerateColumn, "comparison scores of family members are all zero",
                        {static_cast<std::size_t>(l)});
        }
        out.instability(l) = (out.comparison.col(l) - out.gold.col(l)).squaredNorm() / norm;
    }
    return out;
}

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const IndexList& rows, const IndexList& cols) {
    Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out(static_cast<Index>(r), static_cast<Index>(c)) = m(static_cast<Index>(rows[r]), static_cast<Index>(cols[c]));
        }
    }
    return out;
}

// Gram matrix of the centered columns and the full eigendecomposition of its
// singleton block. Every "singletons plus a few more columns" decomposition
// below is a bordered update of that block; its leading eigenvectors, with
// the sign convention applied, are the reference components.
struct SingletonBasis {
    IndexList singles;
    Eigen::MatrixXd centered;  // p x n
    Eigen::MatrixXd gram;      // n x n
    Eigen::VectorXd lambda;    // descending
    Eigen::MatrixXd q;         // n_S x n_S
};

SingletonBasis make_basis(const ScaledMatrix& x, const FamilyStructure& fam, Index components) {
    if (static_cast<std::size_t>(x.individuals()) != fam.size()) {
        throw Error(ErrorCode::DimensionMismatch, "family structure does not match matrix");
    }
    SingletonBasis b;
    b.singles = fam.singletons();
    if (b.singles.size() < 2) throw Error(ErrorCode::TooFewSingletons, "instability needs at least 2 singletons");
    if (components < 1 || static_cast<std::size_t>(components) > b.singles.size() - 1) {
        throw Error(ErrorCode::TooFewSingletons, "L = " + std::to_string(components) + " needs at least " +
                                                     std::to_string(components + 1) + " singletons");
    }
    b.centered = centered_columns(x);
    const Index n = x.individuals();
    b.gram = Eigen::MatrixXd::Zero(n, n);
    b.gram.selfadjointView<Eigen::Lower>().rankUpdate(b.centered.transpose());
    b.gram.triangularView<Eigen::StrictlyUpper>() = b.gram.transpose();
    auto eig = linalg::full_sym_eig(submatrix(b.gram, b.singles, b.singles));
    b.lambda = std::move(eig.values);
    b.q = std::move(eig.vectors);
    return b;
}

Eigen::MatrixXd reference_rows(const SingletonBasis& b, Index components) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(b.centered.cols(), components);
    for (std::size_t r = 0; r < b.singles.size(); ++r) {
        out.row(static_cast<Index>(b.singles[r])) = b.q.row(static_cast<Index>(r)).head(components);
    }
    return out;
}

// Leading decomposition of [singletons, extra columns] given the Gram blocks
// of the extra columns with the singletons (s_extra) and with themselves.
// Coefficients are in the basis diag(Q, I), each column sign-aligned to the
// reference; mu holds Gram eigenvalues.
struct BorderedRun {
    Eigen::VectorXd mu;
    Eigen::MatrixXd coeffs;
};

BorderedRun bordered_run(const SingletonBasis& b, const Eigen::MatrixXd& s_extra, const Eigen::MatrixXd& extra,
                         Index components) {
    auto eig = linalg::bordered_top_eigenpairs(b.lambda, b.q.transpose() * s_extra, extra, components);
    // the singleton rows of eigenvector l meet reference l in coefficient l
    for (Index l = 0; l < components; ++l) {
        if (eig.vectors(l, l) < 0.0) eig.vectors.col(l) *= -1.0;
    }
    return {std::move(eig.values), std::move(eig.vectors)};
}

Eigen::VectorXd to_singular(const Eigen::VectorXd& mu) { return mu.cwiseMax(0.0).cwiseSqrt(); }

void require_projectable(const Eigen::VectorXd& d) {
    for (Index l = 0; l < d.size(); ++l) {
        if (!(d(l) > 1e-12 * std::max(1.0, d(0)))) {
            throw Error(ErrorCode::DegenerateColumn, "singular value " + std::to_string(l + 1) + " is zero; cannot project",
                        {static_cast<std::size_t>(l)});
        }
    }
}

// Score of a column projected onto a bordered run: x' X_A v / d^2, given the
// column's Gram entries with the singletons (rotated by Q') and with the extra columns.
Eigen::RowVectorXd project_row(const BorderedRun& run, const Eigen::VectorXd& q_gram, const Eigen::VectorXd& extra_gram) {
    const Index ns = q_gram.size();
    const Index m = extra_gram.size();
    Eigen::RowVectorXd out = q_gram.transpose() * run.coeffs.topRows(ns);
    if (m > 0) out += extra_gram.transpose() * run.coeffs.bottomRows(m);
    return out.cwiseQuotient(run.mu.transpose());
}

double subset_substitute_value(const Eigen::MatrixXd& gram, const IndexList& cols, methods::MedianScope scope) {
    std::vector<double> entries;
    const std::size_t k = cols.size();
    if (scope == methods::MedianScope::OffDiagonal) {
        entries.reserve(k * (k - 1) / 2);
        for (std::size_t c2 = 0; c2 < k; ++c2) {
            for (std::size_t c1 = 0; c1 < c2; ++c1) entries.push_back(gram(static_cast<Index>(cols[c1]), static_cast<Index>(cols[c2])));
        }
    } else {
        entries.reserve(k * k);
        for (const auto c2 : cols) {
            for (const auto c1 : cols) entries.push_back(gram(static_cast<Index>(c1), static_cast<Index>(c2)));
        }
    }
    const std::size_t half = entries.size() / 2;
    std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(half), entries.end());
    const double upper = entries[half];
    if (entries.size() % 2 == 1) return upper;
    const double lower = *std::max_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(half));
    return 0.5 * (lower + upper);
}

Eigen::MatrixXd gold_rows(const SingletonBasis& b, const FamilyStructure& fam, Index components,
                          const std::vector<std::string>& ids, std::vector<std::string>* warnings) {
    Eigen::MatrixXd out = reference_rows(b, components);
    for (const auto j : fam.family_members()) {
        const IndexList one{j};
        const auto run = bordered_run(b, submatrix(b.gram, b.singles, one), submatrix(b.gram, one, one), components);
        note_crossings(to_singular(run.mu), ids[j] + " (gold)", warnings);
        out.row(static_cast<Index>(j)) = run.coeffs.row(static_cast<Index>(b.singles.size()));
    }
    return out;
}

// Columns of a single family after the whitening or rotation step, centered.
Eigen::MatrixXd rewritten_family(const ScaledMatrix& x, const IndexList& members, methods::Method method) {
    IndexList local(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) local[c] = c;
    const ScaledMatrix cols(select_columns(x.values(), members), x.kind());
    const FamilyStructure one(members.size(), {local});
    const auto rewritten = method == methods::Method::FWMatrix ? methods::family_whiten_matrix(cols, one)
                                                               : methods::family_rotate_geometric(cols, one);
    Eigen::MatrixXd c = rewritten.values();
    c.rowwise() -= c.colwise().sum() / static_cast<double>(c.rows());
    return c;
}

Eigen::MatrixXd family_rows(const SingletonBasis& b, const ScaledMatrix& x, const FamilyStructure& fam,
                            methods::Method method, Index components, const methods::MethodOptions& options,
                            std::vector<std::string>* warnings) {
    using methods::Method;
    if (options.delta < 0.0) throw Error(ErrorCode::InvalidArgument, "delta must be non-negative");
    Eigen::MatrixXd out = reference_rows(b, components);
    const auto ns = static_cast<Index>(b.singles.size());
    const double markers_less_one = static_cast<double>(x.snps() - 1);

    for (std::size_t f = 0; f < fam.family_count(); ++f) {
        const auto& members = fam.families()[f];
        const auto m = static_cast<Index>(members.size());
        const std::string label = fam.family_ids()[f] + " (" + std::string(methods::method_name(method)) + ")";
        const Eigen::MatrixXd g_sf = submatrix(b.gram, b.singles, members);
        const Eigen::MatrixXd g_ff = submatrix(b.gram, members, members);
        auto put = [&](Index r, const Eigen::RowVectorXd& row) { out.row(static_cast<Index>(members[static_cast<std::size_t>(r)])) = row; };

        switch (method) {
            case Method::Naive:
            case Method::FWMatrix:
            case Method::FWGeometric: {
                Eigen::MatrixXd s_extra = g_sf;
                Eigen::MatrixXd extra = g_ff;
                if (method != Method::Naive) {
                    const Eigen::MatrixXd w = rewritten_family(x, members, method);
                    const Eigen::MatrixXd cross = b.centered.transpose() * w;
                    for (Index r = 0; r < ns; ++r) s_extra.row(r) = cross.row(static_cast<Index>(b.singles[static_cast<std::size_t>(r)]));
                    extra = w.transpose() * w;
                }
                const auto run = bordered_run(b, s_extra, extra, components);
                note_crossings(to_singular(run.mu), label, warnings);
                for (Index r = 0; r < m; ++r) put(r, run.coeffs.row(ns + r));
                break;
            }
            case Method::SP: {
                const Eigen::VectorXd d = to_singular(b.lambda.head(components));
                require_projectable(d);
                note_crossings(d, label, warnings);
                const Eigen::MatrixXd qg = b.q.leftCols(components).transpose() * g_sf;  // L x m
                for (Index r = 0; r < m; ++r) put(r, qg.col(r).transpose().cwiseQuotient(b.lambda.head(components).transpose()));
                break;
            }
            case Method::PCAiRLite: {
                const auto rep = fam.representatives()[f];
                const Index rep_pos = std::find(members.begin(), members.end(), rep) - members.begin();
                const auto run = bordered_run(b, g_sf.col(rep_pos), g_ff.block(rep_pos, rep_pos, 1, 1), components);
                const Eigen::VectorXd d = to_singular(run.mu);
                require_projectable(d);
                note_crossings(d, label, warnings);
                const Eigen::MatrixXd qg = b.q.transpose() * g_sf;
                for (Index r = 0; r < m; ++r) {
                    if (r == rep_pos) put(r, run.coeffs.row(ns));
                    else put(r, project_row(run, qg.col(r), g_ff.block(r, rep_pos, 1, 1).transpose()));
                }
                break;
            }
            case Method::FA: {
                const Eigen::VectorXd lengths = g_ff.diagonal().cwiseMax(0.0).cwiseSqrt();
                const double typical = lengths.sum() / static_cast<double>(m);
                const double mean_norm = std::sqrt(std::max(0.0, g_ff.sum())) / static_cast<double>(m);
                if (!(mean_norm > 1e-12 * std::max(1.0, typical))) {
                    throw Error(ErrorCode::DegenerateFamily, "family mean vector is zero in family " + fam.family_ids()[f],
                                members);
                }
                const double scale = typical / mean_norm / static_cast<double>(m);
                const Eigen::VectorXd s_avg = g_sf.rowwise().sum() * scale;
                const Eigen::VectorXd f_avg = g_ff.rowwise().sum() * scale;
                const auto run = bordered_run(b, s_avg, Eigen::MatrixXd::Constant(1, 1, typical * typical), components);
                const Eigen::VectorXd d = to_singular(run.mu);
                require_projectable(d);
                note_crossings(d, label, warnings);
                const Eigen::MatrixXd qg = b.q.transpose() * g_sf;
                for (Index r = 0; r < m; ++r) put(r, project_row(run, qg.col(r), f_avg.segment(r, 1)));
                break;
            }
            case Method::MS:
            case Method::CPW: {
                IndexList cols = b.singles;
                cols.insert(cols.end(), members.begin(), members.end());
                const double value = subset_substitute_value(b.gram, cols, options.median_scope);
                Eigen::MatrixXd target = g_ff;
                for (Index i = 0; i < m; ++i) {
                    for (Index j = 0; j < m; ++j) {
                        if (i != j) target(i, j) = value;
                    }
                }
                if (method == Method::MS) {
                    const auto run = bordered_run(b, g_sf, target, components);
                    note_crossings(to_singular(run.mu), label, warnings);
                    for (Index r = 0; r < m; ++r) put(r, run.coeffs.row(ns + r));
                    break;
                }
                // covariance-preserving whitening of this family, in covariance units
                const double delta = options.delta;
                const Eigen::MatrixXd m12 = g_sf / markers_less_one;
                const Eigen::VectorXd inv11 = (b.lambda.array() / markers_less_one + delta).inverse().matrix();
                const Eigen::MatrixXd solved = b.q * (inv11.asDiagonal() * (b.q.transpose() * m12));
                Eigen::MatrixXd schur = m12.transpose() * solved;
                schur = 0.5 * (schur + schur.transpose());
                Eigen::MatrixXd residual = g_ff / markers_less_one - schur;
                Eigen::MatrixXd residual_target = target / markers_less_one - schur;
                residual.diagonal().array() += delta;
                residual_target.diagonal().array() += delta;
                Eigen::MatrixXd left;
                try {
                    left = linalg::sym_inv_sqrt(residual);
                } catch (const Error&) {
                    throw Error(ErrorCode::NotPositiveDefinite, "M22 - S is not positive definite; increase delta", members);
                }
                Eigen::MatrixXd right;
                if (options.clamp_negative) {
                    right = linalg::psd_sqrt(residual_target);
                } else {
                    try {
                        right = linalg::sym_sqrt(residual_target);
                    } catch (const Error&) {
                        throw Error(ErrorCode::NotPositiveDefinite, "substituted M22 - S is not positive semidefinite",
                                    members);
                    }
                }
                const Eigen::MatrixXd dm = left * right;
                const Eigen::MatrixXd cm = solved * (Eigen::MatrixXd::Identity(m, m) - dm);
                // Gram blocks of [X_S, X_S C + X_F D]
                const Eigen::MatrixXd g_ss_c = b.q * (b.lambda.asDiagonal() * (b.q.transpose() * cm));
                const Eigen::MatrixXd s_extra = g_ss_c + g_sf * dm;
                Eigen::MatrixXd extra = cm.transpose() * g_ss_c + cm.transpose() * g_sf * dm + dm.transpose() * g_sf.transpose() * cm +
                                        dm.transpose() * g_ff * dm;
                extra = 0.5 * (extra + extra.transpose());
                const auto run = bordered_run(b, s_extra, extra, components);
                note_crossings(to_singular(run.mu), label, warnings);
                for (Index r = 0; r < m; ++r) put(r, run.coeffs.row(ns + r));
                break;
            }
        }
    }
    return out;
}

}  // namespace

Eigen::MatrixXd gold_standard_scores(const ScaledMatrix& x, const FamilyStructure& fam, Index components,
                                     std::vector<std::string>* warnings) {
    const auto basis = make_basis(x, fam, components);
    return gold_rows(basis, fam, components, x.individual_ids(), warnings);
}

Eigen::MatrixXd family_run_scores(const ScaledMatrix& x, const FamilyStructure& fam, methods::Method method,
                                  Index components, const methods::MethodOptions& options,
                                  std::vector<std::string>* warnings) {
    const auto basis = make_basis(x, fam, components);
    return family_rows(basis, x, fam, method, components, options, warnings);
}

InstabilityReport instability(const ScaledMatrix& x, const FamilyStructure& fam, methods::Method method,
                              Index components, const methods::MethodOptions& options) {
    std::vector<std::string> warnings;
    const auto basis = make_basis(x, fam, components);
    const Eigen::MatrixXd w = gold_rows(basis, fam, components, x.individual_ids(), &warnings);
    const Eigen::MatrixXd q = family_rows(basis, x, fam, method, components, options, &warnings);
    auto report = instability_from_scores(q, w, fam);
    report.warnings = std::move(warnings);
    return report;
}

Eigen::VectorXd loess_smooth(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double span) {
    const Index m = xs.size();
    if (ys.size() != m) throw Error(ErrorCode::DimensionMismatch, "xs and ys differ in length");
    if (!(span > 0.0 && span <= 1.0)) throw Error(ErrorCode::InvalidArgument, "span must lie in (0, 1]");
    for (Index i = 1; i < m; ++i) {
        if (!(xs(i) > xs(i - 1))) throw Error(ErrorCode::InvalidArgument, "xs must be strictly increasing", {static_cast<std::size_t>(i)});
    }
    const auto window = static_cast<Index>(std::ceil(span * static_cast<double>(m) - 1e-9));
    if (window < 2) {
        throw Error(ErrorCode::InsufficientPoints, "loess window of " + std::to_string(window) +
                                                       " point(s); need at least 2");
    }
    Eigen::VectorXd fitted(m);
    Index lo = 0;
    for (Index i = 0; i < m; ++i) {
        const double x0 = xs(i);
        while (lo + window < m && xs(lo + window) - x0 < x0 - xs(lo)) ++lo;
        const double h = std::max(x0 - xs(lo), xs(lo + window - 1) - x0);
        double sw = 0.0, su = 0.0, suu = 0.0, sy = 0.0, suy = 0.0;
        for (Index r = lo; r < lo + window; ++r) {
            const double u = xs(r) - x0;
            const double t = std::abs(u) / h;
            if (t >= 1.0) continue;
            const double c = 1.0 - t * t * t;
            const double w = c * c * c;
            sw += w;
            su += w * u;
            suu += w * u * u;
            sy += w * ys(r);
            suy += w * u * ys(r);
        }
        const double det = sw * suu - su * su;
        if (det > 1e-12 * sw * suu && det > 0.0) {
            fitted(i) = (sy * suu - su * suy) / det;
        } else {
            // a single effective point: weighted mean
            fitted(i) = sy / sw;
        }
    }
    return fitted;
}

IndividualScree individual_scree(const methods::AncestryResult& result, double span) {
    const Eigen::VectorXd d = result.singular_values();
    const Index k = result.scores.cols();
    if (d.size() != k) throw Error(ErrorCode::DimensionMismatch, "one value per score column required");
    IndividualScree out;
    out.raw = (result.scores * d.asDiagonal()).array().square().matrix();
    const Eigen::MatrixXd logs = (out.raw.array() + kLogFloor).log10().matrix();
    if (k < 2) {
        out.smoothed = logs;
        return out;
    }
    const double effective = std::max(span, 2.0 / static_cast<double>(k));
    const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(k, 1.0, static_cast<double>(k));
    out.smoothed.resize(out.raw.rows(), k);
    for (Index j = 0; j < out.raw.rows(); ++j) {
        out.smoothed.row(j) = loess_smooth(xs, logs.row(j).transpose(), effective).transpose();
    }
    return out;
}

}  // namespace famscore::eval
