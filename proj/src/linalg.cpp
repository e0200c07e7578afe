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

#include "famscore/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

#include "famscore/error.hpp"

namespace famscore::linalg {

namespace {

void require_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw Error(ErrorCode::InvalidArgument, "matrix must be symmetric");
    }
}

lapack_int as_lapack(Index v) {
    if (v > static_cast<Index>(std::numeric_limits<lapack_int>::max())) {
        throw Error(ErrorCode::InvalidArgument, "matrix too large for LAPACK");
    }
    return static_cast<lapack_int>(v);
}

// All eigenpairs, ascending (divide and conquer).
SymEig solve_symmetric(const Eigen::MatrixXd& m) {
    require_symmetric(m);
    SymEig out;
    out.vectors = m;
    out.values.resize(m.rows());
    if (m.rows() == 0) return out;
    const auto n = as_lapack(m.rows());
    const auto info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
    if (info != 0) throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
    return out;
}

Eigen::MatrixXd rebuild(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& values) {
    Eigen::MatrixXd out = vectors * values.asDiagonal() * vectors.transpose();
    // exact symmetry
    return 0.5 * (out + out.transpose());
}

// Top-k eigenpairs, descending, without the sign convention.
SymEig top_eigenpairs(Eigen::MatrixXd work, Index k) {
    const auto n = as_lapack(work.rows());
    Eigen::VectorXd w(work.rows());
    Eigen::MatrixXd z(work.rows(), k);
    Eigen::Matrix<lapack_int, Eigen::Dynamic, 1> support(2 * k);
    lapack_int found = 0;
    const auto info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n, 0.0, 0.0,
                                     n - as_lapack(k) + 1, n, 0.0, &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != as_lapack(k)) {
        throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
    }
    return {w.head(k).reverse(), z.rowwise().reverse()};
}

// Truncated SVD through the Gram matrix of the shorter side. Declines (returns
// false) when the k-th value is too small relative to the first for the
// squared problem to resolve it.
bool gram_svd(const Eigen::MatrixXd& a, Index k, ThinSvd& out) {
    const bool tall = a.rows() >= a.cols();
    const Index side = tall ? a.cols() : a.rows();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(side, side);
    if (tall) gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    else gram.selfadjointView<Eigen::Lower>().rankUpdate(a);
    const auto eig = top_eigenpairs(std::move(gram), k);
    if (!(eig.values(0) > 0.0) || !(eig.values(k - 1) > 1e-8 * eig.values(0))) return false;
    out.d = eig.values.cwiseSqrt();
    const Eigen::VectorXd inv = out.d.cwiseInverse();
    if (tall) {
        out.v = eig.vectors;
        out.u = (a * out.v) * inv.asDiagonal();
    } else {
        out.u = eig.vectors;
        out.v = (a.transpose() * out.u) * inv.asDiagonal();
    }
    return true;
}

}  // namespace

void apply_sign_convention(Eigen::MatrixXd& v, Eigen::MatrixXd* u) {
    for (Index c = 0; c < v.cols(); ++c) {
        Index best = 0;
        double best_abs = -1.0;
        for (Index r = 0; r < v.rows(); ++r) {
            const double a = std::abs(v(r, c));
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        if (v.rows() > 0 && v(best, c) < 0.0) {
            v.col(c) *= -1.0;
            if (u != nullptr) u->col(c) *= -1.0;
        }
    }
}

ThinSvd thin_svd(const Eigen::MatrixXd& a, Index k) {
    const Index p = a.rows();
    const Index n = a.cols();
    if (k < 0 || k > std::min(p, n)) {
        throw Error(ErrorCode::InvalidArgument,
                    "requested " + std::to_string(k) + " components from a " + std::to_string(p) + "x" +
                        std::to_string(n) + " matrix");
    }
    ThinSvd out;
    if (k == 0) {
        out.u.resize(p, 0);
        out.d.resize(0);
        out.v.resize(n, 0);
        return out;
    }
    if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    const Index r = std::min(p, n);
    if (4 * k <= r && gram_svd(a, k, out)) {
        apply_sign_convention(out.v, &out.u);
        return out;
    }
    // dgesdd runs a QR step itself when the input is tall
    Eigen::MatrixXd work = a;
    Eigen::VectorXd s(r);
    Eigen::MatrixXd u(p, r);
    Eigen::MatrixXd vt(r, n);
    const auto info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', as_lapack(p), as_lapack(n), work.data(), as_lapack(p),
                                     s.data(), u.data(), as_lapack(p), vt.data(), as_lapack(r));
    if (info != 0) throw Error(ErrorCode::ConvergenceFailure, "SVD did not converge");
    out.d = s.head(k);
    out.u = u.leftCols(k);
    out.v = vt.topRows(k).transpose();
    apply_sign_convention(out.v, &out.u);
    return out;
}

SymEig sym_eig(const Eigen::MatrixXd& m, Index k) {
    if (k < 0 || k > m.rows()) {
        throw Error(ErrorCode::InvalidArgument, "requested " + std::to_string(k) + " eigenpairs of a " +
                                                    std::to_string(m.rows()) + "x" + std::to_string(m.rows()) +
                                                    " matrix");
    }
    SymEig out;
    if (k == 0) {
        out.values.resize(0);
        out.vectors.resize(m.rows(), 0);
        return out;
    }
    require_symmetric(m);
    if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    out = top_eigenpairs(m, k);
    apply_sign_convention(out.vectors);
    return out;
}

SymEig sym_eig(const CovarianceMatrix& m, Index k) { return sym_eig(m.values(), k); }

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& p) {
    const auto es = solve_symmetric(p);
    Eigen::VectorXd values = es.values;
    for (Index i = 0; i < values.size(); ++i) {
        if (values(i) < -kClampTolerance) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "negative eigenvalue " + std::to_string(values(i)) + " in square root");
        }
        values(i) = std::sqrt(std::max(values(i), 0.0));
    }
    return rebuild(es.vectors, values);
}

Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& p) {
    const auto es = solve_symmetric(p);
    Eigen::VectorXd values = es.values;
    for (Index i = 0; i < values.size(); ++i) {
        const double clamped = values(i) < 0.0 && values(i) >= -kClampTolerance ? 0.0 : values(i);
        if (clamped < kInvSqrtFloor) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "eigenvalue " + std::to_string(values(i)) + " too small for inverse square root");
        }
        values(i) = 1.0 / std::sqrt(clamped);
    }
    return rebuild(es.vectors, values);
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& p) {
    const auto es = solve_symmetric(p);
    const Eigen::VectorXd values = es.values.cwiseMax(0.0).cwiseSqrt();
    return rebuild(es.vectors, values);
}

SymEig full_sym_eig(const Eigen::MatrixXd& m) {
    auto es = solve_symmetric(m);
    SymEig out{es.values.reverse(), es.vectors.rowwise().reverse()};
    apply_sign_convention(out.vectors);
    return out;
}

namespace {

// Schur complement E - mu I - C' (Lambda - mu)^-1 C of the shifted bordered matrix.
Eigen::MatrixXd bordered_schur(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& c, const Eigen::MatrixXd& e,
                               double mu) {
    const Eigen::VectorXd inv = (lambda.array() - mu).inverse().matrix();
    Eigen::MatrixXd f = e;
    f.diagonal().array() -= mu;
    f.noalias() -= c.transpose() * inv.asDiagonal() * c;
    return 0.5 * (f + f.transpose());
}

// Number of eigenvalues of the bordered matrix above mu (Haynsworth inertia).
Index count_above(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& c, const Eigen::MatrixXd& e, double mu) {
    Index count = (lambda.array() > mu).count();
    if (e.rows() == 0) return count;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bordered_schur(lambda, c, e, mu), Eigen::EigenvaluesOnly);
    return count + (es.eigenvalues().array() > 0.0).count();
}

// Solves (H - sigma I) x = w in the diag(Q, I) basis.
Eigen::VectorXd shifted_solve(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& c, const Eigen::MatrixXd& e,
                              double sigma, const Eigen::VectorXd& w) {
    const Index na = lambda.size();
    const Index m = e.rows();
    const Eigen::ArrayXd inv = (lambda.array() - sigma).inverse();
    const Eigen::VectorXd w1 = w.head(na);
    Eigen::VectorXd x(na + m);
    if (m == 0) {
        x = (inv * w1.array()).matrix();
        return x;
    }
    const Eigen::MatrixXd f = bordered_schur(lambda, c, e, sigma);
    const Eigen::VectorXd rhs = w.tail(m) - c.transpose() * (inv * w1.array()).matrix();
    // f may be nearly singular near an eigenvalue; pseudo-solve through its eigenbasis
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
    const double floor = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    Eigen::VectorXd theta = es.eigenvalues();
    for (Index i = 0; i < m; ++i) {
        if (std::abs(theta(i)) < floor) theta(i) = theta(i) < 0.0 ? -floor : floor;
    }
    const Eigen::VectorXd x2 = es.eigenvectors() * (es.eigenvectors().transpose() * rhs).cwiseQuotient(theta);
    x.tail(m) = x2;
    x.head(na) = (inv * (w1 - c * x2).array()).matrix();
    return x;
}

}  // namespace

SymEig bordered_top_eigenpairs(const Eigen::VectorXd& lambda, const Eigen::MatrixXd& c, const Eigen::MatrixXd& e,
                               Index k) {
    const Index na = lambda.size();
    const Index m = e.rows();
    if (e.cols() != m || c.rows() != na || c.cols() != m) {
        throw Error(ErrorCode::DimensionMismatch, "bordered blocks do not conform");
    }
    if (k < 0 || k > na + m) throw Error(ErrorCode::InvalidArgument, "too many eigenpairs requested");
    SymEig out{Eigen::VectorXd(k), Eigen::MatrixXd::Zero(na + m, k)};
    if (k == 0) return out;

    // bounds: norm of diag(Lambda, E) plus the norm of the border
    double top = na > 0 ? lambda(0) : -std::numeric_limits<double>::infinity();
    double bottom = na > 0 ? lambda(na - 1) : std::numeric_limits<double>::infinity();
    if (m > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ee(0.5 * (e + e.transpose()), Eigen::EigenvaluesOnly);
        top = std::max(top, ee.eigenvalues().maxCoeff());
        bottom = std::min(bottom, ee.eigenvalues().minCoeff());
    }
    const double border = c.norm();
    const double scale = std::max({std::abs(top), std::abs(bottom), border, 1e-300});
    const double upper = top + border + 1e-12 * scale;
    const double lower = bottom - border - 1e-12 * scale;

    for (Index t = 0; t < k; ++t) {
        // interlacing: the (t+1)-th eigenvalue of H is at least that of A
        double lo = t < na ? lambda(t) - 1e-12 * scale : lower;
        double hi = upper;
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * scale; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_above(lambda, c, e, mid) > t) lo = mid;
            else hi = mid;
        }
        const double mu = 0.5 * (lo + hi);
        out.values(t) = mu;

        // inverse iteration from a start vector with weight everywhere
        const double sigma = mu + 64.0 * std::numeric_limits<double>::epsilon() * scale;
        Eigen::VectorXd w = Eigen::VectorXd::Ones(na + m).normalized();
        for (int it = 0; it < 3; ++it) {
            w = shifted_solve(lambda, c, e, sigma, w);
            for (Index j = 0; j < t; ++j) w -= out.vectors.col(j).dot(w) * out.vectors.col(j);
            const double norm = w.norm();
            if (!(norm > 0.0) || !std::isfinite(norm)) {
                throw Error(ErrorCode::ConvergenceFailure, "bordered eigenvector did not converge");
            }
            w /= norm;
        }
        out.vectors.col(t) = w;
    }
    return out;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    const auto es = solve_symmetric(m);
    return es.values.size() == 0 ? 0.0 : es.values(0);
}

}  // namespace famscore::linalg
