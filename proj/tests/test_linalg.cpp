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


#include <random>

#include <catch_amalgamated.hpp>

#include "famscore/error.hpp"
#include "famscore/linalg.hpp"
#include "oracles.hpp"

using namespace famscore;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXd random_matrix(Index r, Index c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::MatrixXd a(r, c);
    for (Index j = 0; j < c; ++j) {
        for (Index i = 0; i < r; ++i) a(i, j) = z(rng);
    }
    return a;
}

double off_identity(const Eigen::MatrixXd& q) {
    return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

void check_sign_convention(const Eigen::MatrixXd& v) {
    for (Index l = 0; l < v.cols(); ++l) {
        Index arg = 0;
        const double big = v.col(l).cwiseAbs().maxCoeff(&arg);
        CHECK(v(arg, l) > 0);
        // lowest index among ties
        for (Index i = 0; i < arg; ++i) CHECK(std::abs(v(i, l)) < big);
    }
}

}  // namespace

TEST_CASE("thin_svd of diag(3,1)") {
    Eigen::MatrixXd a(2, 2);
    a << 3, 0, 0, 1;
    const auto s = linalg::thin_svd(a, 2);
    CHECK_THAT(s.d(0), WithinAbs(3.0, 1e-14));
    CHECK_THAT(s.d(1), WithinAbs(1.0, 1e-14));
    CHECK((s.v - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((s.u - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("thin_svd of a rank-one matrix") {
    Eigen::VectorXd u(4), v(3);
    u << 1, -2, 0.5, 3;
    v << -1, 2, 2;
    const Eigen::MatrixXd a = u * v.transpose();
    const auto s = linalg::thin_svd(a, 3);
    CHECK_THAT(s.d(0), WithinRel(u.norm() * v.norm(), 1e-12));
    CHECK(std::abs(s.d(1)) < 1e-12);
    CHECK(std::abs(s.d(2)) < 1e-12);
    // the convention puts the largest entry of v (a 2, first of the tie) positive
    CHECK(s.v(1, 0) > 0);
    CHECK_THAT(s.v(1, 0), WithinAbs(2.0 / 3.0, 1e-12));
}

TEST_CASE("thin_svd reconstructs and is orthonormal") {
    const Eigen::MatrixXd a = random_matrix(40, 12, 1);
    const auto s = linalg::thin_svd(a, 12);
    CHECK((a - s.u * s.d.asDiagonal() * s.v.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(off_identity(s.u) < 1e-8);
    CHECK(off_identity(s.v) < 1e-8);
    for (Index l = 1; l < 12; ++l) CHECK(s.d(l) <= s.d(l - 1));
    CHECK(s.d.minCoeff() >= 0);
    check_sign_convention(s.v);
}

TEST_CASE("thin_svd agrees with Jacobi SVD on both routes") {
    // wide and tall, few and many components: the Gram route and dgesdd
    for (auto [r, c, k] : {std::tuple<Index, Index, Index>{300, 40, 4}, {300, 40, 40}, {30, 200, 5}, {30, 200, 30}}) {
        const Eigen::MatrixXd a = random_matrix(r, c, static_cast<std::uint64_t>(r + c + k));
        const auto s = linalg::thin_svd(a, k);
        const auto o = oracle::jacobi_svd(a, k);
        CHECK((s.d - o.d).cwiseAbs().maxCoeff() < 1e-9 * o.d(0));
        CHECK((s.v - o.v).cwiseAbs().maxCoeff() < 1e-7);
        CHECK(off_identity(s.u) < 1e-8);
        CHECK((a * s.v - s.u * s.d.asDiagonal()).cwiseAbs().maxCoeff() < 1e-8 * o.d(0));
    }
}

TEST_CASE("thin_svd rejects bad input") {
    const Eigen::MatrixXd a = random_matrix(5, 3, 2);
    CHECK_THROWS_AS(linalg::thin_svd(a, 4), Error);
    Eigen::MatrixXd nan = a;
    nan(1, 1) = std::nan("");
    CHECK_THROWS_AS(linalg::thin_svd(nan, 2), Error);
    CHECK(linalg::thin_svd(a, 0).d.size() == 0);
}

TEST_CASE("decompositions are bitwise repeatable") {
    const Eigen::MatrixXd a = random_matrix(120, 30, 4);
    const auto s1 = linalg::thin_svd(a, 6);
    const auto s2 = linalg::thin_svd(a, 6);
    CHECK(s1.v == s2.v);
    CHECK(s1.d == s2.d);
    CHECK(s1.u == s2.u);
    const Eigen::MatrixXd m = a.transpose() * a;
    const auto e1 = linalg::sym_eig(m, 5);
    const auto e2 = linalg::sym_eig(m, 5);
    CHECK(e1.vectors == e2.vectors);
    CHECK(e1.values == e2.values);
}

TEST_CASE("sym_eig of identity and diag(5,2,0)") {
    const auto i3 = linalg::sym_eig(Eigen::MatrixXd::Identity(3, 3), 3);
    CHECK((i3.values.array() - 1.0).abs().maxCoeff() < 1e-14);
    CHECK(off_identity(i3.vectors) < 1e-14);
    Eigen::MatrixXd d = Eigen::Vector3d(5, 2, 0).asDiagonal();
    const auto e = linalg::sym_eig(d, 3);
    CHECK_THAT(e.values(0), WithinAbs(5.0, 1e-14));
    CHECK_THAT(e.values(1), WithinAbs(2.0, 1e-14));
    CHECK_THAT(e.values(2), WithinAbs(0.0, 1e-14));
    CHECK((e.vectors - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sym_eig pairs satisfy M v = lambda v") {
    const Eigen::MatrixXd a = random_matrix(60, 25, 6);
    const Eigen::MatrixXd m = a.transpose() * a;
    const auto e = linalg::sym_eig(m, 8);
    CHECK(off_identity(e.vectors) < 1e-8);
    CHECK((m * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-6 * e.values(0));
    check_sign_convention(e.vectors);
    CHECK_THROWS_AS(linalg::sym_eig(m, 26), Error);
    Eigen::MatrixXd asym = m;
    asym(0, 1) += 1.0;
    CHECK_THROWS_AS(linalg::sym_eig(asym, 2), Error);
}

TEST_CASE("covariance eigenvectors match SVD right vectors") {
    std::mt19937_64 rng(8);
    const Eigen::MatrixXd x = oracle::row_standardize(oracle::two_strata_gaussian(400, 20, 0.3, rng));
    const ScaledMatrix sx(x, ScaleKind::RowStandardized);
    const auto m = covariance_matrix(sx);
    const auto e = linalg::sym_eig(m, 5);
    const auto s = linalg::thin_svd(column_center(sx).values(), 5);
    for (Index l = 0; l < 5; ++l) {
        CHECK(std::abs(oracle::correlation(e.vectors.col(l), s.v.col(l))) > 0.999);
        // singular values are sqrt of eigenvalues of A'A
        CHECK_THAT(s.d(l), WithinRel(std::sqrt(e.values(l) * 399.0), 1e-6));
    }
}

TEST_CASE("sym_sqrt and sym_inv_sqrt of 4 I") {
    const Eigen::MatrixXd p = 4.0 * Eigen::MatrixXd::Identity(2, 2);
    CHECK((linalg::sym_sqrt(p) - 2.0 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((linalg::sym_inv_sqrt(p) - 0.5 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("square root of the sibling correlation block") {
    Eigen::MatrixXd p(2, 2);
    p << 1, 0.5, 0.5, 1;
    const Eigen::MatrixXd r = linalg::sym_sqrt(p);
    CHECK((r * r - p).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd ri = linalg::sym_inv_sqrt(p);
    CHECK((ri * p * ri - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("inverse square root of a singular matrix fails") {
    Eigen::MatrixXd p(2, 2);
    p << 1, 1, 1, 1;
    try {
        linalg::sym_inv_sqrt(p);
        FAIL("expected NotPositiveDefinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    }
    // the square root clamps tiny negative roundoff but refuses real negatives
    Eigen::MatrixXd q(2, 2);
    q << 1, 0, 0, -1e-9;
    CHECK(linalg::sym_sqrt(q)(1, 1) == 0.0);
    q(1, 1) = -1e-3;
    CHECK_THROWS_AS(linalg::sym_sqrt(q), Error);
    CHECK(linalg::psd_sqrt(q)(1, 1) == 0.0);
}

TEST_CASE("matrix roots commute with the input and multiply back") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Eigen::MatrixXd a = random_matrix(30, 10, seed);
        const Eigen::MatrixXd p = a.transpose() * a / 29.0;
        const Eigen::MatrixXd r = linalg::sym_sqrt(p);
        const Eigen::MatrixXd ri = linalg::sym_inv_sqrt(p);
        CHECK((r * p - p * r).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((r * r - p).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((ri * p * ri - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("min_eigenvalue and full_sym_eig") {
    Eigen::MatrixXd m(3, 3);
    m << 2, 1, 0, 1, 2, 0, 0, 0, -1;
    CHECK_THAT(linalg::min_eigenvalue(m), WithinAbs(-1.0, 1e-14));
    const auto e = linalg::full_sym_eig(m);
    CHECK_THAT(e.values(0), WithinAbs(3.0, 1e-14));
    CHECK_THAT(e.values(1), WithinAbs(1.0, 1e-14));
    CHECK_THAT(e.values(2), WithinAbs(-1.0, 1e-14));
    check_sign_convention(e.vectors);
}

TEST_CASE("bordered eigenpairs match the dense solver") {
    for (Index border : {0, 1, 2, 4}) {
        const Eigen::MatrixXd a = random_matrix(80, 30 + border, static_cast<std::uint64_t>(17 + border));
        const Eigen::MatrixXd h = a.transpose() * a;
        const Index ns = 30;
        const auto base = linalg::full_sym_eig(h.topLeftCorner(ns, ns));
        const Eigen::MatrixXd c = base.vectors.transpose() * h.topRightCorner(ns, border);
        const auto got = linalg::bordered_top_eigenpairs(base.values, c, h.bottomRightCorner(border, border), 6);
        const auto want = linalg::full_sym_eig(h);
        CHECK((got.values - want.values.head(6)).cwiseAbs().maxCoeff() < 1e-9 * want.values(0));
        // back to the original coordinates
        Eigen::MatrixXd vec(ns + border, 6);
        vec.topRows(ns) = base.vectors * got.vectors.topRows(ns);
        vec.bottomRows(border) = got.vectors.bottomRows(border);
        for (Index l = 0; l < 6; ++l) {
            CHECK(std::abs(std::abs(vec.col(l).dot(want.vectors.col(l))) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("apply_sign_convention flips u with v") {
    Eigen::MatrixXd v(3, 2), u(2, 2);
    v << 0.1, -0.5, -0.9, 0.5, 0.2, 0.1;
    u << 1, 2, 3, 4;
    linalg::apply_sign_convention(v, &u);
    CHECK(v(1, 0) == 0.9);
    CHECK(u(0, 0) == -1.0);
    // tie between rows 0 and 1: row 0 wins, already negative so flipped
    CHECK(v(0, 1) == 0.5);
    CHECK(u(0, 1) == -2.0);
}
