#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "clgeo/incidence.hpp"

using namespace clgeo;

TEST_CASE("block shapes and column sums at q=2") {
    Space s(Gf(2, 1));
    BlockIncidence b = build_incidence(s);
    CHECK(b.p3.rows() == 15);
    CHECK(b.p3.cols() == 35);
    CHECK(b.affine.rows() == 8);
    CHECK(b.affine.cols() == 28);
    CHECK(b.b2.rows() == 7);
    CHECK(b.b2.cols() == 28);
    CHECK(b.p2.rows() == 7);
    CHECK(b.p2.cols() == 7);

    for (std::size_t c = 0; c < b.p3.cols(); ++c) {
        Rational sum = 0;
        for (std::size_t r = 0; r < b.p3.rows(); ++r) sum += b.p3.at(r, c);
        CHECK(sum == 3);  // q+1 points per line
    }
    for (std::size_t c = 0; c < b.affine.cols(); ++c) {
        Rational sum = 0;
        for (std::size_t r = 0; r < b.affine.rows(); ++r) sum += b.affine.at(r, c);
        CHECK(sum == 2);  // q affine points per affine line
    }
}

TEST_CASE("zero block: no affine point lies on an infinity line") {
    for (int q : {2, 3}) {
        Space s(Gf(q, 1));
        BlockIncidence b = build_incidence(s);
        for (int r = 0; r < s.n_affine_points(); ++r)
            for (std::size_t c = s.n_affine_lines(); c < b.p3.cols(); ++c)
                REQUIRE(b.p3.at(r, c) == 0);
        // blocks agree with p3
        for (std::size_t r = 0; r < b.p3.rows(); ++r)
            for (std::size_t c = 0; c < b.p3.cols(); ++c) {
                const auto nap = b.affine.rows(), nal = b.affine.cols();
                Rational expect = r < nap ? (c < nal ? b.affine.at(r, c) : 0)
                                          : (c < nal ? b.b2.at(r - nap, c) : b.p2.at(r - nap, c - nal));
                REQUIRE(b.p3.at(r, c) == expect);
            }
    }
}

TEST_CASE("p2 block is the incidence matrix of PG(2,q)") {
    Space s(Gf(3, 1));
    BlockIncidence b = build_incidence(s);
    CHECK(b.p2.rows() == 13);
    CHECK(b.p2.cols() == 13);
    for (std::size_t r = 0; r < b.p2.rows(); ++r) {
        Rational row_sum = 0, col_sum = 0;
        for (std::size_t c = 0; c < b.p2.cols(); ++c) {
            row_sum += b.p2.at(r, c);
            col_sum += b.p2.at(c, r);
        }
        CHECK(row_sum == 4);  // q+1 infinity lines through an infinity point
        CHECK(col_sum == 4);
    }
    CHECK(rank(b.p2) == 13);
}

TEST_CASE("row sums are q^2+q+1 for both p3 and the affine block") {
    Space s(Gf(2, 1));
    BlockIncidence b = build_incidence(s);
    for (std::size_t r = 0; r < b.p3.rows(); ++r) {
        Rational sum = 0;
        for (std::size_t c = 0; c < b.p3.cols(); ++c) sum += b.p3.at(r, c);
        CHECK(sum == 7);
    }
    // every line through an affine point is affine
    for (std::size_t r = 0; r < b.affine.rows(); ++r) {
        Rational sum = 0;
        for (std::size_t c = 0; c < b.affine.cols(); ++c) sum += b.affine.at(r, c);
        CHECK(sum == 7);
    }
}

TEST_CASE("full rank check") {
    {
        Space s(Gf(2, 1));
        RankReport r = full_rank_check(build_incidence(s));
        CHECK(r.rank_p3 == 15);
        CHECK(r.rank_a == 8);
        CHECK(r.rank_p2 == 7);
        CHECK(r.all_full);
    }
    {
        Space s(Gf(3, 1));
        RankReport r = full_rank_check(build_incidence(s));
        CHECK(r.rank_a == 27);
        CHECK(r.all_full);
    }
    {
        Space s(Gf(2, 2));
        RankReport r = full_rank_check(build_incidence(s));
        CHECK(r.rank_p3 == 85);
        CHECK(r.all_full);
    }
}

TEST_CASE("restrict_vector") {
    Space s(Gf(2, 1));
    BlockIncidence b = build_incidence(s);

    std::vector<int> chi(35, 0);
    // a pencil of an affine point consists of affine lines only
    PointId center = 0;
    for (LineId l : s.star(center)) {
        REQUIRE(s.is_affine_line(l));
        chi[l] = 1;
    }
    auto restricted = restrict_vector(b, chi);
    REQUIRE(restricted.size() == 28);
    CHECK(std::vector<int>(chi.begin(), chi.begin() + 28) == restricted);

    std::vector<int> zero(35, 0);
    auto rz = restrict_vector(b, zero);
    CHECK(std::count(rz.begin(), rz.end(), 0) == 28);

    std::vector<int> bad(35, 0);
    bad[34] = 1;  // infinity-line coordinate
    CHECK_THROWS_AS(restrict_vector(b, bad), std::invalid_argument);
    CHECK_THROWS_AS(restrict_vector(b, std::vector<int>(34, 0)), std::invalid_argument);
}

TEST_CASE("restriction preserves kernel orthogonality") {
    // For a vector with no infinity support that is orthogonal to
    // ker(p3), the affine restriction is orthogonal to ker(affine).
    for (int q : {2, 3}) {
        Space s(Gf(q, 1));
        BlockIncidence b = build_incidence(s);
        auto ker_p3 = kernel_basis(b.p3);
        auto ker_a = kernel_basis(b.affine);

        // affine point pencils and their affine complements give such vectors
        std::vector<std::vector<int>> candidates;
        for (PointId center : {0, 1, s.n_affine_points() - 1}) {
            std::vector<int> chi(b.p3.cols(), 0);
            for (LineId l : s.star(center)) chi[l] = 1;
            candidates.push_back(chi);
            std::vector<int> comp(b.p3.cols(), 0);
            for (LineId l = 0; l < s.n_affine_lines(); ++l) comp[l] = 1 - chi[l];
            candidates.push_back(comp);
        }
        for (const auto& chi : candidates) {
            std::vector<Rational> chi_q(chi.begin(), chi.end());
            for (const auto& v : ker_p3) REQUIRE(dot(chi_q, v) == 0);

            auto restricted = restrict_vector(b, chi);
            std::vector<Rational> res_q(restricted.begin(), restricted.end());
            for (const auto& v : ker_a) REQUIRE(dot(res_q, v) == 0);
        }
    }
}

TEST_CASE("matrix text dump") {
    Space s(Gf(2, 1));
    BlockIncidence b = build_incidence(s);
    std::ostringstream os;
    write_matrix_text(os, b.p2);
    std::istringstream is(os.str());
    std::size_t rows, cols;
    is >> rows >> cols;
    REQUIRE(rows == 7);
    REQUIRE(cols == 7);
    long long total = 0;
    for (std::size_t i = 0; i < rows * cols; ++i) {
        long long x;
        is >> x;
        REQUIRE((x == 0 || x == 1));
        total += x;
    }
    CHECK(total == 7 * 3);
}
