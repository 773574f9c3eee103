#include "doctest.h"

#include "pwlab/exact_linalg.hpp"

using namespace pwlab;

TEST_CASE("fraction strings")
{
    CHECK(to_fraction_string(make_rational(-6, 4)) == "-3/2");
    CHECK(to_fraction_string(make_rational(5)) == "5/1");
    CHECK(parse_fraction("10/4") == make_rational(5, 2));
    CHECK(parse_fraction("-7") == make_rational(-7));
    CHECK_THROWS(parse_fraction("1/0"));
    CHECK_THROWS(parse_fraction("abc"));
    CHECK_THROWS(parse_fraction(""));
}

TEST_CASE("row echelon and rank")
{
    RationalMatrix m(3, 3);
    int vals[3][3] = {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m(i, j) = vals[i][j];
    CHECK(rank(m) == 2);
    auto ns = null_space(m);
    REQUIRE(ns.size() == 1);
    for (int i = 0; i < 3; ++i) {
        Rational dot = 0;
        for (int j = 0; j < 3; ++j)
            dot += m(i, j) * ns[0][j];
        CHECK(dot == 0);
    }
}

TEST_CASE("semidefinite check")
{
    RationalMatrix gram(3, 3);
    // Gram matrix of (1,0), (0,1), (1,1).
    int g[3][3] = {{1, 0, 1}, {0, 1, 1}, {1, 1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            gram(i, j) = g[i][j];
    auto res = check_positive_semidefinite(gram);
    CHECK(res.positive_semidefinite);
    CHECK(res.rank == 2);
    gram(2, 2) = 1;
    CHECK_FALSE(check_positive_semidefinite(gram).positive_semidefinite);
    RationalMatrix zero_diag(2, 2);
    zero_diag(0, 1) = zero_diag(1, 0) = 1;
    CHECK_FALSE(check_positive_semidefinite(zero_diag).positive_semidefinite);
}

TEST_CASE("characteristic polynomial")
{
    RationalMatrix m(2, 2);
    m(0, 0) = 2;
    m(0, 1) = 1;
    m(1, 0) = 1;
    m(1, 1) = 2;
    auto c = characteristic_polynomial(m);
    // x^2 - 4x + 3
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 3);
    CHECK(c[1] == -4);
    CHECK(c[2] == 1);
    CHECK(evaluate_polynomial(c, 1) == 0);
    CHECK(evaluate_polynomial(c, 3) == 0);
}

TEST_CASE("matrix product and identity")
{
    RationalMatrix a(2, 3);
    a(0, 0) = make_rational(1, 2);
    a(1, 2) = 3;
    CHECK(RationalMatrix::identity(2) * a == a);
    CHECK(a.transposed().transposed() == a);
    CHECK_THROWS(a * a);
}
