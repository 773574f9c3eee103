#include "doctest.h"

#include "pwlab/incidence.hpp"
#include "test_fixtures.hpp"

using namespace pwlab;

TEST_CASE("deleting a line breaks unique connection")
{
    IncidenceStructure s = fixtures::model(3).gq().incidence;
    s.lines.erase(s.lines.begin() + 17);
    auto report = verify_gq_axioms(s);
    CHECK_FALSE(report.ok());
    const auto* v = report.violation(Axiom::unique_connection);
    REQUIRE(v != nullptr);
    CHECK(v->point >= 0);
    CHECK(v->line >= 0);
    CHECK_FALSE(s.incident(v->point, v->line));
    CHECK(report.violation(Axiom::incidence_count) != nullptr);
}

TEST_CASE("single line is degenerate")
{
    IncidenceStructure s;
    s.num_points = 4;
    s.lines = {{0, 1, 2, 3}};
    auto report = verify_gq_axioms(s);
    CHECK_FALSE(report.ok());
    const auto* v = report.violation(Axiom::incidence_count);
    REQUIRE(v != nullptr);
    CHECK(v->point == 0);
    CHECK(v->line == 0);
}

TEST_CASE("empty structure")
{
    IncidenceStructure s;
    CHECK_FALSE(verify_gq_axioms(s).ok());
}

TEST_CASE("two lines sharing two points")
{
    IncidenceStructure s = fixtures::model(3).gq().incidence;
    // Replace one point of line 1 so it shares two points with line 0.
    s.lines[1] = s.lines[0];
    s.lines[1][3] = s.lines[0][3] == 111 ? 110 : 111;
    std::sort(s.lines[1].begin(), s.lines[1].end());
    auto report = verify_gq_axioms(s);
    CHECK(report.violation(Axiom::incidence_count) != nullptr);
    CHECK(report.violation(Axiom::line_size) != nullptr);
}

TEST_CASE("malformed lines are input errors")
{
    IncidenceStructure s;
    s.num_points = 3;
    s.lines = {{0, 5}};
    CHECK_THROWS_AS(verify_gq_axioms(s), InputError);
    s.lines = {{1, 0}};
    CHECK_THROWS_AS(verify_gq_axioms(s), InputError);
}

TEST_CASE("threaded axiom check agrees")
{
    IncidenceStructure s = fixtures::model(3).gq().incidence;
    s.lines.erase(s.lines.begin() + 200);
    auto one = verify_gq_axioms(s, 1);
    auto four = verify_gq_axioms(s, 4);
    CHECK(one.to_json() == four.to_json());
}
