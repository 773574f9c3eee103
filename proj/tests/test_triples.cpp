#include "doctest.h"

#include "pwlab/triples.hpp"
#include "test_fixtures.hpp"

#include <map>
#include <random>

using namespace pwlab;

namespace {

int u(int l, int m, int n) { return triple_unknown(4, l, m, n); }

TripleOptions full_options(const Eigenmatrices& eig)
{
    TripleOptions o;
    o.krein = true;
    o.symmetry = true;
    o.zero_sums = true;
    o.eigen = &eig;
    return o;
}

// Straight from the definition, independent of the library counter.
long long count_by_definition(const AssociationScheme& s, std::size_t x, std::size_t y, std::size_t w, int l, int m,
                              int n)
{
    long long c = 0;
    for (std::size_t z = 0; z < s.size(); ++z)
        if (s.relation(x, z) == l && s.relation(y, z) == m && s.relation(w, z) == n)
            ++c;
    return c;
}

}  // namespace

TEST_CASE("unknown indexing")
{
    CHECK(u(1, 1, 1) == 0);
    CHECK(u(1, 3, 1) == 8);
    CHECK(u(4, 4, 4) == 63);
    for (int j = 0; j < 64; ++j) {
        auto s = triple_symbol(4, j);
        CHECK(u(s[0], s[1], s[2]) == j);
    }
    CHECK(triple_label(4, u(2, 3, 3)) == "[2 3 3]");
}

TEST_CASE("sum rows of the triple system")
{
    const auto p = expected_parameters(3);
    auto sys = build_system(p, 3, 3, 3);
    REQUIRE(sys.equation_count() == 48);
    CHECK_FALSE(sys.krein_used);
    for (std::size_t i = 0; i < 48; ++i) {
        int ones = 0;
        for (std::size_t j = 0; j < 64; ++j) {
            const auto& c = sys.coefficients(i, j);
            CHECK((c == 0 || c == 1));
            ones += c == 1;
        }
        CHECK(ones == 4);
    }
    // Row for sum_r [r 3 3]: p^3_33 - 1.
    CHECK(sys.constants[(3 - 1) * 4 + (3 - 1)] == rational(p(3, 3, 3) - 1));
    // Row for sum_r [r 1 2] with (A,B,C) = (1,2,1): p^2_12 - 1.
    auto mixed = build_system(p, 1, 2, 1);
    CHECK(mixed.constants[(1 - 1) * 4 + (1 - 1)] == rational(p(2, 1, 1) - 1));
    CHECK(mixed.constants[16 + (1 - 1) * 4 + (2 - 1)] == rational(p(1, 1, 2) - 1));
    CHECK(mixed.constants[32 + (1 - 1) * 4 + (2 - 1)] == rational(p(1, 1, 2) - 1));

    CHECK_THROWS_AS(build_system(p, 0, 3, 3), InputError);
    CHECK_THROWS_AS(build_system(p, 3, 5, 3), InputError);
}

TEST_CASE("Krein and symmetry rows")
{
    const auto p = expected_parameters(3);
    const auto eig = pw_candidate_eigenmatrices(3);
    TripleOptions o;
    o.krein = true;
    o.eigen = &eig;
    auto k = build_system(p, 3, 3, 3, o);
    CHECK(k.krein_used);
    CHECK(k.equation_count() == 48 + 22);

    // Deriving the eigenmatrices gives the same rows.
    o.eigen = nullptr;
    auto k2 = build_system(p, 3, 3, 3, o);
    CHECK(k2.coefficients == k.coefficients);
    CHECK(k2.constants == k.constants);

    TripleOptions s;
    s.symmetry = true;
    auto sym = build_system(p, 3, 3, 3, s);
    CHECK(sym.symmetry_used);
    auto space = solve(sym);
    for (int j = 0; j < 64; ++j) {
        auto [a, b, c] = triple_symbol(4, j);
        for (int img : {u(b, a, c), u(a, c, b), u(c, b, a), u(b, c, a), u(c, a, b)})
            CHECK(relation_holds(space, j, img, 1, 0));
    }

    // Only the x <-> y swap is allowed when just B = C.
    auto partial = solve(build_system(p, 3, 1, 1, s));
    CHECK(relation_holds(partial, u(1, 2, 3), u(2, 1, 3), 1, 0));
    CHECK_FALSE(relation_holds(partial, u(1, 2, 3), u(1, 3, 2), 1, 0));

    // Krein rows outside four classes need their own list.
    IntersectionTensor petersen(2);
    CHECK_THROWS_AS(build_system(petersen, 1, 1, 1, TripleOptions{false, true}), InputError);
}

TEST_CASE("empty system is the whole space")
{
    TripleSystem sys;
    sys.classes = 4;
    sys.triple = {3, 3, 3};
    sys.coefficients = RationalMatrix(0, 64);
    auto space = solve(sys);
    CHECK(space.dimension() == 64);
    CHECK(space.pinned.empty());
    auto prop = nonneg_propagate(space);
    CHECK(prop.newly_pinned.empty());
    CHECK(prop.rounds == 0);
}

TEST_CASE("clique triple solution space")
{
    for (long long r : {5, 7}) {
        CAPTURE(r);
        const auto p = expected_parameters(r);
        const auto eig = pw_candidate_eigenmatrices(r);
        auto space = solve(build_system(p, 3, 3, 3, full_options(eig)));
        CHECK(space.dimension() == 1);
        CHECK(relation_holds(space, u(1, 3, 1), u(1, 3, 3), 1, 0));
        CHECK(relation_holds(space, u(1, 3, 1), u(2, 3, 3), -2, 0));
        auto rel = linear_relation(space, u(1, 3, 1), u(2, 3, 3));
        REQUIRE(rel);
        CHECK(rel->first == -2);
        CHECK(rel->second == 0);

        auto prop = nonneg_propagate(space);
        CHECK(prop.space.dimension() == 0);
        for (int j : {u(1, 3, 1), u(1, 3, 3), u(2, 3, 3)}) {
            REQUIRE(prop.space.pinned_value(j));
            CHECK(*prop.space.pinned_value(j) == 0);
        }
        // [3 3 3] counts the rest of the clique: r - 3 common collinear points.
        CHECK(*prop.space.pinned_value(u(3, 3, 3)) == rational(r - 3));
    }

    // At r = 3 the system alone already forces every unknown.
    const auto eig = pw_candidate_eigenmatrices(3);
    auto space = solve(build_system(expected_parameters(3), 3, 3, 3, full_options(eig)));
    CHECK(space.dimension() == 0);
    CHECK(relation_holds(space, u(1, 3, 1), u(1, 3, 3), 1, 0));
    CHECK(relation_holds(space, u(1, 3, 1), u(2, 3, 3), -2, 0));
    CHECK(*space.pinned_value(u(2, 3, 3)) == 0);
}

TEST_CASE("listed rows alone leave a larger space")
{
    const auto eig = pw_candidate_eigenmatrices(5);
    auto o = full_options(eig);
    o.zero_sums = false;
    auto space = solve(build_system(expected_parameters(5), 3, 3, 3, o));
    CHECK(space.dimension() == 4);
    CHECK_FALSE(linear_relation(space, u(1, 3, 1), u(2, 3, 3)));
    // The zero-row rule recovers the same conclusion.
    auto prop = nonneg_propagate(space);
    CHECK(*prop.space.pinned_value(u(1, 3, 3)) == 0);
    CHECK(*prop.space.pinned_value(u(2, 3, 3)) == 0);
}

TEST_CASE("a positive [1 3 1] is contradicted")
{
    const auto eig5 = pw_candidate_eigenmatrices(5);
    auto o = full_options(eig5);
    o.fixed.push_back({u(1, 3, 1), Rational(2)});
    auto space = solve(build_system(expected_parameters(5), 3, 3, 3, o));
    CHECK(*space.pinned_value(u(2, 3, 3)) == -4);
    try {
        nonneg_propagate(space);
        FAIL("expected a contradiction");
    } catch (const CharacterizationFailure& e) {
        // The first negative unknown in index order; [2 3 3] = -4 is another.
        CHECK(sgn(parse_fraction(e.witness()["value"].get<std::string>())) < 0);
        CHECK(e.witness()["unknown"].is_string());
    }

    // At r = 3 the pin already makes the system inconsistent.
    const auto eig3 = pw_candidate_eigenmatrices(3);
    auto o3 = full_options(eig3);
    o3.fixed.push_back({u(1, 3, 1), Rational(2)});
    auto sys = build_system(expected_parameters(3), 3, 3, 3, o3);
    try {
        solve(sys);
        FAIL("expected inconsistency");
    } catch (const CharacterizationFailure& e) {
        const auto& combo = e.witness()["combination"];
        REQUIRE(combo.is_array());
        CHECK_FALSE(combo.empty());
        // The combination really reduces to 0 = c.
        std::vector<Rational> lhs(64);
        Rational rhs;
        for (const auto& term : combo) {
            std::size_t row = term["row"];
            Rational m = parse_fraction(term["multiplier"].get<std::string>());
            for (std::size_t j = 0; j < 64; ++j)
                lhs[j] += m * sys.coefficients(row, j);
            rhs += m * sys.constants[row];
        }
        for (const auto& c : lhs)
            CHECK(c == 0);
        CHECK(rhs != 0);
    }
}

TEST_CASE("brute-force counts on pairwise collinear triples")
{
    const auto& s = fixtures::scheme(3);
    const auto& p = fixtures::tensor(3);
    const auto eig = pw_candidate_eigenmatrices(3);
    TripleOptions o;
    o.krein = true;
    o.eigen = &eig;
    const auto sys = build_system(p, 3, 3, 3, o);
    const auto sym_space = solve(build_system(p, 3, 3, 3, full_options(eig)));

    std::size_t triples = 0;
    for (std::size_t x = 0; x < s.size(); ++x)
        for (int y : s.neighbours(x, 3))
            for (int w : s.neighbours(static_cast<std::size_t>(y), 3)) {
                if (s.relation(static_cast<std::size_t>(w), x) != 3)
                    continue;
                ++triples;
                auto t = triple_numbers_bruteforce(s, x, static_cast<std::size_t>(y), static_cast<std::size_t>(w));
                CHECK(t(1, 3, 3) == 0);
                CHECK(t(2, 3, 3) == 0);
                auto v = t.unknowns();
                CHECK_FALSE(first_violated_row(sys, v));
                CHECK(sym_space.contains(symmetrize(4, {3, 3, 3}, v)));
            }
    CHECK(triples == 72 * 20 * 1);
}

TEST_CASE("brute-force counts match the definition")
{
    const auto& s = fixtures::scheme(3);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t x = pick(rng), y = pick(rng), w = pick(rng);
        if (x == y || y == w || w == x)
            continue;
        auto t = triple_numbers_bruteforce(s, x, y, w);
        long long total = 0;
        for (int l = 0; l <= 4; ++l)
            for (int m = 0; m <= 4; ++m)
                for (int n = 0; n <= 4; ++n)
                    CHECK(t(l, m, n) == count_by_definition(s, x, y, w, l, m, n));
        for (const auto& v : t.unknowns())
            total += v.get_num().get_si();
        CHECK(total == static_cast<long long>(s.size()) - 3);
        const int A = s.relation(x, y), B = s.relation(y, w), C = s.relation(w, x);
        for (int m = 0; m <= 4; ++m)
            for (int n = 0; n <= 4; ++n) {
                CHECK(t(0, m, n) == (m == A && n == C));
                CHECK(t(m, 0, n) == (m == A && n == B));
                CHECK(t(m, n, 0) == (m == C && n == B));
            }
    }
}

TEST_CASE("every sampled triple lies in its solution space")
{
    for (unsigned q : {3u, 5u}) {
        CAPTURE(q);
        const auto& s = fixtures::scheme(q);
        const auto& p = fixtures::tensor(q);
        const auto eig = pw_candidate_eigenmatrices(q);
        std::map<std::array<int, 3>, SolutionSpace> spaces;
        std::mt19937 rng(11 + q);
        std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
        int checked = 0;
        while (checked < 60) {
            std::size_t x = pick(rng), y = pick(rng), w = pick(rng);
            if (x == y || y == w || w == x)
                continue;
            std::array<int, 3> cls{s.relation(x, y), s.relation(y, w), s.relation(w, x)};
            auto it = spaces.find(cls);
            if (it == spaces.end()) {
                TripleOptions o;
                o.krein = true;
                o.zero_sums = true;
                o.eigen = &eig;
                it = spaces.emplace(cls, solve(build_system(p, cls[0], cls[1], cls[2], o))).first;
            }
            CHECK(it->second.contains(triple_numbers_bruteforce(s, x, y, w).unknowns()));
            ++checked;
        }
    }
}

TEST_CASE("swapping x and y maps the solution spaces")
{
    const auto p = expected_parameters(3);
    const auto eig = pw_candidate_eigenmatrices(3);
    TripleOptions o;
    o.krein = true;
    o.eigen = &eig;
    // (A,B,C) and (A,C,B).
    auto s1 = solve(build_system(p, 3, 1, 2, o));
    auto s2 = solve(build_system(p, 3, 2, 1, o));
    REQUIRE(s1.dimension() == s2.dimension());
    auto swap = [](const std::vector<Rational>& v) {
        std::vector<Rational> w(v.size());
        for (int j = 0; j < 64; ++j) {
            auto [a, b, c] = triple_symbol(4, j);
            w[static_cast<std::size_t>(u(b, a, c))] = v[static_cast<std::size_t>(j)];
        }
        return w;
    };
    CHECK(s2.contains(swap(s1.particular)));
    for (const auto& b : s1.basis) {
        auto point = s1.particular;
        for (std::size_t j = 0; j < point.size(); ++j)
            point[j] += b[j];
        CHECK(s2.contains(swap(point)));
    }
}

TEST_CASE("solution space JSON")
{
    const auto eig = pw_candidate_eigenmatrices(5);
    auto space = solve(build_system(expected_parameters(5), 3, 3, 3, full_options(eig)));
    auto j = space.to_json();
    CHECK(j["triple"] == Json::array({3, 3, 3}));
    CHECK(j["free"] == Json::array({"[3 3 3]"}));
    CHECK(j["pinned"]["[4 4 4]"] == "0/1");
    bool found = false;
    for (const auto& dep : j["dependencies"])
        if (dep["unknown"] == "[2 3 3]") {
            found = true;
            CHECK(dep["terms"].size() == 1);
        }
    CHECK(found);
    auto prop = nonneg_propagate(space).space.to_json();
    CHECK(prop["pinned"]["[1 3 3]"] == "0/1");
    CHECK(prop["pinned"]["[2 3 3]"] == "0/1");
    CHECK(prop["free"].empty());
}
