#include "doctest.h"

#include "pwlab/scheme.hpp"
#include "test_fixtures.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace pwlab;

namespace {

// Naive recount of one slice p^k_{..} straight from the definition.
long long naive_count(const AssociationScheme& s, std::size_t x, std::size_t y, int i, int j)
{
    long long c = 0;
    for (std::size_t z = 0; z < s.size(); ++z)
        if (s.relation(x, z) == i && s.relation(z, y) == j)
            ++c;
    return c;
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("pwlab_test_" + name);
}

}  // namespace

TEST_CASE("PW scheme valencies")
{
    CHECK(fixtures::scheme(3).size() == 72);
    CHECK(fixtures::scheme(3).valencies() == std::vector<long long>{1, 20, 30, 20, 1});
    CHECK(fixtures::scheme(5).size() == 600);
    CHECK(fixtures::scheme(5).valencies() == std::vector<long long>{1, 104, 390, 104, 1});
}

TEST_CASE("classify_pair")
{
    const auto& m = fixtures::model(3);
    const auto& s = fixtures::scheme(3);
    for (std::size_t x = 0; x < s.size(); ++x) {
        CHECK(classify_pair(m, x, x) == 0);
        int xa = m.outer_index(m.antipode(m.outer_points()[x]));
        CHECK(s.relation(x, static_cast<std::size_t>(xa)) == 4);
        for (std::size_t y = 0; y < s.size(); ++y) {
            int rel = s.relation(x, y);
            std::size_t meet = m.ovoid_bits(x).intersection_count(m.ovoid_bits(y));
            bool col = m.collinear(m.outer_points()[x], m.outer_points()[y]);
            bool col_antipode = m.collinear(m.antipode(m.outer_points()[x]), m.outer_points()[y]);
            if (!col && meet == 4)
                CHECK(rel == 2);
            if (rel == 1)
                CHECK(col_antipode);
            if (rel == 2)
                CHECK_FALSE(col_antipode);
            if (rel == 3)
                CHECK(col);
        }
    }
}

TEST_CASE("intersection numbers match the closed forms")
{
    for (unsigned q : {3u, 5u}) {
        auto mismatch = first_tensor_mismatch(fixtures::tensor(q), expected_parameters(q));
        CHECK_MESSAGE(!mismatch, (mismatch ? mismatch->dump() : ""));
    }
    const auto& p = fixtures::tensor(3);
    CHECK(p(3, 3, 3) == 1);
    CHECK(p(2, 3, 3) == 6);
    CHECK(p(4, 1, 3) == p.valency(1));
    CHECK(p(4, 1, 3) == p.valency(3));
    CHECK(p(4, 2, 2) == p.valency(2));
}

TEST_CASE("expected parameters at r=3")
{
    auto p = expected_parameters(3);
    CHECK(p(1, 2, 2) == 12);
    CHECK(p(2, 2, 2) == 12);
    CHECK(p(4, 2, 2) == 30);
    CHECK(p(3, 3, 3) == 1);
    CHECK(p.vertex_count() == 72);
    // Row sums: sum_j p^k_ij = n_i.
    for (long long r : {3, 4, 5, 7, 9})
        for (int k = 0; k <= 4; ++k)
            for (int i = 0; i <= 4; ++i) {
                auto pr = expected_parameters(r);
                long long sum = 0;
                for (int j = 0; j <= 4; ++j) {
                    sum += pr(k, i, j);
                    CHECK(pr(k, i, j) == pr(k, j, i));
                }
                CHECK(sum == pr.valency(i));
            }
    CHECK_THROWS_AS(expected_parameters(2), InputError);
}

TEST_CASE("antipode exchanges R1 with R3 and preserves R2")
{
    const auto& s = fixtures::scheme(3);
    std::vector<std::size_t> antipode(s.size());
    for (std::size_t x = 0; x < s.size(); ++x)
        antipode[x] = static_cast<std::size_t>(s.neighbours(x, 4).at(0));
    for (std::size_t x = 0; x < s.size(); ++x)
        for (std::size_t y = 0; y < s.size(); ++y) {
            CHECK((s.relation(x, y) == 1) == (s.relation(x, antipode[y]) == 3));
            CHECK((s.relation(x, y) == 2) == (s.relation(x, antipode[y]) == 2));
        }
}

TEST_CASE("random base pairs recount to the tensor")
{
    const auto& s = fixtures::scheme(5);
    const auto& p = fixtures::tensor(5);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t x = rng() % s.size(), y = rng() % s.size();
        int k = s.relation(x, y);
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j)
                CHECK(naive_count(s, x, y, i, j) == p(k, i, j));
    }
}

TEST_CASE("order from vertex count")
{
    CHECK(order_from_vertex_count(72) == 3);
    CHECK(order_from_vertex_count(600) == 5);
    CHECK_FALSE(order_from_vertex_count(73));
}

TEST_CASE("scheme JSON round trip")
{
    const auto& s = fixtures::scheme(3);
    auto file = temp_file("roundtrip.json");
    save_scheme(s, file);
    auto loaded = load_scheme(file);
    CHECK(loaded == s);
    CHECK(loaded.valencies() == std::vector<long long>{1, 20, 30, 20, 1});
    CHECK(verify_scheme_axioms(loaded).pass);
    std::filesystem::remove(file);
}

TEST_CASE("scheme loading rejects bad files")
{
    Json doc = fixtures::scheme(3).to_json();
    {
        Json bad = doc;
        bad["relations"][1] = 2;  // (0,1) no longer matches (1,0)
        try {
            AssociationScheme::from_json(bad);
            FAIL("expected a symmetry error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("symmetric") != std::string::npos);
            CHECK(e.witness()["x"] == 0);
            CHECK(e.witness()["y"] == 1);
        }
        auto lenient = AssociationScheme::from_json(bad, false);
        auto check = verify_scheme_axioms(lenient);
        CHECK_FALSE(check.pass);
        CHECK(check.witness["reason"] == "relation not symmetric");
    }
    {
        Json bad = doc;
        bad["relations"][5] = 9;
        CHECK_THROWS_AS(AssociationScheme::from_json(bad), InputError);
    }
    {
        Json bad = doc;
        bad.erase("size");
        CHECK_THROWS_AS(AssociationScheme::from_json(bad), InputError);
    }
    {
        Json bad = doc;
        bad["relations"].erase(0);
        CHECK_THROWS_AS(AssociationScheme::from_json(bad), InputError);
    }
    auto file = temp_file("garbage.json");
    std::ofstream(file) << "{ not json";
    CHECK_THROWS_AS(load_scheme(file), InputError);
    std::filesystem::remove(file);
    CHECK_THROWS_AS(load_scheme("/nonexistent/pwlab.json"), InputError);
}

TEST_CASE("symmetric corruption fails the scheme axioms")
{
    AssociationScheme s = fixtures::scheme(3);
    auto table = s.table();
    const std::size_t n = s.size();
    // Find a pair in R1 and move it to R2 on both sides.
    std::size_t y = static_cast<std::size_t>(s.neighbours(0, 1).at(0));
    table[y] = 2;
    table[y * n] = 2;
    AssociationScheme bad(n, 4, table);
    auto check = verify_scheme_axioms(bad);
    CHECK_FALSE(check.pass);
    CHECK(check.witness.contains("reason"));
}

TEST_CASE("random symmetric partition is not the PW scheme")
{
    std::mt19937 rng(2024);
    const std::size_t n = 72;
    std::vector<std::uint8_t> table(n * n, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            auto r = static_cast<std::uint8_t>(1 + rng() % 4);
            table[x * n + y] = table[y * n + x] = r;
        }
    AssociationScheme random_scheme(n, 4, table);
    auto check = verify_scheme_axioms(random_scheme);
    CHECK_FALSE(check.pass);
    CHECK_FALSE(check.witness.is_null());
}

TEST_CASE("threaded intersection counting agrees")
{
    CHECK(intersection_numbers(fixtures::scheme(3), 3) == fixtures::tensor(3));
}
