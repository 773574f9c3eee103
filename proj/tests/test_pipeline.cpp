#include "doctest.h"

#include "pwlab/pipeline.hpp"
#include "test_fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace pwlab;

namespace {

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("pwlab_test_" + name);
}

std::set<std::string> stages_in(const Report& rep)
{
    std::set<std::string> out;
    for (const auto& r : rep.records)
        out.insert(r.stage);
    return out;
}

}  // namespace

TEST_CASE("full pipeline at q=3")
{
    RunConfig c;
    c.q = 3;
    auto rep = run_pipeline(c);
    CHECK(rep.pass());
    CHECK(stages_in(rep).size() == pipeline_stages().size());
    for (const auto& r : rep.records) {
        CHECK_MESSAGE(r.pass, r.stage << "/" << r.check);
        CHECK_FALSE(r.statement.empty());
    }
    // Records come in stage order.
    std::size_t last = 0;
    for (const auto& r : rep.records) {
        auto at = static_cast<std::size_t>(
            std::find(pipeline_stages().begin(), pipeline_stages().end(), r.stage) - pipeline_stages().begin());
        CHECK(at >= last);
        last = at;
    }
    auto j = rep.to_json();
    CHECK(j["format_version"] == 1);
    CHECK(j["summary"]["pass"] == true);
    CHECK_FALSE(j["records"][0].contains("seconds"));
    CHECK(rep.to_json(true)["records"][0].contains("seconds"));
}

TEST_CASE("report JSON is reproducible")
{
    RunConfig c;
    c.q = 3;
    CHECK(run_pipeline(c).to_json().dump() == run_pipeline(c).to_json().dump());

    // More threads change only the echoed config.
    auto one = run_pipeline(c).to_json();
    c.threads = 3;
    auto three = run_pipeline(c).to_json();
    CHECK(one["records"] == three["records"]);
}

TEST_CASE("stage selection")
{
    RunConfig c;
    c.q = 5;
    c.stages = {"parameters", "triples"};
    c.sample = true;
    auto rep = run_pipeline(c);
    CHECK(rep.pass());
    CHECK(stages_in(rep) == c.stages);

    c.stages = {"nonsense"};
    CHECK_THROWS_AS(run_pipeline(c), InputError);
}

TEST_CASE("bad q is an input error")
{
    RunConfig c;
    for (std::uint32_t q : {1u, 2u, 4u, 9u}) {
        c.q = q;
        CHECK_THROWS_AS(run_pipeline(c), InputError);
    }
    c.q = 11;
    CHECK_THROWS_AS(run_pipeline(c), InputError);
}

TEST_CASE("abstract mode from a saved scheme")
{
    auto file = temp_file("scheme3.json");
    save_scheme(fixtures::scheme(3), file);
    RunConfig c;
    c.scheme_file = file;
    auto rep = run_pipeline(c);
    CHECK(rep.pass());
    CHECK(rep.records.front().check == "scheme_file");
    CHECK(rep.records.back().check == "isomorphism");
    std::filesystem::remove(file);
}

TEST_CASE("corrupted scheme file blocks later stages")
{
    auto doc = fixtures::scheme(3).to_json();
    auto& rel = doc["relations"];
    rel[5] = rel[5].get<int>() == 1 ? 3 : 1;
    auto file = temp_file("corrupt3.json");
    std::ofstream(file) << doc.dump();

    RunConfig c;
    c.scheme_file = file;
    auto rep = run_pipeline(c);
    CHECK_FALSE(rep.pass());
    REQUIRE(rep.records.size() == 2 + 6);
    CHECK(rep.records[1].check == "scheme_axioms");
    CHECK_FALSE(rep.records[1].pass);
    CHECK(rep.records[1].witness["reason"] == "relation not symmetric");
    for (std::size_t i = 2; i < rep.records.size(); ++i) {
        CHECK(rep.records[i].skipped);
        CHECK(rep.records[i].witness["blocked_by"] == "parameters");
    }
    std::filesystem::remove(file);
}

TEST_CASE("emitted files")
{
    auto cliques = temp_file("cliques3.json"), structure = temp_file("structure3.json"),
         scheme = temp_file("emit3.json");
    RunConfig c;
    c.stages = {"reconstruction"};
    c.emit_cliques = cliques;
    c.emit_structure = structure;
    c.emit_scheme = scheme;
    auto rep = run_pipeline(c);
    CHECK(rep.pass());
    CHECK(stages_in(rep) == std::set<std::string>{"reconstruction"});

    auto cj = Json::parse(std::ifstream(cliques));
    CHECK(cj["format_version"] == 1);
    CHECK(cj["cliques"].size() == 240);
    auto sj = Json::parse(std::ifstream(structure));
    CHECK(sj["lines"].size() == 280);
    CHECK(load_scheme(scheme).size() == 72);
    for (const auto& f : {cliques, structure, scheme})
        std::filesystem::remove(f);
}

TEST_CASE("triple request pins the mixed counts")
{
    TripleRequest req;
    req.krein = true;
    req.symmetry = true;
    auto doc = solve_triple_request(3, req);
    CHECK(doc["format_version"] == 1);
    REQUIRE(doc["propagated"].contains("pinned"));
    CHECK(doc["propagated"]["pinned"]["[1 3 3]"] == "0/1");
    CHECK(doc["propagated"]["pinned"]["[2 3 3]"] == "0/1");

    CHECK(doc["dimension"] == 4);

    // The Krein rows cut the space; nonnegativity alone already pins both at r=3.
    auto plain = solve_triple_request(3, TripleRequest{});
    CHECK(plain["dimension"] == 27);
    CHECK(plain["propagated"]["pinned"]["[2 3 3]"] == "0/1");
}
