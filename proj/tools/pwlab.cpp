// pwlab: command-line front end for the four-class scheme lab.
//
// Exit status: 0 all checks pass, 1 a check failed (report still written),
// 2 usage or input error.

#include "pwlab/finite_geometry.hpp"
#include "pwlab/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Options {
    std::uint32_t q = 3;
    std::string scheme;
    std::string json;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::uint32_t q_bound = pwlab::kDefaultQBound;
    bool sample = false;
    std::size_t per_item = 32;
    bool timings = false;
    long long budget = 1'000'000;
};

void write_json(const std::string& file, const pwlab::Json& doc)
{
    std::ofstream out(file);
    if (!out)
        throw pwlab::InputError("cannot write " + file);
    out << doc.dump(1) << "\n";
}

int finish(const pwlab::Report& report, const Options& o)
{
    std::cout << report.to_text();
    if (!o.json.empty())
        write_json(o.json, report.to_json(o.timings));
    return report.pass() ? 0 : 1;
}

pwlab::RunConfig config(const Options& o, std::set<std::string> stages)
{
    pwlab::RunConfig c;
    c.q = o.q;
    if (!o.scheme.empty())
        c.scheme_file = o.scheme;
    c.q_bound = o.q_bound;
    c.stages = std::move(stages);
    c.threads = o.threads;
    c.sample = o.sample;
    c.seed = o.seed;
    c.per_item = o.per_item;
    c.isomorphism_budget = o.budget;
    return c;
}

std::set<std::string> split(const std::string& list)
{
    std::set<std::string> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.insert(item);
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pwlab: four-class association scheme lab for Q(5,q) with the subquadrangle Q(4,q)"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    const auto prime = CLI::Validator(
        [](std::string& value) -> std::string {
            auto q = std::stoul(value);
            if (q < 3 || !pwlab::is_prime(static_cast<std::uint32_t>(q)))
                return "q must be a prime >= 3";
            return {};
        },
        "PRIME");
    app.add_option("--q", o.q, "field order (prime >= 3)")->check(CLI::PositiveNumber)->check(prime);
    app.add_option("--scheme", o.scheme, "scheme JSON file (abstract mode)")->check(CLI::ExistingFile);
    app.add_option("--json", o.json, "write the JSON report here");
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", o.seed, "seed for sampled sweeps");
    app.add_option("--q-bound", o.q_bound, "largest q accepted");
    app.add_flag("--sample", o.sample, "sample the hypothesis sweeps instead of running them exhaustively");
    app.add_option("--per-item", o.per_item, "samples per outer element")->check(CLI::PositiveNumber);
    app.add_flag("--timings", o.timings, "include seconds per record in the JSON report");
    app.add_option("--budget", o.budget, "node budget for the isomorphism search");

    std::string out_file, emit_cliques, stages, file, triple = "3,3,3";
    bool krein = false, symmetry = false, zero_sums = false;
    long long r = 0;

    auto* build_gq = app.add_subcommand("build-gq", "build Q(5,q) and its section, check both quadrangles");
    auto* build_scheme = app.add_subcommand("build-scheme", "build the scheme on the outer points");
    build_scheme->add_option("--out", out_file, "save the scheme to this file");
    auto* verify = app.add_subcommand("verify-params", "scheme axioms and intersection numbers");
    auto* eigen = app.add_subcommand("eigen", "eigenmatrices and Krein parameters");
    auto* triples = app.add_subcommand("triples", "solve a triple intersection system");
    triples->add_option("--triple", triple, "relations A,B,C of (x,y), (y,u), (u,x)");
    triples->add_option("--r", r, "order (defaults to q)");
    triples->add_flag("--krein", krein, "add the Krein-vanishing rows");
    triples->add_flag("--symmetry", symmetry, "identify unknowns under the allowed column swaps");
    triples->add_flag("--zero-sums", zero_sums, "pin the unknowns of sum rows with right side 0");
    auto* cliques = app.add_subcommand("cliques", "maximal {0,3}-cliques and their classes");
    cliques->add_option("--emit-cliques", emit_cliques, "write cliques, classes and partitions as JSON");
    auto* hypotheses = app.add_subcommand("hypotheses", "the two clique hypotheses and the partition set");
    auto* rebuild = app.add_subcommand("reconstruct", "rebuild the quadrangle from the scheme and verify it");
    rebuild->add_option("--out", out_file, "write the incidence structure as JSON");
    auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");
    pipeline->add_option("--stages", stages, "comma-separated stage subset");
    pipeline->add_option("--emit-cliques", emit_cliques, "write cliques, classes and partitions as JSON");
    auto* load = app.add_subcommand("load", "load a scheme file and check its parameters");
    load->add_option("--file", file, "scheme JSON file")->required()->check(CLI::ExistingFile);
    auto* save = app.add_subcommand("save", "build the scheme for --q and save it");
    save->add_option("--file", file, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*build_gq)
            return finish(pwlab::run_pipeline(config(o, {"build"})), o);
        if (*build_scheme || *save) {
            auto c = config(o, {"build"});
            std::string target = *save ? file : out_file;
            if (!target.empty())
                c.emit_scheme = target;
            return finish(pwlab::run_pipeline(c), o);
        }
        if (*verify)
            return finish(pwlab::run_pipeline(config(o, {"parameters"})), o);
        if (*load) {
            o.scheme = file;
            return finish(pwlab::run_pipeline(config(o, {"build", "parameters"})), o);
        }
        if (*eigen)
            return finish(pwlab::run_pipeline(config(o, {"eigen"})), o);
        if (*triples) {
            pwlab::TripleRequest req;
            auto parts = std::vector<int>{};
            std::stringstream in(triple);
            std::string item;
            while (std::getline(in, item, ','))
                parts.push_back(std::stoi(item));
            if (parts.size() != 3)
                throw pwlab::InputError("--triple needs three comma-separated relation indices");
            req.triple = {parts[0], parts[1], parts[2]};
            req.krein = krein;
            req.symmetry = symmetry;
            req.zero_sums = zero_sums;
            auto doc = pwlab::solve_triple_request(r > 0 ? r : o.q, req);
            std::cout << doc.dump(1) << "\n";
            if (!o.json.empty())
                write_json(o.json, doc);
            const bool ok = !doc.contains("inconsistent") && !doc["propagated"].contains("failure");
            return ok ? 0 : 1;
        }
        if (*cliques) {
            auto c = config(o, {"cliques"});
            if (!emit_cliques.empty())
                c.emit_cliques = emit_cliques;
            return finish(pwlab::run_pipeline(c), o);
        }
        if (*hypotheses)
            return finish(pwlab::run_pipeline(config(o, {"hypotheses"})), o);
        if (*rebuild) {
            auto c = config(o, {"reconstruction", "isomorphism"});
            if (!out_file.empty())
                c.emit_structure = out_file;
            return finish(pwlab::run_pipeline(c), o);
        }
        if (*pipeline) {
            auto c = config(o, split(stages));
            if (!emit_cliques.empty())
                c.emit_cliques = emit_cliques;
            return finish(pwlab::run_pipeline(c), o);
        }
    } catch (const pwlab::InputError& e) {
        std::cerr << "error: " << e.what();
        if (!e.witness().is_null())
            std::cerr << " " << e.witness().dump();
        std::cerr << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
