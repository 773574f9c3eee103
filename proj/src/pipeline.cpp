#include "pwlab/pipeline.hpp"

#include "pwlab/cliques.hpp"
#include "pwlab/finite_geometry.hpp"
#include "pwlab/reconstruction.hpp"
#include "pwlab/scheme.hpp"
#include "pwlab/spectral.hpp"
#include "pwlab/triples.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

namespace pwlab {

const std::vector<std::string>& pipeline_stages()
{
    static const std::vector<std::string> names{"build",   "parameters", "eigen",          "triples",
                                                "cliques", "hypotheses", "reconstruction", "isomorphism"};
    return names;
}

Json RunConfig::to_json() const
{
    Json j;
    j["mode"] = geometric() ? "geometric" : "abstract";
    if (geometric())
        j["q"] = q;
    else
        j["scheme_file"] = scheme_file->string();
    Json st = Json::array();
    for (const auto& s : pipeline_stages())
        if (stages.empty() || stages.count(s))
            st.push_back(s);
    j["stages"] = st;
    j["threads"] = threads;
    j["sample"] = sample;
    if (sample) {
        j["seed"] = seed;
        j["per_item"] = per_item;
    }
    return j;
}

bool Report::pass() const
{
    return std::all_of(records.begin(), records.end(), [](const Record& r) { return r.pass; });
}

Json Report::to_json(bool timings) const
{
    Json recs = Json::array();
    std::size_t failed = 0, skipped = 0;
    for (const auto& r : records) {
        Json j = {{"stage", r.stage}, {"check", r.check}, {"statement", r.statement}, {"pass", r.pass}};
        if (r.skipped)
            j["skipped"] = true;
        j["witness"] = r.witness;
        j["values"] = r.values;
        if (timings)
            j["seconds"] = r.seconds;
        recs.push_back(std::move(j));
        failed += !r.pass && !r.skipped;
        skipped += r.skipped;
    }
    return {{"format_version", 1},
            {"config", config},
            {"summary", {{"pass", pass()}, {"records", records.size()}, {"failed", failed}, {"skipped", skipped}}},
            {"records", recs}};
}

std::string Report::to_text() const
{
    std::ostringstream out;
    std::size_t width = 0;
    for (const auto& r : records)
        width = std::max(width, r.stage.size() + r.check.size() + 1);
    for (const auto& r : records) {
        const char* tag = r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL";
        out << "[" << tag << "] " << std::left << std::setw(static_cast<int>(width)) << (r.stage + "/" + r.check)
            << "  " << r.statement;
        if (!r.skipped)
            out << "  (" << std::fixed << std::setprecision(3) << r.seconds << " s)";
        out << "\n";
        if (!r.pass)
            out << "       witness: " << r.witness.dump() << "\n";
    }
    out << "summary: " << (pass() ? "PASS" : "FAIL") << ", " << records.size() << " records\n";
    return out.str();
}

namespace {

CheckOutcome failed(Json witness)
{
    CheckOutcome out;
    out.pass = false;
    out.witness = std::move(witness);
    return out;
}

CheckOutcome order_outcome(const IncidenceStructure& s, long long want_s, long long want_t, unsigned threads)
{
    auto rep = verify_gq_axioms(s, threads);
    CheckOutcome out;
    out.values = {{"points", s.num_points}, {"lines", s.num_lines()}};
    if (rep.s && rep.t)
        out.values["order"] = {*rep.s, *rep.t};
    if (!rep.ok())
        return failed(rep.to_json());
    if (*rep.s != want_s || *rep.t != want_t)
        return failed({{"order", {*rep.s, *rep.t}}, {"expected", {want_s, want_t}}});
    return out;
}

Json fractions(const std::vector<Rational>& v)
{
    Json j = Json::array();
    for (const auto& x : v)
        j.push_back(to_fraction_string(x));
    return j;
}

class Runner {
public:
    explicit Runner(const RunConfig& config) : cfg_(config)
    {
        const auto& names = pipeline_stages();
        for (std::size_t i = 0; i < names.size(); ++i)
            if (cfg_.stages.empty() || cfg_.stages.count(names[i]))
                last_ = i;
    }

    Report run()
    {
        Report report;
        report.config = cfg_.to_json();
        const auto& names = pipeline_stages();
        using StageFn = void (Runner::*)();
        const StageFn fns[] = {&Runner::build,   &Runner::parameters, &Runner::eigen,          &Runner::triples,
                               &Runner::cliques, &Runner::hypotheses, &Runner::reconstruction, &Runner::isomorphism};
        for (std::size_t i = 0; i <= last_; ++i) {
            stage_ = names[i];
            stage_ok_ = true;
            (this->*fns[i])();
            if (!stage_ok_) {
                for (std::size_t j = i + 1; j <= last_; ++j)
                    if (selected(names[j])) {
                        Record r;
                        r.stage = names[j];
                        r.check = "stage";
                        r.statement = "not run: an earlier stage failed";
                        r.pass = false;
                        r.skipped = true;
                        r.witness = {{"blocked_by", names[i]}};
                        records_.push_back(std::move(r));
                    }
                break;
            }
        }
        emit();
        report.records = std::move(records_);
        return report;
    }

private:
    bool selected(const std::string& stage) const { return cfg_.stages.empty() || cfg_.stages.count(stage) > 0; }

    SweepOptions sweep(bool allow_sampling) const
    {
        SweepOptions o;
        o.threads = cfg_.threads;
        o.sample = allow_sampling && cfg_.sample;
        o.seed = cfg_.seed;
        o.per_item = cfg_.per_item;
        return o;
    }

    void check(const std::string& name, const std::string& statement, const std::function<CheckOutcome()>& fn)
    {
        Record r;
        r.stage = stage_;
        r.check = name;
        r.statement = statement;
        auto start = std::chrono::steady_clock::now();
        CheckOutcome out;
        try {
            out = fn();
        } catch (const CharacterizationFailure& e) {
            out = failed({{"reason", e.what()}, {"detail", e.witness()}});
        } catch (const InputError& e) {
            out = failed({{"reason", e.what()}, {"detail", e.witness()}});
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.pass = out.pass;
        r.witness = out.witness;
        r.values = out.values;
        stage_ok_ = stage_ok_ && out.pass;
        if (selected(stage_))
            records_.push_back(std::move(r));
    }

    void build()
    {
        if (!cfg_.geometric()) {
            check("scheme_file", "the scheme file parses into a relation table", [&] {
                scheme_ = load_scheme(*cfg_.scheme_file, false);
                return CheckOutcome{true, nullptr,
                                    {{"file", cfg_.scheme_file->string()}, {"vertices", scheme_->size()},
                                     {"classes", scheme_->classes()}}};
            });
            return;
        }
        const long long q = cfg_.q;
        check("model", "Q(5,q) and its section by a hyperplane build as quadrangles", [&] {
            model_ = QuadrangleModel::build(cfg_.q, cfg_.q_bound);
            return CheckOutcome{true, nullptr,
                                {{"q", q}, {"points", model_->gq().num_points()}, {"lines", model_->gq().num_lines()}}};
        });
        if (!model_)
            return;
        check("quadrangle", "the ambient geometry is a GQ of order (q, q^2)",
              [&] { return order_outcome(model_->gq().incidence, q, q * q, cfg_.threads); });
        check("subquadrangle", "the section is a GQ of order (q, q)",
              [&] { return order_outcome(model_->sub().sub.incidence, q, q, cfg_.threads); });
        check("subtended_ovoids", "every subtended ovoid has exactly two subtenders", [&] {
            const auto& gq = model_->gq();
            std::vector<bool> mask(gq.num_points());
            for (std::size_t p = 0; p < mask.size(); ++p)
                mask[p] = model_->in_section(static_cast<int>(p));
            auto a = analyze_subtended(gq.incidence, mask);
            if (!a.doubly_subtended)
                return failed(a.witness);
            return CheckOutcome{true, nullptr, {{"outer_points", a.outer_points.size()}, {"ovoid_size", q * q + 1}}};
        });
        check("reflection", "the reflection fixes the section and swaps antipodes", [&] {
            auto c = verify_reflection_involution(*model_);
            return CheckOutcome{c.ok, c.witness, nullptr};
        });
        check("ovoid_intersections", "two subtended ovoids meet in 1, q + 1 or q^2 + 1 points", [&] {
            auto c = verify_ovoid_intersections(*model_);
            return CheckOutcome{c.ok, c.witness, nullptr};
        });
        check("scheme", "the outer points carry a four-class relation table", [&] {
            scheme_ = build_pw_scheme(*model_);
            return CheckOutcome{true, nullptr, {{"vertices", scheme_->size()}, {"valencies", scheme_->valencies()}}};
        });
    }

    void parameters()
    {
        check("scheme_axioms", "the relations form a symmetric association scheme",
              [&] { return verify_scheme_axioms(*scheme_, cfg_.threads); });
        if (!stage_ok_)
            return;
        check("vertex_count", "|X| = r^2 (r^2 - 1) with four classes", [&] {
            auto r = order_from_vertex_count(scheme_->size());
            if (!r || scheme_->classes() != 4)
                return failed({{"vertices", scheme_->size()}, {"classes", scheme_->classes()}});
            r_ = *r;
            return CheckOutcome{true, nullptr, {{"r", r_}}};
        });
        if (!stage_ok_)
            return;
        check("intersection_numbers", "every p^k_ij matches the closed-form tables at r", [&] {
            tensor_ = intersection_numbers(*scheme_, cfg_.threads);
            const auto& p = *tensor_;
            CheckOutcome out;
            out.values = {{"valencies", {p.valency(0), p.valency(1), p.valency(2), p.valency(3), p.valency(4)}},
                          {"p^1_22", p(1, 2, 2)},
                          {"p^2_22", p(2, 2, 2)},
                          {"p^3_33", p(3, 3, 3)},
                          {"p^4_22", p(4, 2, 2)}};
            if (auto mismatch = first_tensor_mismatch(p, expected_parameters(r_))) {
                out.pass = false;
                out.witness = *mismatch;
            }
            return out;
        });
    }

    void eigen()
    {
        check("eigenmatrices", "the closed-form P and Q satisfy PQ = |X| I and the idempotent identities", [&] {
            eig_ = eigenmatrices(*tensor_, pw_candidate_eigenmatrices(r_));
            auto derived = eigenmatrices(*tensor_);
            CheckOutcome out;
            out.values = {{"multiplicities", fractions(eig_->multiplicities)}};
            if (!(derived.P == eig_->P) || !(derived.Q == eig_->Q))
                return failed({{"reason", "eigenmatrices derived from the algebra differ from the closed forms"}});
            return out;
        });
        if (!eig_)
            return;
        check("krein_pattern", "Krein parameters are nonnegative and vanish on the listed triples", [&] {
            return check_krein_pattern(krein_parameters(*eig_, tensor_->vertex_count()));
        });
        check("local_basis_rank", "rank of {x*} + {y* : y in R_3(x)} in V_1 + V_4 (reported, not asserted)", [&] {
            // Gram entries Q(i,1) + Q(i,4) over x and its R_3 neighbours.
            std::vector<int> members{0};
            for (int y : scheme_->neighbours(0, 3))
                members.push_back(y);
            RationalMatrix gram(members.size(), members.size());
            for (std::size_t a = 0; a < members.size(); ++a)
                for (std::size_t b = 0; b < members.size(); ++b) {
                    int i = scheme_->relation(static_cast<std::size_t>(members[a]), static_cast<std::size_t>(members[b]));
                    gram(a, b) = eig_->Q(static_cast<std::size_t>(i), 1) + eig_->Q(static_cast<std::size_t>(i), 4);
                }
            const auto dim = eig_->multiplicities[1] + eig_->multiplicities[4];
            return CheckOutcome{true, nullptr,
                                {{"x", 0}, {"vectors", members.size()}, {"rank", rank(gram)},
                                 {"dimension_V1_plus_V4", to_fraction_string(dim)}}};
        });
    }

    void triples()
    {
        const int i133 = triple_unknown(4, 1, 3, 3), i233 = triple_unknown(4, 2, 3, 3), i131 = triple_unknown(4, 1, 3, 1);
        std::optional<SolutionSpace> space;
        check("triple_system", "the [3 3 3] system gives [1 3 3] = [1 3 1] and [2 3 3] = -2 [1 3 1]", [&] {
            TripleOptions o;
            o.krein = o.symmetry = o.zero_sums = true;
            o.eigen = &*eig_;
            auto sys = build_system(*tensor_, 3, 3, 3, o);
            space = solve(sys);
            Json free = Json::array();
            for (int f : space->free)
                free.push_back(triple_label(4, f));
            CheckOutcome out;
            out.values = {{"rows", sys.equation_count()}, {"dimension", space->dimension()}, {"free", free}};
            const bool a = relation_holds(*space, i131, i133, rational(1), rational(0));
            const bool b = relation_holds(*space, i131, i233, rational(-2), rational(0));
            if (!a || !b)
                return failed({{"[1 3 3] = [1 3 1]", a}, {"[2 3 3] = -2 [1 3 1]", b}});
            return out;
        });
        if (!space)
            return;
        check("triple_propagation", "nonnegativity pins [1 3 3] = [2 3 3] = 0", [&] {
            auto prop = nonneg_propagate(*space);
            Json nonzero = Json::object();
            for (const auto& [u, v] : prop.space.pinned)
                if (v != 0)
                    nonzero[triple_label(4, u)] = to_fraction_string(v);
            CheckOutcome out;
            out.values = {{"pinned", prop.space.pinned.size()}, {"rounds", prop.rounds}, {"nonzero", nonzero}};
            auto v133 = prop.space.pinned_value(i133), v233 = prop.space.pinned_value(i233);
            if (!v133 || !v233 || *v133 != 0 || *v233 != 0)
                return failed({{"[1 3 3]", v133 ? to_fraction_string(*v133) : "free"},
                               {"[2 3 3]", v233 ? to_fraction_string(*v233) : "free"}});
            return out;
        });
        check("triple_counts", "counted triples satisfy every row and have [1 3 3] = [2 3 3] = 0", [&] {
            TripleOptions o;
            o.krein = true;
            o.eigen = &*eig_;
            auto sys = build_system(*tensor_, 3, 3, 3, o);
            const auto& s = *scheme_;
            const bool sampled = cfg_.sample || r_ > 5;
            std::mt19937_64 rng(cfg_.seed);
            std::set<std::vector<long long>> distinct;
            long long triples = 0;
            for (std::size_t x = 0; x < s.size(); ++x) {
                std::vector<std::pair<int, int>> pairs;
                for (int y : s.neighbours(x, 3))
                    for (int u : s.neighbours(static_cast<std::size_t>(y), 3))
                        if (s.relation(x, static_cast<std::size_t>(u)) == 3)
                            pairs.push_back({y, u});
                if (sampled && pairs.size() > cfg_.per_item) {
                    std::shuffle(pairs.begin(), pairs.end(), rng);
                    pairs.resize(cfg_.per_item);
                }
                for (auto [y, u] : pairs) {
                    auto counts = triple_numbers_bruteforce(s, x, static_cast<std::size_t>(y), static_cast<std::size_t>(u));
                    ++triples;
                    if (distinct.insert(counts.counts).second) {
                        auto point = counts.unknowns();
                        if (auto row = first_violated_row(sys, point))
                            return failed({{"x", x}, {"y", y}, {"u", u}, {"row", sys.row_labels[*row]}});
                        if (point[static_cast<std::size_t>(i133)] != 0 || point[static_cast<std::size_t>(i233)] != 0)
                            return failed({{"x", x}, {"y", y}, {"u", u}, {"[1 3 3]", counts(1, 3, 3)},
                                           {"[2 3 3]", counts(2, 3, 3)}});
                    }
                }
            }
            return CheckOutcome{true, nullptr,
                                {{"triples", triples}, {"distinct_arrays", distinct.size()}, {"sampled", sampled}}};
        });
    }

    void cliques()
    {
        check("cliques", "every R_3 pair lies in a unique clique of size r, r^2 + 1 through each vertex", [&] {
            lab_ = CliqueLab::build(*scheme_);
            return check_clique_cover(*lab_);
        });
        if (!lab_)
            return;
        const auto& lab = *lab_;
        check("antipodal_cliques", "C' is a clique disjoint from C, and x in C is R_1 to C' - {x'}",
              [&] { return check_antipodal_cliques(lab); });
        check("clique_neighbourhoods", "a point R_3 to C has one R_3 and one R_1 neighbour in C and one R_3 in C'",
              [&] { return check_clique_neighbourhoods(lab); });
        check("delta_t", "|T_C| = r^3 - r^2 and Delta_C has R_1 and R_3 degree r - 1, closed under antipodes",
              [&] { return check_delta_t(lab); });
        check("lambda_mu", "|lambda(y)| = r(r-1) and |mu(y)| = r + 1 split the cliques through x",
              [&] { return check_lambda_mu(lab, cfg_.threads); });
        check("delta_decomposition", "mu-families share a clique and Delta_C is a union of r^2 - r - 2 cliques",
              [&] { return check_delta_decomposition(lab, sweep(true)); });
        check("congruence_classes", "congruence is an equivalence; each class is T_C with r^2 - r cliques", [&] {
            cong_ = congruence_classes(lab);
            return check_congruence_classes(lab, *cong_);
        });
        if (!cong_)
            return;
        check("quotient_matrices", "B_1 and B_2 have constant row sums and the closed-form eigenvalues",
              [&] { return check_quotients(lab, *cong_); });
        check("class_intersections", "two classes meet in 0 or r^2 - r points, clique by clique",
              [&] { return check_class_intersections(lab, *cong_); });
        check("disjoint_cliques", "r + 1 cliques through x miss a class T, each in a class disjoint from T",
              [&] { return check_disjoint_cliques(lab, *cong_); });
    }

    void hypotheses()
    {
        check("hypothesis_1", "m + n = r^2 - 2r with n <= 1 for R_3 pairs in R_2(x)",
              [&] { return check_hypothesis1(*lab_, sweep(true)); });
        check("hypothesis_2", "theta_0 >= 1 off two disjoint classes; the pairs induce partitions of X", [&] {
            parts_ = partitions(*lab_, *cong_, sweep(false));
            return parts_->outcome;
        });
    }

    void reconstruction()
    {
        check("structure", "points X + classes, lines cliques + partitions", [&] {
            rec_ = reconstruct(*lab_, *cong_, *parts_);
            return CheckOutcome{true, nullptr,
                                {{"points", rec_->structure.num_points}, {"lines", rec_->structure.num_lines()}}};
        });
        if (!rec_)
            return;
        const char* statements[] = {"the structure is a GQ of order (r, r^2)",
                                    "class points and partition lines form a GQ of order (r, r)",
                                    "x -> x' is an automorphism fixing the subquadrangle pointwise",
                                    "the subquadrangle is doubly subtended, with x and x' as subtenders",
                                    "each non-incident point and line are joined as the six cases predict"};
        auto rep = verify_reconstruction(*lab_, *cong_, *rec_, cfg_.threads);
        for (std::size_t i = 0; i < rep.checks.size(); ++i)
            check(rep.checks[i].name, statements[i], [&] { return rep.checks[i].outcome; });
    }

    void isomorphism()
    {
        if (cfg_.geometric()) {
            check("natural_isomorphism", "the reconstruction maps onto the source Q(5,q) with the section fixed", [&] {
                auto iso = natural_isomorphism(*model_, *lab_, *cong_, *rec_, cfg_.isomorphism_budget);
                CheckOutcome out;
                out.values = {{"status", to_string(iso.status)}, {"method", iso.method}};
                if (iso.status != IsomorphismStatus::found || iso.method != "natural")
                    return failed(iso.to_json());
                return out;
            });
            return;
        }
        check("isomorphism", "the reconstruction is isomorphic to Q(5,r)", [&] {
            if (r_ < 3 || !is_prime(static_cast<std::uint32_t>(r_)) || r_ > cfg_.q_bound)
                return failed({{"reason", "no source model for this order"}, {"r", r_}});
            model_ = QuadrangleModel::build(static_cast<std::uint32_t>(r_), cfg_.q_bound);
            auto iso = find_isomorphism(rec_->structure, model_->gq().incidence, cfg_.isomorphism_budget);
            CheckOutcome out;
            out.values = {{"status", to_string(iso.status)}, {"method", iso.method}, {"nodes", iso.nodes}};
            if (iso.status != IsomorphismStatus::found)
                return failed(iso.to_json());
            return out;
        });
    }

    void emit()
    {
        auto write = [](const std::filesystem::path& file, const Json& doc) {
            std::ofstream out(file);
            if (!out)
                throw InputError("cannot write " + file.string());
            out << doc.dump(1) << "\n";
        };
        if (cfg_.emit_scheme && scheme_)
            save_scheme(*scheme_, *cfg_.emit_scheme);
        if (cfg_.emit_cliques && lab_ && cong_) {
            if (!parts_)
                parts_ = partitions(*lab_, *cong_, sweep(false));
            write(*cfg_.emit_cliques, cliques_to_json(*lab_, *cong_, *parts_));
        }
        if (cfg_.emit_structure && rec_)
            write(*cfg_.emit_structure, rec_->to_json());
    }

    const RunConfig& cfg_;
    std::size_t last_ = 0;
    std::string stage_;
    bool stage_ok_ = true;
    std::vector<Record> records_;

    std::optional<QuadrangleModel> model_;
    std::optional<AssociationScheme> scheme_;
    long long r_ = 0;
    std::optional<IntersectionTensor> tensor_;
    std::optional<Eigenmatrices> eig_;
    std::optional<CliqueLab> lab_;
    std::optional<Congruence> cong_;
    std::optional<PartitionSet> parts_;
    std::optional<Reconstruction> rec_;
};

}  // namespace

Report run_pipeline(const RunConfig& config)
{
    for (const auto& s : config.stages)
        if (std::find(pipeline_stages().begin(), pipeline_stages().end(), s) == pipeline_stages().end())
            throw InputError("unknown stage '" + s + "'", Json{{"stage", s}, {"known", pipeline_stages()}});
    if (config.geometric()) {
        if (config.q < 3 || !is_prime(config.q))
            throw InputError("q must be a prime >= 3", Json{{"q", config.q}});
        if (config.q > config.q_bound)
            throw InputError("q exceeds the q bound", Json{{"q", config.q}, {"q_bound", config.q_bound}});
    }
    return Runner(config).run();
}

Json solve_triple_request(long long r, const TripleRequest& request)
{
    const auto p = expected_parameters(r);
    auto eig = pw_candidate_eigenmatrices(r);
    TripleOptions o;
    o.krein = request.krein;
    o.symmetry = request.symmetry;
    o.zero_sums = request.zero_sums;
    o.eigen = &eig;
    const auto& t = request.triple;
    auto sys = build_system(p, t[0], t[1], t[2], o);
    Json doc = {{"format_version", 1},
                {"r", r},
                {"triple", t},
                {"options", {{"krein", request.krein}, {"symmetry", request.symmetry}, {"zero_sums", request.zero_sums}}},
                {"rows", sys.equation_count()}};
    SolutionSpace space;
    try {
        space = solve(sys);
    } catch (const CharacterizationFailure& e) {
        doc["inconsistent"] = e.witness();
        return doc;
    }
    doc["dimension"] = space.dimension();
    doc["space"] = space.to_json();
    try {
        auto prop = nonneg_propagate(space);
        Json pinned = Json::object();
        for (const auto& [u, v] : prop.space.pinned)
            pinned[triple_label(p.classes(), u)] = to_fraction_string(v);
        doc["propagated"] = {{"dimension", prop.space.dimension()}, {"rounds", prop.rounds}, {"pinned", pinned}};
    } catch (const CharacterizationFailure& e) {
        doc["propagated"] = {{"failure", e.what()}, {"witness", e.witness()}};
    }
    return doc;
}

}  // namespace pwlab
