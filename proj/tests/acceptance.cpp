// Acceptance suite: one PASS/FAIL line per criterion, limits pinned below.
//
//   pwlab_acceptance [--expect-fail N[,N...]]
//
// Exit 0 when every criterion passes, or when exactly the listed ones fail.

#include "pwlab/cliques.hpp"
#include "pwlab/finite_geometry.hpp"
#include "pwlab/incidence.hpp"
#include "pwlab/reconstruction.hpp"
#include "pwlab/scheme.hpp"
#include "pwlab/spectral.hpp"
#include "pwlab/triples.hpp"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

using namespace pwlab;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

// Collects failed conditions; the first few end up in the detail line.
class Checks {
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok)
            failed_.push_back(what);
    }
    Verdict verdict(std::string summary) const
    {
        if (failed_.empty())
            return {true, std::move(summary)};
        std::string d;
        for (std::size_t i = 0; i < failed_.size() && i < 3; ++i)
            d += (i ? "; " : "") + failed_[i];
        if (failed_.size() > 3)
            d += "; +" + std::to_string(failed_.size() - 3) + " more";
        return {false, d};
    }

private:
    std::vector<std::string> failed_;
};

const QuadrangleModel& model(unsigned q)
{
    static std::map<unsigned, std::unique_ptr<QuadrangleModel>> cache;
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<QuadrangleModel>(QuadrangleModel::build(q));
    return *slot;
}

const AssociationScheme& scheme(unsigned q)
{
    static std::map<unsigned, std::unique_ptr<AssociationScheme>> cache;
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<AssociationScheme>(build_pw_scheme(model(q)));
    return *slot;
}

const IntersectionTensor& tensor(unsigned q)
{
    static std::map<unsigned, std::unique_ptr<IntersectionTensor>> cache;
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<IntersectionTensor>(intersection_numbers(scheme(q)));
    return *slot;
}

std::string str(const Rational& v) { return to_fraction_string(v); }

Verdict model_construction()
{
    Checks c;
    const auto& m = model(3);
    const auto& gq = m.gq();
    c.require(gq.num_points() == 112, "ambient points " + std::to_string(gq.num_points()));
    c.require(gq.num_lines() == 280, "ambient lines " + std::to_string(gq.num_lines()));
    auto ax = verify_gq_axioms(gq.incidence);
    c.require(ax.ok() && *ax.s == 3 && *ax.t == 9, "ambient axioms " + ax.to_json().dump());
    const auto& sub = m.sub().sub;
    c.require(sub.num_points() == 40 && sub.num_lines() == 40, "section size");
    auto sax = verify_gq_axioms(sub.incidence);
    c.require(sax.ok() && *sax.s == 3 && *sax.t == 3, "section axioms " + sax.to_json().dump());

    // Count subtenders per ovoid straight from collinearity.
    std::map<std::vector<int>, int> subtenders;
    for (int x : m.outer_points()) {
        std::vector<int> ovoid;
        for (std::size_t i = 0; i < m.sub().point_embedding.size(); ++i)
            if (m.collinear(x, m.sub().point_embedding[i]))
                ovoid.push_back(static_cast<int>(i));
        c.require(ovoid.size() == 10, "ovoid size " + std::to_string(ovoid.size()));
        ++subtenders[ovoid];
    }
    for (const auto& [ovoid, k] : subtenders)
        c.require(k == 2, "ovoid with " + std::to_string(k) + " subtenders");
    return c.verdict("112/280 order (3,9); section 40/40 order (3,3); " + std::to_string(subtenders.size()) +
                     " ovoids, 2 subtenders each");
}

Verdict parameter_tables()
{
    Checks c;
    for (unsigned q : {3u, 5u}) {
        auto mismatch = first_tensor_mismatch(tensor(q), expected_parameters(q));
        c.require(!mismatch, "q=" + std::to_string(q) + " " + (mismatch ? mismatch->dump() : ""));
    }
    const auto& p = tensor(3);
    c.require(p(1, 2, 2) == 12, "p^1_22");
    c.require(p(2, 2, 2) == 12, "p^2_22");
    c.require(p(3, 3, 3) == 1, "p^3_33");
    c.require(p(4, 2, 2) == 30, "p^4_22");
    return c.verdict("all p^k_ij match at q=3,5; p^1_22=12 p^2_22=12 p^3_33=1 p^4_22=30");
}

Verdict eigenmatrices_check()
{
    Checks c;
    auto eig = pw_candidate_eigenmatrices(3);
    try {
        verify_eigenmatrices(tensor(3), eig);
    } catch (const std::exception& e) {
        c.require(false, std::string("identities: ") + e.what());
    }
    RationalMatrix n_identity(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        n_identity(i, i) = rational(72);
    c.require(eig.P * eig.Q == n_identity, "PQ != 72 I");
    std::vector<std::string> mult;
    for (const auto& m : eig.multiplicities)
        mult.push_back(str(m));
    c.require(mult == std::vector<std::string>{"1/1", "6/1", "20/1", "30/1", "15/1"},
              "multiplicities " + Json(mult).dump());
    return c.verdict("PQ = 72 I, idempotent identities hold, multiplicities (1,6,20,30,15)");
}

Verdict krein_pattern()
{
    Checks c;
    std::set<std::array<int, 3>> listed;
    for (const auto& o : pw_krein_vanishing_orderings())
        listed.insert(o);
    std::ostringstream counts;
    for (long long r : {3LL, 5LL}) {
        auto eig = eigenmatrices(tensor(static_cast<unsigned>(r)), pw_candidate_eigenmatrices(r));
        auto krein = krein_parameters(eig, r * r * (r * r - 1));
        std::set<std::array<int, 3>> zeros;
        for (int k = 1; k <= 4; ++k)
            for (int i = 1; i <= 4; ++i)
                for (int j = 1; j <= 4; ++j) {
                    c.require(krein(k, i, j) >= 0, "negative q^" + std::to_string(k) + "_" + std::to_string(i) +
                                                       std::to_string(j));
                    if (krein(k, i, j) == 0)
                        zeros.insert({i, j, k});
                }
        for (const auto& z : listed)
            c.require(zeros.count(z) == 1, "r=" + std::to_string(r) + " listed triple not zero");
        std::vector<std::string> extra;
        for (const auto& z : zeros)
            if (!listed.count(z))
                extra.push_back("q^" + std::to_string(z[2]) + "_" + std::to_string(z[0]) + std::to_string(z[1]));
        if (!extra.empty())
            c.require(false, "r=" + std::to_string(r) + ": " + std::to_string(zeros.size()) + " zeros vs " +
                                 std::to_string(listed.size()) + " listed, e.g. " + extra.front() + " = 0");
        counts << (r == 3 ? "" : ", ") << "r=" << r << " " << zeros.size() << " zeros";
    }
    return c.verdict("nonnegative, zero set is the listed pattern (" + counts.str() + ")");
}

Verdict triple_solver_path()
{
    Checks c;
    TripleOptions o;
    o.symmetry = o.krein = o.zero_sums = true;
    const int i131 = triple_unknown(4, 1, 3, 1), i133 = triple_unknown(4, 1, 3, 3), i233 = triple_unknown(4, 2, 3, 3);
    std::ostringstream out;
    for (long long r : {3LL, 5LL}) {
        auto space = solve(build_system(expected_parameters(r), 3, 3, 3, o));
        c.require(relation_holds(space, i131, i133, rational(1), rational(0)),
                  "r=" + std::to_string(r) + " [1 3 3] != [1 3 1]");
        c.require(relation_holds(space, i131, i233, rational(-2), rational(0)),
                  "r=" + std::to_string(r) + " [2 3 3] != -2 [1 3 1]");
        auto prop = nonneg_propagate(space);
        auto a = prop.space.pinned_value(i133), b = prop.space.pinned_value(i233);
        c.require(a && *a == 0 && b && *b == 0, "r=" + std::to_string(r) + " not pinned to 0");
        out << (r == 3 ? "" : "; ") << "r=" << r << " dim " << space.dimension();
    }
    return c.verdict("[1 3 3] = [1 3 1], [2 3 3] = -2 [1 3 1], both pinned to 0 (" + out.str() + ")");
}

Verdict triple_oracle_path()
{
    Checks c;
    const auto& s = scheme(3);
    TripleOptions o;
    o.krein = true;
    auto sys = build_system(tensor(3), 3, 3, 3, o);
    long long triples = 0;
    std::set<std::vector<long long>> distinct;
    for (std::size_t x = 0; x < s.size(); ++x)
        for (int y : s.neighbours(x, 3))
            for (std::size_t u = 0; u < s.size(); ++u) {
                if (s.relation(static_cast<std::size_t>(y), u) != 3 || s.relation(u, x) != 3)
                    continue;
                auto t = triple_numbers_bruteforce(s, x, static_cast<std::size_t>(y), u);
                ++triples;
                c.require(t(1, 3, 3) == 0 && t(2, 3, 3) == 0, "nonzero [1 3 3] or [2 3 3]");
                distinct.insert(t.counts);
            }
    for (const auto& counts : distinct) {
        TripleCounts t{4, counts};
        auto row = first_violated_row(sys, t.unknowns());
        c.require(!row, "row " + (row ? std::to_string(*row) : "") + " violated");
    }
    return c.verdict(std::to_string(triples) + " triples, " + std::to_string(distinct.size()) +
                     " distinct arrays, all rows hold, [1 3 3] = [2 3 3] = 0");
}

Verdict clique_structure()
{
    Checks c;
    const auto& s = scheme(3);
    auto lab = CliqueLab::build(s);
    c.require(lab.cliques().size() == 240, "clique count " + std::to_string(lab.cliques().size()));
    for (const auto& cl : lab.cliques())
        c.require(cl.size() == 3, "clique size");
    for (std::size_t x = 0; x < s.size(); ++x)
        c.require(lab.cliques_through(x).size() == 10, "cliques per vertex");
    // Every R_3 pair in exactly one clique, by direct count.
    std::map<std::pair<int, int>, int> cover;
    for (const auto& cl : lab.cliques())
        for (int a : cl)
            for (int b : cl)
                if (a < b)
                    ++cover[{a, b}];
    std::size_t r3_pairs = 0;
    for (std::size_t x = 0; x < s.size(); ++x)
        for (int y : s.neighbours(x, 3))
            if (static_cast<std::size_t>(y) > x) {
                ++r3_pairs;
                c.require(cover[{static_cast<int>(x), y}] == 1, "R_3 pair not in exactly one clique");
            }
    c.require(cover.size() == r3_pairs, "clique pair outside R_3");
    c.require(check_clique_cover(lab).pass, "clique cover check");

    // T_C and Delta_C.
    for (int id = 0; id < static_cast<int>(lab.cliques().size()); ++id) {
        auto dt = delta_t(lab, id);
        c.require(dt.t.count() == 18, "|T_C| = " + std::to_string(dt.t.count()));
        std::size_t inside = 0;
        for (int z : dt.delta.members()) {
            c.require(dt.delta.test(static_cast<std::size_t>(lab.antipode(static_cast<std::size_t>(z)))),
                      "Delta_C not closed under antipodes");
            c.require(lab.neighbourhood(static_cast<std::size_t>(z), 1).intersection_count(dt.delta) == 2 &&
                          lab.neighbourhood(static_cast<std::size_t>(z), 3).intersection_count(dt.delta) == 2,
                      "Delta_C degrees");
        }
        for (int other = 0; other < static_cast<int>(lab.cliques().size()); ++other)
            if (lab.clique_set(other).intersection_count(dt.delta) == 3)
                ++inside;
        c.require(inside == 4, "Delta_C holds " + std::to_string(inside) + " cliques");
    }
    c.require(check_delta_decomposition(lab).pass, "decomposition check");

    auto cong = congruence_classes(lab);
    c.require(cong.classes.size() == 40, "classes " + std::to_string(cong.classes.size()));
    std::set<std::size_t> meets;
    for (std::size_t a = 0; a < cong.classes.size(); ++a)
        for (std::size_t b = a + 1; b < cong.classes.size(); ++b)
            meets.insert(cong.classes[a].members.intersection_count(cong.classes[b].members));
    c.require(meets == std::set<std::size_t>{0, 6}, "class intersections");

    std::set<std::string> eig1, eig2;
    for (const auto& cls : cong.classes) {
        auto qm = quotient_matrices(lab, cls.members);
        eig1.insert(str(qm.eigenvalues1[0]) + "," + str(qm.eigenvalues1[1]));
        eig2.insert(str(qm.eigenvalues2[0]) + "," + str(qm.eigenvalues2[1]));
    }
    c.require(eig1 == std::set<std::string>{"20/1,-4/1"}, "B_1 eigenvalues " + Json(eig1).dump());
    c.require(eig2 == std::set<std::string>{"30/1,6/1"}, "B_2 eigenvalues " + Json(eig2).dump());
    return c.verdict("240 cliques of size 3, 10 per vertex, unique per R_3 pair; |T_C| = 18; Delta_C = 4 cliques; "
                     "40 classes meeting in {0,6}; B_1 {20,-4}, B_2 {30,6}");
}

Verdict hypotheses()
{
    Checks c;
    std::ostringstream out;
    for (unsigned q : {3u, 5u}) {
        auto lab = CliqueLab::build(scheme(q));
        auto h1 = check_hypothesis1(lab);
        c.require(h1.pass, "hypothesis 1 at q=" + std::to_string(q) + " " + h1.witness.dump());
        c.require(!h1.values.contains("sampled") || h1.values["sampled"] == false, "sampled");
        out << "q=" << q << " " << h1.values["triples"].dump() << " triples; ";
    }
    auto lab = CliqueLab::build(scheme(3));
    auto cong = congruence_classes(lab);
    std::map<std::string, long long> profiles;
    long long pairs = 0;
    for (std::size_t a = 0; a < cong.classes.size(); ++a)
        for (std::size_t b = a + 1; b < cong.classes.size(); ++b) {
            if (cong.classes[a].members.intersects(cong.classes[b].members))
                continue;
            ++pairs;
            auto rep = theta_profiles(lab, cong, static_cast<int>(a), static_cast<int>(b));
            c.require(rep.outcome.pass, "hypothesis 2 " + rep.outcome.witness.dump());
            long long sum2 = 0;
            for (const auto& p : rep.profiles) {
                ++profiles[std::to_string(p.theta0) + "," + std::to_string(p.theta1) + "," + std::to_string(p.theta2)];
                sum2 += p.theta2;
            }
            c.require(sum2 == 108, "sum of theta_2 = " + std::to_string(sum2));
        }
    c.require(profiles.size() == 1 && profiles.count("1,6,3"), "profiles " + Json(profiles).dump());
    out << pairs << " disjoint class pairs, every profile (1,6,3), theta_2 sums 108";
    return c.verdict("exhaustive: " + out.str());
}

Verdict reconstruction_round_trip()
{
    Checks c;
    auto lab = CliqueLab::build(scheme(3));
    auto cong = congruence_classes(lab);
    auto parts = partitions(lab, cong);
    auto rec = reconstruct(lab, cong, parts);
    auto ax = verify_gq_axioms(rec.structure);
    c.require(ax.ok() && *ax.s == 3 && *ax.t == 9, "axioms " + ax.to_json().dump());

    std::vector<int> points, lines;
    for (std::size_t t = 0; t < rec.class_count; ++t)
        points.push_back(rec.class_point(static_cast<int>(t)));
    for (std::size_t l = rec.clique_count; l < rec.structure.num_lines(); ++l)
        lines.push_back(static_cast<int>(l));
    auto sub = verify_gq_axioms(rec.structure.restrict_to(points, lines));
    c.require(sub.ok() && *sub.s == 3 && *sub.t == 3, "substructure " + sub.to_json().dump());

    // The involution maps lines to lines and fixes every class point.
    std::set<std::vector<int>> line_set;
    for (auto l : rec.structure.lines) {
        std::sort(l.begin(), l.end());
        line_set.insert(l);
    }
    for (int p : points)
        c.require(rec.involution[static_cast<std::size_t>(p)] == p, "class point moved");
    for (const auto& l : rec.structure.lines) {
        std::vector<int> image;
        for (int p : l)
            image.push_back(rec.involution[static_cast<std::size_t>(p)]);
        std::sort(image.begin(), image.end());
        c.require(line_set.count(image) == 1, "involution does not preserve lines");
    }
    auto report = verify_reconstruction(lab, cong, rec);
    c.require(report.pass(), "reconstruction checks " + report.to_json().dump());

    auto iso = natural_isomorphism(model(3), lab, cong, rec);
    c.require(iso.status == IsomorphismStatus::found && iso.method == "natural" && iso.witness &&
                  is_isomorphism(rec.structure, model(3).gq().incidence, *iso.witness),
              "isomorphism " + iso.to_json().dump());
    return c.verdict("order (3,9), substructure (3,3), involution fixes it pointwise, natural isomorphism certified");
}

Verdict negative_controls()
{
    Checks c;
    std::ostringstream out;

    // One corrupted entry in a saved scheme file.
    auto file = std::filesystem::temp_directory_path() / "pwlab_acceptance_corrupt.json";
    auto doc = scheme(3).to_json();
    doc["relations"][5] = doc["relations"][5].get<int>() == 1 ? 3 : 1;
    std::ofstream(file) << doc.dump();
    auto loaded = load_scheme(file, false);
    std::filesystem::remove(file);
    auto ax = verify_scheme_axioms(loaded);
    c.require(!ax.pass && !ax.witness.is_null(), "corrupted scheme accepted");
    out << "corrupt entry: " << ax.witness.dump();

    // One partition removed.
    auto lab = CliqueLab::build(scheme(3));
    auto cong = congruence_classes(lab);
    auto parts = partitions(lab, cong);
    parts.partitions.pop_back();
    auto rec = reconstruct(lab, cong, parts);
    auto gq = verify_gq_axioms(rec.structure);
    const auto* v = gq.violation(Axiom::incidence_count);
    c.require(v != nullptr, "missing partition not detected by axiom (i)");
    if (v)
        out << "; dropped partition: axiom (i) at point " << v->point << " (" << v->detail << ")";

    // Random symmetric 5-relation table on 72 vertices.
    std::mt19937_64 rng(20261018);
    std::uniform_int_distribution<int> rel(1, 4);
    std::vector<std::uint8_t> table(72 * 72, 0);
    for (std::size_t x = 0; x < 72; ++x)
        for (std::size_t y = x + 1; y < 72; ++y)
            table[x * 72 + y] = table[y * 72 + x] = static_cast<std::uint8_t>(rel(rng));
    AssociationScheme random(72, 4, table);
    auto rax = verify_scheme_axioms(random);
    c.require(!rax.pass && !rax.witness.is_null(), "random table accepted");
    out << "; random table: " << rax.witness.value("reason", rax.witness.dump());
    return c.verdict(out.str());
}

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv)
{
    std::set<int> expected_failures;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
            std::stringstream in(argv[++i]);
            std::string item;
            while (std::getline(in, item, ','))
                expected_failures.insert(std::stoi(item));
        } else {
            std::cerr << "usage: pwlab_acceptance [--expect-fail N[,N...]]\n";
            return 2;
        }
    }

    // Limits in seconds; q=5 parameters dominate criterion 2.
    const std::vector<Criterion> criteria = {
        {1, "model construction q=3", 5, model_construction},
        {2, "parameter tables q=3,5", 180, parameter_tables},
        {3, "eigenmatrices r=3", 10, eigenmatrices_check},
        {4, "Krein zero pattern r=3,5", 60, krein_pattern},
        {5, "triple system [3 3 3], solver", 1, triple_solver_path},
        {6, "triple counts [3 3 3], brute force q=3", 30, triple_oracle_path},
        {7, "clique structure q=3", 30, clique_structure},
        {8, "hypotheses on the classical model", 1800, hypotheses},
        {9, "reconstruction round trip q=3", 60, reconstruction_round_trip},
        {10, "negative controls", 10, negative_controls},
    };

    std::set<int> failed;
    for (const auto& cr : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = cr.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > cr.limit_seconds) {
            v.pass = false;
            v.detail += " [over time limit]";
        }
        if (!v.pass)
            failed.insert(cr.id);
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << cr.id << "  " << cr.name << "  ("
                  << std::fixed << std::setprecision(2) << secs << " s, limit " << std::setprecision(0)
                  << cr.limit_seconds << " s)  " << v.detail << "\n"
                  << std::flush;
    }
    std::cout << (criteria.size() - failed.size()) << "/" << criteria.size() << " criteria pass\n";
    if (!expected_failures.empty()) {
        std::cout << "expected failures:";
        for (int id : expected_failures)
            std::cout << " " << id;
        std::cout << (failed == expected_failures ? " (matched)\n" : " (NOT matched)\n");
        return failed == expected_failures ? 0 : 1;
    }
    return failed.empty() ? 0 : 1;
}
