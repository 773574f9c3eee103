#include "pwlab/reconstruction.hpp"

#include "pwlab/parallel.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pwlab {

namespace {

std::map<std::vector<int>, int> line_index(const IncidenceStructure& s)
{
    std::map<std::vector<int>, int> index;
    for (std::size_t l = 0; l < s.lines.size(); ++l)
        if (!index.emplace(s.lines[l], static_cast<int>(l)).second)
            throw InputError("two lines with the same points", Json{{"line", l}});
    return index;
}

Json range(std::size_t begin, std::size_t end) { return Json::array({begin, end}); }

CheckOutcome failed(Json witness)
{
    CheckOutcome out;
    out.pass = false;
    out.witness = std::move(witness);
    return out;
}

CheckOutcome order_check(const IncidenceStructure& s, long long want_s, long long want_t, unsigned threads)
{
    auto rep = verify_gq_axioms(s, threads);
    CheckOutcome out;
    out.values = {{"points", s.num_points}, {"lines", s.num_lines()}, {"expected_order", {want_s, want_t}}};
    if (rep.s && rep.t)
        out.values["order"] = {*rep.s, *rep.t};
    if (!rep.ok()) {
        out.pass = false;
        out.witness = rep.to_json();
    } else if (*rep.s != want_s || *rep.t != want_t) {
        out.pass = false;
        out.witness = {{"order", {*rep.s, *rep.t}}, {"expected", {want_s, want_t}}};
    }
    return out;
}

}  // namespace

Json Reconstruction::to_json() const
{
    return {{"format_version", 1},
            {"num_points", structure.num_points},
            {"lines", structure.lines},
            {"tags",
             {{"points", {{"vertex", range(0, vertex_count)}, {"class", range(vertex_count, vertex_count + class_count)}}},
              {"lines",
               {{"clique", range(0, clique_count)},
                {"partition", range(clique_count, clique_count + partitions.size())}}}}}};
}

Reconstruction reconstruct(const CliqueLab& lab, const Congruence& congruence, const PartitionSet& partitions)
{
    if (!partitions.outcome.pass)
        throw InputError("partition sweep did not pass; the construction needs both hypotheses",
                         partitions.outcome.witness);
    Reconstruction rec;
    rec.r = lab.order();
    rec.vertex_count = lab.size();
    rec.class_count = congruence.classes.size();
    rec.clique_count = lab.cliques().size();
    rec.partitions = partitions.partitions;
    rec.structure.num_points = rec.vertex_count + rec.class_count;
    for (std::size_t c = 0; c < rec.clique_count; ++c) {
        auto line = lab.clique(static_cast<int>(c));
        line.push_back(rec.class_point(congruence.class_of_clique[c]));
        rec.structure.lines.push_back(std::move(line));
    }
    for (const auto& p : rec.partitions) {
        std::vector<int> line;
        for (int t : p)
            line.push_back(rec.class_point(t));
        std::sort(line.begin(), line.end());
        rec.structure.lines.push_back(std::move(line));
    }
    rec.involution.resize(rec.structure.num_points);
    for (std::size_t x = 0; x < rec.structure.num_points; ++x)
        rec.involution[x] = x < rec.vertex_count ? lab.antipode(x) : static_cast<int>(x);
    return rec;
}

bool ReconstructionReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const NamedCheck& c) { return c.outcome.pass; });
}

const NamedCheck* ReconstructionReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

Json ReconstructionReport::to_json() const
{
    Json out = Json::array();
    for (const auto& c : checks)
        out.push_back({{"check", c.name}, {"pass", c.outcome.pass}, {"witness", c.outcome.witness},
                       {"values", c.outcome.values}});
    return out;
}

namespace {

CheckOutcome involution_check(const CliqueLab& lab, const Congruence& cong, const Reconstruction& rec)
{
    const auto& s = rec.structure;
    auto index = line_index(s);
    IsomorphismWitness w{rec.involution, std::vector<int>(s.num_lines(), -1)};
    for (std::size_t p = 0; p < s.num_points; ++p) {
        int image = rec.involution[p];
        if (rec.involution[static_cast<std::size_t>(image)] != static_cast<int>(p))
            return failed({{"point", p}, {"reason", "not an involution"}});
        if (!rec.is_vertex(static_cast<int>(p)) && image != static_cast<int>(p))
            return failed({{"point", p}, {"reason", "class point moved"}});
    }
    for (std::size_t l = 0; l < s.num_lines(); ++l) {
        std::vector<int> image;
        for (int p : s.lines[l])
            image.push_back(rec.involution[static_cast<std::size_t>(p)]);
        std::sort(image.begin(), image.end());
        auto it = index.find(image);
        if (it == index.end())
            return failed({{"line", l}, {"image", image}, {"reason", "image is not a line"}});
        w.line_map[l] = it->second;
        if (rec.is_clique_line(static_cast<int>(l))) {
            const int c = static_cast<int>(l);
            const int cp = lab.antipodal_clique(c);
            if (cong.class_of_clique[static_cast<std::size_t>(c)] != cong.class_of_clique[static_cast<std::size_t>(cp)])
                return failed({{"clique", c}, {"antipodal", cp}, {"reason", "T_C differs from T_C'"}});
            if (it->second != cp)
                return failed({{"line", l}, {"image_line", it->second}, {"expected", cp}});
        } else if (it->second != static_cast<int>(l)) {
            return failed({{"line", l}, {"image_line", it->second}, {"reason", "partition line moved"}});
        }
    }
    if (!is_isomorphism(s, s, w))
        return failed({{"reason", "not an automorphism"}});
    return {true, nullptr, {{"fixed_points", rec.class_count}, {"fixed_lines", rec.partitions.size()}}};
}

CheckOutcome subtended_check(const Reconstruction& rec)
{
    std::vector<bool> mask(rec.structure.num_points, false);
    for (std::size_t p = rec.vertex_count; p < rec.structure.num_points; ++p)
        mask[p] = true;
    auto a = analyze_subtended(rec.structure, mask);
    if (!a.doubly_subtended)
        return failed(a.witness);
    for (std::size_t i = 0; i < a.outer_points.size(); ++i) {
        int x = a.outer_points[i];
        int other = a.outer_points[static_cast<std::size_t>(a.antipode[i])];
        if (other != rec.involution[static_cast<std::size_t>(x)])
            return failed({{"point", x}, {"other_subtender", other}, {"antipode", rec.involution[static_cast<std::size_t>(x)]}});
    }
    return {true, nullptr, {{"ovoids", a.outer_points.size() / 2}, {"ovoid_size", a.ovoids.empty() ? 0 : a.ovoids[0].size()}}};
}

const char* const kCases[6] = {"vertex, clique line inside its class", "vertex, clique line outside its class",
                               "vertex, partition line", "class, clique line of a meeting class",
                               "class, clique line of a disjoint class", "class, partition line"};

CheckOutcome chain_check(const CliqueLab& lab, const Congruence& cong, const Reconstruction& rec, unsigned threads)
{
    const auto& s = rec.structure;
    const std::size_t np = s.num_points;
    auto join = s.joining_lines();
    std::map<std::pair<int, int>, int> partition_of_pair;
    for (std::size_t i = 0; i < rec.partitions.size(); ++i)
        for (int a : rec.partitions[i])
            for (int b : rec.partitions[i])
                if (a < b)
                    partition_of_pair[{a, b}] = static_cast<int>(i);
    auto partition_line = [&](int a, int b) {
        auto it = partition_of_pair.find({std::min(a, b), std::max(a, b)});
        return it == partition_of_pair.end() ? -1 : rec.partition_line(it->second);
    };
    auto clique_in_class = [&](std::size_t x, int t) {
        for (int c : lab.cliques_through(x))
            if (cong.class_of_clique[static_cast<std::size_t>(c)] == t)
                return c;
        return -1;
    };
    auto members = [&](int t) -> const VertexSet& { return cong.classes[static_cast<std::size_t>(t)].members; };

    const std::size_t chunks = chunk_count(np, threads);
    std::vector<std::array<long long, 6>> counts(chunks, std::array<long long, 6>{});
    std::vector<Json> witness(chunks);
    parallel_chunks(np, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t p = begin; p < end; ++p) {
            const int P = static_cast<int>(p);
            for (std::size_t l = 0; l < s.num_lines(); ++l) {
                const int L = static_cast<int>(l);
                if (s.incident(P, L))
                    continue;
                std::vector<int> found;
                for (int y : s.lines[l])
                    if (join[p * np + static_cast<std::size_t>(y)] >= 0)
                        found.push_back(y);
                int kase, y = -1, m = -1;
                if (rec.is_vertex(P)) {
                    if (rec.is_clique_line(L)) {
                        const int t = cong.class_of_clique[l];
                        if (members(t).test(p)) {
                            kase = 0;
                            y = rec.class_point(t);
                            m = clique_in_class(p, t);
                        } else {
                            kase = 1;
                            for (int v : lab.clique(L))
                                if (lab.scheme().relation(p, static_cast<std::size_t>(v)) == 3)
                                    y = v;
                            m = y < 0 ? -1 : lab.clique_of(p, static_cast<std::size_t>(y));
                        }
                    } else {
                        kase = 2;
                        for (int t : rec.partitions[l - rec.clique_count])
                            if (members(t).test(p)) {
                                y = rec.class_point(t);
                                m = clique_in_class(p, t);
                            }
                    }
                } else {
                    const int t = P - static_cast<int>(rec.vertex_count);
                    if (rec.is_clique_line(L)) {
                        const int tc = cong.class_of_clique[l];
                        if (members(t).intersects(members(tc))) {
                            kase = 3;
                            for (int v : lab.clique(L)) {
                                int d = clique_in_class(static_cast<std::size_t>(v), t);
                                if (d >= 0) {
                                    y = v;
                                    m = d;
                                }
                            }
                        } else {
                            kase = 4;
                            y = rec.class_point(tc);
                            m = partition_line(t, tc);
                        }
                    } else {
                        kase = 5;
                        for (int t2 : rec.partitions[l - rec.clique_count])
                            if (!members(t).intersects(members(t2))) {
                                y = rec.class_point(t2);
                                m = partition_line(t, t2);
                            }
                    }
                }
                ++counts[chunk][static_cast<std::size_t>(kase)];
                const int actual_m = found.size() == 1 ? join[p * np + static_cast<std::size_t>(found[0])] : -1;
                if (found.size() != 1 || found[0] != y || actual_m != m) {
                    witness[chunk] = {{"case", kCases[kase]}, {"point", P}, {"line", L}, {"collinear_on_line", found},
                                      {"expected", {{"point", y}, {"line", m}}}};
                    return;
                }
            }
        }
    });
    CheckOutcome out;
    Json per_case = Json::object();
    for (std::size_t k = 0; k < 6; ++k) {
        long long total = 0;
        for (const auto& c : counts)
            total += c[k];
        per_case[kCases[k]] = total;
    }
    out.values = {{"cases", per_case}};
    for (auto& w : witness)
        if (!w.is_null()) {
            out.pass = false;
            out.witness = w;
            break;
        }
    return out;
}

}  // namespace

ReconstructionReport verify_reconstruction(const CliqueLab& lab, const Congruence& congruence,
                                           const Reconstruction& rec, unsigned threads)
{
    ReconstructionReport rep;
    const long long r = rec.r;
    rep.checks.push_back({"gq_axioms", order_check(rec.structure, r, r * r, threads)});

    std::vector<int> points, lines;
    for (std::size_t p = rec.vertex_count; p < rec.structure.num_points; ++p)
        points.push_back(static_cast<int>(p));
    for (std::size_t l = rec.clique_count; l < rec.structure.num_lines(); ++l)
        lines.push_back(static_cast<int>(l));
    rep.checks.push_back({"subquadrangle", order_check(rec.structure.restrict_to(points, lines), r, r, threads)});

    CheckOutcome inv;
    try {
        inv = involution_check(lab, congruence, rec);
    } catch (const InputError& e) {
        inv = failed({{"reason", e.what()}, {"detail", e.witness()}});
    }
    rep.checks.push_back({"involution", inv});
    rep.checks.push_back({"doubly_subtended", subtended_check(rec)});
    rep.checks.push_back({"incidence_chains", chain_check(lab, congruence, rec, threads)});
    return rep;
}

Json IsomorphismWitness::to_json() const { return {{"point_map", point_map}, {"line_map", line_map}}; }

std::string to_string(IsomorphismStatus status)
{
    switch (status) {
    case IsomorphismStatus::found:
        return "found";
    case IsomorphismStatus::non_isomorphic:
        return "non_isomorphic";
    case IsomorphismStatus::budget_exceeded:
        return "budget_exceeded";
    }
    return "unknown";
}

Json IsomorphismResult::to_json() const
{
    Json j = {{"status", to_string(status)}, {"method", method}, {"nodes", nodes}, {"detail", detail}};
    if (witness)
        j["witness"] = witness->to_json();
    return j;
}

bool is_isomorphism(const IncidenceStructure& a, const IncidenceStructure& b, const IsomorphismWitness& w)
{
    if (a.num_points != b.num_points || a.num_lines() != b.num_lines() || w.point_map.size() != a.num_points ||
        w.line_map.size() != a.num_lines())
        return false;
    std::vector<bool> hit_p(b.num_points, false), hit_l(b.num_lines(), false);
    for (int q : w.point_map) {
        if (q < 0 || static_cast<std::size_t>(q) >= b.num_points || hit_p[static_cast<std::size_t>(q)])
            return false;
        hit_p[static_cast<std::size_t>(q)] = true;
    }
    for (std::size_t l = 0; l < a.num_lines(); ++l) {
        int m = w.line_map[l];
        if (m < 0 || static_cast<std::size_t>(m) >= b.num_lines() || hit_l[static_cast<std::size_t>(m)])
            return false;
        hit_l[static_cast<std::size_t>(m)] = true;
        std::vector<int> image;
        for (int p : a.lines[l])
            image.push_back(w.point_map[static_cast<std::size_t>(p)]);
        std::sort(image.begin(), image.end());
        if (image != b.lines[static_cast<std::size_t>(m)])
            return false;
    }
    return true;
}

namespace {

std::vector<VertexSet> collinearity(const IncidenceStructure& s)
{
    std::vector<VertexSet> adj(s.num_points, VertexSet(s.num_points));
    for (const auto& line : s.lines)
        for (int a : line)
            for (int b : line)
                if (a != b)
                    adj[static_cast<std::size_t>(a)].set(static_cast<std::size_t>(b));
    return adj;
}

// Degree, then the sorted common-neighbour counts over all other points.
std::vector<std::vector<std::size_t>> point_invariants(const std::vector<VertexSet>& adj)
{
    std::vector<std::vector<std::size_t>> inv(adj.size());
    for (std::size_t x = 0; x < adj.size(); ++x) {
        std::vector<std::size_t> common;
        for (std::size_t y = 0; y < adj.size(); ++y)
            if (y != x)
                common.push_back(adj[x].intersection_count(adj[y]));
        std::sort(common.begin(), common.end());
        inv[x].push_back(adj[x].count());
        inv[x].insert(inv[x].end(), common.begin(), common.end());
    }
    return inv;
}

struct Search {
    const IncidenceStructure& a;
    const IncidenceStructure& b;
    const std::map<std::vector<int>, int>& b_lines;
    std::vector<VertexSet> adj_a, adj_b, non_adj_b;
    long long budget;
    long long nodes = 0;
    bool out_of_budget = false;
    std::vector<int> map;
    std::vector<int> line_map;

    bool complete()
    {
        line_map.assign(a.num_lines(), -1);
        for (std::size_t l = 0; l < a.num_lines(); ++l) {
            std::vector<int> image;
            for (int p : a.lines[l])
                image.push_back(map[static_cast<std::size_t>(p)]);
            std::sort(image.begin(), image.end());
            auto it = b_lines.find(image);
            if (it == b_lines.end())
                return false;
            line_map[l] = it->second;
        }
        return true;
    }

    bool run(const std::vector<VertexSet>& viable, std::size_t mapped)
    {
        if (mapped == a.num_points)
            return complete();
        std::size_t best = a.num_points, best_count = b.num_points + 1;
        for (std::size_t p = 0; p < a.num_points; ++p) {
            if (map[p] >= 0)
                continue;
            std::size_t c = viable[p].count();
            if (c < best_count) {
                best = p;
                best_count = c;
            }
        }
        if (best_count == 0)
            return false;
        for (int q : viable[best].members()) {
            if (++nodes > budget) {
                out_of_budget = true;
                return false;
            }
            auto next = viable;
            for (std::size_t p = 0; p < a.num_points; ++p) {
                if (map[p] >= 0 || p == best)
                    continue;
                next[p] &= adj_a[best].test(p) ? adj_b[static_cast<std::size_t>(q)] : non_adj_b[static_cast<std::size_t>(q)];
            }
            map[best] = q;
            if (run(next, mapped + 1))
                return true;
            map[best] = -1;
            if (out_of_budget)
                return false;
        }
        return false;
    }
};

}  // namespace

IsomorphismResult find_isomorphism(const IncidenceStructure& a, const IncidenceStructure& b, long long node_budget)
{
    IsomorphismResult out;
    out.method = "backtracking";
    auto sizes = [](const IncidenceStructure& s) {
        std::vector<std::size_t> v;
        for (const auto& l : s.lines)
            v.push_back(l.size());
        std::sort(v.begin(), v.end());
        return v;
    };
    if (a.num_points != b.num_points || a.num_lines() != b.num_lines() || sizes(a) != sizes(b)) {
        out.detail = {{"reason", "point, line or line-size counts differ"}};
        return out;
    }
    line_index(a);
    auto b_lines = line_index(b);
    Search search{a, b, b_lines, collinearity(a), collinearity(b), {}, node_budget, 0, false, {}, {}};
    const std::size_t n = a.num_points;
    for (std::size_t q = 0; q < n; ++q) {
        VertexSet s(n);
        for (std::size_t p = 0; p < n; ++p)
            if (p != q && !search.adj_b[q].test(p))
                s.set(p);
        search.non_adj_b.push_back(std::move(s));
    }
    auto inv_a = point_invariants(search.adj_a);
    auto inv_b = point_invariants(search.adj_b);
    {
        auto sa = inv_a, sb = inv_b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) {
            out.detail = {{"reason", "point invariants differ"}};
            return out;
        }
    }
    std::vector<VertexSet> viable(n, VertexSet(n));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (inv_a[p] == inv_b[q])
                viable[p].set(q);
    search.map.assign(n, -1);
    bool ok = n == 0 ? search.complete() : search.run(viable, 0);
    out.nodes = search.nodes;
    if (ok) {
        out.status = IsomorphismStatus::found;
        out.witness = IsomorphismWitness{search.map, search.line_map};
        out.detail = nullptr;
    } else if (search.out_of_budget) {
        out.status = IsomorphismStatus::budget_exceeded;
        out.detail = {{"reason", "node budget exhausted"}, {"budget", node_budget}};
    } else {
        out.detail = {{"reason", "search exhausted"}};
    }
    return out;
}

IsomorphismResult natural_isomorphism(const QuadrangleModel& model, const CliqueLab& lab, const Congruence& cong,
                                      const Reconstruction& rec, long long node_budget)
{
    const auto& target = model.gq().incidence;
    auto attempt = [&]() -> std::pair<std::optional<IsomorphismWitness>, Json> {
        if (rec.structure.num_points != target.num_points || rec.structure.num_lines() != target.num_lines())
            return {std::nullopt, {{"reason", "sizes differ"}}};
        IsomorphismWitness w{std::vector<int>(rec.structure.num_points, -1), {}};
        for (std::size_t v = 0; v < rec.vertex_count; ++v)
            w.point_map[v] = model.outer_points()[v];
        const auto& embed = model.sub().point_embedding;
        for (std::size_t t = 0; t < rec.class_count; ++t) {
            int image = -1;
            for (int c : cong.classes[t].cliques) {
                std::vector<int> hits;
                for (int p : embed) {
                    const auto& cl = lab.clique(c);
                    if (std::all_of(cl.begin(), cl.end(), [&](int v) { return model.collinear(p, model.outer_points()[static_cast<std::size_t>(v)]); }))
                        hits.push_back(p);
                }
                if (hits.size() != 1)
                    return {std::nullopt, {{"class", t}, {"clique", c}, {"collinear_section_points", hits}}};
                if (image >= 0 && image != hits[0])
                    return {std::nullopt, {{"class", t}, {"clique", c}, {"reason", "cliques of the class disagree"}}};
                image = hits[0];
            }
            w.point_map[rec.vertex_count + t] = image;
        }
        auto index = line_index(target);
        std::set<int> section_lines(model.sub().line_embedding.begin(), model.sub().line_embedding.end());
        for (std::size_t l = 0; l < rec.structure.num_lines(); ++l) {
            std::vector<int> image;
            for (int p : rec.structure.lines[l])
                image.push_back(w.point_map[static_cast<std::size_t>(p)]);
            std::sort(image.begin(), image.end());
            auto it = index.find(image);
            if (it == index.end())
                return {std::nullopt, {{"line", l}, {"reason", "image is not a line"}}};
            if (section_lines.count(it->second) != (rec.is_clique_line(static_cast<int>(l)) ? 0u : 1u))
                return {std::nullopt, {{"line", l}, {"reason", "line type not preserved"}}};
            w.line_map.push_back(it->second);
        }
        if (!is_isomorphism(rec.structure, target, w))
            return {std::nullopt, {{"reason", "map is not a bijection"}}};
        for (std::size_t p = 0; p < rec.structure.num_points; ++p)
            if (w.point_map[static_cast<std::size_t>(rec.involution[p])] != model.reflect(w.point_map[p]))
                return {std::nullopt, {{"point", p}, {"reason", "involution does not match the reflection"}}};
        return {w, nullptr};
    };
    auto [w, why] = attempt();
    if (w) {
        IsomorphismResult out;
        out.status = IsomorphismStatus::found;
        out.method = "natural";
        out.witness = std::move(w);
        return out;
    }
    auto out = find_isomorphism(rec.structure, target, node_budget);
    out.detail = {{"natural_map", why}, {"search", out.detail}};
    return out;
}

}  // namespace pwlab
