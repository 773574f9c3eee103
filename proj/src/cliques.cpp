#include "pwlab/cliques.hpp"

#include "pwlab/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace pwlab {

namespace {

Json ids(const std::vector<int>& v) { return Json(v); }

CheckOutcome failed(Json witness)
{
    CheckOutcome out;
    out.pass = false;
    out.witness = std::move(witness);
    return out;
}

// Records the first failure of a sweep in chunk order.
struct ChunkResults {
    explicit ChunkResults(std::size_t chunks) : witness(chunks) {}
    std::vector<Json> witness;

    std::optional<Json> first() const
    {
        for (const auto& w : witness)
            if (!w.is_null())
                return w;
        return std::nullopt;
    }
};

VertexSet set_of(std::size_t n, const std::vector<int>& members)
{
    VertexSet s(n);
    for (int v : members)
        s.set(static_cast<std::size_t>(v));
    return s;
}

}  // namespace

CliqueLab CliqueLab::build(const AssociationScheme& scheme)
{
    if (scheme.classes() != 4)
        throw InputError("clique analysis needs a four-class scheme", Json{{"classes", scheme.classes()}});
    auto r = order_from_vertex_count(scheme.size());
    if (!r)
        throw InputError("vertex count is not r^2 (r^2 - 1)", Json{{"vertices", scheme.size()}});

    CliqueLab lab;
    lab.scheme_ = &scheme;
    lab.r_ = *r;
    const std::size_t n = scheme.size();
    lab.neighbours_.assign(4, std::vector<VertexSet>(n, VertexSet(n)));
    for (std::size_t x = 0; x < n; ++x) {
        const auto* row = scheme.row(x);
        for (std::size_t y = 0; y < n; ++y)
            if (row[y] >= 1 && row[y] <= 4)
                lab.neighbours_[row[y] - 1u][x].set(y);
    }

    lab.antipode_.assign(n, -1);
    for (std::size_t x = 0; x < n; ++x) {
        auto a = lab.neighbours_[3][x].members();
        if (a.size() != 1)
            throw CharacterizationFailure("vertex without a unique R_4 partner",
                                          {{"x", x}, {"r4_neighbours", a.size()}});
        lab.antipode_[x] = a[0];
    }

    const auto size = static_cast<std::size_t>(lab.r_);
    lab.edge_.assign(n * n, -1);
    for (std::size_t x = 0; x < n; ++x)
        for (int yi : lab.neighbours_[2][x].members()) {
            auto y = static_cast<std::size_t>(yi);
            if (y <= x || lab.edge_[x * n + y] >= 0)
                continue;
            VertexSet common = lab.neighbours_[2][x];
            common &= lab.neighbours_[2][y];
            Clique c = common.members();
            c.push_back(static_cast<int>(x));
            c.push_back(yi);
            std::sort(c.begin(), c.end());
            if (c.size() != size)
                throw CharacterizationFailure("R_3 pair closure has the wrong size",
                                              {{"x", x}, {"y", y}, {"closure", ids(c)}, {"expected_size", size}});
            const int id = static_cast<int>(lab.cliques_.size());
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = 0; j < c.size(); ++j) {
                    if (i == j)
                        continue;
                    auto a = static_cast<std::size_t>(c[i]), b = static_cast<std::size_t>(c[j]);
                    if (scheme.relation(a, b) != 3)
                        throw CharacterizationFailure("R_3 pair closure is not a clique",
                                                      {{"x", x}, {"y", y}, {"z", a}, {"w", b},
                                                       {"relation", scheme.relation(a, b)}});
                    int& slot = lab.edge_[a * n + b];
                    if (slot >= 0 && slot != id)
                        throw CharacterizationFailure("R_3 pair in two cliques",
                                                      {{"pair", {a, b}}, {"cliques", {ids(lab.cliques_[static_cast<std::size_t>(slot)]), ids(c)}}});
                    slot = id;
                }
            lab.cliques_.push_back(std::move(c));
        }

    // Sort lexicographically and renumber.
    std::vector<int> order(lab.cliques_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return lab.cliques_[static_cast<std::size_t>(a)] < lab.cliques_[static_cast<std::size_t>(b)];
    });
    std::vector<int> renumber(order.size());
    std::vector<Clique> sorted;
    sorted.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        renumber[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
        sorted.push_back(std::move(lab.cliques_[static_cast<std::size_t>(order[i])]));
    }
    lab.cliques_ = std::move(sorted);
    for (int& e : lab.edge_)
        if (e >= 0)
            e = renumber[static_cast<std::size_t>(e)];

    lab.through_.assign(n, {});
    for (std::size_t id = 0; id < lab.cliques_.size(); ++id) {
        lab.clique_sets_.push_back(set_of(n, lab.cliques_[id]));
        for (int v : lab.cliques_[id])
            lab.through_[static_cast<std::size_t>(v)].push_back(static_cast<int>(id));
    }
    const auto per_vertex = static_cast<std::size_t>(lab.r_ * lab.r_ + 1);
    for (std::size_t x = 0; x < n; ++x)
        if (lab.through_[x].size() != per_vertex)
            throw CharacterizationFailure("vertex on the wrong number of cliques",
                                          {{"x", x}, {"cliques", lab.through_[x].size()}, {"expected", per_vertex}});

    lab.antipodal_.assign(lab.cliques_.size(), -1);
    for (std::size_t id = 0; id < lab.cliques_.size(); ++id) {
        Clique image;
        for (int v : lab.cliques_[id])
            image.push_back(lab.antipode_[static_cast<std::size_t>(v)]);
        std::sort(image.begin(), image.end());
        int other = lab.edge_[static_cast<std::size_t>(image[0]) * n + static_cast<std::size_t>(image[1])];
        if (other < 0 || lab.cliques_[static_cast<std::size_t>(other)] != image)
            throw CharacterizationFailure("antipodal image of a clique is not a clique",
                                          {{"clique", ids(lab.cliques_[id])}, {"image", ids(image)}});
        lab.antipodal_[id] = other;
    }
    return lab;
}

CheckOutcome check_clique_cover(const CliqueLab& lab)
{
    const long long r = lab.order();
    const std::size_t n = lab.size();
    const auto n3 = static_cast<long long>(lab.neighbourhood(0, 3).count());
    const long long expected = static_cast<long long>(n) * n3 / (r * (r - 1));
    CheckOutcome out;
    out.values = {{"cliques", lab.cliques().size()}, {"expected_cliques", expected}, {"clique_size", r},
                  {"cliques_per_vertex", r * r + 1}};
    if (static_cast<long long>(lab.cliques().size()) != expected)
        return failed({{"cliques", lab.cliques().size()}, {"expected", expected}});
    for (const auto& c : lab.cliques())
        if (static_cast<long long>(c.size()) != r)
            return failed({{"clique", ids(c)}});
    for (std::size_t x = 0; x < n; ++x) {
        const auto& n3x = lab.neighbourhood(x, 3);
        VertexSet covered(n);
        std::size_t total = 0;
        for (int id : lab.cliques_through(x)) {
            VertexSet rest = lab.clique_set(id);
            rest.reset(x);
            total += rest.count();
            covered |= rest;
        }
        if (!(covered == n3x) || total != n3x.count())
            return failed({{"x", x}, {"reason", "R_3(x) is not split by the cliques through x"}});
        for (int y : n3x.members()) {
            std::size_t common = n3x.intersection_count(lab.neighbourhood(static_cast<std::size_t>(y), 3));
            if (static_cast<long long>(common) != r - 2)
                return failed({{"x", x}, {"y", y}, {"common_r3", common}, {"expected", r - 2}});
        }
    }
    return out;
}

CheckOutcome check_antipodal_cliques(const CliqueLab& lab)
{
    const auto& s = lab.scheme();
    for (std::size_t id = 0; id < lab.cliques().size(); ++id) {
        const int other = lab.antipodal_clique(static_cast<int>(id));
        if (lab.antipodal_clique(other) != static_cast<int>(id))
            return failed({{"clique", id}, {"reason", "antipodal map is not an involution"}});
        if (lab.clique_set(static_cast<int>(id)).intersects(lab.clique_set(other)))
            return failed({{"clique", id}, {"antipodal", other}, {"reason", "clique meets its antipodal clique"}});
        for (int x : lab.clique(static_cast<int>(id)))
            for (int y : lab.clique(other)) {
                const int want = y == lab.antipode(static_cast<std::size_t>(x)) ? 4 : 1;
                const int got = s.relation(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
                if (got != want)
                    return failed({{"clique", id}, {"x", x}, {"y", y}, {"relation", got}, {"expected", want}});
            }
    }
    return {true, nullptr, {{"cliques", lab.cliques().size()}}};
}

CheckOutcome check_clique_neighbourhoods(const CliqueLab& lab)
{
    const auto& s = lab.scheme();
    const long long r = lab.order();
    const std::size_t n = lab.size();
    for (std::size_t id = 0; id < lab.cliques().size(); ++id) {
        const auto& c = lab.clique(static_cast<int>(id));
        const auto& cp = lab.clique(lab.antipodal_clique(static_cast<int>(id)));
        VertexSet related(n);
        for (int x : c)
            related |= lab.neighbourhood(static_cast<std::size_t>(x), 3);
        for (int x : c)
            related.reset(static_cast<std::size_t>(x));
        if (static_cast<long long>(related.count()) != r * r * r * (r - 1))
            return failed({{"clique", id}, {"r3_related", related.count()}, {"expected", r * r * r * (r - 1)}});
        for (int z : related.members()) {
            int in_c3 = 0, in_c1 = 0, in_cp3 = 0;
            for (int x : c) {
                int rel = s.relation(static_cast<std::size_t>(z), static_cast<std::size_t>(x));
                in_c3 += rel == 3;
                in_c1 += rel == 1;
            }
            for (int x : cp)
                in_cp3 += s.relation(static_cast<std::size_t>(z), static_cast<std::size_t>(x)) == 3;
            if (in_c3 != 1 || in_c1 != 1 || in_cp3 != 1)
                return failed({{"clique", id}, {"z", z}, {"r3_in_clique", in_c3}, {"r1_in_clique", in_c1},
                               {"r3_in_antipodal", in_cp3}});
        }
    }
    return {true, nullptr, {{"r3_related_per_clique", r * r * r * (r - 1)}}};
}

DeltaT delta_t(const CliqueLab& lab, int clique)
{
    const std::size_t n = lab.size();
    DeltaT out{VertexSet(n), VertexSet(n)};
    bool first = true;
    for (int x : lab.clique(clique)) {
        if (first)
            out.delta = lab.neighbourhood(static_cast<std::size_t>(x), 2);
        else
            out.delta &= lab.neighbourhood(static_cast<std::size_t>(x), 2);
        first = false;
    }
    out.t = out.delta;
    out.t |= lab.clique_set(clique);
    out.t |= lab.clique_set(lab.antipodal_clique(clique));
    return out;
}

CheckOutcome check_delta_t(const CliqueLab& lab)
{
    const long long r = lab.order();
    const long long t_size = r * r * r - r * r;
    for (std::size_t id = 0; id < lab.cliques().size(); ++id) {
        auto dt = delta_t(lab, static_cast<int>(id));
        if (static_cast<long long>(dt.t.count()) != t_size || static_cast<long long>(dt.delta.count()) != t_size - 2 * r)
            return failed({{"clique", id}, {"t_size", dt.t.count()}, {"delta_size", dt.delta.count()},
                           {"expected_t_size", t_size}});
        for (int z : dt.delta.members()) {
            auto zi = static_cast<std::size_t>(z);
            std::size_t d1 = lab.neighbourhood(zi, 1).intersection_count(dt.delta);
            std::size_t d3 = lab.neighbourhood(zi, 3).intersection_count(dt.delta);
            bool antipode_in = dt.delta.test(static_cast<std::size_t>(lab.antipode(zi)));
            if (static_cast<long long>(d1) != r - 1 || static_cast<long long>(d3) != r - 1 || !antipode_in)
                return failed({{"clique", id}, {"z", z}, {"r1_in_delta", d1}, {"r3_in_delta", d3},
                               {"antipode_in_delta", antipode_in}});
        }
    }
    return {true, nullptr, {{"t_size", t_size}, {"delta_size", t_size - 2 * r}, {"delta_degree", r - 1}}};
}

LambdaMu lambda_mu(const CliqueLab& lab, std::size_t x, std::size_t y)
{
    const auto& s = lab.scheme();
    if (s.relation(x, y) != 2)
        throw InputError("lambda/mu need an R_2 pair", Json{{"x", x}, {"y", y}, {"relation", s.relation(x, y)}});
    const auto& through = lab.cliques_through(x);
    if (through.size() > 64)
        throw InputError("too many cliques per vertex for the bit masks", Json{{"cliques", through.size()}});
    const auto* row = s.row(y);
    LambdaMu out;
    for (std::size_t k = 0; k < through.size(); ++k) {
        bool any3 = false, all2 = true;
        for (int w : lab.clique(through[k])) {
            if (static_cast<std::size_t>(w) == x)
                continue;
            any3 |= row[w] == 3;
            all2 &= row[w] == 2;
        }
        if (any3)
            out.lambda |= std::uint64_t{1} << k;
        if (all2)
            out.mu |= std::uint64_t{1} << k;
    }
    return out;
}

CheckOutcome check_lambda_mu(const CliqueLab& lab, unsigned threads)
{
    const long long r = lab.order();
    const std::size_t n = lab.size();
    const std::uint64_t full = (r * r + 1 == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << (r * r + 1)) - 1;
    ChunkResults results(chunk_count(n, threads));
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t x = begin; x < end; ++x)
            for (int y : lab.neighbourhood(x, 2).members()) {
                auto lm = lambda_mu(lab, x, static_cast<std::size_t>(y));
                auto nl = std::popcount(lm.lambda), nm = std::popcount(lm.mu);
                if (nl != r * (r - 1) || nm != r + 1 || (lm.lambda & lm.mu) != 0 || (lm.lambda | lm.mu) != full) {
                    results.witness[chunk] = {{"x", x}, {"y", y}, {"lambda", nl}, {"mu", nm},
                                              {"overlap", std::popcount(lm.lambda & lm.mu)},
                                              {"uncovered", std::popcount(full & ~(lm.lambda | lm.mu))}};
                    return;
                }
            }
    });
    if (auto w = results.first())
        return failed(*w);
    return {true, nullptr, {{"lambda_size", r * (r - 1)}, {"mu_size", r + 1}}};
}

CheckOutcome check_hypothesis1(const CliqueLab& lab, const SweepOptions& options)
{
    const long long r = lab.order();
    const std::size_t n = lab.size();
    const std::size_t chunks = chunk_count(n, options.threads);
    ChunkResults results(chunks);
    std::vector<std::map<long long, long long>> m_hist(chunks);
    std::vector<std::array<long long, 2>> n_hist(chunks, {0, 0});
    std::vector<long long> checked(chunks, 0);

    parallel_chunks(n, options.threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        std::vector<int> position(n, -1);
        for (std::size_t x = begin; x < end; ++x) {
            auto r2 = lab.neighbourhood(x, 2).members();
            std::vector<LambdaMu> lm(r2.size());
            for (std::size_t i = 0; i < r2.size(); ++i) {
                position[static_cast<std::size_t>(r2[i])] = static_cast<int>(i);
                lm[i] = lambda_mu(lab, x, static_cast<std::size_t>(r2[i]));
            }
            std::vector<std::pair<int, int>> pairs;
            for (std::size_t i = 0; i < r2.size(); ++i)
                for (int v : lab.neighbourhood(static_cast<std::size_t>(r2[i]), 3).members()) {
                    int j = position[static_cast<std::size_t>(v)];
                    if (j > static_cast<int>(i))
                        pairs.push_back({static_cast<int>(i), j});
                }
            if (options.sample && pairs.size() > options.per_item) {
                std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * (x + 1)));
                std::shuffle(pairs.begin(), pairs.end(), rng);
                pairs.resize(options.per_item);
                std::sort(pairs.begin(), pairs.end());
            }
            const auto& n3x = lab.neighbourhood(x, 3);
            for (auto [i, j] : pairs) {
                auto u = static_cast<std::size_t>(r2[static_cast<std::size_t>(i)]);
                auto v = static_cast<std::size_t>(r2[static_cast<std::size_t>(j)]);
                const auto& a = lm[static_cast<std::size_t>(i)];
                const auto& b = lm[static_cast<std::size_t>(j)];
                long long m = std::popcount(a.lambda & b.lambda);
                auto nn = static_cast<long long>(
                    VertexSet::intersection_count(n3x, lab.neighbourhood(u, 3), lab.neighbourhood(v, 3)));
                long long mu_meet = std::popcount(a.mu & b.mu);
                ++checked[chunk];
                ++m_hist[chunk][m];
                if (nn <= 1)
                    ++n_hist[chunk][static_cast<std::size_t>(nn)];
                if (results.witness[chunk].is_null() &&
                    (nn > 1 || m + nn != r * r - 2 * r || mu_meet != m - r * r + 2 * r + 1))
                    results.witness[chunk] = {{"x", x}, {"u", u}, {"v", v}, {"m", m}, {"n", nn}, {"mu_meet", mu_meet},
                                              {"expected_m_plus_n", r * r - 2 * r}};
            }
            for (int y : r2)
                position[static_cast<std::size_t>(y)] = -1;
        }
    });

    CheckOutcome out;
    long long total = 0, n0 = 0, n1 = 0;
    std::map<long long, long long> m_all;
    for (std::size_t c = 0; c < chunks; ++c) {
        total += checked[c];
        n0 += n_hist[c][0];
        n1 += n_hist[c][1];
        for (auto [m, k] : m_hist[c])
            m_all[m] += k;
    }
    Json m_json = Json::object();
    for (auto [m, k] : m_all)
        m_json[std::to_string(m)] = k;
    out.values = {{"triples", total}, {"sampled", options.sample}, {"n_counts", {n0, n1}}, {"m_counts", m_json},
                  {"m_plus_n", r * r - 2 * r}};
    if (options.sample)
        out.values["seed"] = options.seed;
    if (auto w = results.first()) {
        out.pass = false;
        out.witness = *w;
    }
    return out;
}

int sunflower_check(std::size_t ground_size, const std::vector<std::vector<int>>& sets)
{
    const std::size_t r = sets.size();
    if (r < 2)
        throw InputError("sunflower needs at least two sets", Json{{"condition", "set count"}});
    if (ground_size != r * r + 1)
        throw InputError("ground set size is not r^2 + 1",
                         Json{{"condition", "ground size"}, {"ground", ground_size}, {"sets", r}});
    std::vector<VertexSet> bits;
    for (std::size_t i = 0; i < r; ++i) {
        VertexSet b(ground_size);
        for (int e : sets[i]) {
            if (e < 0 || static_cast<std::size_t>(e) >= ground_size || b.test(static_cast<std::size_t>(e)))
                throw InputError("set element out of range or repeated",
                                 Json{{"condition", "elements"}, {"set", i}, {"element", e}});
            b.set(static_cast<std::size_t>(e));
        }
        if (sets[i].size() != r + 1)
            throw InputError("set size is not r + 1",
                             Json{{"condition", "set size"}, {"set", i}, {"size", sets[i].size()}});
        bits.push_back(std::move(b));
    }
    VertexSet cover(ground_size);
    for (std::size_t i = 0; i < r; ++i) {
        cover |= bits[i];
        for (std::size_t j = i + 1; j < r; ++j)
            if (bits[i].intersection_count(bits[j]) != 1)
                throw InputError("two sets do not meet in exactly one element",
                                 Json{{"condition", "pairwise intersection"}, {"sets", {i, j}},
                                      {"intersection", bits[i].intersection_count(bits[j])}});
    }
    if (cover.count() != ground_size)
        throw InputError("sets do not cover the ground set",
                         Json{{"condition", "cover"}, {"covered", cover.count()}});
    for (std::size_t e = 0; e < ground_size; ++e) {
        std::size_t d = 0;
        for (const auto& b : bits)
            d += b.test(e);
        if (d == r)
            return static_cast<int>(e);
    }
    throw CharacterizationFailure("no common element despite the preconditions", Json{{"sets", sets}});
}

CheckOutcome check_delta_decomposition(const CliqueLab& lab, const SweepOptions& options)
{
    const long long r = lab.order();
    const std::size_t count = lab.cliques().size();
    std::vector<int> chosen(count);
    std::iota(chosen.begin(), chosen.end(), 0);
    if (options.sample && count > options.per_item) {
        std::mt19937_64 rng(options.seed);
        std::shuffle(chosen.begin(), chosen.end(), rng);
        chosen.resize(options.per_item);
        std::sort(chosen.begin(), chosen.end());
    }
    const std::size_t chunks = chunk_count(chosen.size(), options.threads);
    ChunkResults results(chunks);
    std::vector<long long> families(chunks, 0);
    parallel_chunks(chosen.size(), options.threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t ci = begin; ci < end; ++ci) {
            const int c = chosen[ci];
            auto dt = delta_t(lab, c);
            std::set<int> inside;
            for (int x : dt.delta.members()) {
                auto xi = static_cast<std::size_t>(x);
                const auto& through = lab.cliques_through(xi);
                std::vector<std::vector<int>> family;
                for (int v : lab.clique(c)) {
                    auto lm = lambda_mu(lab, xi, static_cast<std::size_t>(v));
                    std::vector<int> members;
                    for (std::size_t k = 0; k < through.size(); ++k)
                        if ((lm.mu >> k) & 1u)
                            members.push_back(static_cast<int>(k));
                    family.push_back(std::move(members));
                }
                int common;
                try {
                    common = sunflower_check(through.size(), family);
                } catch (const InputError& e) {
                    results.witness[chunk] = {{"clique", c}, {"x", x}, {"mu_family", family},
                                              {"reason", e.what()}, {"detail", e.witness()}};
                    return;
                }
                ++families[chunk];
                const int d = through[static_cast<std::size_t>(common)];
                for (int other : through) {
                    std::size_t meet = lab.clique_set(other).intersection_count(dt.delta);
                    bool ok = other == d ? meet == static_cast<std::size_t>(r) : meet == 1;
                    if (!ok) {
                        results.witness[chunk] = {{"clique", c}, {"x", x}, {"through_clique", other},
                                                  {"common_clique", d}, {"meet_delta", meet}};
                        return;
                    }
                }
                inside.insert(d);
                std::size_t r3_inside = lab.neighbourhood(xi, 3).intersection_count(dt.delta);
                if (static_cast<long long>(r3_inside) != r - 1) {
                    results.witness[chunk] = {{"clique", c}, {"x", x}, {"r3_in_delta", r3_inside}};
                    return;
                }
            }
            if (static_cast<long long>(inside.size()) != r * r - r - 2) {
                results.witness[chunk] = {{"clique", c}, {"cliques_in_delta", inside.size()},
                                          {"expected", r * r - r - 2}};
                return;
            }
        }
    });
    if (auto w = results.first())
        return failed(*w);
    long long total = std::accumulate(families.begin(), families.end(), 0LL);
    return {true, nullptr,
            {{"cliques_checked", chosen.size()}, {"sampled", options.sample}, {"mu_families", total},
             {"cliques_in_delta", r * r - r - 2}}};
}

Congruence congruence_classes(const CliqueLab& lab)
{
    const std::size_t n = lab.size();
    const std::size_t count = lab.cliques().size();
    std::vector<std::vector<int>> group(count);
    for (std::size_t c = 0; c < count; ++c) {
        VertexSet blocked = lab.clique_set(static_cast<int>(c));
        for (int x : lab.clique(static_cast<int>(c)))
            blocked |= lab.neighbourhood(static_cast<std::size_t>(x), 3);
        std::set<int> members{static_cast<int>(c)};
        for (std::size_t z = 0; z < n; ++z) {
            if (blocked.test(z))
                continue;
            for (int d : lab.cliques_through(z))
                if (!lab.clique_set(d).intersects(blocked))
                    members.insert(d);
        }
        group[c].assign(members.begin(), members.end());
    }

    Congruence out;
    out.class_of_clique.assign(count, -1);
    for (std::size_t c = 0; c < count; ++c) {
        for (int d : group[c])
            if (group[static_cast<std::size_t>(d)] != group[c]) {
                const auto& gd = group[static_cast<std::size_t>(d)];
                std::vector<int> diff;
                std::set_symmetric_difference(gd.begin(), gd.end(), group[c].begin(), group[c].end(),
                                              std::back_inserter(diff));
                throw CharacterizationFailure("congruence of cliques is not transitive",
                                              {{"c", c}, {"d", d}, {"e", diff.front()}});
            }
        if (out.class_of_clique[c] >= 0)
            continue;
        CongruenceClass cls{VertexSet(n), group[c]};
        const int id = static_cast<int>(out.classes.size());
        for (int d : group[c]) {
            cls.members |= lab.clique_set(d);
            out.class_of_clique[static_cast<std::size_t>(d)] = id;
        }
        out.classes.push_back(std::move(cls));
    }
    return out;
}

CheckOutcome check_congruence_classes(const CliqueLab& lab, const Congruence& cong)
{
    const long long r = lab.order();
    const std::size_t n = lab.size();
    const long long t_size = r * r * r - r * r;
    for (std::size_t t = 0; t < cong.classes.size(); ++t) {
        const auto& cls = cong.classes[t];
        if (static_cast<long long>(cls.members.count()) != t_size ||
            static_cast<long long>(cls.cliques.size()) != r * r - r)
            return failed({{"class", t}, {"points", cls.members.count()}, {"cliques", cls.cliques.size()}});
        for (int c : cls.cliques)
            if (!(delta_t(lab, c).t == cls.members))
                return failed({{"class", t}, {"clique", c}, {"reason", "class differs from T_C"}});
        for (int z : cls.members.members()) {
            auto zi = static_cast<std::size_t>(z);
            if (!cls.members.test(static_cast<std::size_t>(lab.antipode(zi))))
                return failed({{"class", t}, {"z", z}, {"reason", "antipode outside the class"}});
            std::size_t own = 0;
            for (int c : lab.cliques_through(zi))
                own += cong.class_of_clique[static_cast<std::size_t>(c)] == static_cast<int>(t);
            if (own != 1)
                return failed({{"class", t}, {"z", z}, {"class_cliques_through_z", own}});
            std::size_t r3 = lab.neighbourhood(zi, 3).intersection_count(cls.members);
            if (static_cast<long long>(r3) != r - 1)
                return failed({{"class", t}, {"z", z}, {"r3_inside", r3}, {"reason", "R_3 pair outside the cliques"}});
        }
        for (std::size_t x = 0; x < n; ++x) {
            if (cls.members.test(x))
                continue;
            std::array<long long, 3> got{};
            for (int i = 1; i <= 3; ++i)
                got[static_cast<std::size_t>(i - 1)] =
                    static_cast<long long>(lab.neighbourhood(x, i).intersection_count(cls.members));
            std::array<long long, 3> want{r * r - r, r * (r - 1) * (r - 2), r * r - r};
            if (got != want)
                return failed({{"class", t}, {"x", x}, {"r1_r2_r3_in_class", got}, {"expected", want}});
        }
    }
    return {true, nullptr,
            {{"classes", cong.classes.size()}, {"class_size", t_size}, {"cliques_per_class", r * r - r},
             {"outside_counts", {r * r - r, r * (r - 1) * (r - 2), r * r - r}}}};
}

QuotientMatrices quotient_matrices(const CliqueLab& lab, const VertexSet& members)
{
    const std::size_t n = lab.size();
    QuotientMatrices q{RationalMatrix(2, 2), RationalMatrix(2, 2), {}, {}};
    for (int i : {1, 2}) {
        RationalMatrix& b = i == 1 ? q.b1 : q.b2;
        std::array<std::optional<long long>, 2> in_value;
        std::array<std::optional<long long>, 2> out_value;
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t block = members.test(x) ? 0 : 1;
            const auto& nb = lab.neighbourhood(x, i);
            auto inside = static_cast<long long>(nb.intersection_count(members));
            auto outside = static_cast<long long>(nb.count()) - inside;
            if (!in_value[block]) {
                in_value[block] = inside;
                out_value[block] = outside;
            } else if (*in_value[block] != inside || *out_value[block] != outside) {
                throw CharacterizationFailure("quotient row sums are not constant",
                                              {{"matrix", "A_" + std::to_string(i)}, {"block", block}, {"x", x},
                                               {"row", {inside, outside}},
                                               {"first_row", {*in_value[block], *out_value[block]}}});
            }
        }
        for (std::size_t block = 0; block < 2; ++block) {
            b(block, block) = rational(block == 0 ? in_value[0].value_or(0) : out_value[1].value_or(0));
            b(block, 1 - block) = rational(block == 0 ? out_value[0].value_or(0) : in_value[1].value_or(0));
        }
        Rational tr = b(0, 0) + b(1, 1);
        Rational det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
        Rational root;
        if (!rational_sqrt(tr * tr - 4 * det, root))
            throw CharacterizationFailure("quotient eigenvalues are irrational", {{"matrix", "A_" + std::to_string(i)}});
        auto& ev = i == 1 ? q.eigenvalues1 : q.eigenvalues2;
        ev = {(tr + root) / 2, (tr - root) / 2};
    }
    return q;
}

CheckOutcome check_quotients(const CliqueLab& lab, const Congruence& cong)
{
    const long long r = lab.order();
    auto mat = [](long long a, long long b, long long c, long long d) {
        RationalMatrix m(2, 2);
        m(0, 0) = rational(a);
        m(0, 1) = rational(b);
        m(1, 0) = rational(c);
        m(1, 1) = rational(d);
        return m;
    };
    const auto b1 = mat(r - 1, r * r * r - r * r, r * r - r, (r - 1) * (r * r - r + 1));
    const auto b2 = mat(r * (r * r - r - 2), r * r * (r * r - 3 * r + 2), r * (r * r - 3 * r + 2),
                        r * (r * r * r - 3 * r * r + 4 * r - 4));
    auto sorted = [](std::array<Rational, 2> v) {
        if (v[0] < v[1])
            std::swap(v[0], v[1]);
        return v;
    };
    const auto e1 = sorted({rational((r - 1) * (r * r + 1)), rational(-(r - 1) * (r - 1))});
    const auto e2 = sorted({rational(r * (r - 2) * (r * r + 1)), rational(2 * r * (r - 2))});
    auto text = [](const RationalMatrix& m) {
        return Json::array({Json::array({to_fraction_string(m(0, 0)), to_fraction_string(m(0, 1))}),
                            Json::array({to_fraction_string(m(1, 0)), to_fraction_string(m(1, 1))})});
    };
    auto pair_text = [](const std::array<Rational, 2>& v) {
        return Json::array({to_fraction_string(v[0]), to_fraction_string(v[1])});
    };
    CheckOutcome out;
    for (std::size_t t = 0; t < cong.classes.size(); ++t) {
        QuotientMatrices q;
        try {
            q = quotient_matrices(lab, cong.classes[t].members);
        } catch (const CharacterizationFailure& e) {
            return failed({{"class", t}, {"reason", e.what()}, {"detail", e.witness()}});
        }
        if (t == 0)
            out.values = {{"B1", text(q.b1)}, {"B2", text(q.b2)}, {"eigenvalues_B1", pair_text(q.eigenvalues1)},
                          {"eigenvalues_B2", pair_text(q.eigenvalues2)}};
        if (!(q.b1 == b1) || !(q.b2 == b2) || q.eigenvalues1 != e1 || q.eigenvalues2 != e2)
            return failed({{"class", t}, {"B1", text(q.b1)}, {"B2", text(q.b2)}, {"expected_B1", text(b1)},
                           {"expected_B2", text(b2)}});
    }
    out.values["classes"] = cong.classes.size();
    return out;
}

CheckOutcome check_class_intersections(const CliqueLab& lab, const Congruence& cong)
{
    const long long r = lab.order();
    long long disjoint = 0, meeting = 0;
    for (std::size_t a = 0; a < cong.classes.size(); ++a)
        for (std::size_t b = a + 1; b < cong.classes.size(); ++b) {
            const auto& ta = cong.classes[a];
            const auto& tb = cong.classes[b];
            std::size_t k = ta.members.intersection_count(tb.members);
            if (k == 0) {
                ++disjoint;
                continue;
            }
            ++meeting;
            if (static_cast<long long>(k) != r * r - r)
                return failed({{"classes", {a, b}}, {"intersection", k}, {"expected", r * r - r}});
            for (auto [from, to] : {std::pair{&ta, &tb}, std::pair{&tb, &ta}})
                for (int c : from->cliques) {
                    std::size_t meet = lab.clique_set(c).intersection_count(to->members);
                    if (meet != 1)
                        return failed({{"classes", {a, b}}, {"clique", c}, {"meet_other_class", meet}});
                }
        }
    return {true, nullptr, {{"disjoint_pairs", disjoint}, {"meeting_pairs", meeting}, {"intersection", r * r - r}}};
}

std::vector<int> disjoint_cliques(const CliqueLab& lab, const Congruence& cong, int class_id, std::size_t x)
{
    const auto& members = cong.classes.at(static_cast<std::size_t>(class_id)).members;
    std::vector<int> out;
    for (int c : lab.cliques_through(x))
        if (!lab.clique_set(c).intersects(members))
            out.push_back(c);
    return out;
}

CheckOutcome check_disjoint_cliques(const CliqueLab& lab, const Congruence& cong)
{
    const long long r = lab.order();
    for (std::size_t t = 0; t < cong.classes.size(); ++t) {
        const auto& members = cong.classes[t].members;
        for (std::size_t x = 0; x < lab.size(); ++x) {
            if (members.test(x))
                continue;
            auto found = disjoint_cliques(lab, cong, static_cast<int>(t), x);
            if (static_cast<long long>(found.size()) != r + 1)
                return failed({{"class", t}, {"x", x}, {"disjoint_cliques", ids(found)}, {"expected_count", r + 1}});
            for (int d : found) {
                const auto& other = cong.classes[static_cast<std::size_t>(cong.class_of_clique[static_cast<std::size_t>(d)])];
                if (other.members.intersects(members))
                    return failed({{"class", t}, {"x", x}, {"clique", d}, {"reason", "T_D meets the class"}});
            }
            for (int c : lab.cliques_through(x)) {
                std::size_t meet = lab.clique_set(c).intersection_count(members);
                if (meet > 1)
                    return failed({{"class", t}, {"x", x}, {"clique", c}, {"meet", meet}});
            }
        }
    }
    return {true, nullptr, {{"disjoint_cliques", r + 1}, {"meeting_cliques", r * r - r}}};
}

namespace {

// meet(c, t) = |clique c & class t|, for the classes in `columns`.
ThetaReport theta_with_meet(const CliqueLab& lab, const Congruence& cong, int t1, int t2,
                            const std::function<int(int, int)>& meet)
{
    const long long r = lab.order();
    const auto& a = cong.classes.at(static_cast<std::size_t>(t1)).members;
    const auto& b = cong.classes.at(static_cast<std::size_t>(t2)).members;
    ThetaReport rep;
    long long sum0 = 0, sum2 = 0;
    bool unique_disjoint = true;
    std::set<int> classes{t1, t2};
    for (std::size_t x = 0; x < lab.size(); ++x) {
        if (a.test(x) || b.test(x))
            continue;
        ThetaProfile p;
        int disjoint_clique = -1;
        for (int c : lab.cliques_through(x)) {
            int i = meet(c, t1) + meet(c, t2);
            if (i == 0) {
                ++p.theta0;
                disjoint_clique = c;
            } else if (i == 1) {
                ++p.theta1;
            } else if (i == 2) {
                ++p.theta2;
            } else if (rep.outcome.pass) {
                rep.outcome = failed({{"t1", t1}, {"t2", t2}, {"x", x}, {"clique", c}, {"meet_union", i}});
            }
        }
        if (rep.outcome.pass && (p.theta0 + p.theta1 + p.theta2 != r * r + 1 || p.theta1 + 2 * p.theta2 != 2 * (r * r - r)))
            rep.outcome = failed({{"t1", t1}, {"t2", t2}, {"x", x}, {"theta", {p.theta0, p.theta1, p.theta2}},
                                  {"reason", "theta identities"}});
        if (rep.outcome.pass && p.theta0 < 1)
            rep.outcome = failed({{"t1", t1}, {"t2", t2}, {"x", x}, {"theta", {p.theta0, p.theta1, p.theta2}},
                                  {"reason", "no clique through x avoids T1 and T2"}});
        if (p.theta0 == 1)
            classes.insert(cong.class_of_clique[static_cast<std::size_t>(disjoint_clique)]);
        else
            unique_disjoint = false;
        sum0 += p.theta0;
        sum2 += p.theta2;
        rep.outside.push_back(static_cast<int>(x));
        rep.profiles.push_back(p);
    }
    const long long k = r * r - r;
    rep.outcome.values = {{"sum_theta0", sum0}, {"sum_theta2", sum2}, {"expected_sum_theta0", k * k},
                          {"expected_sum_theta2", r * (r - 2) * k * k}};
    if (rep.outcome.pass && (sum2 != r * (r - 2) * k * k || sum0 != k * k))
        rep.outcome = failed({{"t1", t1}, {"t2", t2}, {"sum_theta0", sum0}, {"sum_theta2", sum2}});
    if (!rep.outcome.pass || !unique_disjoint)
        return rep;

    // The classes found must partition X.
    VertexSet cover(lab.size());
    std::size_t total = 0;
    for (int t : classes) {
        cover |= cong.classes[static_cast<std::size_t>(t)].members;
        total += cong.classes[static_cast<std::size_t>(t)].members.count();
    }
    if (static_cast<long long>(classes.size()) != r + 1 || total != lab.size() || cover.count() != lab.size()) {
        rep.outcome = failed({{"t1", t1}, {"t2", t2}, {"classes", std::vector<int>(classes.begin(), classes.end())},
                              {"reason", "induced classes do not partition X"}});
        return rep;
    }
    rep.partition = std::vector<int>(classes.begin(), classes.end());
    return rep;
}

}  // namespace

ThetaReport theta_profiles(const CliqueLab& lab, const Congruence& cong, int t1, int t2)
{
    const auto& a = cong.classes.at(static_cast<std::size_t>(t1)).members;
    const auto& b = cong.classes.at(static_cast<std::size_t>(t2)).members;
    if (t1 == t2 || a.intersects(b))
        throw InputError("theta profiles need two disjoint classes", Json{{"t1", t1}, {"t2", t2}});
    return theta_with_meet(lab, cong, t1, t2, [&](int c, int t) {
        return static_cast<int>(lab.clique_set(c).intersection_count(cong.classes[static_cast<std::size_t>(t)].members));
    });
}

PartitionSet partitions(const CliqueLab& lab, const Congruence& cong, const SweepOptions& options)
{
    const long long r = lab.order();
    const std::size_t nc = cong.classes.size();
    const std::size_t ncl = lab.cliques().size();
    std::vector<std::uint8_t> meet(ncl * nc);
    for (std::size_t c = 0; c < ncl; ++c)
        for (std::size_t t = 0; t < nc; ++t)
            meet[c * nc + t] = static_cast<std::uint8_t>(
                lab.clique_set(static_cast<int>(c)).intersection_count(cong.classes[t].members));
    auto meet_fn = [&](int c, int t) { return static_cast<int>(meet[static_cast<std::size_t>(c) * nc + static_cast<std::size_t>(t)]); };

    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < nc; ++a)
        for (std::size_t b = a + 1; b < nc; ++b)
            if (!cong.classes[a].members.intersects(cong.classes[b].members))
                pairs.push_back({static_cast<int>(a), static_cast<int>(b)});
    const std::size_t all_pairs = pairs.size();
    if (options.sample && pairs.size() > options.per_item) {
        std::mt19937_64 rng(options.seed);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(options.per_item);
        std::sort(pairs.begin(), pairs.end());
    }

    const std::size_t chunks = chunk_count(pairs.size(), options.threads);
    ChunkResults results(chunks);
    std::vector<std::set<std::vector<int>>> found(chunks);
    std::vector<std::map<std::string, long long>> hist(chunks);
    parallel_chunks(pairs.size(), options.threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t i = begin; i < end; ++i) {
            auto rep = theta_with_meet(lab, cong, pairs[i].first, pairs[i].second, meet_fn);
            for (const auto& p : rep.profiles)
                ++hist[chunk][std::to_string(p.theta0) + "," + std::to_string(p.theta1) + "," + std::to_string(p.theta2)];
            if (!rep.outcome.pass) {
                if (results.witness[chunk].is_null())
                    results.witness[chunk] = rep.outcome.witness;
                continue;
            }
            if (rep.partition)
                found[chunk].insert(*rep.partition);
        }
    });

    PartitionSet out;
    std::set<std::vector<int>> all;
    std::map<std::string, long long> profiles;
    for (std::size_t c = 0; c < chunks; ++c) {
        all.insert(found[c].begin(), found[c].end());
        for (const auto& [k, v] : hist[c])
            profiles[k] += v;
    }
    out.partitions.assign(all.begin(), all.end());
    const long long k = r * r - r;
    out.outcome.values = {{"disjoint_pairs", all_pairs}, {"pairs_checked", pairs.size()}, {"sampled", options.sample},
                          {"theta_profiles", profiles}, {"partitions", out.partitions.size()},
                          {"expected_sum_theta2", r * (r - 2) * k * k}, {"expected_sum_theta0", k * k}};
    if (auto w = results.first()) {
        out.outcome.pass = false;
        out.outcome.witness = *w;
        return out;
    }
    if (!options.sample) {
        // Each partition arises from every pair of its classes, and every
        // class lies on r + 1 partitions.
        const long long per = (r + 1) * r / 2;
        std::vector<long long> on(nc, 0);
        for (const auto& p : out.partitions)
            for (int t : p)
                ++on[static_cast<std::size_t>(t)];
        if (static_cast<long long>(out.partitions.size()) * per != static_cast<long long>(all_pairs)) {
            out.outcome.pass = false;
            out.outcome.witness = {{"partitions", out.partitions.size()}, {"disjoint_pairs", all_pairs},
                                   {"reason", "partitions and disjoint pairs do not match up"}};
        }
        for (std::size_t t = 0; t < nc && out.outcome.pass; ++t)
            if (on[t] != r + 1) {
                out.outcome.pass = false;
                out.outcome.witness = {{"class", t}, {"partitions_through", on[t]}, {"expected", r + 1}};
            }
    }
    return out;
}

Json cliques_to_json(const CliqueLab& lab, const Congruence& cong, const PartitionSet& parts)
{
    Json cliques = Json::array();
    for (const auto& c : lab.cliques())
        cliques.push_back(c);
    Json classes = Json::array();
    for (const auto& cls : cong.classes)
        classes.push_back({{"members", cls.members.members()}, {"cliques", cls.cliques}});
    return {{"format_version", 1}, {"r", lab.order()}, {"cliques", cliques}, {"classes", classes},
            {"partitions", parts.partitions}};
}

}  // namespace pwlab
