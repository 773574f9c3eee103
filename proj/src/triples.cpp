#include "pwlab/triples.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pwlab {

namespace {

using Perm = std::array<int, 3>;

// Column permutations allowed by the classes: swapping x and y needs B = C,
// y and u needs A = C, x and u needs A = B.
std::vector<Perm> symmetry_generators(const std::array<int, 3>& t)
{
    std::vector<Perm> gens;
    if (t[1] == t[2])
        gens.push_back({1, 0, 2});
    if (t[0] == t[2])
        gens.push_back({0, 2, 1});
    if (t[0] == t[1])
        gens.push_back({2, 1, 0});
    return gens;
}

std::vector<Perm> symmetry_group(const std::array<int, 3>& t)
{
    std::set<Perm> group{{0, 1, 2}};
    auto gens = symmetry_generators(t);
    bool grew = true;
    while (grew) {
        grew = false;
        for (Perm g : std::vector<Perm>(group.begin(), group.end()))
            for (const Perm& h : gens) {
                Perm gh{g[h[0]], g[h[1]], g[h[2]]};
                grew |= group.insert(gh).second;
            }
    }
    return {group.begin(), group.end()};
}

int permuted_unknown(int d, int index, const Perm& p)
{
    auto s = triple_symbol(d, index);
    return triple_unknown(d, s[p[0]], s[p[1]], s[p[2]]);
}

int delta(int a, int b) { return a == b ? 1 : 0; }

struct Builder {
    TripleSystem& sys;
    std::vector<std::vector<std::pair<int, Rational>>> rows;

    void add(std::vector<std::pair<int, Rational>> row, Rational constant, std::string label)
    {
        rows.push_back(std::move(row));
        sys.constants.push_back(std::move(constant));
        sys.row_labels.push_back(std::move(label));
    }

    void finish(int n)
    {
        sys.coefficients = RationalMatrix(rows.size(), static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (auto& [j, v] : rows[i])
                sys.coefficients(i, static_cast<std::size_t>(j)) += v;
    }
};

std::string symbol_text(const std::string& a, const std::string& b, const std::string& c)
{
    return "[" + a + " " + b + " " + c + "]";
}

std::string symbol_text(int a, int b, int c)
{
    return symbol_text(std::to_string(a), std::to_string(b), std::to_string(c));
}

// Rows in [coefficients | constant] form, reduced; rank and pivots returned.
struct Reduction {
    RationalMatrix m;
    EchelonForm form;
};

Reduction reduce(const RationalMatrix& coefficients, const std::vector<Rational>& constants)
{
    const std::size_t n = coefficients.cols();
    Reduction r{RationalMatrix(coefficients.rows(), n + 1), {}};
    for (std::size_t i = 0; i < coefficients.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j)
            r.m(i, j) = coefficients(i, j);
        r.m(i, n) = constants[i];
    }
    r.form = reduce_row_echelon(r.m, n);
    return r;
}

// Which combination of original rows reduces to 0 = c; recomputed with a
// tracking block only once inconsistency is known.
Json inconsistency_witness(const RationalMatrix& coefficients, const std::vector<Rational>& constants,
                           const std::vector<std::string>& labels)
{
    const std::size_t n = coefficients.cols();
    const std::size_t rows = coefficients.rows();
    RationalMatrix m(rows, n + 1 + rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = coefficients(i, j);
        m(i, n) = constants[i];
        m(i, n + 1 + i) = 1;
    }
    auto form = reduce_row_echelon(m, n);
    for (std::size_t i = form.rank(); i < rows; ++i) {
        if (sgn(m(i, n)) == 0)
            continue;
        Json combo = Json::array();
        for (std::size_t k = 0; k < rows; ++k)
            if (sgn(m(i, n + 1 + k)) != 0)
                combo.push_back({{"row", k}, {"equation", labels[k]}, {"multiplier", to_fraction_string(m(i, n + 1 + k))}});
        return {{"reduces_to", "0 = " + to_fraction_string(m(i, n))}, {"combination", combo}};
    }
    return nullptr;
}

SolutionSpace space_from_reduction(int d, const std::array<int, 3>& triple, const Reduction& r)
{
    const int n = triple_unknown_count(d);
    SolutionSpace s;
    s.classes = d;
    s.triple = triple;
    const std::size_t rank = r.form.rank();
    std::vector<int> pivot_row(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < rank; ++i)
        pivot_row[r.form.pivot_columns[i]] = static_cast<int>(i);
    for (int j = 0; j < n; ++j)
        if (pivot_row[static_cast<std::size_t>(j)] < 0)
            s.free.push_back(j);

    s.reduced = RationalMatrix(rank, static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j <= static_cast<std::size_t>(n); ++j)
            s.reduced(i, j) = r.m(i, j);

    s.expressions.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& e = s.expressions[static_cast<std::size_t>(j)];
        int row = pivot_row[static_cast<std::size_t>(j)];
        if (row < 0) {
            e.terms.push_back({j, Rational(1)});
            continue;
        }
        e.constant = r.m(static_cast<std::size_t>(row), static_cast<std::size_t>(n));
        for (int f : s.free) {
            const Rational& c = r.m(static_cast<std::size_t>(row), static_cast<std::size_t>(f));
            if (sgn(c) != 0)
                e.terms.push_back({f, -c});
        }
        if (e.is_constant())
            s.pinned.push_back({j, e.constant});
    }

    s.particular.assign(static_cast<std::size_t>(n), Rational(0));
    for (int j = 0; j < n; ++j)
        s.particular[static_cast<std::size_t>(j)] = s.expressions[static_cast<std::size_t>(j)].constant;
    for (int f : s.free) {
        std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
        for (int j = 0; j < n; ++j)
            for (auto& [g, c] : s.expressions[static_cast<std::size_t>(j)].terms)
                if (g == f)
                    v[static_cast<std::size_t>(j)] = c;
        s.basis.push_back(std::move(v));
    }
    return s;
}

SolutionSpace solve_rows(int d, const std::array<int, 3>& triple, const RationalMatrix& coefficients,
                         const std::vector<Rational>& constants, const std::vector<std::string>& labels)
{
    Reduction r = reduce(coefficients, constants);
    for (std::size_t i = r.form.rank(); i < r.m.rows(); ++i)
        if (sgn(r.m(i, coefficients.cols())) != 0)
            throw CharacterizationFailure("triple system is inconsistent",
                                          inconsistency_witness(coefficients, constants, labels));
    SolutionSpace s = space_from_reduction(d, triple, r);
    s.source = RationalMatrix(coefficients.rows(), coefficients.cols() + 1);
    for (std::size_t i = 0; i < coefficients.rows(); ++i) {
        for (std::size_t j = 0; j < coefficients.cols(); ++j)
            s.source(i, j) = coefficients(i, j);
        s.source(i, coefficients.cols()) = constants[i];
    }
    return s;
}

// Unknowns of a row with zero constant and one-signed coefficients.
std::vector<int> zero_sum_support(const RationalMatrix& rows, std::size_t i, int n)
{
    if (sgn(rows(i, static_cast<std::size_t>(n))) != 0)
        return {};
    std::vector<int> support;
    int sign = 0;
    for (int j = 0; j < n; ++j) {
        int sj = sgn(rows(i, static_cast<std::size_t>(j)));
        if (sj == 0)
            continue;
        if (sign != 0 && sj != sign)
            return {};
        sign = sj;
        support.push_back(j);
    }
    return support;
}

}  // namespace

int triple_unknown_count(int classes) { return classes * classes * classes; }

int triple_unknown(int classes, int l, int m, int n)
{
    return ((l - 1) * classes + (m - 1)) * classes + (n - 1);
}

std::array<int, 3> triple_symbol(int classes, int index)
{
    return {index / (classes * classes) + 1, (index / classes) % classes + 1, index % classes + 1};
}

std::string triple_label(int classes, int index)
{
    auto s = triple_symbol(classes, index);
    return symbol_text(s[0], s[1], s[2]);
}

TripleSystem build_system(const IntersectionTensor& p, int a, int b, int c, const TripleOptions& options)
{
    const int d = p.classes();
    for (int v : {a, b, c})
        if (v < 1 || v > d)
            throw InputError("class index out of range 1.." + std::to_string(d), Json{{"triple", {a, b, c}}});

    TripleSystem sys;
    sys.classes = d;
    sys.triple = {a, b, c};
    Builder builder{sys, {}};
    const int n = triple_unknown_count(d);

    // Row sums with the z in {x, y, u} terms moved to the right.
    for (int m = 1; m <= d; ++m)
        for (int k = 1; k <= d; ++k) {
            std::vector<std::pair<int, Rational>> row;
            for (int r = 1; r <= d; ++r)
                row.push_back({triple_unknown(d, r, m, k), Rational(1)});
            builder.add(std::move(row), rational(p(b, m, k) - delta(m, a) * delta(k, c)),
                        "sum_r " + symbol_text("r", std::to_string(m), std::to_string(k)));
        }
    for (int l = 1; l <= d; ++l)
        for (int k = 1; k <= d; ++k) {
            std::vector<std::pair<int, Rational>> row;
            for (int r = 1; r <= d; ++r)
                row.push_back({triple_unknown(d, l, r, k), Rational(1)});
            builder.add(std::move(row), rational(p(c, l, k) - delta(l, a) * delta(k, b)),
                        "sum_r " + symbol_text(std::to_string(l), "r", std::to_string(k)));
        }
    for (int l = 1; l <= d; ++l)
        for (int m = 1; m <= d; ++m) {
            std::vector<std::pair<int, Rational>> row;
            for (int r = 1; r <= d; ++r)
                row.push_back({triple_unknown(d, l, m, r), Rational(1)});
            builder.add(std::move(row), rational(p(a, l, m) - delta(l, c) * delta(m, b)),
                        "sum_r " + symbol_text(std::to_string(l), std::to_string(m), "r"));
        }

    if (options.zero_sums) {
        std::set<int> zeros;
        for (std::size_t i = 0; i < builder.rows.size(); ++i)
            if (sgn(sys.constants[i]) == 0)
                for (auto& [j, v] : builder.rows[i])
                    zeros.insert(j);
        for (int j : zeros)
            builder.add({{j, Rational(1)}}, Rational(0), "zero sum " + triple_label(d, j));
        sys.zero_sums_used = true;
    }

    if (options.symmetry) {
        auto gens = symmetry_generators(sys.triple);
        sys.symmetry_used = !gens.empty();
        for (const auto& g : gens)
            for (int j = 0; j < n; ++j) {
                int k = permuted_unknown(d, j, g);
                if (j < k)
                    builder.add({{j, Rational(1)}, {k, Rational(-1)}}, Rational(0),
                                triple_label(d, j) + " = " + triple_label(d, k));
            }
    }

    if (options.krein) {
        std::optional<Eigenmatrices> derived;
        const Eigenmatrices* eig = options.eigen;
        if (!eig) {
            derived = eigenmatrices(p);
            eig = &*derived;
        }
        if (eig->classes() != d)
            throw InputError("eigenmatrices do not match the tensor");
        std::vector<std::array<int, 3>> orderings;
        if (options.krein_orderings)
            orderings = *options.krein_orderings;
        else if (d == 4)
            orderings = pw_krein_vanishing_orderings();
        else
            throw InputError("Krein rows need an explicit vanishing list for " + std::to_string(d) + " classes");
        const auto& Q = eig->Q;
        auto q = [&](int i, int j) -> const Rational& { return Q(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
        for (const auto& o : orderings) {
            const int r = o[0], s = o[1], t = o[2];
            for (int v : o)
                if (v < 1 || v > d)
                    throw InputError("Krein ordering out of range", Json{{"ordering", o}});
            std::vector<std::pair<int, Rational>> row;
            for (int j = 0; j < n; ++j) {
                auto [l, m, k] = triple_symbol(d, j);
                Rational coef = q(l, r) * q(m, s) * q(k, t);
                if (sgn(coef) != 0)
                    row.push_back({j, coef});
            }
            Rational rhs = -q(0, r) * q(a, s) * q(c, t) - q(a, r) * q(0, s) * q(b, t) - q(c, r) * q(b, s) * q(0, t);
            builder.add(std::move(row), rhs, "krein " + symbol_text(r, s, t));
        }
        sys.krein_used = true;
    }

    for (const auto& [j, v] : options.fixed) {
        if (j < 0 || j >= n)
            throw InputError("fixed unknown out of range", Json{{"unknown", j}});
        builder.add({{j, Rational(1)}}, v, "fixed " + triple_label(d, j));
    }

    builder.finish(n);
    return sys;
}

std::optional<Rational> SolutionSpace::pinned_value(int unknown) const
{
    for (const auto& [j, v] : pinned)
        if (j == unknown)
            return v;
    return std::nullopt;
}

bool SolutionSpace::contains(const std::vector<Rational>& point) const
{
    const std::size_t n = expressions.size();
    if (point.size() != n)
        return false;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& e = expressions[j];
        Rational v = e.constant;
        for (auto& [f, c] : e.terms)
            v += c * point[static_cast<std::size_t>(f)];
        if (v != point[j])
            return false;
    }
    return true;
}

Json SolutionSpace::to_json() const
{
    Json pinned_json = Json::object();
    for (const auto& [j, v] : pinned)
        pinned_json[triple_label(classes, j)] = to_fraction_string(v);
    Json free_json = Json::array();
    for (int f : free)
        free_json.push_back(triple_label(classes, f));
    Json deps = Json::array();
    std::set<int> free_set(free.begin(), free.end());
    for (std::size_t j = 0; j < expressions.size(); ++j) {
        const auto& e = expressions[j];
        if (e.is_constant() || free_set.count(static_cast<int>(j)))
            continue;
        Json terms = Json::object();
        for (auto& [f, c] : e.terms)
            terms[triple_label(classes, f)] = to_fraction_string(c);
        deps.push_back({{"unknown", triple_label(classes, static_cast<int>(j))},
                        {"constant", to_fraction_string(e.constant)},
                        {"terms", terms}});
    }
    return {{"triple", triple}, {"pinned", pinned_json}, {"free", free_json}, {"dependencies", deps}};
}

SolutionSpace solve(const TripleSystem& system)
{
    return solve_rows(system.classes, system.triple, system.coefficients, system.constants, system.row_labels);
}

std::optional<std::pair<Rational, Rational>> linear_relation(const SolutionSpace& space, int u, int v)
{
    const auto& eu = space.expressions.at(static_cast<std::size_t>(u));
    const auto& ev = space.expressions.at(static_cast<std::size_t>(v));
    if (eu.is_constant())
        return std::nullopt;
    if (eu.terms.size() != ev.terms.size())
        return std::nullopt;
    // Terms are listed in free-variable order, so they line up pairwise.
    Rational c;
    for (std::size_t i = 0; i < eu.terms.size(); ++i) {
        if (eu.terms[i].first != ev.terms[i].first)
            return std::nullopt;
        Rational ratio = ev.terms[i].second / eu.terms[i].second;
        if (i == 0)
            c = ratio;
        else if (ratio != c)
            return std::nullopt;
    }
    return std::pair{c, ev.constant - c * eu.constant};
}

bool relation_holds(const SolutionSpace& space, int u, int v, const Rational& c, const Rational& d)
{
    const auto& eu = space.expressions.at(static_cast<std::size_t>(u));
    const auto& ev = space.expressions.at(static_cast<std::size_t>(v));
    if (ev.constant != c * eu.constant + d)
        return false;
    std::map<int, Rational> diff;
    for (auto& [f, x] : ev.terms)
        diff[f] += x;
    for (auto& [f, x] : eu.terms)
        diff[f] -= c * x;
    return std::all_of(diff.begin(), diff.end(), [](const auto& kv) { return sgn(kv.second) == 0; });
}

Propagation nonneg_propagate(const SolutionSpace& start)
{
    Propagation out{start, {}, 0};
    const int d = start.classes;
    const int n = triple_unknown_count(d);
    for (;;) {
        const auto& s = out.space;
        for (const auto& [j, v] : s.pinned)
            if (sgn(v) < 0)
                throw CharacterizationFailure("an unknown count is forced negative",
                                              {{"unknown", triple_label(d, j)}, {"value", to_fraction_string(v)}});

        std::set<int> to_pin;
        Json reasons = Json::array();
        std::set<int> already;
        for (const auto& [j, v] : s.pinned)
            already.insert(j);
        for (const RationalMatrix* rows : {&s.source, &s.reduced})
            for (std::size_t i = 0; i < rows->rows(); ++i) {
                auto support = zero_sum_support(*rows, i, n);
                bool fresh = false;
                for (int j : support)
                    if (!already.count(j) && to_pin.insert(j).second)
                        fresh = true;
                if (fresh) {
                    Json names = Json::array();
                    for (int j : support)
                        names.push_back(triple_label(d, j));
                    reasons.push_back({{"zero_sum", names}});
                }
            }
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                auto rel = linear_relation(s, u, v);
                if (!rel || sgn(rel->second) != 0 || sgn(rel->first) >= 0)
                    continue;
                if (to_pin.insert(u).second | to_pin.insert(v).second)
                    reasons.push_back({{"u", triple_label(d, u)}, {"v", triple_label(d, v)},
                                       {"c", to_fraction_string(-rel->first)}});
            }
        if (to_pin.empty())
            return out;

        ++out.rounds;
        RationalMatrix coeffs(s.reduced.rows() + to_pin.size(), static_cast<std::size_t>(n));
        std::vector<Rational> constants;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < s.reduced.rows(); ++i) {
            for (int j = 0; j < n; ++j)
                coeffs(i, static_cast<std::size_t>(j)) = s.reduced(i, static_cast<std::size_t>(j));
            constants.push_back(s.reduced(i, static_cast<std::size_t>(n)));
            labels.push_back("reduced row " + std::to_string(i));
        }
        std::size_t row = s.reduced.rows();
        for (int j : to_pin) {
            coeffs(row++, static_cast<std::size_t>(j)) = 1;
            constants.push_back(Rational(0));
            labels.push_back("nonnegativity pins " + triple_label(d, j) + " = 0");
        }
        try {
            out.space = solve_rows(d, s.triple, coeffs, constants, labels);
        } catch (const CharacterizationFailure& e) {
            throw CharacterizationFailure("nonnegativity propagation contradicts the space",
                                          {{"relations", reasons}, {"inconsistency", e.witness()}});
        }
        for (int j : to_pin)
            out.newly_pinned.push_back(j);
    }
}

std::vector<Rational> TripleCounts::unknowns() const
{
    const int n = triple_unknown_count(classes);
    std::vector<Rational> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto [l, m, k] = triple_symbol(classes, j);
        v[static_cast<std::size_t>(j)] = rational((*this)(l, m, k));
    }
    return v;
}

TripleCounts triple_numbers_bruteforce(const AssociationScheme& scheme, std::size_t x, std::size_t y, std::size_t u)
{
    TripleCounts t;
    t.classes = scheme.classes();
    const int w = t.classes + 1;
    t.counts.assign(static_cast<std::size_t>(w * w * w), 0);
    const auto* rx = scheme.row(x);
    const auto* ry = scheme.row(y);
    const auto* ru = scheme.row(u);
    for (std::size_t z = 0; z < scheme.size(); ++z)
        ++t.counts[static_cast<std::size_t>((rx[z] * w + ry[z]) * w + ru[z])];
    return t;
}

std::optional<std::size_t> first_violated_row(const TripleSystem& system, const std::vector<Rational>& point)
{
    for (std::size_t i = 0; i < system.equation_count(); ++i) {
        Rational lhs;
        for (std::size_t j = 0; j < system.coefficients.cols(); ++j)
            if (sgn(system.coefficients(i, j)) != 0)
                lhs += system.coefficients(i, j) * point[j];
        if (lhs != system.constants[i])
            return i;
    }
    return std::nullopt;
}

std::vector<Rational> symmetrize(int classes, const std::array<int, 3>& triple, const std::vector<Rational>& point)
{
    auto group = symmetry_group(triple);
    std::vector<Rational> out(point.size());
    for (std::size_t j = 0; j < point.size(); ++j) {
        for (const auto& g : group)
            out[j] += point[static_cast<std::size_t>(permuted_unknown(classes, static_cast<int>(j), g))];
        out[j] /= static_cast<long>(group.size());
    }
    return out;
}

}  // namespace pwlab
