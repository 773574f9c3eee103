#include "pwlab/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pwlab {

Eigenmatrices pw_candidate_eigenmatrices(long long r)
{
    if (r < 3)
        throw InputError("eigenmatrices need r >= 3");
    const long long r2p1 = r * r + 1;
    const long long P[5][5] = {
        {1, (r - 1) * r2p1, r * (r - 2) * r2p1, (r - 1) * r2p1, 1},
        {1, r2p1, 0, -r2p1, -1},
        {1, r - 1, -2 * r, r - 1, 1},
        {1, -r + 1, 0, r - 1, -1},
        {1, -(r - 1) * (r - 1), 2 * r * (r - 2), -(r - 1) * (r - 1), 1},
    };
    // Second eigenmatrix numerators over a common denominator of 2.
    const long long Q2[5][5] = {
        {2, r * (r - 1) * (r - 1), (r - 2) * (r + 1) * r2p1, r * (r - 1) * r2p1, r * r2p1},
        {2, r * (r - 1), (r - 2) * (r + 1), -r * (r - 1), -r * (r - 1)},
        {2, 0, -2 * (r + 1), 0, 2 * r},
        {2, -r * (r - 1), (r - 2) * (r + 1), r * (r - 1), -r * (r - 1)},
        {2, -r * (r - 1) * (r - 1), (r - 2) * (r + 1) * r2p1, -r * (r - 1) * r2p1, r * r2p1},
    };
    Eigenmatrices eig{RationalMatrix(5, 5), RationalMatrix(5, 5), {}};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            eig.P(i, j) = make_rational(P[i][j]);
            eig.Q(i, j) = make_rational(Q2[i][j], 2);
        }
    for (int j = 0; j < 5; ++j)
        eig.multiplicities.push_back(eig.Q(0, j));
    return eig;
}

BoseMesnerAlgebra::Element BoseMesnerAlgebra::basis(int i) const
{
    Element e(static_cast<std::size_t>(classes() + 1));
    e[static_cast<std::size_t>(i)] = 1;
    return e;
}

BoseMesnerAlgebra::Element BoseMesnerAlgebra::multiply(const Element& a, const Element& b) const
{
    const int d = classes();
    Element out(static_cast<std::size_t>(d + 1));
    for (int i = 0; i <= d; ++i) {
        if (sgn(a[static_cast<std::size_t>(i)]) == 0)
            continue;
        for (int j = 0; j <= d; ++j) {
            if (sgn(b[static_cast<std::size_t>(j)]) == 0)
                continue;
            Rational ab = a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
            for (int k = 0; k <= d; ++k)
                if (long long c = p_(k, i, j))
                    out[static_cast<std::size_t>(k)] += ab * rational(c);
        }
    }
    return out;
}

RationalMatrix BoseMesnerAlgebra::left_multiplication(int i) const
{
    const auto n = static_cast<std::size_t>(classes() + 1);
    RationalMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            m(l, k) = rational(p_(static_cast<int>(l), i, static_cast<int>(k)));
    return m;
}

namespace {

[[noreturn]] void fail_identity(const std::string& identity, Json where)
{
    where["identity"] = identity;
    throw CharacterizationFailure("eigenmatrix identity fails: " + identity, where);
}

BoseMesnerAlgebra::Element idempotent(const Eigenmatrices& eig, int i, const Rational& vertex_count)
{
    const auto n = eig.P.rows();
    BoseMesnerAlgebra::Element e(n);
    for (std::size_t j = 0; j < n; ++j)
        e[j] = eig.Q(j, static_cast<std::size_t>(i)) / vertex_count;
    return e;
}

}  // namespace

void verify_eigenmatrices(const IntersectionTensor& p, const Eigenmatrices& eig)
{
    const int d = p.classes();
    const auto n = static_cast<std::size_t>(d + 1);
    if (eig.P.rows() != n || eig.P.cols() != n || eig.Q.rows() != n || eig.Q.cols() != n || eig.multiplicities.size() != n)
        throw InputError("eigenmatrix dimensions do not match the class count");
    const Rational size = rational(p.vertex_count());

    RationalMatrix scaled = RationalMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        scaled(i, i) = size;
    if (!(eig.P * eig.Q == scaled))
        fail_identity("PQ = |X| I", nullptr);
    if (!(eig.Q * eig.P == scaled))
        fail_identity("QP = |X| I", nullptr);
    for (std::size_t j = 0; j < n; ++j) {
        if (eig.P(0, j) != rational(p.valency(static_cast<int>(j))))
            fail_identity("row 0 of P is the valencies", Json{{"j", j}});
        if (eig.Q(0, j) != eig.multiplicities[j])
            fail_identity("row 0 of Q is the multiplicities", Json{{"j", j}});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rational(p.valency(static_cast<int>(j))) * eig.Q(j, i) != eig.multiplicities[i] * eig.P(i, j))
                fail_identity("n_j Q_ji = m_i P_ij", Json{{"i", i}, {"j", j}});

    BoseMesnerAlgebra algebra(p);
    std::vector<BoseMesnerAlgebra::Element> E;
    for (int i = 0; i <= d; ++i)
        E.push_back(idempotent(eig, i, size));
    BoseMesnerAlgebra::Element sum(n);
    for (int i = 0; i <= d; ++i) {
        for (std::size_t k = 0; k < n; ++k)
            sum[k] += E[static_cast<std::size_t>(i)][k];
        for (int j = 0; j <= d; ++j) {
            auto prod = algebra.multiply(E[static_cast<std::size_t>(i)], E[static_cast<std::size_t>(j)]);
            auto expect = i == j ? E[static_cast<std::size_t>(i)] : BoseMesnerAlgebra::Element(n);
            if (prod != expect)
                fail_identity("E_i E_j = delta_ij E_i", Json{{"i", i}, {"j", j}});
            auto ae = algebra.multiply(algebra.basis(j), E[static_cast<std::size_t>(i)]);
            auto scaled_e = E[static_cast<std::size_t>(i)];
            for (auto& c : scaled_e)
                c *= eig.P(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (ae != scaled_e)
                fail_identity("A_j E_i = P_ij E_i", Json{{"i", i}, {"j", j}});
        }
    }
    if (sum != algebra.basis(0))
        fail_identity("sum of E_i = I", nullptr);
}

namespace {

// Integer roots with multiplicity of a monic integer polynomial, or nullopt
// when some root is not an integer.
std::optional<std::vector<Integer>> integer_roots(std::vector<Rational> poly, const Integer& bound)
{
    std::vector<Integer> roots;
    for (Integer x = -bound; x <= bound && poly.size() > 1; ++x) {
        while (poly.size() > 1 && evaluate_polynomial(poly, Rational(x)) == 0) {
            // Synthetic division by (t - x).
            std::vector<Rational> quotient(poly.size() - 1);
            Rational carry = 0;
            for (std::size_t i = poly.size(); i-- > 1;) {
                carry = carry * x + poly[i];
                quotient[i - 1] = carry;
            }
            poly = std::move(quotient);
            roots.push_back(x);
        }
    }
    if (poly.size() > 1)
        return std::nullopt;
    return roots;
}

}  // namespace

Eigenmatrices eigenmatrices(const IntersectionTensor& p, const std::optional<Eigenmatrices>& candidate)
{
    if (candidate) {
        verify_eigenmatrices(p, *candidate);
        return *candidate;
    }
    const int d = p.classes();
    const auto n = static_cast<std::size_t>(d + 1);
    BoseMesnerAlgebra algebra(p);
    std::vector<RationalMatrix> mult;
    for (int i = 0; i <= d; ++i)
        mult.push_back(algebra.left_multiplication(i));

    for (long long t = 0; t < 12; ++t) {
        // Weights (0, 1, t, t^2, ...) separate the eigenspaces for all but
        // finitely many t.
        RationalMatrix M(n, n);
        long long w = 1;
        for (int i = 1; i <= d; ++i) {
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    M(a, b) += mult[static_cast<std::size_t>(i)](a, b) * rational(w);
            w *= t;
        }
        Integer bound = 0;
        for (std::size_t a = 0; a < n; ++a) {
            Rational row = 0;
            for (std::size_t b = 0; b < n; ++b)
                row += abs(M(a, b));
            Integer ceil_row = row.get_num() / row.get_den() + 1;
            bound = std::max(bound, ceil_row);
        }
        auto roots = integer_roots(characteristic_polynomial(M), bound);
        if (!roots)
            throw InputError("intersection algebra has irrational eigenvalues");
        std::sort(roots->begin(), roots->end());
        if (std::adjacent_find(roots->begin(), roots->end()) != roots->end())
            continue;

        struct Space {
            std::vector<Rational> eigenvalues;
            std::vector<Rational> idempotent;
        };
        std::vector<Space> spaces;
        for (const auto& theta : *roots) {
            RationalMatrix shifted = M;
            for (std::size_t a = 0; a < n; ++a)
                shifted(a, a) -= theta;
            auto kernel = null_space(shifted);
            if (kernel.size() != 1)
                throw CharacterizationFailure("eigenspace of the weighted intersection matrix is not one-dimensional",
                                              Json{{"eigenvalue", theta.get_str()}});
            auto c = kernel[0];
            auto sq = algebra.multiply(c, c);
            std::size_t pivot = 0;
            while (pivot < n && sgn(c[pivot]) == 0)
                ++pivot;
            Rational lambda = sq[pivot] / c[pivot];
            if (sgn(lambda) == 0)
                throw CharacterizationFailure("nilpotent eigenvector in the intersection algebra", nullptr);
            for (auto& v : c)
                v /= lambda;
            Space s;
            s.idempotent = c;
            for (int i = 0; i <= d; ++i) {
                auto ac = algebra.multiply(algebra.basis(i), c);
                s.eigenvalues.push_back(ac[pivot] / c[pivot]);
            }
            spaces.push_back(std::move(s));
        }
        auto is_trivial = [&](const Space& s) {
            for (int i = 0; i <= d; ++i)
                if (s.eigenvalues[static_cast<std::size_t>(i)] != rational(p.valency(i)))
                    return false;
            return true;
        };
        std::sort(spaces.begin(), spaces.end(), [&](const Space& a, const Space& b) {
            bool ta = is_trivial(a), tb = is_trivial(b);
            if (ta != tb)
                return ta;
            for (std::size_t i = 1; i < n; ++i)
                if (a.eigenvalues[i] != b.eigenvalues[i])
                    return a.eigenvalues[i] > b.eigenvalues[i];
            return false;
        });
        const Rational size = rational(p.vertex_count());
        Eigenmatrices eig{RationalMatrix(n, n), RationalMatrix(n, n), {}};
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                eig.P(j, i) = spaces[j].eigenvalues[i];
                eig.Q(i, j) = spaces[j].idempotent[i] * size;
            }
            eig.multiplicities.push_back(eig.Q(0, j));
        }
        verify_eigenmatrices(p, eig);
        return eig;
    }
    throw InputError("could not separate the eigenspaces of the intersection algebra");
}

KreinTensor krein_parameters(const Eigenmatrices& eig, long long vertex_count)
{
    const int d = eig.classes();
    KreinTensor q(d);
    for (int k = 0; k <= d; ++k)
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j) {
                Rational acc = 0;
                for (int l = 0; l <= d; ++l) {
                    auto L = static_cast<std::size_t>(l);
                    acc += eig.P(static_cast<std::size_t>(k), L) * eig.Q(L, static_cast<std::size_t>(i)) *
                           eig.Q(L, static_cast<std::size_t>(j));
                }
                acc /= rational(vertex_count);
                if (sgn(acc) < 0)
                    throw CharacterizationFailure("negative Krein parameter",
                                                  Json{{"k", k}, {"i", i}, {"j", j}, {"value", to_fraction_string(acc)}});
                q(k, i, j) = acc;
            }
    return q;
}

const std::vector<std::array<int, 3>>& pw_krein_vanishing_triples()
{
    static const std::vector<std::array<int, 3>> triples = {
        {1, 1, 1}, {1, 3, 1}, {1, 4, 1}, {1, 2, 2}, {1, 4, 2}, {1, 3, 3}, {1, 4, 4}};
    return triples;
}

std::vector<std::array<int, 3>> pw_krein_vanishing_orderings()
{
    std::vector<std::array<int, 3>> out;
    for (auto t : pw_krein_vanishing_triples()) {
        std::sort(t.begin(), t.end());
        do
            out.push_back(t);
        while (std::next_permutation(t.begin(), t.end()));
    }
    return out;
}

CheckOutcome check_krein_pattern(const KreinTensor& krein)
{
    if (krein.classes() != 4)
        return {false, Json{{"reason", "pattern is defined for four classes"}}, nullptr};
    const auto& listed = pw_krein_vanishing_triples();
    auto is_listed = [&](std::array<int, 3> t) {
        std::sort(t.begin(), t.end());
        return std::any_of(listed.begin(), listed.end(), [&](std::array<int, 3> l) {
            std::sort(l.begin(), l.end());
            return l == t;
        });
    };
    CheckOutcome out;
    Json zeros = Json::array();
    Json extra = Json::array();
    for (int k = 1; k <= 4; ++k)
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) {
                std::array<int, 3> t{i, j, k};
                const bool expect_zero = is_listed(t);
                const int s = sgn(krein(k, i, j));
                const bool involves_first = i == 1 || j == 1 || k == 1;
                if (s == 0) {
                    zeros.push_back({i, j, k});
                    if (!expect_zero)
                        extra.push_back({i, j, k});
                }
                // Listed triples must vanish; among triples through eigenspace 1
                // the zero set must be exactly the list.
                bool bad = s < 0 || (expect_zero && s != 0) || (involves_first && !expect_zero && s == 0);
                if (out.pass && bad) {
                    out.pass = false;
                    out.witness = {{"k", k}, {"i", i}, {"j", j}, {"value", to_fraction_string(krein(k, i, j))},
                                   {"expected_zero", expect_zero}};
                }
            }
    out.values = {{"zeros", zeros}, {"unlisted_zeros", extra}, {"zero_set_equals_list", extra.empty()}};
    return out;
}

RationalMatrix spherical_gram(const AssociationScheme& scheme, const Eigenmatrices& eig)
{
    if (eig.classes() < 4)
        throw InputError("spherical representation uses eigenspaces 1 and 4");
    std::vector<Rational> inner;
    for (int i = 0; i <= eig.classes(); ++i)
        inner.push_back(eig.Q(static_cast<std::size_t>(i), 1) + eig.Q(static_cast<std::size_t>(i), 4));
    const std::size_t n = scheme.size();
    RationalMatrix gram(n, n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            gram(x, y) = inner[static_cast<std::size_t>(scheme.relation(x, y))];
    return gram;
}

GramCheck analyse_gram(const RationalMatrix& gram)
{
    GramCheck out;
    out.symmetric = gram == gram.transposed();
    auto psd = check_positive_semidefinite(gram);
    out.positive_semidefinite = psd.positive_semidefinite;
    out.rank = psd.positive_semidefinite ? psd.rank : rank(gram);
    out.diagonal = gram.rows() ? gram(0, 0) : Rational(0);
    return out;
}

std::size_t local_basis_rank(const AssociationScheme& scheme, const RationalMatrix& gram, std::size_t x)
{
    std::vector<int> members{static_cast<int>(x)};
    for (int y : scheme.neighbours(x, 3))
        members.push_back(y);
    RationalMatrix sub(members.size(), members.size());
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = 0; b < members.size(); ++b)
            sub(a, b) = gram(static_cast<std::size_t>(members[a]), static_cast<std::size_t>(members[b]));
    return rank(sub);
}

}  // namespace pwlab
