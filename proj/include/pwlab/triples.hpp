#pragma once

#include "pwlab/exact_linalg.hpp"
#include "pwlab/scheme.hpp"
#include "pwlab/spectral.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pwlab {

/// Unknowns [l m n], 1 <= l,m,n <= d, at index (l-1) d^2 + (m-1) d + (n-1).
int triple_unknown_count(int classes);
int triple_unknown(int classes, int l, int m, int n);
std::array<int, 3> triple_symbol(int classes, int index);
/// "[l m n]"
std::string triple_label(int classes, int index);

struct TripleOptions {
    /// Identify [l m n] with its images under the column swaps allowed by
    /// coinciding classes.
    bool symmetry = false;
    /// Add the Krein-vanishing rows. Uses `eigen` when set, otherwise derives
    /// the eigenmatrices from the tensor.
    bool krein = false;
    const Eigenmatrices* eigen = nullptr;
    /// Orderings (r, s, t) used for the Krein rows; defaults to the
    /// four-class vanishing list.
    std::optional<std::vector<std::array<int, 3>>> krein_orderings;
    /// Pin every unknown of a sum row whose right side is 0; the unknowns are
    /// counts, so each must vanish.
    bool zero_sums = false;
    /// Extra rows fixing single unknowns, e.g. to test a hypothesis.
    std::vector<std::pair<int, Rational>> fixed;
};

/// Linear system for the triple intersection numbers of a triple (x, y, u)
/// with (x,y) in R_A, (y,u) in R_B, (u,x) in R_C.
struct TripleSystem {
    int classes = 0;
    std::array<int, 3> triple{};
    bool krein_used = false;
    bool symmetry_used = false;
    bool zero_sums_used = false;
    RationalMatrix coefficients;
    std::vector<Rational> constants;
    /// One short description per row, e.g. "sum_l [l 2 3]".
    std::vector<std::string> row_labels;

    std::size_t equation_count() const { return constants.size(); }
};

/// Throws InputError for class indices outside 1..d.
TripleSystem build_system(const IntersectionTensor& p, int a, int b, int c, const TripleOptions& options = {});

/// The unknown expressed through the free unknowns: constant + sum coef * free.
struct AffineExpression {
    Rational constant;
    std::vector<std::pair<int, Rational>> terms;

    bool is_constant() const { return terms.empty(); }
};

struct SolutionSpace {
    int classes = 0;
    std::array<int, 3> triple{};
    std::vector<Rational> particular;
    std::vector<std::vector<Rational>> basis;
    std::vector<int> free;
    /// Unknowns with a fixed value, ascending by index.
    std::vector<std::pair<int, Rational>> pinned;
    /// One per unknown.
    std::vector<AffineExpression> expressions;
    /// Reduced rows [coefficients | constant], rank many.
    RationalMatrix reduced;
    /// The rows the space was solved from, same layout.
    RationalMatrix source;

    std::size_t dimension() const { return basis.size(); }
    std::optional<Rational> pinned_value(int unknown) const;
    bool contains(const std::vector<Rational>& point) const;
    /// {"triple", "pinned", "free", "dependencies"}, rationals as "num/den".
    Json to_json() const;
};

/// Exact RREF solve. Throws CharacterizationFailure when inconsistent; the
/// witness lists the combination of original rows that reduces to 0 = c.
SolutionSpace solve(const TripleSystem& system);

/// (c, d) with v = c u + d on the whole space, if such a relation exists.
std::optional<std::pair<Rational, Rational>> linear_relation(const SolutionSpace& space, int u, int v);

/// Whether v = c u + d holds at every point of the space.
bool relation_holds(const SolutionSpace& space, int u, int v, const Rational& c, const Rational& d);

struct Propagation {
    SolutionSpace space;
    std::vector<int> newly_pinned;
    int rounds = 0;
};

/// Nonnegativity propagation over counts, to a fixpoint:
///  - a source or reduced row with constant 0 and all coefficients of one
///    sign pins every unknown in it to 0;
///  - whenever v = -c u with c > 0 holds on the space, pins u = v = 0.
/// Each round re-solves with the new pins. Throws CharacterizationFailure
/// when an unknown is forced negative or a new pin contradicts the space.
Propagation nonneg_propagate(const SolutionSpace& space);

/// All (d+1)^3 counts [l m n] for the triple (x, y, u), 0 <= l,m,n <= d.
struct TripleCounts {
    int classes = 0;
    std::vector<long long> counts;

    long long operator()(int l, int m, int n) const
    {
        const int w = classes + 1;
        return counts[static_cast<std::size_t>((l * w + m) * w + n)];
    }
    /// The d^3 unknowns with all indices >= 1, in unknown order.
    std::vector<Rational> unknowns() const;
};

TripleCounts triple_numbers_bruteforce(const AssociationScheme& scheme, std::size_t x, std::size_t y, std::size_t u);

/// Index of the first row the point violates, if any.
std::optional<std::size_t> first_violated_row(const TripleSystem& system, const std::vector<Rational>& point);

/// Average of the point over the column permutations the classes allow.
std::vector<Rational> symmetrize(int classes, const std::array<int, 3>& triple, const std::vector<Rational>& point);

}  // namespace pwlab
