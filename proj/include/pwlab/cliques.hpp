#pragma once

#include "pwlab/bitset.hpp"
#include "pwlab/exact_linalg.hpp"
#include "pwlab/scheme.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace pwlab {

/// Sorted vertex ids.
using Clique = std::vector<int>;

/// Maximal {0,3}-cliques of a four-class scheme with |X| = r^2 (r^2 - 1),
/// with the indexes the structure checks need.
class CliqueLab {
public:
    /// Each R_3 pair (x, y) is closed to {x, y} + (R_3(x) & R_3(y)). Throws
    /// InputError if the scheme is not four-class of the right size, and
    /// CharacterizationFailure if a closure is not a clique of size r, an R_3
    /// pair lands in two cliques, a vertex lacks a unique R_4 partner, or a
    /// vertex is not on r^2 + 1 cliques. Clique ids follow lexicographic order.
    static CliqueLab build(const AssociationScheme& scheme);

    const AssociationScheme& scheme() const { return *scheme_; }
    long long order() const { return r_; }
    std::size_t size() const { return scheme_->size(); }

    const std::vector<Clique>& cliques() const { return cliques_; }
    const Clique& clique(int id) const { return cliques_[static_cast<std::size_t>(id)]; }
    const VertexSet& clique_set(int id) const { return clique_sets_[static_cast<std::size_t>(id)]; }
    /// Clique ids through x, ascending.
    const std::vector<int>& cliques_through(std::size_t x) const { return through_[x]; }
    /// The clique holding the R_3 pair (x, y), or -1.
    int clique_of(std::size_t x, std::size_t y) const { return edge_[x * size() + y]; }

    /// R_i(x) as a bit set, 1 <= i <= 4.
    const VertexSet& neighbourhood(std::size_t x, int i) const
    {
        return neighbours_[static_cast<std::size_t>(i - 1)][x];
    }
    int antipode(std::size_t x) const { return antipode_[x]; }
    int antipodal_clique(int id) const { return antipodal_[static_cast<std::size_t>(id)]; }

private:
    const AssociationScheme* scheme_ = nullptr;
    long long r_ = 0;
    std::vector<Clique> cliques_;
    std::vector<VertexSet> clique_sets_;
    std::vector<std::vector<int>> through_;
    std::vector<int> edge_;
    std::vector<std::vector<VertexSet>> neighbours_;
    std::vector<int> antipode_;
    std::vector<int> antipodal_;
};

/// Clique count, sizes, r^2 + 1 cliques per vertex, |R_3(x) & R_3(y)| = r - 2
/// on R_3 pairs, and R_3(x) splitting into r^2 + 1 cliques of size r - 1.
CheckOutcome check_clique_cover(const CliqueLab& lab);

/// C'' = C, C and C' disjoint, and x in C is R_1 to every point of C' but x'.
CheckOutcome check_antipodal_cliques(const CliqueLab& lab);

/// For z outside C and R_3-related to C: one R_3 neighbour in C, one in C',
/// one R_1 neighbour in C; r^3 (r - 1) such z per clique.
CheckOutcome check_clique_neighbourhoods(const CliqueLab& lab);

/// Delta_C: vertices R_2 to all of C. T_C = Delta_C + C + C'.
struct DeltaT {
    VertexSet delta;
    VertexSet t;
};
DeltaT delta_t(const CliqueLab& lab, int clique);

/// |T_C| = r^3 - r^2, and inside Delta_C every z has r - 1 neighbours in R_1
/// and in R_3, and z' in Delta_C. Checked for every clique.
CheckOutcome check_delta_t(const CliqueLab& lab);

/// Bit k refers to cliques_through(x)[k].
struct LambdaMu {
    std::uint64_t lambda = 0;  ///< cliques through x with a point R_3 to y
    std::uint64_t mu = 0;      ///< cliques through x inside R_2(y)
};
/// Throws InputError unless (x, y) in R_2 and r^2 + 1 <= 64.
LambdaMu lambda_mu(const CliqueLab& lab, std::size_t x, std::size_t y);

/// |lambda| = r(r-1), |mu| = r + 1, and they split the cliques through x,
/// for every x and y in R_2(x).
CheckOutcome check_lambda_mu(const CliqueLab& lab, unsigned threads = 1);

struct SweepOptions {
    unsigned threads = 1;
    /// Sample instead of sweeping everything; used at q = 7.
    bool sample = false;
    std::uint64_t seed = 1;
    /// Sampled items per outer-loop element.
    std::size_t per_item = 32;
};

/// For every x and u, v in R_2(x) with (u, v) in R_3: n <= 1,
/// m + n = r^2 - 2r, and |mu(u) & mu(v)| = m - r^2 + 2r + 1.
CheckOutcome check_hypothesis1(const CliqueLab& lab, const SweepOptions& options = {});

/// Common element of r sets of size r + 1 over a ground set of size r^2 + 1
/// that pairwise meet in one element and cover the ground set. Throws
/// InputError naming the failed precondition, CharacterizationFailure if the
/// preconditions hold and there is still no common element.
int sunflower_check(std::size_t ground_size, const std::vector<std::vector<int>>& sets);

/// For each clique C and x in Delta_C: the mu-family {mu(v) : v in C} has a
/// common clique, which lies in Delta_C; the other cliques through x meet
/// Delta_C only in x; Delta_C is a disjoint union of r^2 - r - 2 cliques with
/// no other R_3 pair.
CheckOutcome check_delta_decomposition(const CliqueLab& lab, const SweepOptions& options = {});

struct CongruenceClass {
    VertexSet members;
    std::vector<int> cliques;
};

struct Congruence {
    std::vector<CongruenceClass> classes;
    std::vector<int> class_of_clique;
};

/// Classes of the relation D = C or no R_3 pair between D and C, ordered by
/// smallest clique id. Throws CharacterizationFailure when the relation is
/// not transitive.
Congruence congruence_classes(const CliqueLab& lab);

/// Each class is T_C for its cliques, has r^3 - r^2 points split by r^2 - r
/// of its cliques, is closed under antipodes, holds no other R_3 pair, and
/// every x outside is R_1, R_2, R_3 to r^2 - r, r(r-1)(r-2), r^2 - r points.
CheckOutcome check_congruence_classes(const CliqueLab& lab, const Congruence& congruence);

/// Average row sums of A_1 and A_2 over {T, X - T}, rows verified constant,
/// and the exact eigenvalues of both 2x2 matrices, larger first.
struct QuotientMatrices {
    RationalMatrix b1;
    RationalMatrix b2;
    std::array<Rational, 2> eigenvalues1;
    std::array<Rational, 2> eigenvalues2;
};
/// Throws CharacterizationFailure on a row that deviates from its average or
/// irrational eigenvalues.
QuotientMatrices quotient_matrices(const CliqueLab& lab, const VertexSet& members);

/// Quotients of every class against the closed forms.
CheckOutcome check_quotients(const CliqueLab& lab, const Congruence& congruence);

/// Distinct classes meet in 0 or r^2 - r points, and when they meet each
/// clique of one meets exactly one clique of the other.
CheckOutcome check_class_intersections(const CliqueLab& lab, const Congruence& congruence);

/// Cliques through x disjoint from the class.
std::vector<int> disjoint_cliques(const CliqueLab& lab, const Congruence& congruence, int class_id, std::size_t x);

/// r + 1 disjoint cliques for every class and x outside, each in a class
/// disjoint from it; the other cliques through x meet the class once.
CheckOutcome check_disjoint_cliques(const CliqueLab& lab, const Congruence& congruence);

struct ThetaProfile {
    int theta0 = 0;
    int theta1 = 0;
    int theta2 = 0;

    bool operator==(const ThetaProfile&) const = default;
};

struct ThetaReport {
    CheckOutcome outcome;
    /// Vertices outside T_1 + T_2, ascending, and their profiles.
    std::vector<int> outside;
    std::vector<ThetaProfile> profiles;
    /// Sorted class ids of the induced partition, when it exists.
    std::optional<std::vector<int>> partition;
};

/// Profiles of the vertices outside two disjoint classes, both sum
/// identities, the double count of theta_2 and theta_0, theta_0 >= 1, and the
/// partition of X the pair induces. Throws InputError if the classes meet.
ThetaReport theta_profiles(const CliqueLab& lab, const Congruence& congruence, int t1, int t2);

struct PartitionSet {
    CheckOutcome outcome;
    /// Sorted class-id tuples, ascending.
    std::vector<std::vector<int>> partitions;
};

/// theta_profiles over every disjoint pair of classes (or a sample), with
/// the partitions deduplicated.
PartitionSet partitions(const CliqueLab& lab, const Congruence& congruence, const SweepOptions& options = {});

/// {"format_version", "r", "cliques", "classes": [{"members", "cliques"}],
/// "partitions"}.
Json cliques_to_json(const CliqueLab& lab, const Congruence& congruence, const PartitionSet& partitions);

}  // namespace pwlab
