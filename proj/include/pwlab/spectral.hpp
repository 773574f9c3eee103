#pragma once

#include "pwlab/exact_linalg.hpp"
#include "pwlab/scheme.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pwlab {

/// First and second eigenmatrices. P(i, j) is the eigenvalue of A_j on the
/// i-th eigenspace; E_j = |X|^-1 sum_i Q(i, j) A_i.
struct Eigenmatrices {
    RationalMatrix P;
    RationalMatrix Q;
    std::vector<Rational> multiplicities;

    int classes() const { return static_cast<int>(P.rows()) - 1; }
};

/// Closed-form P and Q for the four-class scheme at order r.
Eigenmatrices pw_candidate_eigenmatrices(long long r);

/// Elements of the Bose-Mesner algebra in the basis A_0..A_d, multiplied
/// through the intersection numbers.
class BoseMesnerAlgebra {
public:
    explicit BoseMesnerAlgebra(const IntersectionTensor& p) : p_(p) {}

    using Element = std::vector<Rational>;

    int classes() const { return p_.classes(); }
    Element basis(int i) const;
    Element multiply(const Element& a, const Element& b) const;
    /// Matrix of left multiplication by A_i: column k is A_i A_k.
    RationalMatrix left_multiplication(int i) const;

private:
    IntersectionTensor p_;
};

/// Checks PQ = QP = |X| I, row 0 of P = valencies, row 0 of Q =
/// multiplicities, n_j Q_ji = m_i P_ij, and the idempotent identities
/// E_i E_j = delta_ij E_i, sum E_i = I, A_j E_i = P_ij E_i in the algebra.
/// Throws CharacterizationFailure naming the first identity that fails.
void verify_eigenmatrices(const IntersectionTensor& p, const Eigenmatrices& eig);

/// Verifies the candidate when given; otherwise derives P and Q from the
/// intersection algebra. The derived route needs all eigenvalues rational and
/// throws InputError otherwise. Eigenspaces after the trivial one are ordered
/// by decreasing A_1 eigenvalue (then A_2, ...).
Eigenmatrices eigenmatrices(const IntersectionTensor& p, const std::optional<Eigenmatrices>& candidate = std::nullopt);

/// Krein parameters q^k_{ij} = |X|^-1 sum_l P_kl Q_li Q_lj.
class KreinTensor {
public:
    KreinTensor() = default;
    explicit KreinTensor(int classes)
        : d_(classes), q_(static_cast<std::size_t>((classes + 1) * (classes + 1) * (classes + 1)))
    {
    }

    int classes() const { return d_; }
    Rational& operator()(int k, int i, int j) { return q_[index(k, i, j)]; }
    const Rational& operator()(int k, int i, int j) const { return q_[index(k, i, j)]; }

private:
    std::size_t index(int k, int i, int j) const
    {
        const auto n = static_cast<std::size_t>(d_ + 1);
        return (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(i)) * n + static_cast<std::size_t>(j);
    }

    int d_ = 0;
    std::vector<Rational> q_;
};

/// Throws CharacterizationFailure on a negative Krein parameter.
KreinTensor krein_parameters(const Eigenmatrices& eig, long long vertex_count);

/// Index triples (unordered, entries >= 1) whose Krein parameters vanish in
/// the four-class scheme; every permutation vanishes too.
const std::vector<std::array<int, 3>>& pw_krein_vanishing_triples();

/// All distinct orderings of the vanishing triples.
std::vector<std::array<int, 3>> pw_krein_vanishing_orderings();

/// Checks the listed vanishing pattern for q^k_{ij}, 1 <= i,j,k <= 4: all
/// parameters nonnegative, every listed triple zero, and no other zero among
/// triples containing index 1. Zeros outside the list (the scheme has some
/// among indices {2,3,4}) are reported in values["unlisted_zeros"], with
/// values["zero_set_equals_list"] telling whether the whole zero set is the list.
CheckOutcome check_krein_pattern(const KreinTensor& krein);

/// Gram matrix of the spherical representation in V_1 + V_4: the (x, y)
/// entry is Q(i,1) + Q(i,4) for (x, y) in R_i.
RationalMatrix spherical_gram(const AssociationScheme& scheme, const Eigenmatrices& eig);

struct GramCheck {
    bool symmetric = false;
    bool positive_semidefinite = false;
    std::size_t rank = 0;
    Rational diagonal;
};
GramCheck analyse_gram(const RationalMatrix& gram);

/// Rank of the Gram vectors of {x} together with the R_3-neighbours of x.
std::size_t local_basis_rank(const AssociationScheme& scheme, const RationalMatrix& gram, std::size_t x);

}  // namespace pwlab
