#pragma once

#include "pwlab/bitset.hpp"
#include "pwlab/errors.hpp"
#include "pwlab/incidence.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace pwlab {

/// Residue in GF(q). Arithmetic goes through the owning PrimeField.
struct FieldElement {
    std::uint32_t value = 0;
    bool operator==(const FieldElement&) const = default;
};

class PrimeField {
public:
    /// Throws InputError unless q is prime.
    explicit PrimeField(std::uint32_t q);

    std::uint32_t order() const { return q_; }
    FieldElement element(long long v) const;
    FieldElement add(FieldElement a, FieldElement b) const { return {(a.value + b.value) % q_}; }
    FieldElement neg(FieldElement a) const { return {(q_ - a.value) % q_}; }
    FieldElement mul(FieldElement a, FieldElement b) const { return {(a.value * b.value) % q_}; }
    FieldElement inv(FieldElement a) const;
    bool is_square(FieldElement a) const;

private:
    std::uint32_t q_;
};

bool is_prime(std::uint32_t n);

using Coordinates = std::vector<FieldElement>;

/// Projective point kept in canonical form (last nonzero coordinate is 1).
class ProjectivePoint {
public:
    /// Throws InputError for the zero vector.
    ProjectivePoint(const PrimeField& field, Coordinates coords);

    const Coordinates& coordinates() const { return coords_; }
    bool operator==(const ProjectivePoint&) const = default;
    auto operator<=>(const ProjectivePoint& other) const
    {
        return std::lexicographical_compare_three_way(coords_.begin(), coords_.end(), other.coords_.begin(), other.coords_.end(),
                                                      [](FieldElement a, FieldElement b) { return a.value <=> b.value; });
    }

private:
    Coordinates coords_;
};

Coordinates canonical_coordinates(const PrimeField& field, Coordinates coords);

/// Quadratic form sum_{i<=j} c_ij x_i x_j on n coordinates.
class QuadraticForm {
public:
    QuadraticForm(const PrimeField& field, std::size_t dimension);

    void set_coefficient(std::size_t i, std::size_t j, long long c);
    std::size_t dimension() const { return n_; }
    FieldElement evaluate(const Coordinates& x) const;
    /// Polar form Q(x+y) - Q(x) - Q(y).
    FieldElement polar(const Coordinates& x, const Coordinates& y) const;

private:
    PrimeField field_;
    std::size_t n_;
    std::vector<FieldElement> coeff_;  // upper triangle, row-major n*n
};

/// Point/line geometry of a quadric together with its coordinates.
struct GeneralizedQuadrangle {
    std::uint32_t q = 0;
    int s = 0;
    int t = 0;
    std::vector<Coordinates> coordinates;  ///< canonical, ascending lexicographic
    IncidenceStructure incidence;

    std::size_t num_points() const { return incidence.num_points; }
    std::size_t num_lines() const { return incidence.lines.size(); }
};

/// Largest q accepted by default; enumeration grows like q^6.
inline constexpr std::uint32_t kDefaultQBound = 7;

/// Q(5,q): zeros of x0x1 + x2x3 + x4^2 + b x5^2 with -b a non-square.
/// Throws InputError for non-prime q, q < 3, or q above the bound.
GeneralizedQuadrangle build_elliptic_quadric_gq(std::uint32_t q, std::uint32_t q_bound = kDefaultQBound);

/// The coefficient b used for the x5^2 term at this q.
std::uint32_t anisotropic_coefficient(std::uint32_t q);

struct SubQuadrangle {
    GeneralizedQuadrangle sub;         ///< coordinates are 5-tuples (x4 dropped)
    std::vector<int> point_embedding;  ///< sub point id -> ambient point id
    std::vector<int> line_embedding;   ///< sub line id -> ambient line id
};

/// Section by the hyperplane x4 = 0. Throws CharacterizationFailure when an
/// ambient line meets it in neither one point nor a whole line, or when the
/// section has the wrong size.
SubQuadrangle build_parabolic_subgq(const GeneralizedQuadrangle& gq);

struct Ovoid {
    std::vector<int> carrier;  ///< sub point ids, ascending
    int subtender = -1;        ///< ambient point id
};

/// Q(5,q) with its x4 = 0 section and the subtended-ovoid data for every
/// outer point. Immutable after construction.
class QuadrangleModel {
public:
    /// Builds everything; throws CharacterizationFailure if the section is
    /// not doubly subtended.
    static QuadrangleModel build(std::uint32_t q, std::uint32_t q_bound = kDefaultQBound);

    std::uint32_t q() const { return gq_.q; }
    const GeneralizedQuadrangle& gq() const { return gq_; }
    const SubQuadrangle& sub() const { return sub_; }

    const std::vector<int>& outer_points() const { return outer_; }
    /// Ambient id -> outer index, or -1 for section points.
    int outer_index(int point) const { return outer_index_[static_cast<std::size_t>(point)]; }
    bool in_section(int point) const { return section_index_[static_cast<std::size_t>(point)] >= 0; }
    /// Ambient id -> sub id, or -1.
    int section_index(int point) const { return section_index_[static_cast<std::size_t>(point)]; }
    bool collinear(int a, int b) const;

    /// Ovoid of the subquadrangle subtended by an outer point. Throws InputError for section points.
    Ovoid subtended_ovoid(int point) const;
    /// The other subtender of the same ovoid.
    int antipode(int point) const;
    /// Ovoid of outer index i as a bit set over sub point ids.
    const VertexSet& ovoid_bits(std::size_t outer) const { return ovoid_bits_[outer]; }

    /// Image of an ambient point under x4 -> -x4.
    int reflect(int point) const { return reflection_[static_cast<std::size_t>(point)]; }

    Json to_json() const;

private:
    GeneralizedQuadrangle gq_;
    SubQuadrangle sub_;
    std::vector<int> outer_;
    std::vector<int> outer_index_;
    std::vector<int> section_index_;
    std::vector<std::int32_t> join_;
    std::vector<VertexSet> ovoid_bits_;
    std::vector<int> antipode_;  // ambient -> ambient
    std::vector<int> reflection_;
};

/// Checks the reflection x4 -> -x4: preserves the form, maps lines to lines,
/// fixes the section pointwise and swaps every antipodal pair.
struct InvolutionCheck {
    bool ok = false;
    Json witness;
};
InvolutionCheck verify_reflection_involution(const QuadrangleModel& model);

/// |O_x cap O_y| is 1 when y is collinear with x or x', r+1 when collinear
/// with neither, r^2+1 when the ovoids coincide.
struct OvoidIntersectionCheck {
    bool ok = false;
    Json witness;
};
OvoidIntersectionCheck verify_ovoid_intersections(const QuadrangleModel& model);

}  // namespace pwlab
