#pragma once

#include "pwlab/errors.hpp"
#include "pwlab/finite_geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace pwlab {

/// Symmetric association scheme stored as a dense relation table.
class AssociationScheme {
public:
    AssociationScheme() = default;
    /// Takes the row-major table as is; run verify_scheme_axioms before trusting it.
    AssociationScheme(std::size_t size, int classes, std::vector<std::uint8_t> relation);

    std::size_t size() const { return size_; }
    int classes() const { return classes_; }
    int relation(std::size_t x, std::size_t y) const { return table_[x * size_ + y]; }
    const std::uint8_t* row(std::size_t x) const { return table_.data() + x * size_; }
    const std::vector<std::uint8_t>& table() const { return table_; }

    /// Row-0 counts of each relation (assumes regularity).
    std::vector<long long> valencies() const;
    /// Vertices in relation i to x, ascending.
    std::vector<int> neighbours(std::size_t x, int i) const;

    Json to_json() const;
    /// Throws InputError for malformed documents or out-of-range entries, and
    /// for non-symmetric entries unless `require_symmetric` is false (then
    /// verify_scheme_axioms reports them).
    static AssociationScheme from_json(const Json& doc, bool require_symmetric = true);

    bool operator==(const AssociationScheme&) const = default;

private:
    std::size_t size_ = 0;
    int classes_ = 0;
    std::vector<std::uint8_t> table_;
};

void save_scheme(const AssociationScheme& scheme, const std::filesystem::path& file);
AssociationScheme load_scheme(const std::filesystem::path& file, bool require_symmetric = true);

/// Intersection numbers p^k_{ij}, 0 <= i,j,k <= d.
class IntersectionTensor {
public:
    IntersectionTensor() = default;
    explicit IntersectionTensor(int classes)
        : d_(classes), p_(static_cast<std::size_t>((classes + 1) * (classes + 1) * (classes + 1)), 0)
    {
    }

    int classes() const { return d_; }
    long long& operator()(int k, int i, int j) { return p_[index(k, i, j)]; }
    long long operator()(int k, int i, int j) const { return p_[index(k, i, j)]; }
    /// n_i = p^0_{ii}.
    long long valency(int i) const { return (*this)(0, i, i); }
    long long vertex_count() const;

    bool operator==(const IntersectionTensor&) const = default;
    Json to_json() const;

private:
    std::size_t index(int k, int i, int j) const
    {
        const auto n = static_cast<std::size_t>(d_ + 1);
        return (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(i)) * n + static_cast<std::size_t>(j);
    }

    int d_ = 0;
    std::vector<long long> p_;
};

/// Outcome of a pass/fail check with an optional witness.
struct CheckOutcome {
    bool pass = true;
    Json witness;
    Json values;
};

/// Identity relation on the diagonal only, symmetry, index range, nonempty
/// regular relations, and constant intersection numbers over all base pairs.
CheckOutcome verify_scheme_axioms(const AssociationScheme& scheme, unsigned threads = 1);

/// Counts p^k_{ij} over one base pair per class and then confirms the count
/// for every base pair. Throws CharacterizationFailure on non-constancy.
IntersectionTensor intersection_numbers(const AssociationScheme& scheme, unsigned threads = 1);

/// p^k_{ij} for a single base pair (x, y) with k = relation(x, y).
std::vector<long long> count_from_base_pair(const AssociationScheme& scheme, std::size_t x, std::size_t y);

/// Closed-form valencies and intersection numbers of the four-class scheme
/// on the outer points of a GQ of order (r, r^2).
IntersectionTensor expected_parameters(long long r);

/// First entry where the two tensors differ, or nullopt.
std::optional<Json> first_tensor_mismatch(const IntersectionTensor& computed, const IntersectionTensor& expected);

/// Recovers r from |X| = r^2 (r^2 - 1); nullopt if no such r >= 3.
std::optional<long long> order_from_vertex_count(std::size_t n);

/// Relation index of two outer points (by outer index) of the model.
/// Throws CharacterizationFailure if the collinearity / ovoid-intersection
/// signature matches none of the four relations.
int classify_pair(const QuadrangleModel& model, std::size_t x, std::size_t y);

/// Vertices are the outer points in ambient id order.
AssociationScheme build_pw_scheme(const QuadrangleModel& model);

}  // namespace pwlab
