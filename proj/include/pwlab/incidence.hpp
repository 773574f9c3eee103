#pragma once

#include "pwlab/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pwlab {

/// Finite point/line geometry. Points are 0..num_points-1; each line is a
/// sorted list of point ids.
struct IncidenceStructure {
    std::size_t num_points = 0;
    std::vector<std::vector<int>> lines;

    std::size_t num_lines() const { return lines.size(); }

    /// Lines through each point, ascending.
    std::vector<std::vector<int>> lines_through_points() const;

    /// Dense table: line joining two points, or -1. Throws InputError when a
    /// line has an out-of-range or repeated point.
    std::vector<std::int32_t> joining_lines() const;

    bool incident(int point, int line) const;

    /// Restriction to a subset of points and lines, relabelled in the given
    /// order. Lines keep only their points inside the subset.
    IncidenceStructure restrict_to(const std::vector<int>& points, const std::vector<int>& line_ids) const;
};

enum class Axiom { incidence_count = 1, line_size = 2, unique_connection = 3 };

struct AxiomViolation {
    Axiom axiom;
    int point = -1;
    int line = -1;
    std::string detail;
};

/// Result of checking the three generalized-quadrangle axioms. Every axiom is
/// checked; the first violation of each (in point, then line id order) is kept.
struct AxiomReport {
    std::optional<int> s;
    std::optional<int> t;
    std::vector<AxiomViolation> violations;

    bool ok() const { return violations.empty() && s && t; }
    const AxiomViolation* violation(Axiom axiom) const;
    Json to_json() const;
};

/// A structure counts as a generalized quadrangle only with s, t >= 1; a
/// point on a single line is reported as an axiom (i) violation.
AxiomReport verify_gq_axioms(const IncidenceStructure& structure, unsigned threads = 1);

/// Subtended ovoids of a distinguished point subset (the subquadrangle) seen
/// from the remaining points.
struct SubtendedAnalysis {
    std::vector<int> outer_points;              ///< points outside the subset, ascending
    std::vector<std::vector<int>> ovoids;       ///< per outer point: subset points collinear with it
    std::vector<int> antipode;                  ///< per outer point: index into outer_points, or -1
    bool doubly_subtended = false;
    Json witness;                               ///< first ovoid without exactly two subtenders
};

SubtendedAnalysis analyze_subtended(const IncidenceStructure& structure, const std::vector<bool>& in_subset);

}  // namespace pwlab
