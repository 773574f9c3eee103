#pragma once

#include "pwlab/cliques.hpp"
#include "pwlab/finite_geometry.hpp"
#include "pwlab/incidence.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pwlab {

/// Points 0..n-1 are the scheme vertices (type i), then one point per
/// congruence class (type ii). Lines are C + {T_C} per clique in clique id
/// order (type a), then one line per partition (type b).
struct Reconstruction {
    long long r = 0;
    std::size_t vertex_count = 0;
    std::size_t class_count = 0;
    std::size_t clique_count = 0;
    IncidenceStructure structure;
    /// Class ids of each type (b) line.
    std::vector<std::vector<int>> partitions;
    /// Point image under x -> x'; class points are fixed.
    std::vector<int> involution;

    bool is_vertex(int point) const { return static_cast<std::size_t>(point) < vertex_count; }
    bool is_clique_line(int line) const { return static_cast<std::size_t>(line) < clique_count; }
    int class_point(int class_id) const { return static_cast<int>(vertex_count) + class_id; }
    int partition_line(int index) const { return static_cast<int>(clique_count) + index; }

    /// {"format_version", "num_points", "lines", "tags"}; tags give half-open
    /// id ranges: {"points": {"vertex", "class"}, "lines": {"clique", "partition"}}.
    Json to_json() const;
};

/// Throws InputError when the partition sweep did not pass (the hypotheses
/// the construction rests on are unverified).
Reconstruction reconstruct(const CliqueLab& lab, const Congruence& congruence, const PartitionSet& partitions);

struct NamedCheck {
    std::string name;
    CheckOutcome outcome;
};

struct ReconstructionReport {
    std::vector<NamedCheck> checks;

    bool pass() const;
    const NamedCheck* find(const std::string& name) const;
    Json to_json() const;
};

/// "gq_axioms": order (r, r^2). "subquadrangle": class points with partition
/// lines give order (r, r). "involution": x -> x' maps lines to lines, fixes
/// the class points and partition lines, and T_C = T_C'. "doubly_subtended":
/// every ovoid subtended in the subquadrangle has two subtenders, x and x'.
/// "incidence_chains": for every non-incident (point, line) the connecting
/// pair is the one predicted from the cliques, classes and partitions, split
/// into the six point/line cases.
ReconstructionReport verify_reconstruction(const CliqueLab& lab, const Congruence& congruence,
                                           const Reconstruction& rec, unsigned threads = 1);

struct IsomorphismWitness {
    std::vector<int> point_map;
    std::vector<int> line_map;

    Json to_json() const;
};

enum class IsomorphismStatus { found, non_isomorphic, budget_exceeded };
std::string to_string(IsomorphismStatus status);

struct IsomorphismResult {
    IsomorphismStatus status = IsomorphismStatus::non_isomorphic;
    std::optional<IsomorphismWitness> witness;
    /// "natural" or "backtracking".
    std::string method;
    long long nodes = 0;
    /// Why the search stopped, or why the natural map was rejected.
    Json detail;

    Json to_json() const;
};

/// Whether the maps are bijections under which lines go to lines, both ways.
bool is_isomorphism(const IncidenceStructure& a, const IncidenceStructure& b, const IsomorphismWitness& w);

/// Backtracking over points, pruned by collinearity degree and the multiset
/// of common-neighbour counts, then by adjacency to the points already
/// mapped. Lines must be determined by their point sets. `node_budget`
/// counts point assignments.
IsomorphismResult find_isomorphism(const IncidenceStructure& a, const IncidenceStructure& b,
                                   long long node_budget = 1'000'000);

/// Vertices to their outer points, each class to the section point collinear
/// with all points of its cliques. Also checks that partition lines go onto
/// section lines and x -> x' onto the model's reflection. Falls back to
/// find_isomorphism when the natural map is not an isomorphism.
IsomorphismResult natural_isomorphism(const QuadrangleModel& model, const CliqueLab& lab,
                                      const Congruence& congruence, const Reconstruction& rec,
                                      long long node_budget = 1'000'000);

}  // namespace pwlab
