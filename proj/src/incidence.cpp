#include "pwlab/incidence.hpp"

#include "pwlab/parallel.hpp"

#include <algorithm>
#include <map>

namespace pwlab {

std::vector<std::vector<int>> IncidenceStructure::lines_through_points() const
{
    std::vector<std::vector<int>> through(num_points);
    for (std::size_t l = 0; l < lines.size(); ++l)
        for (int p : lines[l])
            through[static_cast<std::size_t>(p)].push_back(static_cast<int>(l));
    return through;
}

std::vector<std::int32_t> IncidenceStructure::joining_lines() const
{
    const std::size_t n = num_points;
    std::vector<std::int32_t> join(n * n, -1);
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const auto& line = lines[l];
        for (std::size_t a = 0; a < line.size(); ++a) {
            if (line[a] < 0 || static_cast<std::size_t>(line[a]) >= n)
                throw InputError("line " + std::to_string(l) + " has point id out of range");
            if (a > 0 && line[a] <= line[a - 1])
                throw InputError("line " + std::to_string(l) + " is not a sorted set of distinct points");
        }
        for (std::size_t a = 0; a < line.size(); ++a)
            for (std::size_t b = a + 1; b < line.size(); ++b) {
                auto x = static_cast<std::size_t>(line[a]);
                auto y = static_cast<std::size_t>(line[b]);
                // Keep the first line seen; the axiom checker looks for clashes.
                if (join[x * n + y] < 0) {
                    join[x * n + y] = static_cast<std::int32_t>(l);
                    join[y * n + x] = static_cast<std::int32_t>(l);
                }
            }
    }
    return join;
}

bool IncidenceStructure::incident(int point, int line) const
{
    const auto& pts = lines.at(static_cast<std::size_t>(line));
    return std::binary_search(pts.begin(), pts.end(), point);
}

IncidenceStructure IncidenceStructure::restrict_to(const std::vector<int>& points, const std::vector<int>& line_ids) const
{
    std::vector<int> relabel(num_points, -1);
    for (std::size_t i = 0; i < points.size(); ++i)
        relabel[static_cast<std::size_t>(points[i])] = static_cast<int>(i);
    IncidenceStructure out;
    out.num_points = points.size();
    for (int l : line_ids) {
        std::vector<int> pts;
        for (int p : lines.at(static_cast<std::size_t>(l)))
            if (relabel[static_cast<std::size_t>(p)] >= 0)
                pts.push_back(relabel[static_cast<std::size_t>(p)]);
        std::sort(pts.begin(), pts.end());
        out.lines.push_back(std::move(pts));
    }
    return out;
}

const AxiomViolation* AxiomReport::violation(Axiom axiom) const
{
    for (const auto& v : violations)
        if (v.axiom == axiom)
            return &v;
    return nullptr;
}

Json AxiomReport::to_json() const
{
    Json j;
    j["pass"] = ok();
    if (s && t)
        j["order"] = {*s, *t};
    Json list = Json::array();
    for (const auto& v : violations)
        list.push_back({{"axiom", static_cast<int>(v.axiom)}, {"point", v.point}, {"line", v.line}, {"detail", v.detail}});
    j["violations"] = list;
    return j;
}

AxiomReport verify_gq_axioms(const IncidenceStructure& structure, unsigned threads)
{
    AxiomReport report;
    const std::size_t n = structure.num_points;
    if (n == 0 || structure.lines.empty()) {
        report.violations.push_back({Axiom::incidence_count, -1, -1, "structure has no points or no lines"});
        return report;
    }
    auto join = structure.joining_lines();
    auto through = structure.lines_through_points();

    // (i): constant point degree t+1 >= 2; two points on at most one line.
    const std::size_t degree = through[0].size();
    for (std::size_t p = 0; p < n; ++p) {
        if (through[p].size() != degree || degree < 2) {
            int line = through[p].empty() ? -1 : through[p].front();
            report.violations.push_back({Axiom::incidence_count, static_cast<int>(p), line,
                                         "point lies on " + std::to_string(through[p].size()) + " lines, expected " +
                                             std::to_string(std::max<std::size_t>(degree, 2)) + (degree < 2 ? "+" : "")});
            break;
        }
    }
    const AxiomViolation* shared_pair = nullptr;
    AxiomViolation pair_clash{Axiom::incidence_count, -1, -1, {}};
    for (std::size_t l = 0; l < structure.lines.size() && !shared_pair; ++l) {
        const auto& line = structure.lines[l];
        for (std::size_t a = 0; a < line.size() && !shared_pair; ++a)
            for (std::size_t b = a + 1; b < line.size(); ++b) {
                auto owner = join[static_cast<std::size_t>(line[a]) * n + static_cast<std::size_t>(line[b])];
                if (owner != static_cast<std::int32_t>(l)) {
                    pair_clash = {Axiom::incidence_count, line[a], static_cast<int>(l),
                                  "points " + std::to_string(line[a]) + "," + std::to_string(line[b]) + " lie on lines " +
                                      std::to_string(owner) + " and " + std::to_string(l)};
                    shared_pair = &pair_clash;
                    break;
                }
            }
    }
    if (shared_pair && !report.violation(Axiom::incidence_count))
        report.violations.push_back(*shared_pair);

    // (ii): constant line size s+1 >= 2; two lines share at most one point.
    const std::size_t line_size = structure.lines[0].size();
    for (std::size_t l = 0; l < structure.lines.size(); ++l) {
        if (structure.lines[l].size() != line_size || line_size < 2) {
            int point = structure.lines[l].empty() ? -1 : structure.lines[l].front();
            report.violations.push_back({Axiom::line_size, point, static_cast<int>(l),
                                         "line has " + std::to_string(structure.lines[l].size()) + " points, expected " +
                                             std::to_string(std::max<std::size_t>(line_size, 2)) + (line_size < 2 ? "+" : "")});
            break;
        }
    }
    if (shared_pair && !report.violation(Axiom::line_size)) {
        AxiomViolation v = *shared_pair;
        v.axiom = Axiom::line_size;
        report.violations.push_back(v);
    }

    // (iii): every non-incident (x, L) has exactly one point of L collinear with x.
    const std::size_t chunks = chunk_count(n, threads);
    std::vector<std::optional<AxiomViolation>> firsts(chunks);
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        for (std::size_t x = begin; x < end; ++x) {
            for (std::size_t l = 0; l < structure.lines.size(); ++l) {
                const auto& line = structure.lines[l];
                if (std::binary_search(line.begin(), line.end(), static_cast<int>(x)))
                    continue;
                int connections = 0;
                for (int y : line)
                    if (join[x * n + static_cast<std::size_t>(y)] >= 0)
                        ++connections;
                if (connections != 1) {
                    firsts[chunk] = AxiomViolation{Axiom::unique_connection, static_cast<int>(x), static_cast<int>(l),
                                                   std::to_string(connections) + " points of the line are collinear with the point"};
                    return;
                }
            }
        }
    });
    for (auto& f : firsts)
        if (f) {
            report.violations.push_back(*f);
            break;
        }

    std::sort(report.violations.begin(), report.violations.end(),
              [](const AxiomViolation& a, const AxiomViolation& b) { return a.axiom < b.axiom; });
    if (report.violations.empty()) {
        report.s = static_cast<int>(line_size) - 1;
        report.t = static_cast<int>(degree) - 1;
    }
    return report;
}

SubtendedAnalysis analyze_subtended(const IncidenceStructure& structure, const std::vector<bool>& in_subset)
{
    const std::size_t n = structure.num_points;
    if (in_subset.size() != n)
        throw InputError("subset mask size does not match point count");
    auto join = structure.joining_lines();
    SubtendedAnalysis out;
    std::vector<int> subset;
    for (std::size_t p = 0; p < n; ++p)
        (in_subset[p] ? subset : out.outer_points).push_back(static_cast<int>(p));

    std::map<std::vector<int>, std::vector<int>> subtenders;
    for (std::size_t i = 0; i < out.outer_points.size(); ++i) {
        auto x = static_cast<std::size_t>(out.outer_points[i]);
        std::vector<int> ovoid;
        for (int p : subset)
            if (join[x * n + static_cast<std::size_t>(p)] >= 0)
                ovoid.push_back(p);
        subtenders[ovoid].push_back(static_cast<int>(i));
        out.ovoids.push_back(std::move(ovoid));
    }
    out.antipode.assign(out.outer_points.size(), -1);
    out.doubly_subtended = true;
    for (std::size_t i = 0; i < out.outer_points.size(); ++i) {
        const auto& group = subtenders[out.ovoids[i]];
        if (group.size() != 2) {
            if (out.doubly_subtended) {
                out.doubly_subtended = false;
                out.witness = {{"point", out.outer_points[i]}, {"subtenders", group.size()}};
            }
            continue;
        }
        out.antipode[i] = group[0] == static_cast<int>(i) ? group[1] : group[0];
    }
    return out;
}

}  // namespace pwlab
