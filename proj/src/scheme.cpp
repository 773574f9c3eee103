#include "pwlab/scheme.hpp"

#include "pwlab/parallel.hpp"

#include <fstream>
#include <string>

namespace pwlab {

AssociationScheme::AssociationScheme(std::size_t size, int classes, std::vector<std::uint8_t> relation)
    : size_(size), classes_(classes), table_(std::move(relation))
{
    if (table_.size() != size_ * size_)
        throw InputError("relation table has " + std::to_string(table_.size()) + " entries, expected " +
                         std::to_string(size_ * size_));
    if (classes_ < 1 || classes_ > 250)
        throw InputError("class count " + std::to_string(classes_) + " out of range");
}

std::vector<long long> AssociationScheme::valencies() const
{
    std::vector<long long> n(static_cast<std::size_t>(classes_ + 1), 0);
    if (size_ == 0)
        return n;
    for (std::size_t y = 0; y < size_; ++y)
        ++n[table_[y]];
    return n;
}

std::vector<int> AssociationScheme::neighbours(std::size_t x, int i) const
{
    std::vector<int> out;
    const auto* r = row(x);
    for (std::size_t y = 0; y < size_; ++y)
        if (r[y] == i)
            out.push_back(static_cast<int>(y));
    return out;
}

Json AssociationScheme::to_json() const
{
    Json j;
    j["format_version"] = 1;
    j["size"] = size_;
    j["classes"] = classes_;
    Json rel = Json::array();
    for (auto v : table_)
        rel.push_back(static_cast<int>(v));
    j["relations"] = std::move(rel);
    return j;
}

AssociationScheme AssociationScheme::from_json(const Json& doc, bool require_symmetric)
{
    if (!doc.is_object())
        throw InputError("scheme document is not a JSON object");
    for (const char* key : {"size", "classes", "relations"})
        if (!doc.contains(key))
            throw InputError(std::string("scheme document lacks '") + key + "'");
    if (doc.contains("format_version") && doc["format_version"] != 1)
        throw InputError("unsupported format_version");
    if (!doc["size"].is_number_unsigned() || !doc["classes"].is_number_integer() || !doc["relations"].is_array())
        throw InputError("scheme fields have the wrong types");
    const auto n = doc["size"].get<std::size_t>();
    const int d = doc["classes"].get<int>();
    const auto& rel = doc["relations"];
    if (rel.size() != n * n)
        throw InputError("relations array has " + std::to_string(rel.size()) + " entries, expected " + std::to_string(n * n));
    if (d < 1 || d > 250)
        throw InputError("class count out of range");
    std::vector<std::uint8_t> table(n * n);
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!rel[i].is_number_integer())
            throw InputError("relation entry " + std::to_string(i) + " is not an integer");
        auto v = rel[i].get<long long>();
        if (v < 0 || v > d)
            throw InputError("relation index " + std::to_string(v) + " out of range",
                             Json{{"x", i / n}, {"y", i % n}, {"relation", v}});
        table[i] = static_cast<std::uint8_t>(v);
    }
    for (std::size_t x = 0; x < n && require_symmetric; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            if (table[x * n + y] != table[y * n + x])
                throw InputError("relation is not symmetric at (" + std::to_string(x) + "," + std::to_string(y) + ")",
                                 Json{{"x", x}, {"y", y}, {"relation_xy", table[x * n + y]}, {"relation_yx", table[y * n + x]}});
    return AssociationScheme(n, d, std::move(table));
}

void save_scheme(const AssociationScheme& scheme, const std::filesystem::path& file)
{
    std::ofstream out(file);
    if (!out)
        throw InputError("cannot write " + file.string());
    out << scheme.to_json().dump() << '\n';
}

AssociationScheme load_scheme(const std::filesystem::path& file, bool require_symmetric)
{
    std::ifstream in(file);
    if (!in)
        throw InputError("cannot read " + file.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in " + file.string() + ": " + e.what());
    }
    return AssociationScheme::from_json(doc, require_symmetric);
}

long long IntersectionTensor::vertex_count() const
{
    long long total = 0;
    for (int i = 0; i <= d_; ++i)
        total += valency(i);
    return total;
}

Json IntersectionTensor::to_json() const
{
    Json j = Json::array();
    for (int k = 0; k <= d_; ++k) {
        Json slice = Json::array();
        for (int i = 0; i <= d_; ++i) {
            Json row = Json::array();
            for (int jj = 0; jj <= d_; ++jj)
                row.push_back((*this)(k, i, jj));
            slice.push_back(row);
        }
        j.push_back(slice);
    }
    return j;
}

std::vector<long long> count_from_base_pair(const AssociationScheme& scheme, std::size_t x, std::size_t y)
{
    const auto w = static_cast<std::size_t>(scheme.classes() + 1);
    std::vector<long long> counts(w * w, 0);
    const auto* rx = scheme.row(x);
    const auto* ry = scheme.row(y);
    for (std::size_t z = 0; z < scheme.size(); ++z)
        ++counts[rx[z] * w + ry[z]];
    return counts;
}

namespace {

/// Reference slices from row 0; throws if some relation is missing there.
std::vector<std::vector<long long>> reference_slices(const AssociationScheme& scheme)
{
    const int d = scheme.classes();
    std::vector<std::vector<long long>> ref(static_cast<std::size_t>(d + 1));
    for (std::size_t y = 0; y < scheme.size(); ++y) {
        int k = scheme.relation(0, y);
        if (ref[static_cast<std::size_t>(k)].empty())
            ref[static_cast<std::size_t>(k)] = count_from_base_pair(scheme, 0, y);
    }
    for (int k = 0; k <= d; ++k)
        if (ref[static_cast<std::size_t>(k)].empty())
            throw CharacterizationFailure("relation " + std::to_string(k) + " does not occur at vertex 0",
                                          Json{{"x", 0}, {"relation", k}});
    return ref;
}

}  // namespace

IntersectionTensor intersection_numbers(const AssociationScheme& scheme, unsigned threads)
{
    const int d = scheme.classes();
    const std::size_t n = scheme.size();
    if (n == 0)
        throw InputError("empty scheme");
    auto ref = reference_slices(scheme);
    const auto w = static_cast<std::size_t>(d + 1);

    const std::size_t chunks = chunk_count(n, threads);
    std::vector<Json> witnesses(chunks);
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        std::vector<long long> counts(w * w);
        for (std::size_t x = begin; x < end; ++x) {
            const auto* rx = scheme.row(x);
            for (std::size_t y = 0; y < n; ++y) {
                const auto* ry = scheme.row(y);
                std::fill(counts.begin(), counts.end(), 0);
                for (std::size_t z = 0; z < n; ++z)
                    ++counts[rx[z] * w + ry[z]];
                const auto& expect = ref[rx[y]];
                if (counts != expect) {
                    std::size_t e = 0;
                    while (counts[e] == expect[e])
                        ++e;
                    witnesses[chunk] = {{"x", x}, {"y", y}, {"k", rx[y]}, {"i", e / w}, {"j", e % w},
                                        {"count", counts[e]}, {"reference", expect[e]}};
                    return;
                }
            }
        }
    });
    for (auto& wit : witnesses)
        if (!wit.is_null())
            throw CharacterizationFailure("intersection numbers depend on the base pair", wit);

    IntersectionTensor p(d);
    for (int k = 0; k <= d; ++k)
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j)
                p(k, i, j) = ref[static_cast<std::size_t>(k)][static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)];
    return p;
}

CheckOutcome verify_scheme_axioms(const AssociationScheme& scheme, unsigned threads)
{
    const std::size_t n = scheme.size();
    const int d = scheme.classes();
    if (n == 0)
        return {false, Json{{"reason", "empty vertex set"}}, nullptr};
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            int r = scheme.relation(x, y);
            if (r > d)
                return {false, Json{{"reason", "relation index out of range"}, {"x", x}, {"y", y}, {"relation", r}}, nullptr};
            if ((x == y) != (r == 0))
                return {false, Json{{"reason", "identity relation must be exactly the diagonal"}, {"x", x}, {"y", y}, {"relation", r}}, nullptr};
            if (r != scheme.relation(y, x))
                return {false, Json{{"reason", "relation not symmetric"}, {"x", x}, {"y", y}}, nullptr};
        }
    auto n0 = scheme.valencies();
    for (int i = 1; i <= d; ++i)
        if (n0[static_cast<std::size_t>(i)] == 0)
            return {false, Json{{"reason", "empty relation"}, {"relation", i}}, nullptr};
    for (std::size_t x = 1; x < n; ++x) {
        std::vector<long long> nx(static_cast<std::size_t>(d + 1), 0);
        const auto* r = scheme.row(x);
        for (std::size_t y = 0; y < n; ++y)
            ++nx[r[y]];
        if (nx != n0) {
            std::size_t i = 0;
            while (nx[i] == n0[i])
                ++i;
            return {false, Json{{"reason", "relation not regular"}, {"x", x}, {"relation", i}, {"valency", nx[i]}, {"reference", n0[i]}}, nullptr};
        }
    }
    try {
        auto p = intersection_numbers(scheme, threads);
        return {true, nullptr, Json{{"valencies", n0}}};
    } catch (const CharacterizationFailure& e) {
        Json w = e.witness();
        w["reason"] = e.what();
        return {false, w, nullptr};
    }
}

IntersectionTensor expected_parameters(long long r)
{
    if (r < 3)
        throw InputError("expected parameters need r >= 3");
    const long long r2 = r * r, r3 = r2 * r, r4 = r3 * r;
    IntersectionTensor p(4);
    const long long n[5] = {1, (r - 1) * (r2 + 1), (r2 - 2 * r) * (r2 + 1), (r - 1) * (r2 + 1), 1};
    for (int k = 0; k <= 4; ++k)
        for (int i = 0; i <= 4; ++i) {
            p(k, 0, i) = (i == k);
            p(k, i, 0) = (i == k);
        }
    for (int i = 0; i <= 4; ++i)
        p(0, i, i) = n[i];

    const long long t1[4][4] = {{r2, r2 * (r - 2), r - 2, 0},
                                {r2 * (r - 2), r4 - 4 * r3 + 5 * r2 - 2 * r, r2 * (r - 2), 0},
                                {r - 2, r2 * (r - 2), r2, 1},
                                {0, 0, 1, 0}};
    const long long c = (r - 1) * (r - 1) * (r - 1);
    const long long t2[4][4] = {{r * (r - 1), c, r * (r - 1), 0},
                                {c, r4 - 4 * r3 + 7 * r2 - 8 * r, c, 1},
                                {r * (r - 1), c, r * (r - 1), 0},
                                {0, 1, 0, 0}};
    const long long t3[4][4] = {{r - 2, r2 * (r - 2), r2, 1},
                                {r2 * (r - 2), r4 - 4 * r3 + 5 * r2 - 2 * r, r2 * (r - 2), 0},
                                {r2, r2 * (r - 2), r - 2, 0},
                                {1, 0, 0, 0}};
    const long long t4[4][4] = {{0, 0, (r - 1) * (r2 + 1), 0},
                                {0, r * (r - 2) * (r2 + 1), 0, 0},
                                {(r - 1) * (r2 + 1), 0, 0, 0},
                                {0, 0, 0, 0}};
    const long long (*tables[4])[4] = {t1, t2, t3, t4};
    for (int k = 1; k <= 4; ++k)
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                p(k, i, j) = tables[k - 1][i - 1][j - 1];
    return p;
}

std::optional<Json> first_tensor_mismatch(const IntersectionTensor& computed, const IntersectionTensor& expected)
{
    if (computed.classes() != expected.classes())
        return Json{{"reason", "class count differs"}, {"computed", computed.classes()}, {"expected", expected.classes()}};
    const int d = computed.classes();
    for (int k = 0; k <= d; ++k)
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j)
                if (computed(k, i, j) != expected(k, i, j))
                    return Json{{"k", k}, {"i", i}, {"j", j}, {"computed", computed(k, i, j)}, {"expected", expected(k, i, j)}};
    return std::nullopt;
}

std::optional<long long> order_from_vertex_count(std::size_t n)
{
    for (long long r = 3; r * r * (r * r - 1) <= static_cast<long long>(n); ++r)
        if (r * r * (r * r - 1) == static_cast<long long>(n))
            return r;
    return std::nullopt;
}

int classify_pair(const QuadrangleModel& model, std::size_t x, std::size_t y)
{
    if (x == y)
        return 0;
    const std::size_t r = model.q();
    const int px = model.outer_points()[x];
    const int py = model.outer_points()[y];
    const std::size_t meet = model.ovoid_bits(x).intersection_count(model.ovoid_bits(y));
    const bool collinear = model.collinear(px, py);
    int relation = -1;
    if (collinear)
        relation = meet == 1 ? 3 : -1;
    else if (meet == 1)
        relation = 1;
    else if (meet == r + 1)
        relation = 2;
    else if (meet == r * r + 1)
        relation = 4;
    if (relation < 0)
        throw CharacterizationFailure("pair matches no relation",
                                      Json{{"x", x}, {"y", y}, {"collinear", collinear}, {"ovoid_intersection", meet}});
    return relation;
}

AssociationScheme build_pw_scheme(const QuadrangleModel& model)
{
    const std::size_t n = model.outer_points().size();
    std::vector<std::uint8_t> table(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x; y < n; ++y) {
            auto rel = static_cast<std::uint8_t>(classify_pair(model, x, y));
            table[x * n + y] = rel;
            table[y * n + x] = rel;
        }
    AssociationScheme scheme(n, 4, std::move(table));
    auto check = verify_scheme_axioms(scheme);
    if (!check.pass)
        throw CharacterizationFailure("outer points do not form an association scheme", check.witness);
    return scheme;
}

}  // namespace pwlab
