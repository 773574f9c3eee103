#include "pwlab/finite_geometry.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace pwlab {

bool is_prime(std::uint32_t n)
{
    if (n < 2)
        return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q)
{
    if (!is_prime(q))
        throw InputError("field order " + std::to_string(q) + " is not prime");
}

FieldElement PrimeField::element(long long v) const
{
    long long m = v % static_cast<long long>(q_);
    if (m < 0)
        m += q_;
    return {static_cast<std::uint32_t>(m)};
}

FieldElement PrimeField::inv(FieldElement a) const
{
    if (a.value == 0)
        throw InputError("inverse of zero");
    // Fermat: a^(q-2).
    FieldElement result{1};
    FieldElement base = a;
    for (std::uint32_t e = q_ - 2; e; e >>= 1) {
        if (e & 1u)
            result = mul(result, base);
        base = mul(base, base);
    }
    return result;
}

bool PrimeField::is_square(FieldElement a) const
{
    for (std::uint32_t x = 0; x < q_; ++x)
        if ((x * x) % q_ == a.value)
            return true;
    return false;
}

Coordinates canonical_coordinates(const PrimeField& field, Coordinates coords)
{
    auto last = std::find_if(coords.rbegin(), coords.rend(), [](FieldElement e) { return e.value != 0; });
    if (last == coords.rend())
        throw InputError("zero vector is not a projective point");
    FieldElement scale = field.inv(*last);
    for (auto& c : coords)
        c = field.mul(c, scale);
    return coords;
}

ProjectivePoint::ProjectivePoint(const PrimeField& field, Coordinates coords)
    : coords_(canonical_coordinates(field, std::move(coords)))
{
}

QuadraticForm::QuadraticForm(const PrimeField& field, std::size_t dimension)
    : field_(field), n_(dimension), coeff_(dimension * dimension)
{
}

void QuadraticForm::set_coefficient(std::size_t i, std::size_t j, long long c)
{
    if (i > j)
        std::swap(i, j);
    coeff_[i * n_ + j] = field_.element(c);
}

FieldElement QuadraticForm::evaluate(const Coordinates& x) const
{
    std::uint64_t acc = 0;
    const std::uint64_t q = field_.order();
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) {
            auto c = coeff_[i * n_ + j].value;
            if (c)
                acc = (acc + static_cast<std::uint64_t>(c) * x[i].value % q * x[j].value) % q;
        }
    return {static_cast<std::uint32_t>(acc)};
}

FieldElement QuadraticForm::polar(const Coordinates& x, const Coordinates& y) const
{
    Coordinates sum(n_);
    for (std::size_t i = 0; i < n_; ++i)
        sum[i] = field_.add(x[i], y[i]);
    return field_.add(evaluate(sum), field_.neg(field_.add(evaluate(x), evaluate(y))));
}

std::uint32_t anisotropic_coefficient(std::uint32_t q)
{
    PrimeField field(q);
    for (std::uint32_t b = 1; b < q; ++b)
        if (!field.is_square(field.neg({b})))
            return b;
    throw InputError("no non-square in GF(" + std::to_string(q) + ")");
}

namespace {

std::size_t encode(const Coordinates& c, std::uint32_t q)
{
    std::size_t code = 0;
    for (auto e : c)
        code = code * q + e.value;
    return code;
}

bool next_tuple(Coordinates& c, std::uint32_t q)
{
    for (std::size_t i = c.size(); i-- > 0;) {
        if (++c[i].value < q)
            return true;
        c[i].value = 0;
    }
    return false;
}

bool is_canonical(const Coordinates& c)
{
    auto last = std::find_if(c.rbegin(), c.rend(), [](FieldElement e) { return e.value != 0; });
    return last != c.rend() && last->value == 1;
}

std::size_t ipow(std::size_t base, unsigned e)
{
    std::size_t r = 1;
    while (e--)
        r *= base;
    return r;
}

}  // namespace

GeneralizedQuadrangle build_elliptic_quadric_gq(std::uint32_t q, std::uint32_t q_bound)
{
    if (!is_prime(q))
        throw InputError("q = " + std::to_string(q) + " is not prime");
    if (q < 3)
        throw InputError("q must be at least 3");
    if (q > q_bound)
        throw InputError("q = " + std::to_string(q) + " exceeds the configured bound " + std::to_string(q_bound));

    PrimeField field(q);
    QuadraticForm form(field, 6);
    form.set_coefficient(0, 1, 1);
    form.set_coefficient(2, 3, 1);
    form.set_coefficient(4, 4, 1);
    form.set_coefficient(5, 5, anisotropic_coefficient(q));

    GeneralizedQuadrangle gq;
    gq.q = q;
    std::vector<int> id_of(ipow(q, 6), -1);
    Coordinates c(6);
    while (next_tuple(c, q)) {
        if (is_canonical(c) && form.evaluate(c).value == 0) {
            id_of[encode(c, q)] = static_cast<int>(gq.coordinates.size());
            gq.coordinates.push_back(c);
        }
    }
    const std::size_t n = gq.coordinates.size();
    const std::size_t expected_points = (q + 1) * (static_cast<std::size_t>(q) * q * q + 1);
    if (n != expected_points)
        throw CharacterizationFailure("quadric is not elliptic", Json{{"points", n}, {"expected", expected_points}});

    for (std::size_t a = 0; a < n; ++a) {
        const auto& pa = gq.coordinates[a];
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto& pb = gq.coordinates[b];
            if (form.polar(pa, pb).value != 0)
                continue;
            std::vector<int> line{static_cast<int>(b)};
            for (std::uint32_t lambda = 0; lambda < q; ++lambda) {
                Coordinates v(6);
                for (std::size_t i = 0; i < 6; ++i)
                    v[i] = field.add(pa[i], field.mul({lambda}, pb[i]));
                line.push_back(id_of[encode(canonical_coordinates(field, v), q)]);
            }
            std::sort(line.begin(), line.end());
            if (line[0] == static_cast<int>(a) && line[1] == static_cast<int>(b))
                gq.incidence.lines.push_back(std::move(line));
        }
    }
    gq.incidence.num_points = n;
    std::sort(gq.incidence.lines.begin(), gq.incidence.lines.end());

    const std::size_t st1 = static_cast<std::size_t>(q) * q * q + 1;
    const std::size_t expected_lines = (static_cast<std::size_t>(q) * q + 1) * st1;
    if (gq.incidence.lines.size() != expected_lines)
        throw CharacterizationFailure("wrong number of totally singular lines",
                                      Json{{"lines", gq.incidence.lines.size()}, {"expected", expected_lines}});
    std::vector<int> degree(n, 0);
    for (const auto& line : gq.incidence.lines)
        for (int p : line)
            ++degree[static_cast<std::size_t>(p)];
    for (std::size_t p = 0; p < n; ++p)
        if (degree[p] != static_cast<int>(q * q + 1))
            throw CharacterizationFailure("point on the wrong number of lines", Json{{"point", p}, {"lines", degree[p]}});
    gq.s = static_cast<int>(q);
    gq.t = static_cast<int>(q * q);
    return gq;
}

SubQuadrangle build_parabolic_subgq(const GeneralizedQuadrangle& gq)
{
    SubQuadrangle out;
    const std::uint32_t q = gq.q;
    std::vector<int> sub_id(gq.num_points(), -1);
    for (std::size_t p = 0; p < gq.num_points(); ++p) {
        if (gq.coordinates[p][4].value != 0)
            continue;
        sub_id[p] = static_cast<int>(out.point_embedding.size());
        out.point_embedding.push_back(static_cast<int>(p));
        Coordinates c = gq.coordinates[p];
        c.erase(c.begin() + 4);
        out.sub.coordinates.push_back(std::move(c));
    }
    for (std::size_t l = 0; l < gq.num_lines(); ++l) {
        const auto& line = gq.incidence.lines[l];
        std::vector<int> inside;
        for (int p : line)
            if (sub_id[static_cast<std::size_t>(p)] >= 0)
                inside.push_back(sub_id[static_cast<std::size_t>(p)]);
        if (inside.size() == line.size()) {
            out.line_embedding.push_back(static_cast<int>(l));
            out.sub.incidence.lines.push_back(std::move(inside));
        } else if (inside.size() != 1) {
            throw CharacterizationFailure("line meets the section in " + std::to_string(inside.size()) + " points",
                                          Json{{"line", l}, {"meets", inside.size()}});
        }
    }
    out.sub.q = q;
    out.sub.incidence.num_points = out.point_embedding.size();
    const std::size_t expected = (q + 1) * (static_cast<std::size_t>(q) * q + 1);
    if (out.point_embedding.size() != expected || out.line_embedding.size() != expected)
        throw CharacterizationFailure("degenerate hyperplane section",
                                      Json{{"points", out.point_embedding.size()}, {"lines", out.line_embedding.size()}, {"expected", expected}});
    out.sub.s = static_cast<int>(q);
    out.sub.t = static_cast<int>(q);
    return out;
}

QuadrangleModel QuadrangleModel::build(std::uint32_t q, std::uint32_t q_bound)
{
    QuadrangleModel m;
    m.gq_ = build_elliptic_quadric_gq(q, q_bound);
    m.sub_ = build_parabolic_subgq(m.gq_);
    const std::size_t n = m.gq_.num_points();
    m.join_ = m.gq_.incidence.joining_lines();

    m.section_index_.assign(n, -1);
    for (std::size_t i = 0; i < m.sub_.point_embedding.size(); ++i)
        m.section_index_[static_cast<std::size_t>(m.sub_.point_embedding[i])] = static_cast<int>(i);
    m.outer_index_.assign(n, -1);
    for (std::size_t p = 0; p < n; ++p)
        if (m.section_index_[p] < 0) {
            m.outer_index_[p] = static_cast<int>(m.outer_.size());
            m.outer_.push_back(static_cast<int>(p));
        }

    const std::size_t sub_n = m.sub_.point_embedding.size();
    std::map<VertexSet, std::vector<int>> subtenders;
    for (int x : m.outer_) {
        VertexSet bits(sub_n);
        for (std::size_t i = 0; i < sub_n; ++i)
            if (m.collinear(x, m.sub_.point_embedding[i]))
                bits.set(i);
        subtenders[bits].push_back(x);
        m.ovoid_bits_.push_back(std::move(bits));
    }
    m.antipode_.assign(n, -1);
    for (std::size_t i = 0; i < m.outer_.size(); ++i) {
        const auto& group = subtenders[m.ovoid_bits_[i]];
        if (group.size() != 2)
            throw CharacterizationFailure("subtended ovoid without exactly two subtenders",
                                          Json{{"point", m.outer_[i]}, {"subtenders", group}});
        m.antipode_[static_cast<std::size_t>(m.outer_[i])] = group[0] == m.outer_[i] ? group[1] : group[0];
    }

    PrimeField field(q);
    std::map<Coordinates, int, bool (*)(const Coordinates&, const Coordinates&)> by_coords(
        [](const Coordinates& a, const Coordinates& b) {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                                [](FieldElement x, FieldElement y) { return x.value < y.value; });
        });
    for (std::size_t p = 0; p < n; ++p)
        by_coords.emplace(m.gq_.coordinates[p], static_cast<int>(p));
    m.reflection_.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        Coordinates c = m.gq_.coordinates[p];
        c[4] = field.neg(c[4]);
        m.reflection_[p] = by_coords.at(canonical_coordinates(field, c));
    }
    return m;
}

bool QuadrangleModel::collinear(int a, int b) const
{
    const std::size_t n = gq_.num_points();
    return join_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] >= 0;
}

Ovoid QuadrangleModel::subtended_ovoid(int point) const
{
    int idx = outer_index(point);
    if (idx < 0)
        throw InputError("point " + std::to_string(point) + " lies in the subquadrangle");
    return Ovoid{ovoid_bits_[static_cast<std::size_t>(idx)].members(), point};
}

int QuadrangleModel::antipode(int point) const
{
    if (outer_index(point) < 0)
        throw InputError("point " + std::to_string(point) + " lies in the subquadrangle");
    return antipode_[static_cast<std::size_t>(point)];
}

Json QuadrangleModel::to_json() const
{
    Json j;
    j["format_version"] = 1;
    j["q"] = gq_.q;
    Json points = Json::array();
    for (const auto& c : gq_.coordinates) {
        Json row = Json::array();
        for (auto e : c)
            row.push_back(e.value);
        points.push_back(row);
    }
    j["points"] = points;
    j["lines"] = gq_.incidence.lines;
    j["sub_points"] = sub_.point_embedding;
    j["sub_lines"] = sub_.line_embedding;
    return j;
}

InvolutionCheck verify_reflection_involution(const QuadrangleModel& model)
{
    const auto& gq = model.gq();
    PrimeField field(gq.q);
    QuadraticForm form(field, 6);
    form.set_coefficient(0, 1, 1);
    form.set_coefficient(2, 3, 1);
    form.set_coefficient(4, 4, 1);
    form.set_coefficient(5, 5, anisotropic_coefficient(gq.q));
    for (std::size_t p = 0; p < gq.num_points(); ++p) {
        int image = model.reflect(static_cast<int>(p));
        if (form.evaluate(gq.coordinates[static_cast<std::size_t>(image)]).value != 0)
            return {false, {{"point", p}, {"reason", "image leaves the quadric"}}};
        if (model.reflect(image) != static_cast<int>(p))
            return {false, {{"point", p}, {"reason", "not an involution"}}};
        if (model.in_section(static_cast<int>(p)) && image != static_cast<int>(p))
            return {false, {{"point", p}, {"reason", "section point moved"}}};
        if (!model.in_section(static_cast<int>(p)) && image != model.antipode(static_cast<int>(p)))
            return {false, {{"point", p}, {"reason", "image is not the antipode"}}};
    }
    const auto& lines = gq.incidence.lines;
    for (std::size_t l = 0; l < lines.size(); ++l) {
        std::vector<int> image;
        for (int p : lines[l])
            image.push_back(model.reflect(p));
        std::sort(image.begin(), image.end());
        if (!std::binary_search(lines.begin(), lines.end(), image))
            return {false, {{"line", l}, {"reason", "image is not a line"}}};
    }
    return {true, nullptr};
}

OvoidIntersectionCheck verify_ovoid_intersections(const QuadrangleModel& model)
{
    const std::size_t r = model.q();
    const auto& outer = model.outer_points();
    for (std::size_t i = 0; i < outer.size(); ++i) {
        int x = outer[i];
        int xa = model.antipode(x);
        for (std::size_t j = 0; j < outer.size(); ++j) {
            if (i == j)
                continue;
            int y = outer[j];
            std::size_t meet = model.ovoid_bits(i).intersection_count(model.ovoid_bits(j));
            std::size_t expected;
            if (y == xa)
                expected = r * r + 1;
            else if (model.collinear(x, y) || model.collinear(xa, y))
                expected = 1;
            else
                expected = r + 1;
            if (meet != expected)
                return {false, {{"x", x}, {"y", y}, {"intersection", meet}, {"expected", expected}}};
        }
    }
    return {true, nullptr};
}

}  // namespace pwlab
