#pragma once

#include "pwlab/finite_geometry.hpp"
#include "pwlab/scheme.hpp"
#include "pwlab/spectral.hpp"

#include <map>
#include <memory>

namespace fixtures {

// Built once per test binary; construction at q=5 takes a noticeable moment.
inline const pwlab::QuadrangleModel& model(unsigned q)
{
    static std::map<unsigned, std::unique_ptr<pwlab::QuadrangleModel>> cache;
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<pwlab::QuadrangleModel>(pwlab::QuadrangleModel::build(q));
    return *slot;
}

inline const pwlab::AssociationScheme& scheme(unsigned q)
{
    static std::map<unsigned, std::unique_ptr<pwlab::AssociationScheme>> cache;
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<pwlab::AssociationScheme>(pwlab::build_pw_scheme(model(q)));
    return *slot;
}

inline const pwlab::IntersectionTensor& tensor(unsigned q)
{
    static std::map<unsigned, std::unique_ptr<pwlab::IntersectionTensor>> cache;
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<pwlab::IntersectionTensor>(pwlab::intersection_numbers(scheme(q)));
    return *slot;
}

}  // namespace fixtures
