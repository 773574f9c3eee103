#pragma once

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace pwlab {

using Json = nlohmann::ordered_json;

/// Bad input: malformed files, out-of-range arguments, unsupported q.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, Json witness = nullptr)
        : std::runtime_error(what), witness_(std::move(witness))
    {
    }

    const Json& witness() const { return witness_; }

private:
    Json witness_;
};

/// A structural claim failed on the data at hand. Always carries the
/// smallest offending configuration found.
class CharacterizationFailure : public std::runtime_error {
public:
    CharacterizationFailure(const std::string& what, Json witness)
        : std::runtime_error(what), witness_(std::move(witness))
    {
    }

    const Json& witness() const { return witness_; }

private:
    Json witness_;
};

}  // namespace pwlab
