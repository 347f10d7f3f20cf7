#pragma once

#include <stdexcept>
#include <string>

namespace lpskew {

// Invalid model structure: non-causal AR polynomial, singular phi(1), bad d range.
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unusable data: unreadable files, degenerate series, bad schema.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lpskew
