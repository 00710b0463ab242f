// errors.hpp
// Error taxonomy shared across the library and the CLI exit-code mapping.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qem {

// One broken invariant, with the indices or values that break it.
struct Violation {
    std::string invariant;
    std::string detail;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
    validation_error(const std::string& msg, std::vector<Violation> v)
        : std::runtime_error(msg), violations(std::move(v)) {}

    std::vector<Violation> violations;
};

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration or state-space size exceeds what exact computation supports.
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qem
