#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

/// An exact enumeration or orbit budget was exceeded. Surfaced by the CLI as
/// exit code 3.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration could not be validated. Surfaced by the CLI as exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skewlab
