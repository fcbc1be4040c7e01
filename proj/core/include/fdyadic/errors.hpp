#pragma once

#include <stdexcept>
#include <string>

namespace fdyadic {

/// A computed structure failed a verification the caller relied on
/// (wrong class count, extracted subgraph not a tree, ...). The message
/// carries the diagnostic. CLI maps these to exit code 2.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

/// A build ran into its configured vertex or word-length budget.
class ResourceLimitError : public std::runtime_error {
public:
    ResourceLimitError(const std::string& what, int radius_reached)
        : std::runtime_error(what), radius_reached(radius_reached) {}
    int radius_reached;
};

}  // namespace fdyadic
