#pragma once

#include <stdexcept>
#include <string>

namespace vpd {

// Malformed or missing input data (files, records).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter outside an operation's precondition.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A lookup for a cluster, viewpoint or k that does not exist.
class NotFoundError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A drilldown or description whose subject or contrast corpus is empty.
class DegenerateSplitError : public std::runtime_error {
public:
    enum class Side { subject, contrast };

    DegenerateSplitError(Side side, const std::string& what)
        : std::runtime_error(what), side_(side) {}

    Side side() const noexcept { return side_; }

private:
    Side side_;
};

}  // namespace vpd
