#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dispersia {

using WarningHandler = std::function<void(std::string_view)>;

// Installs a process-wide sink for non-fatal warnings and returns the previous
// one. The default handler writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

// Grid spacing too coarse for the concentrated potential.
class MeshResolutionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite values or other failures during time stepping.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dispersia
