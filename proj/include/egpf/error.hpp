#pragma once

#include <stdexcept>
#include <string>

namespace egpf {

// Domain error raised on contract violations (bad inputs, infeasible
// sampling, numeric failures). Message strings are stable and matched
// by tests, e.g. "zero evidence", "separation infeasible".
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace egpf
