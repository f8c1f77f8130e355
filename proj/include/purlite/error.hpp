#pragma once

#include <stdexcept>
#include <string>

namespace purlite {

/// Base of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Severity { warn, error };

inline const char* to_string(Severity s) { return s == Severity::error ? "error" : "warn"; }

}  // namespace purlite
