#pragma once

#include <stdexcept>
#include <string>

namespace focksim {

/// Requested occupation or amplitude weight does not fit under the per-mode cutoff.
class CutoffError : public std::invalid_argument {
public:
    explicit CutoffError(const std::string& what) : std::invalid_argument(what) {}
};

/// Operation on a zero-norm (or zero-trace) state whose result is undefined.
class NormError : public std::domain_error {
public:
    explicit NormError(const std::string& what) : std::domain_error(what) {}
};

/// Conditioning on an event whose probability is numerically zero.
class EventError : public std::runtime_error {
public:
    explicit EventError(const std::string& what) : std::runtime_error(what) {}
};

/// Dataset or reconstruction input that cannot be processed (ill-posed, malformed).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration text problem; message carries a line/field diagnostic.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace focksim
