#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double value, double error_estimate)
        : std::runtime_error(what), value_(value), error_estimate_(error_estimate) {}
    double value() const { return value_; }
    double error_estimate() const { return error_estimate_; }

private:
    double value_;
    double error_estimate_;
};

// Hard-core rejection sampling exceeded its retry budget.
class PackingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config-file schema violation; carries the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field_path_(field_path) {}
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

} // namespace cascade
