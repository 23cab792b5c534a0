#pragma once

#include <stdexcept>
#include <string>

namespace citree {

// Input data violates the schema (bad column, bad token, underfull stratum, ...).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// A quantity is mathematically undefined or degenerate (zero denominator,
// empty node, N <= |T'|, ...).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed configuration (synthetic rule regions, stratum spec, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace citree
