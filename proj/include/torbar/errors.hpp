#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace torbar {

class Error : public std::runtime_error {
public:
    explicit Error(std::string what) : std::runtime_error(std::move(what)) {}
};

// An operation that requires a non-empty edge subset received an empty one.
class EmptySubsetError : public Error {
public:
    EmptySubsetError() : Error("operation requires a non-empty edge subset") {}
    using Error::Error;
};

// An argument was outside its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Input larger than the enumeration cap of the chosen engine.
class CapExceededError : public Error {
public:
    using Error::Error;
};

// Invalid configuration, e.g. a composite rank-oracle modulus.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed input document; the message carries a line/field diagnostic.
class ParseError : public Error {
public:
    using Error::Error;
};

// A construction spec failed validation; individual violations attached.
class ValidationError : public Error {
public:
    ValidationError(std::string what, std::vector<std::string> violations)
        : Error(std::move(what)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

class NotTightError : public Error {
public:
    using Error::Error;
};

class NotSparseError : public Error {
public:
    using Error::Error;
};

// The reducer ran out of candidates. Valid inputs always admit a full split
// sequence, so this signals a bug; the offending instance is attached.
class ExhaustedSearchError : public Error {
public:
    ExhaustedSearchError(std::string what, std::string instance_dump)
        : Error(std::move(what)), instance_(std::move(instance_dump)) {}
    const std::string& instance_dump() const { return instance_; }

private:
    std::string instance_;
};

}  // namespace torbar
