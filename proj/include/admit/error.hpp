#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace admit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structural CSV problem (bad quoting, wrong field count). Row-level
// validation failures are not errors; they are reported as rejections.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DiscretizeError : public Error {
public:
    DiscretizeError(const std::string& attribute, double value, const std::string& what)
        : Error(attribute + "=" + std::to_string(value) + ": " + what),
          attribute_(attribute), value_(value) {}
    const std::string& attribute() const noexcept { return attribute_; }
    double value() const noexcept { return value_; }

private:
    std::string attribute_;
    double value_;
};

// Raised by the pipeline; carries the name of the stage that failed.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& cause)
        : Error("[" + stage + "] " + cause), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace admit
