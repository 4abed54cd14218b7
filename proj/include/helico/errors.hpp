#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace helico {

enum class ErrorKind { Parse, Domain, Validation, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message,
          std::vector<double> where = {})
        : std::runtime_error(message), kind_(kind), code_(std::move(code)),
          where_(std::move(where)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }
    // Parameter values at which the failure was observed, if any.
    const std::vector<double>& where() const noexcept { return where_; }

private:
    ErrorKind kind_;
    std::string code_;
    std::vector<double> where_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
        : Error(ErrorKind::Parse, "syntax", message), offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error(ErrorKind::Parse, "unknown-identifier",
                "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          name_(name), offset_(offset) {}

    const std::string& name() const noexcept { return name_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string name_;
    std::size_t offset_;
};

class DomainError : public Error {
public:
    DomainError(const std::string& subexpr, const std::string& reason)
        : Error(ErrorKind::Domain, "domain", reason + " in '" + subexpr + "'"),
          subexpr_(subexpr) {}

    const std::string& subexpression() const noexcept { return subexpr_; }

private:
    std::string subexpr_;
};

inline Error validation_error(const std::string& code, const std::string& message,
                              std::vector<double> where = {})
{
    return Error(ErrorKind::Validation, code, message, std::move(where));
}

inline Error numeric_error(const std::string& code, const std::string& message,
                           std::vector<double> where = {})
{
    return Error(ErrorKind::Numeric, code, message, std::move(where));
}

} // namespace helico
