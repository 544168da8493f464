#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace respkit {

/// Base class for every error raised by respkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A corpus or payload line could not be parsed.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Structurally valid input that violates a domain invariant (dangling id, bad range, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A GenerationRequest is missing a field its setting requires.
class RequestValidationError : public ValidationError {
public:
    RequestValidationError(std::string field, const std::string& what)
        : ValidationError(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A remote or local provider failed. `retriable` marks transport-level failures.
class ProviderError : public Error {
public:
    ProviderError(const std::string& what, bool retriable = false, int attempts = 1)
        : Error(what), retriable_(retriable), attempts_(attempts) {}

    bool retriable() const noexcept { return retriable_; }
    int attempts() const noexcept { return attempts_; }
    const std::string& audit_id() const noexcept { return audit_id_; }
    void set_audit_id(std::string id) { audit_id_ = std::move(id); }

private:
    bool retriable_;
    int attempts_;
    std::string audit_id_;
};

/// Provider answered, but the payload is not what the protocol promises.
class ProtocolError : public ProviderError {
public:
    explicit ProtocolError(const std::string& what) : ProviderError(what, false, 1) {}
};

/// Structured output from a judge did not match the expected schema.
/// The raw payload is kept for audit.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::string raw) : Error(what), raw_(std::move(raw)) {}

    const std::string& raw_payload() const noexcept { return raw_; }

private:
    std::string raw_;
};

}  // namespace respkit
