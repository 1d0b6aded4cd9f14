#ifndef SVSIM_ERRORS_HPP
#define SVSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace svsim {

/// Invalid or inconsistent configuration (bad tier shares, unsupported dims, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mathematical precondition violated (negative Gini entry, dim mismatch, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Event payload failed schema validation.
struct PayloadError : std::runtime_error {
    explicit PayloadError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Subscription registration conflict or unknown event type.
struct RegistrationError : std::runtime_error {
    explicit RegistrationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Event log with gaps or inconsistent sequence numbers.
struct CorruptLogError : std::runtime_error {
    explicit CorruptLogError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-platform caller attempted to mutate the platform registry.
struct AccessViolation : std::runtime_error {
    explicit AccessViolation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Lookup of an unknown entity (content id, agent id).
struct LookupError : std::runtime_error {
    explicit LookupError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operation not admissible for the caller (consumer creating content, ...).
struct PolicyError : std::runtime_error {
    explicit PolicyError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace svsim

#endif // SVSIM_ERRORS_HPP
