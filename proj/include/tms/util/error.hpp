#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tms {

enum class Errc {
    ParseError,
    ValidationError,
    DuplicateListenerId,
    UnknownListener,
    ParentCycle,
    CycleError,
    DuplicateModuleId,
    UnknownDependency,
    UnknownFactory,
    InitError,
    UnknownVehicle,
    BindError,
    ConnectError,
    ProtocolError,
    EncodeError,
    DecodeError,
    TruncatedStream,
    UnknownNode,
    UnknownEdge,
    DanglingEdge,
    ShutdownError,
};

const char* errc_name(Errc code);

/// Base error type carrying a machine-checkable code plus a human message.
class TmsError : public std::runtime_error {
public:
    TmsError(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised when a dependency graph contains a directed cycle. `members()` holds
/// one actual cycle in dependency order: members[i+1] depends on members[i],
/// and members.front() depends on members.back().
class CycleError : public TmsError {
public:
    explicit CycleError(std::vector<std::string> members);

    const std::vector<std::string>& members() const noexcept { return members_; }

private:
    std::vector<std::string> members_;
};

/// Raised when a value violates a field-level constraint; names the field.
class ValidationError : public TmsError {
public:
    ValidationError(const std::string& field, const std::string& message);

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace tms
