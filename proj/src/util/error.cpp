#include "tms/util/error.hpp"

#include <sstream>

namespace tms {

const char* errc_name(Errc code)
{
    switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::DuplicateListenerId: return "DuplicateListenerId";
    case Errc::UnknownListener: return "UnknownListener";
    case Errc::ParentCycle: return "ParentCycle";
    case Errc::CycleError: return "CycleError";
    case Errc::DuplicateModuleId: return "DuplicateModuleId";
    case Errc::UnknownDependency: return "UnknownDependency";
    case Errc::UnknownFactory: return "UnknownFactory";
    case Errc::InitError: return "InitError";
    case Errc::UnknownVehicle: return "UnknownVehicle";
    case Errc::BindError: return "BindError";
    case Errc::ConnectError: return "ConnectError";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::EncodeError: return "EncodeError";
    case Errc::DecodeError: return "DecodeError";
    case Errc::TruncatedStream: return "TruncatedStream";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownEdge: return "UnknownEdge";
    case Errc::DanglingEdge: return "DanglingEdge";
    case Errc::ShutdownError: return "ShutdownError";
    }
    return "UnknownError";
}

TmsError::TmsError(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code)
{
}

namespace {

std::string join_members(const std::vector<std::string>& members)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i != 0) {
            os << " -> ";
        }
        os << members[i];
    }
    return os.str();
}

} // namespace

CycleError::CycleError(std::vector<std::string> members)
    : TmsError(Errc::CycleError, "cyclic dependencies: " + join_members(members)),
      members_(std::move(members))
{
}

ValidationError::ValidationError(const std::string& field, const std::string& message)
    : TmsError(Errc::ValidationError, field + ": " + message), field_(field)
{
}

} // namespace tms
