#pragma once

#include "tms/kernel/module_config.hpp"
#include "tms/util/error.hpp"

#include <cstdint>
#include <string>

namespace tms::modules {

/// Param accessors shared by the sample modules; throw ValidationError
/// naming the param when the value does not parse.
double param_double(const kernel::ModuleSpec& spec, const std::string& key,
                    double default_value);
std::int64_t param_int(const kernel::ModuleSpec& spec, const std::string& key,
                       std::int64_t default_value);
std::string param_string(const kernel::ModuleSpec& spec, const std::string& key,
                         const std::string& default_value);

} // namespace tms::modules
