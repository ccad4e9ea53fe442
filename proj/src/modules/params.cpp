#include "tms/modules/params.hpp"

#include <cstdlib>

namespace tms::modules {

namespace {

const std::string* find_param(const kernel::ModuleSpec& spec, const std::string& key)
{
    auto it = spec.params.find(key);
    return it == spec.params.end() ? nullptr : &it->second;
}

} // namespace

double param_double(const kernel::ModuleSpec& spec, const std::string& key, double default_value)
{
    const std::string* raw = find_param(spec, key);
    if (raw == nullptr) {
        return default_value;
    }
    char* end = nullptr;
    const double value = std::strtod(raw->c_str(), &end);
    if (end == raw->c_str() || *end != '\0') {
        throw ValidationError(key, "not a number: '" + *raw + "'");
    }
    return value;
}

std::int64_t param_int(const kernel::ModuleSpec& spec, const std::string& key,
                       std::int64_t default_value)
{
    const std::string* raw = find_param(spec, key);
    if (raw == nullptr) {
        return default_value;
    }
    char* end = nullptr;
    const long long value = std::strtoll(raw->c_str(), &end, 10);
    if (end == raw->c_str() || *end != '\0') {
        throw ValidationError(key, "not an integer: '" + *raw + "'");
    }
    return value;
}

std::string param_string(const kernel::ModuleSpec& spec, const std::string& key,
                         const std::string& default_value)
{
    const std::string* raw = find_param(spec, key);
    return raw == nullptr ? default_value : *raw;
}

} // namespace tms::modules
