#pragma once

#include <map>
#include <string>
#include <vector>

namespace tms::kernel {

/// Declarative record of one decision module, as read from the XML
/// configuration.
struct ModuleSpec {
    std::string module_id;
    std::string factory_id;
    std::vector<std::string> dependencies; // module ids that run earlier
    std::map<std::string, std::string> params;

    bool operator==(const ModuleSpec&) const = default;
};

/// Loads and validates the module configuration:
///   <tms>
///     <module id="NAME" factory="FACTORY_ID">
///       <depends>OTHER_ID</depends>
///       <param key="K" value="V"/>
///     </module>
///   </tms>
/// Returns specs in file order. Throws TmsError{ParseError} on malformed
/// files, TmsError{DuplicateModuleId} and TmsError{UnknownDependency}.
std::vector<ModuleSpec> load_module_config(const std::string& path);

/// Validation shared with programmatic spec lists (id uniqueness, dependency
/// closure, no duplicate dependency entries).
void validate_module_specs(const std::vector<ModuleSpec>& specs);

/// Initialization/execution order: every dependency precedes its dependent,
/// ties broken lexicographically. Throws CycleError naming the cycle.
std::vector<std::string> topological_module_order(const std::vector<ModuleSpec>& specs);

} // namespace tms::kernel
