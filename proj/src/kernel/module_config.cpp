#include "tms/kernel/module_config.hpp"

#include "tms/graph/topo.hpp"
#include "tms/util/error.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <set>

namespace tms::kernel {

namespace pt = boost::property_tree;

namespace {

ModuleSpec parse_module(const pt::ptree& node, const std::string& path)
{
    ModuleSpec spec;
    spec.module_id = node.get<std::string>("<xmlattr>.id", "");
    spec.factory_id = node.get<std::string>("<xmlattr>.factory", "");
    if (spec.module_id.empty()) {
        throw TmsError(Errc::ParseError, path + ": <module> missing non-empty 'id' attribute");
    }
    if (spec.factory_id.empty()) {
        throw TmsError(Errc::ParseError, path + ": module '" + spec.module_id +
                                             "' missing non-empty 'factory' attribute");
    }
    for (const auto& [child_name, child] : node) {
        if (child_name == "<xmlattr>") {
            continue;
        }
        if (child_name == "depends") {
            const std::string dep = child.get_value<std::string>();
            if (dep.empty()) {
                throw TmsError(Errc::ParseError, path + ": module '" + spec.module_id +
                                                     "' has an empty <depends> entry");
            }
            spec.dependencies.push_back(dep);
        } else if (child_name == "param") {
            const std::string key = child.get<std::string>("<xmlattr>.key", "");
            if (key.empty()) {
                throw TmsError(Errc::ParseError, path + ": module '" + spec.module_id +
                                                     "' has a <param> without a key");
            }
            const std::string value = child.get<std::string>("<xmlattr>.value", "");
            if (!spec.params.emplace(key, value).second) {
                throw TmsError(Errc::ParseError, path + ": module '" + spec.module_id +
                                                     "' repeats param '" + key + "'");
            }
        } else {
            throw TmsError(Errc::ParseError, path + ": unexpected element <" + child_name +
                                                 "> in module '" + spec.module_id + "'");
        }
    }
    return spec;
}

} // namespace

std::vector<ModuleSpec> load_module_config(const std::string& path)
{
    pt::ptree tree;
    try {
        pt::read_xml(path, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw TmsError(Errc::ParseError, e.what());
    }

    const auto root = tree.get_child_optional("tms");
    if (!root) {
        throw TmsError(Errc::ParseError, path + ": missing <tms> root element");
    }

    std::vector<ModuleSpec> specs;
    for (const auto& [name, node] : *root) {
        if (name == "<xmlattr>" || name == "<xmlcomment>") {
            continue;
        }
        if (name != "module") {
            throw TmsError(Errc::ParseError, path + ": unexpected element <" + name + ">");
        }
        specs.push_back(parse_module(node, path));
    }
    validate_module_specs(specs);
    return specs;
}

void validate_module_specs(const std::vector<ModuleSpec>& specs)
{
    std::set<std::string> ids;
    for (const auto& spec : specs) {
        if (!ids.insert(spec.module_id).second) {
            throw TmsError(Errc::DuplicateModuleId, "'" + spec.module_id + "'");
        }
    }
    for (const auto& spec : specs) {
        std::set<std::string> seen;
        for (const auto& dep : spec.dependencies) {
            if (!ids.count(dep)) {
                throw TmsError(Errc::UnknownDependency, "'" + dep + "' (required by '" +
                                                            spec.module_id + "')");
            }
            if (!seen.insert(dep).second) {
                throw TmsError(Errc::ParseError, "module '" + spec.module_id +
                                                     "' repeats dependency '" + dep + "'");
            }
        }
    }
}

std::vector<std::string> topological_module_order(const std::vector<ModuleSpec>& specs)
{
    graph::DependencyList nodes;
    nodes.reserve(specs.size());
    for (const auto& spec : specs) {
        nodes.emplace_back(spec.module_id, spec.dependencies);
    }
    return graph::topo_order(nodes);
}

} // namespace tms::kernel
