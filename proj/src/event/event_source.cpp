#include "tms/event/event_source.hpp"

#include "tms/graph/topo.hpp"
#include "tms/util/error.hpp"
#include "tms/util/log.hpp"

#include <algorithm>
#include <set>

namespace tms::event {

std::mutex EventSourceNode::topology_mu_;

EventSourceNode::EventSourceNode(std::string source_id) : source_id_(std::move(source_id))
{
    if (source_id_.empty()) {
        throw ValidationError("source_id", "must be non-empty");
    }
}

void EventSourceNode::set_default_action(EventCallback action)
{
    std::lock_guard lock(mu_);
    default_action_ = std::move(action);
}

void EventSourceNode::set_parent(EventSourceNode* parent)
{
    std::lock_guard lock(topology_mu_);
    for (EventSourceNode* node = parent; node != nullptr; node = node->parent_) {
        if (node == this) {
            throw TmsError(Errc::ParentCycle,
                           "setting parent of '" + source_id_ + "' would close a cycle");
        }
    }
    parent_ = parent;
}

EventSourceNode* EventSourceNode::parent() const
{
    std::lock_guard lock(topology_mu_);
    return parent_;
}

void EventSourceNode::register_listener(ListenerRegistration registration)
{
    if (registration.listener_id.empty()) {
        throw ValidationError("listener_id", "must be non-empty");
    }
    if (!registration.callback) {
        throw ValidationError("callback", "must be set");
    }
    std::set<std::string> dep_set;
    for (const auto& dep : registration.dependencies) {
        if (dep == registration.listener_id) {
            throw ValidationError("dependencies",
                                  "'" + dep + "' lists itself as a dependency");
        }
        if (!dep_set.insert(dep).second) {
            throw ValidationError("dependencies", "duplicate dependency '" + dep + "'");
        }
    }

    std::lock_guard lock(mu_);
    if (listeners_.count(registration.listener_id)) {
        throw TmsError(Errc::DuplicateListenerId,
                       "'" + registration.listener_id + "' on source '" + source_id_ + "'");
    }
    for (const auto& dep : registration.dependencies) {
        if (!listeners_.count(dep)) {
            log::warn("source '", source_id_, "': listener '", registration.listener_id,
                      "' depends on unregistered '", dep, "' (ignored until it registers)");
        }
    }
    listeners_.emplace(registration.listener_id, std::move(registration));
    order_cache_.reset();
}

void EventSourceNode::unregister_listener(const std::string& listener_id)
{
    std::lock_guard lock(mu_);
    if (listeners_.erase(listener_id) == 0) {
        throw TmsError(Errc::UnknownListener,
                       "'" + listener_id + "' on source '" + source_id_ + "'");
    }
    order_cache_.reset();
}

bool EventSourceNode::has_listener(const std::string& listener_id) const
{
    std::lock_guard lock(mu_);
    return listeners_.count(listener_id) != 0;
}

std::size_t EventSourceNode::listener_count() const
{
    std::lock_guard lock(mu_);
    return listeners_.size();
}

std::vector<std::string> EventSourceNode::order_locked() const
{
    if (!order_cache_) {
        graph::DependencyList nodes;
        nodes.reserve(listeners_.size());
        for (const auto& [id, reg] : listeners_) {
            nodes.emplace_back(id, reg.dependencies);
        }
        order_cache_ = graph::topo_order(nodes);
    }
    return *order_cache_;
}

std::vector<std::string> EventSourceNode::listener_order() const
{
    std::lock_guard lock(mu_);
    return order_locked();
}

PropagationTrace EventSourceNode::propagate(const EventDescriptor& ev)
{
    std::vector<EventSourceNode*> chain;
    {
        std::lock_guard lock(topology_mu_);
        for (EventSourceNode* node = this; node != nullptr; node = node->parent_) {
            chain.push_back(node);
        }
    }

    PropagationTrace trace;
    for (EventSourceNode* node : chain) {
        EventCallback default_action;
        std::vector<std::pair<std::string, EventCallback>> ordered;
        std::optional<std::string> order_failure;
        {
            std::lock_guard lock(node->mu_);
            default_action = node->default_action_;
            try {
                for (const auto& id : node->order_locked()) {
                    ordered.emplace_back(id, node->listeners_.at(id).callback);
                }
            } catch (const CycleError& e) {
                order_failure = e.what();
            }
        }

        if (default_action) {
            TraceEntry entry{node->source_id_, HandlerKind::DefaultAction, "default", false, {}};
            try {
                default_action(ev);
            } catch (const std::exception& e) {
                entry.failed = true;
                entry.error = e.what();
                log::error("default action of '", node->source_id_, "' failed on '",
                           ev.event_type(), "': ", e.what());
            } catch (...) {
                entry.failed = true;
                entry.error = "unknown error";
                log::error("default action of '", node->source_id_, "' failed on '",
                           ev.event_type(), "'");
            }
            trace.push_back(std::move(entry));
        }

        if (order_failure) {
            trace.push_back({node->source_id_, HandlerKind::Listener, "(unordered)", true,
                             *order_failure});
            log::error("source '", node->source_id_, "': listeners skipped: ", *order_failure);
            continue;
        }

        for (auto& [listener_id, callback] : ordered) {
            TraceEntry entry{node->source_id_, HandlerKind::Listener, listener_id, false, {}};
            try {
                callback(ev);
            } catch (const std::exception& e) {
                entry.failed = true;
                entry.error = e.what();
                log::error("listener '", listener_id, "' on '", node->source_id_,
                           "' failed on '", ev.event_type(), "': ", e.what());
            } catch (...) {
                entry.failed = true;
                entry.error = "unknown error";
                log::error("listener '", listener_id, "' on '", node->source_id_,
                           "' failed on '", ev.event_type(), "'");
            }
            trace.push_back(std::move(entry));
        }
    }
    return trace;
}

} // namespace tms::event
