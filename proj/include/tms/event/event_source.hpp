#pragma once

#include "tms/event/event.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tms::event {

using EventCallback = std::function<void(const EventDescriptor&)>;

/// A listener plus the listener ids that must run before it. Dependencies may
/// name listeners that are not registered yet; unresolved names are skipped
/// for ordering (with a logged warning at registration time).
struct ListenerRegistration {
    std::string listener_id;
    std::vector<std::string> dependencies;
    EventCallback callback;
};

enum class HandlerKind { DefaultAction, Listener };

/// One handler invocation during propagation, in execution order.
struct TraceEntry {
    std::string source_id;
    HandlerKind kind = HandlerKind::Listener;
    std::string handler_id;
    bool failed = false;
    std::string error;
};

using PropagationTrace = std::vector<TraceEntry>;

/// An event source: optional default action, dependency-ordered listeners and
/// an optional parent forming a propagation chain. Registration tables are
/// safe for concurrent use; distinct events may propagate concurrently, so
/// listener callbacks must tolerate concurrent invocation.
class EventSourceNode {
public:
    explicit EventSourceNode(std::string source_id);

    EventSourceNode(const EventSourceNode&) = delete;
    EventSourceNode& operator=(const EventSourceNode&) = delete;

    const std::string& id() const noexcept { return source_id_; }

    /// Handler executed before the listeners; empty clears it.
    void set_default_action(EventCallback action);

    /// Links this source under `parent` (nullptr detaches). Throws
    /// TmsError{ParentCycle} when the link would close a cycle, including
    /// self-parenting.
    void set_parent(EventSourceNode* parent);
    EventSourceNode* parent() const;

    /// Throws TmsError{DuplicateListenerId} when the id is taken and
    /// ValidationError on a malformed registration (empty id, missing
    /// callback, duplicate or self-referencing dependencies).
    void register_listener(ListenerRegistration registration);

    /// Throws TmsError{UnknownListener}. Listeners depending on the removed
    /// id afterwards treat that dependency as satisfied.
    void unregister_listener(const std::string& listener_id);

    bool has_listener(const std::string& listener_id) const;
    std::size_t listener_count() const;

    /// Execution order over the registered listeners: every registered
    /// dependency precedes its dependent, ties broken lexicographically.
    /// Throws CycleError when the registered dependencies are cyclic.
    /// Cached; recomputed after register/unregister.
    std::vector<std::string> listener_order() const;

    /// Runs the three propagation steps on every source from this node up to
    /// the root parent: default action, listeners in listener_order, then the
    /// parent. Handler failures are recorded in the trace and logged; they
    /// never abort propagation. A listener-dependency cycle on a source skips
    /// that source's listeners (recorded in the trace as a failed entry).
    PropagationTrace propagate(const EventDescriptor& ev);

private:
    std::vector<std::string> order_locked() const;

    std::string source_id_;

    mutable std::mutex mu_; // listeners, default action, order cache
    std::map<std::string, ListenerRegistration> listeners_;
    EventCallback default_action_;
    mutable std::optional<std::vector<std::string>> order_cache_;

    EventSourceNode* parent_ = nullptr;

    // One lock for all parent links keeps cycle checks and chain snapshots
    // consistent across sources.
    static std::mutex topology_mu_;
};

} // namespace tms::event
