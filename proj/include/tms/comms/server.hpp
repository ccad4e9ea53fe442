#pragma once

#include "tms/comms/envelope.hpp"
#include "tms/comms/queues.hpp"
#include "tms/net/socket.hpp"
#include "tms/proto/message.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace tms::comms {

/// Consumer side of the communication subsystem, implemented by the
/// telematic protocol layer. handle_inbound_message runs on dispatcher
/// threads, possibly concurrently; the lifecycle hooks run on worker threads.
class InboundHandler {
public:
    virtual ~InboundHandler() = default;

    virtual void handle_inbound_message(const InboundEnvelope& envelope) = 0;
    virtual void on_vehicle_logged_in(const std::string& vehicle_id, std::int64_t at_ms)
    {
        (void)vehicle_id;
        (void)at_ms;
    }
    virtual void on_vehicle_logged_out(const std::string& vehicle_id, std::int64_t at_ms)
    {
        (void)vehicle_id;
        (void)at_ms;
    }
};

struct ServerConfig {
    std::uint16_t port = 7077; // 0 picks an ephemeral port
    std::size_t dispatcher_count = 4;
    std::size_t local_queue_capacity = 256;
    /// Routes each vehicle to one fixed dispatcher, preserving per-vehicle
    /// handling order end-to-end.
    bool sticky_dispatch = false;
    /// SO_SNDBUF for accepted connections; 0 leaves the OS default.
    int send_buffer_bytes = 0;
};

struct ServerStats {
    std::uint64_t connections_accepted = 0;
    std::uint64_t frames_decoded = 0;
    std::uint64_t envelopes_enqueued = 0;
    std::uint64_t envelopes_handled = 0;
    std::uint64_t decode_errors = 0;
    std::uint64_t handler_errors = 0;
    std::uint64_t outbound_sent = 0;
    std::uint64_t outbound_dropped = 0;
};

enum class SendStatus { Ok, UnknownVehicle, QueueFull };

const char* send_status_name(SendStatus status);

/// TCP front end: one vehicle worker per connection (reader plus outbound
/// writer around a bounded local queue), a FIFO global queue of decoded
/// envelopes, and a dispatcher pool feeding the InboundHandler.
///
/// Sessions start with a mandatory LOGIN frame; anything else closes the
/// connection. A later LOGIN for an id that is already live supersedes the
/// old connection. stop() quiesces accept and workers, then lets dispatchers
/// drain every envelope already enqueued.
class CommsServer {
public:
    CommsServer(ServerConfig config, InboundHandler& handler);
    ~CommsServer();

    CommsServer(const CommsServer&) = delete;
    CommsServer& operator=(const CommsServer&) = delete;

    /// Binds, starts the accept loop and the dispatcher pool. Throws
    /// TmsError{BindError} when the port is taken.
    void start();

    /// Idempotent; joins every worker and dispatcher thread.
    void stop();

    bool running() const { return running_.load(); }
    std::uint16_t bound_port() const;

    SendStatus send_to_vehicle(const std::string& vehicle_id, const proto::Message& msg);

    /// Enqueues on every logged-in vehicle; returns how many succeeded.
    /// Vehicles with a full local queue are skipped and counted in
    /// stats().outbound_dropped.
    std::size_t broadcast(const proto::Message& msg);

    std::vector<std::string> logged_in_vehicles() const;
    bool is_logged_in(const std::string& vehicle_id) const;

    ServerStats stats() const;

private:
    class VehicleWorker;
    friend class VehicleWorker;

    void accept_loop();
    void dispatch_loop(std::size_t dispatcher_index);
    BlockingQueue<InboundEnvelope>& queue_for(const std::string& vehicle_id);
    void reap_finished_workers();

    // Worker callbacks.
    void register_login(const std::shared_ptr<VehicleWorker>& worker,
                        const std::string& vehicle_id);
    void worker_finished(VehicleWorker& worker);

    ServerConfig config_;
    InboundHandler& handler_;

    net::ListenSocket listener_;
    std::thread accept_thread_;
    std::atomic<bool> running_{false};
    std::atomic<bool> stopped_{false};

    mutable std::mutex workers_mu_;
    std::vector<std::shared_ptr<VehicleWorker>> workers_;
    std::unordered_map<std::string, std::shared_ptr<VehicleWorker>> registry_;

    std::vector<std::unique_ptr<BlockingQueue<InboundEnvelope>>> queues_;
    std::vector<std::thread> dispatchers_;

    struct AtomicStats {
        std::atomic<std::uint64_t> connections_accepted{0};
        std::atomic<std::uint64_t> frames_decoded{0};
        std::atomic<std::uint64_t> envelopes_enqueued{0};
        std::atomic<std::uint64_t> envelopes_handled{0};
        std::atomic<std::uint64_t> decode_errors{0};
        std::atomic<std::uint64_t> handler_errors{0};
        std::atomic<std::uint64_t> outbound_sent{0};
        std::atomic<std::uint64_t> outbound_dropped{0};
    };
    AtomicStats stats_;
};

} // namespace tms::comms
