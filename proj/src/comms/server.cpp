#include "tms/comms/server.hpp"

#include "tms/proto/codec.hpp"
#include "tms/util/error.hpp"
#include "tms/util/log.hpp"
#include "tms/util/time.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <system_error>

namespace tms::comms {

const char* send_status_name(SendStatus status)
{
    switch (status) {
    case SendStatus::Ok: return "Ok";
    case SendStatus::UnknownVehicle: return "UnknownVehicle";
    case SendStatus::QueueFull: return "QueueFull";
    }
    return "?";
}

/// One connection: a reader thread decoding frames into the global queue and
/// a writer thread draining the bounded local queue to the socket.
class CommsServer::VehicleWorker {
public:
    enum class State { Connected, LoggedIn, Closed };

    VehicleWorker(CommsServer& server, net::Socket socket, std::size_t queue_capacity)
        : server_(server), socket_(std::move(socket)), outbound_(queue_capacity)
    {
    }

    void start(std::shared_ptr<VehicleWorker> self)
    {
        writer_ = std::thread([this] { writer_main(); });
        reader_ = std::thread([self = std::move(self)] { self->reader_main(self); });
    }

    /// Wakes both threads; safe to call repeatedly and from any thread.
    void close()
    {
        state_.store(State::Closed);
        outbound_.close();
        socket_.shutdown_both();
    }

    void join()
    {
        std::lock_guard lock(join_mu_);
        if (reader_.joinable()) {
            reader_.join();
        }
        if (writer_.joinable()) {
            writer_.join();
        }
    }

    bool finished() const { return finished_.load(); }
    State state() const { return state_.load(); }
    const std::string& vehicle_id() const { return vehicle_id_; }

    bool try_enqueue(const proto::Message& msg) { return outbound_.try_push(msg); }

private:
    void reader_main(const std::shared_ptr<VehicleWorker>& self)
    {
        bool logged_in = false;
        try {
            auto first = proto::read_frame(socket_);
            if (first && first->type != proto::MsgType::Login) {
                server_.stats_.decode_errors.fetch_add(1);
                log::warn("protocol error: first frame from new connection is ",
                          proto::msg_type_name(first->type), ", expected LOGIN; closing");
            } else if (first) {
                vehicle_id_ = first->vehicle_id;
                logged_in = true;
                server_.register_login(self, vehicle_id_);
                read_loop();
            }
        } catch (const TmsError& e) {
            server_.stats_.decode_errors.fetch_add(1);
            log::warn("protocol error on connection", logged_in ? " of " + vehicle_id_ : "",
                      ": ", e.what(), "; closing");
        } catch (const std::system_error& e) {
            log::debug("connection read failed: ", e.what());
        }

        close();
        if (logged_in) {
            server_.worker_finished(*this);
        }
        finished_.store(true);
    }

    void read_loop()
    {
        for (;;) {
            auto msg = proto::read_frame(socket_);
            if (!msg) {
                return;
            }
            server_.stats_.frames_decoded.fetch_add(1);
            server_.queue_for(vehicle_id_)
                .push(InboundEnvelope{vehicle_id_, std::move(*msg), util::now_ms()});
            server_.stats_.envelopes_enqueued.fetch_add(1);
        }
    }

    void writer_main()
    {
        for (;;) {
            auto msg = outbound_.pop();
            if (!msg) {
                return;
            }
            try {
                proto::write_frame(socket_, *msg);
                server_.stats_.outbound_sent.fetch_add(1);
            } catch (const std::system_error& e) {
                log::debug("outbound write to '", vehicle_id_, "' failed: ", e.what());
                close(); // reader wakes on the shutdown and runs the logout path
                return;
            } catch (const TmsError& e) {
                log::error("dropping unencodable outbound message: ", e.what());
            }
        }
    }

    friend class CommsServer;

    CommsServer& server_;
    net::Socket socket_;
    BoundedQueue<proto::Message> outbound_;
    std::atomic<State> state_{State::Connected};
    std::string vehicle_id_;
    std::thread reader_;
    std::thread writer_;
    std::mutex join_mu_;
    std::atomic<bool> finished_{false};
};

CommsServer::CommsServer(ServerConfig config, InboundHandler& handler)
    : config_(config), handler_(handler)
{
    if (config_.dispatcher_count == 0) {
        config_.dispatcher_count = 1;
    }
    if (config_.local_queue_capacity == 0) {
        config_.local_queue_capacity = 1;
    }
}

CommsServer::~CommsServer()
{
    stop();
}

void CommsServer::start()
{
    if (running_.load() || stopped_.load()) {
        return;
    }
    listener_.bind_listen(config_.port);

    const std::size_t queue_count = config_.sticky_dispatch ? config_.dispatcher_count : 1;
    queues_.clear();
    for (std::size_t i = 0; i < queue_count; ++i) {
        queues_.push_back(std::make_unique<BlockingQueue<InboundEnvelope>>());
    }
    dispatchers_.reserve(config_.dispatcher_count);
    for (std::size_t i = 0; i < config_.dispatcher_count; ++i) {
        dispatchers_.emplace_back([this, i] { dispatch_loop(i); });
    }
    running_.store(true);
    accept_thread_ = std::thread([this] { accept_loop(); });
    log::info("comms server listening on port ", listener_.port(), " with ",
              config_.dispatcher_count, " dispatchers",
              config_.sticky_dispatch ? " (sticky)" : "");
}

void CommsServer::stop()
{
    if (stopped_.exchange(true) || !running_.load()) {
        return;
    }
    running_.store(false);
    listener_.close();
    if (accept_thread_.joinable()) {
        accept_thread_.join();
    }

    std::vector<std::shared_ptr<VehicleWorker>> snapshot;
    {
        std::lock_guard lock(workers_mu_);
        snapshot = workers_;
    }
    for (const auto& worker : snapshot) {
        worker->close();
    }
    for (const auto& worker : snapshot) {
        worker->join();
    }
    {
        std::lock_guard lock(workers_mu_);
        workers_.clear();
        registry_.clear();
    }

    // Dispatchers drain whatever is already enqueued, then exit.
    for (const auto& queue : queues_) {
        queue->close();
    }
    for (auto& dispatcher : dispatchers_) {
        if (dispatcher.joinable()) {
            dispatcher.join();
        }
    }
    dispatchers_.clear();
    log::info("comms server stopped; handled ", stats_.envelopes_handled.load(),
              " envelopes of ", stats_.envelopes_enqueued.load(), " enqueued");
}

std::uint16_t CommsServer::bound_port() const
{
    return listener_.port();
}

void CommsServer::accept_loop()
{
    for (;;) {
        std::optional<net::Socket> socket;
        try {
            socket = listener_.accept();
        } catch (const std::system_error& e) {
            log::error("accept failed: ", e.what());
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
            continue;
        }
        if (!socket) {
            return;
        }
        stats_.connections_accepted.fetch_add(1);
        if (config_.send_buffer_bytes > 0) {
            socket->set_send_buffer(config_.send_buffer_bytes);
        }
        auto worker =
            std::make_shared<VehicleWorker>(*this, std::move(*socket), config_.local_queue_capacity);
        {
            std::lock_guard lock(workers_mu_);
            workers_.push_back(worker);
        }
        worker->start(worker);
        reap_finished_workers();
    }
}

void CommsServer::reap_finished_workers()
{
    std::vector<std::shared_ptr<VehicleWorker>> finished;
    {
        std::lock_guard lock(workers_mu_);
        auto it = std::partition(workers_.begin(), workers_.end(),
                                 [](const auto& w) { return !w->finished(); });
        finished.assign(it, workers_.end());
        workers_.erase(it, workers_.end());
    }
    for (const auto& worker : finished) {
        worker->join();
    }
}

void CommsServer::dispatch_loop(std::size_t dispatcher_index)
{
    auto& queue = *queues_[config_.sticky_dispatch ? dispatcher_index : 0];
    for (;;) {
        auto envelope = queue.pop();
        if (!envelope) {
            return;
        }
        try {
            handler_.handle_inbound_message(*envelope);
        } catch (const std::exception& e) {
            stats_.handler_errors.fetch_add(1);
            log::error("inbound handler failed for '", envelope->vehicle_id, "': ", e.what());
        } catch (...) {
            stats_.handler_errors.fetch_add(1);
            log::error("inbound handler failed for '", envelope->vehicle_id, "'");
        }
        stats_.envelopes_handled.fetch_add(1);
    }
}

BlockingQueue<InboundEnvelope>& CommsServer::queue_for(const std::string& vehicle_id)
{
    if (!config_.sticky_dispatch) {
        return *queues_[0];
    }
    const std::size_t index = std::hash<std::string>{}(vehicle_id) % queues_.size();
    return *queues_[index];
}

void CommsServer::register_login(const std::shared_ptr<VehicleWorker>& worker,
                                 const std::string& vehicle_id)
{
    std::shared_ptr<VehicleWorker> superseded;
    {
        std::lock_guard lock(workers_mu_);
        auto it = registry_.find(vehicle_id);
        if (it != registry_.end()) {
            superseded = it->second;
            it->second = worker;
        } else {
            registry_.emplace(vehicle_id, worker);
        }
        worker->state_.store(VehicleWorker::State::LoggedIn);
    }
    if (superseded) {
        log::info("vehicle '", vehicle_id, "' logged in again; superseding the old connection");
        superseded->close();
    } else {
        log::info("vehicle '", vehicle_id, "' logged in");
    }
    handler_.on_vehicle_logged_in(vehicle_id, util::now_ms());
}

void CommsServer::worker_finished(VehicleWorker& worker)
{
    bool was_registered = false;
    {
        std::lock_guard lock(workers_mu_);
        auto it = registry_.find(worker.vehicle_id());
        if (it != registry_.end() && it->second.get() == &worker) {
            registry_.erase(it);
            was_registered = true;
        }
    }
    // A superseded worker finds itself already replaced and stays quiet.
    if (was_registered) {
        log::info("vehicle '", worker.vehicle_id(), "' logged out");
        handler_.on_vehicle_logged_out(worker.vehicle_id(), util::now_ms());
    }
}

SendStatus CommsServer::send_to_vehicle(const std::string& vehicle_id, const proto::Message& msg)
{
    std::shared_ptr<VehicleWorker> worker;
    {
        std::lock_guard lock(workers_mu_);
        auto it = registry_.find(vehicle_id);
        if (it == registry_.end()) {
            return SendStatus::UnknownVehicle;
        }
        worker = it->second;
    }
    return worker->try_enqueue(msg) ? SendStatus::Ok : SendStatus::QueueFull;
}

std::size_t CommsServer::broadcast(const proto::Message& msg)
{
    std::vector<std::pair<std::string, std::shared_ptr<VehicleWorker>>> targets;
    {
        std::lock_guard lock(workers_mu_);
        targets.assign(registry_.begin(), registry_.end());
    }
    std::size_t enqueued = 0;
    for (const auto& [vehicle_id, worker] : targets) {
        if (worker->try_enqueue(msg)) {
            ++enqueued;
        } else {
            stats_.outbound_dropped.fetch_add(1);
            log::warn("broadcast skipped '", vehicle_id, "': local queue full");
        }
    }
    return enqueued;
}

std::vector<std::string> CommsServer::logged_in_vehicles() const
{
    std::vector<std::string> ids;
    {
        std::lock_guard lock(workers_mu_);
        ids.reserve(registry_.size());
        for (const auto& [vehicle_id, worker] : registry_) {
            ids.push_back(vehicle_id);
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

bool CommsServer::is_logged_in(const std::string& vehicle_id) const
{
    std::lock_guard lock(workers_mu_);
    return registry_.count(vehicle_id) != 0;
}

ServerStats CommsServer::stats() const
{
    ServerStats out;
    out.connections_accepted = stats_.connections_accepted.load();
    out.frames_decoded = stats_.frames_decoded.load();
    out.envelopes_enqueued = stats_.envelopes_enqueued.load();
    out.envelopes_handled = stats_.envelopes_handled.load();
    out.decode_errors = stats_.decode_errors.load();
    out.handler_errors = stats_.handler_errors.load();
    out.outbound_sent = stats_.outbound_sent.load();
    out.outbound_dropped = stats_.outbound_dropped.load();
    return out;
}

} // namespace tms::comms
