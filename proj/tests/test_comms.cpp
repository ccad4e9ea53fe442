#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tms/comms/server.hpp"
#include "tms/proto/codec.hpp"
#include "tms/util/error.hpp"
#include "tms/util/time.hpp"

#include "support/helpers.hpp"

#include <netinet/in.h>
#include <sys/resource.h>
#include <sys/socket.h>

#include <map>
#include <mutex>
#include <set>
#include <thread>

using namespace tms;
using namespace tms::comms;
using tms::proto::Message;

namespace {

/// Records everything the dispatchers hand over.
class RecordingHandler : public InboundHandler {
public:
    void handle_inbound_message(const InboundEnvelope& envelope) override
    {
        std::lock_guard lock(mu_);
        envelopes_.push_back(envelope);
        if (envelope.message.type == proto::MsgType::Telemetry) {
            sequences_[envelope.vehicle_id].push_back(
                std::get<proto::TelemetryBody>(envelope.message.body).timestamp_ms);
        }
    }

    void on_vehicle_logged_in(const std::string& vehicle_id, std::int64_t) override
    {
        std::lock_guard lock(mu_);
        ++logins_[vehicle_id];
    }

    void on_vehicle_logged_out(const std::string& vehicle_id, std::int64_t) override
    {
        std::lock_guard lock(mu_);
        ++logouts_[vehicle_id];
    }

    std::size_t envelope_count() const
    {
        std::lock_guard lock(mu_);
        return envelopes_.size();
    }

    std::vector<std::uint64_t> sequence(const std::string& vehicle_id) const
    {
        std::lock_guard lock(mu_);
        auto it = sequences_.find(vehicle_id);
        return it == sequences_.end() ? std::vector<std::uint64_t>{} : it->second;
    }

    int logins(const std::string& vehicle_id) const
    {
        std::lock_guard lock(mu_);
        auto it = logins_.find(vehicle_id);
        return it == logins_.end() ? 0 : it->second;
    }

    int logouts(const std::string& vehicle_id) const
    {
        std::lock_guard lock(mu_);
        auto it = logouts_.find(vehicle_id);
        return it == logouts_.end() ? 0 : it->second;
    }

private:
    mutable std::mutex mu_;
    std::vector<InboundEnvelope> envelopes_;
    std::map<std::string, std::vector<std::uint64_t>> sequences_;
    std::map<std::string, int> logins_;
    std::map<std::string, int> logouts_;
};

/// Raw RVTP client for driving the server directly.
struct Client {
    net::Socket socket;

    static Client connect(std::uint16_t port, int rcvbuf_bytes = 0)
    {
        if (rcvbuf_bytes <= 0) {
            return {net::Socket::connect_to("127.0.0.1", port)};
        }
        // SO_RCVBUF must be set before connect to shrink the offered window.
        const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        REQUIRE(fd >= 0);
        ::setsockopt(fd, SOL_SOCKET, SO_RCVBUF, &rcvbuf_bytes, sizeof rcvbuf_bytes);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
        return {net::Socket(fd)};
    }

    void login(const std::string& vehicle_id)
    {
        send(proto::make_login(vehicle_id));
    }

    void send(const Message& msg)
    {
        const auto frame = proto::marshal_frame(msg);
        socket.write_all(frame.data(), frame.size());
    }

    void send_bytes(const std::vector<std::uint8_t>& bytes)
    {
        socket.write_all(bytes.data(), bytes.size());
    }

    std::optional<Message> read() { return proto::read_frame(socket); }

    bool closed_by_server()
    {
        try {
            return !proto::read_frame(socket).has_value();
        } catch (const TmsError&) {
            return true;
        } catch (const std::system_error&) {
            return true;
        }
    }
};

Message telemetry(const std::string& id, std::uint64_t seq)
{
    return proto::make_telemetry(id, seq, 48.85, 2.35, 10.0);
}

double process_cpu_seconds()
{
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    const auto to_seconds = [](const timeval& tv) {
        return static_cast<double>(tv.tv_sec) + static_cast<double>(tv.tv_usec) / 1e6;
    };
    return to_seconds(usage.ru_utime) + to_seconds(usage.ru_stime);
}

} // namespace

TEST_CASE("queues: bounded capacity and blocking pop")
{
    BoundedQueue<int> queue(4);
    for (int i = 0; i < 4; ++i) {
        CHECK(queue.try_push(i));
    }
    CHECK_FALSE(queue.try_push(99)); // capacity + 1 overflows
    CHECK(queue.pop() == 0);
    CHECK(queue.try_push(4)); // space again
    queue.close();
    CHECK_FALSE(queue.try_push(5));
    CHECK_FALSE(queue.pop().has_value()); // closed queues do not drain

    BlockingQueue<int> global;
    global.push(1);
    global.push(2);
    global.close();
    CHECK(global.pop() == 1); // closed global queues drain first
    CHECK(global.pop() == 2);
    CHECK_FALSE(global.pop().has_value());
}

TEST_CASE("login accepted, telemetry dispatched, logout on disconnect")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    config.dispatcher_count = 2;
    CommsServer server(config, handler);
    server.start();

    {
        Client client = Client::connect(server.bound_port());
        client.login("v1");
        CHECK(testutil::wait_until([&] { return server.is_logged_in("v1"); }));
        CHECK(handler.logins("v1") == 1);

        client.send(telemetry("v1", 7));
        CHECK(testutil::wait_until([&] { return handler.envelope_count() == 1; }));
        CHECK(handler.sequence("v1") == std::vector<std::uint64_t>{7});
        CHECK(server.logged_in_vehicles() == std::vector<std::string>{"v1"});
        // client disconnects at scope exit
    }
    CHECK(testutil::wait_until([&] { return handler.logouts("v1") == 1; }));
    CHECK(testutil::wait_until([&] { return !server.is_logged_in("v1"); }));
    CHECK(server.send_to_vehicle("v1", telemetry("v1", 1)) == SendStatus::UnknownVehicle);

    server.stop();
    const auto stats = server.stats();
    CHECK(stats.envelopes_enqueued == 1);
    CHECK(stats.envelopes_handled == 1);
}

TEST_CASE("binding an occupied port is a BindError")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    CommsServer first(config, handler);
    first.start();

    ServerConfig second_config;
    second_config.port = first.bound_port();
    CommsServer second(second_config, handler);
    try {
        second.start();
        FAIL("expected BindError");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::BindError);
    }
    first.stop();
}

TEST_CASE("a first frame that is not LOGIN closes the connection")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    CommsServer server(config, handler);
    server.start();

    Client client = Client::connect(server.bound_port());
    client.send(telemetry("v1", 1));
    CHECK(client.closed_by_server());
    CHECK(server.logged_in_vehicles().empty());
    CHECK(handler.envelope_count() == 0);
    server.stop();
    CHECK(server.stats().decode_errors == 1);
}

TEST_CASE("a LOGIN with an empty vehicle id closes the connection")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    CommsServer server(config, handler);
    server.start();

    Client client = Client::connect(server.bound_port());
    // Hand-built frame: length 3, LOGIN, id length 0.
    client.send_bytes({0x00, 0x00, 0x00, 0x03, 0x01, 0x00, 0x00});
    CHECK(client.closed_by_server());
    CHECK(server.logged_in_vehicles().empty());
    server.stop();
}

TEST_CASE("an oversized declared frame closes the connection")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    CommsServer server(config, handler);
    server.start();

    Client client = Client::connect(server.bound_port());
    client.login("v1");
    client.send_bytes({0x00, 0x20, 0x00, 0x00}); // declares 2 MiB
    CHECK(client.closed_by_server());
    server.stop();
}

TEST_CASE("100 frames from one vehicle keep wire order through the global queue")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    config.dispatcher_count = 1; // one consumer exposes the queue order
    CommsServer server(config, handler);
    server.start();

    Client client = Client::connect(server.bound_port());
    client.login("v1");
    for (std::uint64_t seq = 0; seq < 100; ++seq) {
        client.send(telemetry("v1", seq));
    }
    CHECK(testutil::wait_until([&] { return handler.envelope_count() == 100; }));

    const auto sequence = handler.sequence("v1");
    REQUIRE(sequence.size() == 100);
    for (std::uint64_t seq = 0; seq < 100; ++seq) {
        CHECK(sequence[seq] == seq);
    }
    server.stop();
}

TEST_CASE("multiple dispatchers handle every envelope exactly once")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    config.dispatcher_count = 2;
    CommsServer server(config, handler);
    server.start();

    constexpr int kVehicles = 5;
    constexpr std::uint64_t kFrames = 100;
    std::vector<std::thread> clients;
    for (int v = 0; v < kVehicles; ++v) {
        clients.emplace_back([&, v] {
            Client client = Client::connect(server.bound_port());
            const std::string id = "v" + std::to_string(v);
            client.login(id);
            for (std::uint64_t seq = 0; seq < kFrames; ++seq) {
                client.send(telemetry(id, seq));
            }
            // Hold the connection until everything is dispatched.
            CHECK(testutil::wait_until(
                [&] { return handler.sequence(id).size() == kFrames; }));
        });
    }
    for (auto& thread : clients) {
        thread.join();
    }

    CHECK(handler.envelope_count() == kVehicles * kFrames);
    for (int v = 0; v < kVehicles; ++v) {
        const auto sequence = handler.sequence("v" + std::to_string(v));
        std::set<std::uint64_t> unique(sequence.begin(), sequence.end());
        CHECK(unique.size() == kFrames); // exactly once per frame
    }
    server.stop();
    CHECK(server.stats().envelopes_enqueued == kVehicles * kFrames);
    CHECK(server.stats().envelopes_handled == kVehicles * kFrames);
}

TEST_CASE("sticky dispatch preserves per-vehicle order end to end")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    config.dispatcher_count = 4;
    config.sticky_dispatch = true;
    CommsServer server(config, handler);
    server.start();

    constexpr int kVehicles = 3;
    constexpr std::uint64_t kFrames = 200;
    std::vector<std::thread> clients;
    for (int v = 0; v < kVehicles; ++v) {
        clients.emplace_back([&, v] {
            Client client = Client::connect(server.bound_port());
            const std::string id = "sticky" + std::to_string(v);
            client.login(id);
            for (std::uint64_t seq = 0; seq < kFrames; ++seq) {
                client.send(telemetry(id, seq));
            }
            CHECK(testutil::wait_until(
                [&] { return handler.sequence(id).size() == kFrames; }));
        });
    }
    for (auto& thread : clients) {
        thread.join();
    }

    for (int v = 0; v < kVehicles; ++v) {
        const auto sequence = handler.sequence("sticky" + std::to_string(v));
        REQUIRE(sequence.size() == kFrames);
        for (std::uint64_t seq = 0; seq < kFrames; ++seq) {
            CHECK(sequence[seq] == seq);
        }
    }
    server.stop();
}

TEST_CASE("duplicate login supersedes the old connection")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    CommsServer server(config, handler);
    server.start();

    Client old_client = Client::connect(server.bound_port());
    old_client.login("v1");
    CHECK(testutil::wait_until([&] { return server.is_logged_in("v1"); }));

    Client new_client = Client::connect(server.bound_port());
    new_client.login("v1");
    CHECK(testutil::wait_until([&] { return handler.logins("v1") == 2; }));

    // The old connection is closed by the server; no logout event fires
    // because the vehicle is still logged in through the new connection.
    CHECK(old_client.closed_by_server());
    CHECK(server.is_logged_in("v1"));
    CHECK(handler.logouts("v1") == 0);

    // Traffic lands on the new connection.
    CHECK(server.send_to_vehicle("v1", proto::make_ack("v1", 5)) == SendStatus::Ok);
    const auto received = new_client.read();
    REQUIRE(received.has_value());
    CHECK(received->type == proto::MsgType::Ack);
    server.stop();
}

TEST_CASE("outbound FIFO: a vehicle receives messages in enqueue order")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    CommsServer server(config, handler);
    server.start();

    Client client = Client::connect(server.bound_port());
    client.login("v1");
    CHECK(testutil::wait_until([&] { return server.is_logged_in("v1"); }));

    for (std::uint32_t seq = 0; seq < 50; ++seq) {
        CHECK(server.send_to_vehicle("v1", proto::make_ack("v1", seq)) == SendStatus::Ok);
    }
    for (std::uint32_t seq = 0; seq < 50; ++seq) {
        const auto msg = client.read();
        REQUIRE(msg.has_value());
        CHECK(std::get<proto::AckBody>(msg->body).sequence == seq);
    }
    server.stop();
}

TEST_CASE("a stalled vehicle overflows its bounded local queue")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    config.local_queue_capacity = 4;
    config.send_buffer_bytes = 4096; // make the writer block quickly
    CommsServer server(config, handler);
    server.start();

    // Small receive window and a client that never reads.
    Client stalled = Client::connect(server.bound_port(), 4096);
    stalled.login("stalled");
    CHECK(testutil::wait_until([&] { return server.is_logged_in("stalled"); }));

    const auto big = proto::make_app("stalled", std::vector<std::uint8_t>(256 * 1024, 0xAA));
    int ok_count = 0;
    bool queue_full = false;
    for (int attempt = 0; attempt < 32 && !queue_full; ++attempt) {
        switch (server.send_to_vehicle("stalled", big)) {
        case SendStatus::Ok:
            ++ok_count;
            break;
        case SendStatus::QueueFull:
            queue_full = true;
            break;
        case SendStatus::UnknownVehicle:
            FAIL("vehicle disappeared");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    CHECK(queue_full);
    // The writer can hold at most a couple of frames in flight beyond the
    // queue capacity.
    CHECK(ok_count >= 4);
    CHECK(ok_count <= 8);

    // Broadcast skips the stalled vehicle but reaches the healthy ones.
    std::vector<Client> healthy;
    for (int v = 0; v < 4; ++v) {
        healthy.push_back(Client::connect(server.bound_port()));
        healthy.back().login("h" + std::to_string(v));
    }
    CHECK(testutil::wait_until([&] { return server.logged_in_vehicles().size() == 5; }));
    CHECK(server.broadcast(proto::make_warning("fleet", 1, "slow down")) == 4);
    CHECK(server.stats().outbound_dropped >= 1);
    server.stop();
}

TEST_CASE("broadcast on an empty fleet returns 0")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    CommsServer server(config, handler);
    server.start();
    CHECK(server.broadcast(proto::make_warning("fleet", 1, "anyone there?")) == 0);
    server.stop();
}

TEST_CASE("idle dispatchers block without busy-waiting")
{
    RecordingHandler handler;
    ServerConfig config;
    config.port = 0;
    config.dispatcher_count = 4;
    CommsServer server(config, handler);
    server.start();

    const double cpu_before = process_cpu_seconds();
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    const double cpu_delta = process_cpu_seconds() - cpu_before;
    // Four spinning dispatchers would burn ~1.6 s of CPU here.
    CHECK(cpu_delta < 0.2);
    server.stop();
}

TEST_CASE("stop drains already-enqueued envelopes and joins within the grace period")
{
    class SlowHandler : public InboundHandler {
    public:
        void handle_inbound_message(const InboundEnvelope&) override
        {
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
            ++handled;
        }
        std::atomic<int> handled{0};
    };

    SlowHandler handler;
    ServerConfig config;
    config.port = 0;
    config.dispatcher_count = 2;
    CommsServer server(config, handler);
    server.start();

    constexpr std::uint64_t kFrames = 200;
    Client client = Client::connect(server.bound_port());
    client.login("v1");
    for (std::uint64_t seq = 0; seq < kFrames; ++seq) {
        client.send(telemetry("v1", seq));
    }
    // Wait until the workers have decoded and enqueued everything, then stop
    // while the slow dispatchers are still mid-drain.
    CHECK(testutil::wait_until([&] { return server.stats().envelopes_enqueued == kFrames; }));

    const auto started = util::steady_ms();
    server.stop();
    const auto elapsed = util::steady_ms() - started;
    CHECK(elapsed < 5000);
    CHECK(server.stats().envelopes_enqueued == kFrames);
    CHECK(server.stats().envelopes_handled == kFrames);
    CHECK(static_cast<std::uint64_t>(handler.handled.load()) == kFrames);
}
