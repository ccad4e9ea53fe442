#pragma once

#include "tms/util/log.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        path_ = base / ("tms_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }

    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    const std::filesystem::path& path() const { return path_; }

    std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const
    {
        const auto full = file(name);
        std::ofstream out(full, std::ios::trunc);
        out << content;
        return full;
    }

private:
    std::filesystem::path path_;
};

/// Captures log lines for the lifetime of the guard; restores stderr after.
class LogCapture {
public:
    explicit LogCapture(tms::log::Level level = tms::log::Level::Trace)
        : previous_level_(tms::log::level())
    {
        tms::log::set_level(level);
        tms::log::set_sink([this](tms::log::Level lvl, const std::string& message) {
            std::lock_guard lock(mu_);
            lines_.emplace_back(lvl, message);
        });
    }

    ~LogCapture()
    {
        tms::log::set_sink({});
        tms::log::set_level(previous_level_);
    }

    std::vector<std::pair<tms::log::Level, std::string>> lines() const
    {
        std::lock_guard lock(mu_);
        return lines_;
    }

    bool contains(const std::string& needle) const
    {
        std::lock_guard lock(mu_);
        for (const auto& [lvl, message] : lines_) {
            if (message.find(needle) != std::string::npos) {
                return true;
            }
        }
        return false;
    }

private:
    tms::log::Level previous_level_;
    mutable std::mutex mu_;
    std::vector<std::pair<tms::log::Level, std::string>> lines_;
};

/// Polls until pred() holds or the timeout expires.
inline bool wait_until(const std::function<bool()>& pred, int timeout_ms = 5000,
                       int poll_ms = 5)
{
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (std::chrono::steady_clock::now() < deadline) {
        if (pred()) {
            return true;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(poll_ms));
    }
    return pred();
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace testutil
