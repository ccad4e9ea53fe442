#pragma once

#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>

namespace tms::comms {

/// Unbounded MPMC FIFO. push never blocks; pop blocks until an item arrives
/// or the queue is closed. After close(), pop drains the remaining items and
/// then returns nullopt.
template <typename T>
class BlockingQueue {
public:
    void push(T item)
    {
        {
            std::lock_guard lock(mu_);
            if (closed_) {
                return;
            }
            items_.push_back(std::move(item));
        }
        cv_.notify_one();
    }

    std::optional<T> pop()
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [this] { return closed_ || !items_.empty(); });
        if (items_.empty()) {
            return std::nullopt;
        }
        T item = std::move(items_.front());
        items_.pop_front();
        return item;
    }

    void close()
    {
        {
            std::lock_guard lock(mu_);
            closed_ = true;
        }
        cv_.notify_all();
    }

    std::size_t size() const
    {
        std::lock_guard lock(mu_);
        return items_.size();
    }

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<T> items_;
    bool closed_ = false;
};

/// Bounded FIFO for per-vehicle outbound messages. try_push fails when full
/// or closed; pop blocks and returns nullopt immediately once closed (a
/// closed worker does not drain its backlog).
template <typename T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

    bool try_push(T item)
    {
        {
            std::lock_guard lock(mu_);
            if (closed_ || items_.size() >= capacity_) {
                return false;
            }
            items_.push_back(std::move(item));
        }
        cv_.notify_one();
        return true;
    }

    std::optional<T> pop()
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [this] { return closed_ || !items_.empty(); });
        if (closed_) {
            return std::nullopt;
        }
        T item = std::move(items_.front());
        items_.pop_front();
        return item;
    }

    void close()
    {
        {
            std::lock_guard lock(mu_);
            closed_ = true;
        }
        cv_.notify_all();
    }

    std::size_t size() const
    {
        std::lock_guard lock(mu_);
        return items_.size();
    }

    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<T> items_;
    bool closed_ = false;
};

} // namespace tms::comms
