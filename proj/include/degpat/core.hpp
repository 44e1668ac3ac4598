#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace degpat {

using VertexId = std::uint32_t;

// Thrown when edge-list input cannot be parsed. Carries the 1-based line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Caller handed a key or argument that breaks a documented precondition.
class ContractViolation : public std::logic_error {
    using std::logic_error::logic_error;
};

// Request exceeds a hard structural limit (table universe, R key depth, ...).
class CapacityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
public:
    TimeoutError() : std::runtime_error("deadline exceeded") {}
};

class MemoryCapError : public std::runtime_error {
public:
    MemoryCapError() : std::runtime_error("memory cap exceeded") {}
};

// Cooperative wall-clock / memory budget. Solvers call check() between
// candidates; heavy structures report coarse allocation estimates.
class RunBudget {
public:
    using Clock = std::chrono::steady_clock;

    RunBudget() = default;

    void set_deadline_after(double seconds) {
        deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(seconds));
        has_deadline_ = true;
    }

    void set_memory_cap_bytes(std::uint64_t bytes) { max_bytes_ = bytes; }

    void add_bytes(std::int64_t delta) {
        approx_bytes_.fetch_add(delta, std::memory_order_relaxed);
    }

    std::uint64_t approx_bytes() const { return approx_bytes_.load(std::memory_order_relaxed); }

    void check() const {
        if (has_deadline_ && Clock::now() > deadline_) throw TimeoutError();
        if (max_bytes_ != 0 && approx_bytes_.load(std::memory_order_relaxed) > max_bytes_)
            throw MemoryCapError();
    }

private:
    Clock::time_point deadline_{};
    bool has_deadline_ = false;
    std::uint64_t max_bytes_ = 0;
    mutable std::atomic<std::uint64_t> approx_bytes_{0};
};

inline void budget_check(RunBudget* b) {
    if (b) b->check();
}

} // namespace degpat
