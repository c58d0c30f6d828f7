#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace drdom {

/// Malformed edge-list input. The message names the offending line.
class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

/// An exhaustive routine was asked to work beyond its configured size cap.
class CapExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (e.g. connectivity).
class PreconditionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// An internal consistency check failed. Always a bug in this library.
class InvariantError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

class TimeoutError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Cooperative wall-clock limit polled by the exponential enumerators.
class Deadline {
   public:
    using clock = std::chrono::steady_clock;

    static Deadline never() { return Deadline{}; }
    static Deadline after(std::chrono::milliseconds budget) { return Deadline{clock::now() + budget}; }

    bool expired() const { return limited_ && clock::now() >= at_; }

    void check() const {
        if (expired()) throw TimeoutError("deadline exceeded");
    }

    /// Cheap variant for hot loops: only reads the clock every 4096 calls.
    void poll(std::size_t& counter) const {
        if (limited_ && (++counter & 0xfffu) == 0) check();
    }

   private:
    Deadline() = default;
    explicit Deadline(clock::time_point at) : limited_(true), at_(at) {}

    bool limited_ = false;
    clock::time_point at_{};
};

}  // namespace drdom
