#pragma once

#include <chrono>
#include <optional>

namespace blowup {

// Optional wall-clock limit for long suites.
class Deadline {
public:
    Deadline() = default;
    explicit Deadline(double seconds) {
        if (seconds > 0)
            end_ = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
    }
    bool expired() const { return end_ && std::chrono::steady_clock::now() >= *end_; }
    bool limited() const { return end_.has_value(); }

private:
    std::optional<std::chrono::steady_clock::time_point> end_;
};

}  // namespace blowup
