// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "multinoc/noc/types.hpp"

namespace multinoc::noc {

// Circular FIFO used for router input buffers. Capacity is fixed at
// construction; the platform default is 2 flits per buffer.
// Push on a full buffer and pop on an empty one are rejected, never silent.
template <typename T>
class FifoBuffer {
public:
    explicit FifoBuffer(std::size_t capacity = 2) : slots_(capacity) {
        if (capacity == 0) throw DomainError("buffer capacity must be positive");
    }

    bool push(const T& v) {
        if (count_ == slots_.size()) return false;
        slots_[(head_ + count_) % slots_.size()] = v;
        ++count_;
        return true;
    }

    std::optional<T> pop() {
        if (count_ == 0) return std::nullopt;
        T v = slots_[head_];
        head_ = (head_ + 1) % slots_.size();
        --count_;
        return v;
    }

    const T* front() const { return count_ ? &slots_[head_] : nullptr; }

    std::size_t size() const { return count_; }
    std::size_t capacity() const { return slots_.size(); }
    bool empty() const { return count_ == 0; }
    bool full() const { return count_ == slots_.size(); }

    // Read-only scan in FIFO order (used by audits and stuck-packet reports).
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < count_; ++i) fn(slots_[(head_ + i) % slots_.size()]);
    }

private:
    std::vector<T> slots_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

} // namespace multinoc::noc
