#pragma once

#include <cstddef>
#include <vector>

#include "gittins/error.hpp"
#include "gittins/random.hpp"

namespace gittins::deep {

/// Active-action transition. There is no action field and no reference
/// state: the reference is expanded over all states when a batch is drawn.
struct ExperienceTuple {
    std::size_t arm = 0;
    std::size_t state = 0;
    double reward = 0.0;
    std::size_t next_state = 0;
};

/// Fixed-capacity FIFO; once full, each push overwrites the oldest tuple.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 10000) : capacity_(capacity)
    {
        detail::require(capacity_ > 0, "ReplayBuffer: capacity must be positive");
        data_.reserve(capacity_);
    }

    void push(const ExperienceTuple& e)
    {
        if (data_.size() < capacity_) {
            data_.push_back(e);
        } else {
            data_[head_] = e;
            head_ = (head_ + 1) % capacity_;
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

    /// i = 0 is the oldest stored tuple.
    [[nodiscard]] const ExperienceTuple& at(std::size_t i) const
    {
        detail::require(i < data_.size(), "ReplayBuffer: index out of range");
        return data_[(head_ + i) % data_.size()];
    }

    /// Uniform draw with replacement.
    [[nodiscard]] std::vector<ExperienceTuple> sample(std::size_t count, RandomSource& rng) const
    {
        detail::require(!data_.empty(), "ReplayBuffer: cannot sample from an empty buffer");
        std::vector<ExperienceTuple> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(data_[rng.uniform_index(data_.size())]);
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<ExperienceTuple> data_;
};

} // namespace gittins::deep
