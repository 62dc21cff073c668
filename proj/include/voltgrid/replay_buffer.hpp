#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace voltgrid {

// One learning sample. Actions are stored normalized in [-1, 1]^n; rewards
// produced by the harness/discriminator are performance values in [0, 1].
struct Experience {
    std::vector<double> state;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

// Fixed-capacity FIFO ring; evicts the oldest entry once full.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
        items_.reserve(capacity);
    }

    void push(Experience exp) {
        if (items_.size() < capacity_) {
            items_.push_back(std::move(exp));
        } else {
            items_[head_] = std::move(exp);
            head_ = (head_ + 1) % capacity_;
        }
        ++total_pushed_;
    }

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t total_pushed() const { return total_pushed_; }
    bool empty() const { return items_.empty(); }

    // i = 0 is the oldest retained experience.
    const Experience& at(std::size_t i) const {
        if (i >= items_.size()) throw std::out_of_range("replay index");
        return items_[(head_ + i) % items_.size()];
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0; // insertion point once full == oldest element
    std::size_t total_pushed_ = 0;
    std::vector<Experience> items_;
};

} // namespace voltgrid
