#include "voltgrid/replay_buffer.hpp"

#include <doctest.h>

using namespace voltgrid;

namespace {

Experience tagged(double tag) {
    Experience e;
    e.state = {tag};
    e.action = {0.0};
    e.reward = tag;
    e.next_state = {tag};
    return e;
}

} // namespace

TEST_CASE("FIFO ring: holds exactly the last `capacity` items") {
    ReplayBuffer buf(5);
    for (int i = 0; i < 17; ++i) buf.push(tagged(i));
    CHECK(buf.size() == 5);
    CHECK(buf.total_pushed() == 17);
    for (std::size_t i = 0; i < 5; ++i) CHECK(buf.at(i).reward == doctest::Approx(12.0 + i));
}

TEST_CASE("fills up to capacity without eviction") {
    ReplayBuffer buf(8);
    for (int i = 0; i < 8; ++i) {
        buf.push(tagged(i));
        CHECK(buf.size() == static_cast<std::size_t>(i + 1));
    }
    CHECK(buf.at(0).reward == 0.0);
    CHECK(buf.at(7).reward == 7.0);
}

TEST_CASE("guards") {
    CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
    ReplayBuffer buf(2);
    CHECK_THROWS_AS(buf.at(0), std::out_of_range);
}
