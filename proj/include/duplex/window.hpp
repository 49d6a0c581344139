#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "duplex/frame.hpp"
#include "duplex/fsm.hpp"

namespace duplex {

// Audio sliding window. When the previous dialogue state is Listen the window
// accumulates without bound; in any other state it holds at most `capacity`
// frames (the newest ones).
class SlidingWindow {
public:
    explicit SlidingWindow(std::size_t capacity = 4);

    // Appends `frame` under the accumulation law for `prev_state`. Throws
    // FrameGap when the frame index is not contiguous with the window tail.
    void push(AudioFrame frame, DialogueState prev_state);

    // Drops everything but the newest `capacity` frames. Called once the
    // accumulated frames have been consumed on a Listen exit.
    void truncate_to_capacity();

    std::span<const AudioFrame> frames() const { return frames_; }
    std::size_t size() const { return frames_.size(); }
    bool empty() const { return frames_.empty(); }
    std::size_t capacity() const { return capacity_; }
    void clear() { frames_.clear(); }

private:
    std::size_t capacity_;
    std::vector<AudioFrame> frames_;
};

}  // namespace duplex
