#include "duplex/window.hpp"

#include <string>
#include <utility>

#include "duplex/errors.hpp"

namespace duplex {

SlidingWindow::SlidingWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw ConfigError("window capacity must be positive");
}

void SlidingWindow::push(AudioFrame frame, DialogueState prev_state) {
    if (!frames_.empty() && frame.index != frames_.back().index + 1) {
        throw FrameGap("frame " + std::to_string(frame.index) +
                       " does not follow " + std::to_string(frames_.back().index));
    }
    if (prev_state != DialogueState::Listen && frames_.size() >= capacity_) {
        // Keep the newest capacity-1 frames, then append.
        frames_.erase(frames_.begin(),
                      frames_.end() - static_cast<std::ptrdiff_t>(capacity_ - 1));
    }
    frames_.push_back(std::move(frame));
}

void SlidingWindow::truncate_to_capacity() {
    if (frames_.size() > capacity_) {
        frames_.erase(frames_.begin(),
                      frames_.end() - static_cast<std::ptrdiff_t>(capacity_));
    }
}

}  // namespace duplex
