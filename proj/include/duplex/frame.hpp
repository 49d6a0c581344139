#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace duplex {

// One controller tick == one audio frame; all offsets and metrics count in
// these units.
inline constexpr std::int64_t kDefaultFrameMs = 120;

// Simulation ground truth attached to a frame. Real deployments would run a
// VAD over `payload` instead; the hints stand in for that here.
struct FrameHints {
    enum class Channel : std::uint8_t { user, other, noise };
    bool speech_active = false;
    Channel channel = Channel::user;
    std::string text;  // transcript fragment carried by this frame, if any
};

struct AudioFrame {
    std::int64_t index = 0;
    std::int64_t duration_ms = kDefaultFrameMs;
    std::vector<std::uint8_t> payload;  // opaque; may be empty in simulation
    std::optional<FrameHints> hints;
};

// First frame whose start time is >= t_ms (ceiling to the frame grid).
constexpr std::int64_t first_frame_at_or_after(std::int64_t t_ms,
                                               std::int64_t frame_ms = kDefaultFrameMs) {
    return (t_ms + frame_ms - 1) / frame_ms;
}

// First frame whose start time is strictly after t_ms.
constexpr std::int64_t first_frame_after(std::int64_t t_ms,
                                         std::int64_t frame_ms = kDefaultFrameMs) {
    return t_ms / frame_ms + 1;
}

constexpr std::int64_t frame_start_ms(std::int64_t frame,
                                      std::int64_t frame_ms = kDefaultFrameMs) {
    return frame * frame_ms;
}

// Speech evidence for a frame: the simulation hint when present, otherwise a
// trivial energy threshold over the payload bytes (treated as unsigned PCM
// centered at 128).
inline bool frame_speech(const AudioFrame& f, double energy_threshold = 0.05) {
    if (f.hints) return f.hints->speech_active;
    if (f.payload.empty()) return false;
    double acc = 0.0;
    for (std::uint8_t b : f.payload) {
        acc += std::abs(static_cast<int>(b) - 128) / 128.0;
    }
    return acc / static_cast<double>(f.payload.size()) > energy_threshold;
}

}  // namespace duplex
