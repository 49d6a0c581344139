#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "duplex/frame.hpp"
#include "duplex/fsm.hpp"

namespace duplex {

enum class Role : std::uint8_t { user, assistant };

constexpr std::string_view role_name(Role r) {
    return r == Role::user ? "user" : "assistant";
}

// A committed turn in the filtered dialogue history.
struct Utterance {
    Role role = Role::user;
    std::string text;
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;  // inclusive
    bool interrupted = false;

    std::int64_t start_ms(std::int64_t frame_ms = kDefaultFrameMs) const {
        return start_frame * frame_ms;
    }
    std::int64_t end_ms(std::int64_t frame_ms = kDefaultFrameMs) const {
        return (end_frame + 1) * frame_ms;
    }
};

struct ContextEntry {
    Role role;
    std::string text;
};

struct AssistantChunk {
    std::int64_t t = 0;
    std::string text;
};

// Filtered dialogue history exchanged with the half-duplex agent.
//
// Frame accounting: every user frame lands in exactly one bucket.
//   committed  - part of a committed user utterance
//   pending    - buffered for the in-progress user turn (Listen)
//   dropped    - discarded Idle-state audio
//   monitored  - observed during Speak; only the window sees it unless an
//                interruption seeds it into the pending buffer
class DialogueContext {
public:
    // Routes one user frame according to the dialogue state in effect for it.
    void ingest_user_frame(const AudioFrame& frame, DialogueState state);

    // Appends an assistant chunk. Throws NotSpeaking outside the Speak state.
    void ingest_assistant_chunk(const AssistantChunk& chunk, DialogueState state);

    // Moves monitored frames (the pre-interruption window contents) into the
    // pending user buffer. Call on a Speak->Listen edge, before ingesting the
    // tick's own frame.
    void seed_pending_user(std::span<const AudioFrame> frames);

    // Commits buffers closed by the (prev -> next) edge: a Listen exit commits
    // the pending user turn, a Speak exit commits the pending assistant turn
    // (marked interrupted when the exit goes to Listen).
    void on_transition(DialogueState prev, DialogueState next, std::int64_t t);

    const std::vector<Utterance>& committed() const { return committed_; }

    // Last `n` committed entries in chronological order.
    std::vector<ContextEntry> recent_entries(std::size_t n) const;

    std::span<const AudioFrame> pending_user() const { return pending_user_; }
    std::span<const AssistantChunk> pending_assistant() const { return pending_assistant_; }

    std::int64_t ingested_user_frames() const { return ingested_; }
    std::int64_t dropped_frames() const { return dropped_; }
    std::int64_t monitored_frames() const { return monitored_; }
    std::int64_t committed_user_frames() const { return committed_user_frames_; }

    // Line-delimited JSON export: {role, text, start_ms, end_ms, interrupted}.
    void export_jsonl(std::ostream& out, std::int64_t frame_ms = kDefaultFrameMs) const;

private:
    void commit_pending_user();
    void commit_pending_assistant(std::int64_t t, bool interrupted);

    std::vector<Utterance> committed_;
    std::vector<AudioFrame> pending_user_;
    std::vector<AssistantChunk> pending_assistant_;
    std::int64_t speak_entered_frame_ = 0;

    std::int64_t ingested_ = 0;
    std::int64_t dropped_ = 0;
    std::int64_t monitored_ = 0;
    std::int64_t committed_user_frames_ = 0;
};

}  // namespace duplex
