#include "duplex/context.hpp"

#include <algorithm>

#include "json.hpp"

#include "duplex/errors.hpp"

namespace duplex {

void DialogueContext::ingest_user_frame(const AudioFrame& frame, DialogueState state) {
    ++ingested_;
    switch (state) {
        case DialogueState::Listen:
            pending_user_.push_back(frame);
            break;
        case DialogueState::Idle:
            ++dropped_;
            break;
        case DialogueState::Speak:
            // Monitored only; the sliding window keeps the actual audio.
            ++monitored_;
            break;
    }
}

void DialogueContext::ingest_assistant_chunk(const AssistantChunk& chunk,
                                             DialogueState state) {
    if (state != DialogueState::Speak) {
        throw NotSpeaking("assistant chunk at t=" + std::to_string(chunk.t) +
                          " received in state " + std::string(state_name(state)));
    }
    pending_assistant_.push_back(chunk);
}

void DialogueContext::seed_pending_user(std::span<const AudioFrame> frames) {
    for (const AudioFrame& f : frames) {
        pending_user_.push_back(f);
        --monitored_;
    }
}

void DialogueContext::on_transition(DialogueState prev, DialogueState next,
                                    std::int64_t t) {
    if (prev == DialogueState::Listen && next != DialogueState::Listen) {
        commit_pending_user();
    }
    if (prev == DialogueState::Speak && next != DialogueState::Speak) {
        commit_pending_assistant(t, /*interrupted=*/next == DialogueState::Listen);
    }
    if (next == DialogueState::Speak && prev != DialogueState::Speak) {
        speak_entered_frame_ = t;
    }
}

void DialogueContext::commit_pending_user() {
    if (pending_user_.empty()) return;
    Utterance u;
    u.role = Role::user;
    u.start_frame = pending_user_.front().index;
    u.end_frame = pending_user_.back().index;
    for (const AudioFrame& f : pending_user_) {
        if (f.hints && !f.hints->text.empty()) {
            if (!u.text.empty()) u.text += ' ';
            u.text += f.hints->text;
        }
    }
    committed_user_frames_ += static_cast<std::int64_t>(pending_user_.size());
    pending_user_.clear();
    committed_.push_back(std::move(u));
}

void DialogueContext::commit_pending_assistant(std::int64_t t, bool interrupted) {
    Utterance u;
    u.role = Role::assistant;
    u.interrupted = interrupted;
    u.start_frame = speak_entered_frame_;
    u.end_frame = std::max(speak_entered_frame_, t - 1);
    for (const AssistantChunk& c : pending_assistant_) {
        if (c.text.empty()) continue;
        if (!u.text.empty()) u.text += ' ';
        u.text += c.text;
    }
    pending_assistant_.clear();
    committed_.push_back(std::move(u));
}

std::vector<ContextEntry> DialogueContext::recent_entries(std::size_t n) const {
    std::vector<ContextEntry> out;
    std::size_t begin = committed_.size() > n ? committed_.size() - n : 0;
    for (std::size_t i = begin; i < committed_.size(); ++i) {
        out.push_back({committed_[i].role, committed_[i].text});
    }
    return out;
}

void DialogueContext::export_jsonl(std::ostream& out, std::int64_t frame_ms) const {
    for (const Utterance& u : committed_) {
        nlohmann::json j{{"role", std::string(role_name(u.role))},
                         {"text", u.text},
                         {"start_ms", u.start_ms(frame_ms)},
                         {"end_ms", u.end_ms(frame_ms)},
                         {"interrupted", u.interrupted}};
        out << j.dump() << '\n';
    }
}

}  // namespace duplex
