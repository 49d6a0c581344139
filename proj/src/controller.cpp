#include "duplex/controller.hpp"

#include <chrono>
#include <thread>
#include <utility>

#include "duplex/errors.hpp"

namespace duplex {

Controller::Controller(ControllerConfig cfg, Predictor& predictor,
                       HalfDuplexAgent* agent)
    : cfg_(cfg), predictor_(predictor), agent_(agent), window_(cfg.window_w) {
    trace_.predictor = predictor_.name();
    trace_.window_w = cfg_.window_w;
}

PredictorRequest Controller::build_request(std::int64_t t) const {
    PredictorRequest req;
    req.t = t;
    req.state = state_;
    req.context = ctx_.recent_entries(cfg_.context_n);
    req.window.reserve(window_.size());
    for (const AudioFrame& f : window_.frames()) {
        req.window.push_back({f.index, frame_speech(f, cfg_.energy_threshold)});
    }
    req.agent_eos = agent_ != nullptr && agent_->eos();
    return req;
}

TickResult Controller::tick(AudioFrame frame) {
    const std::int64_t t = next_index_++;
    const DialogueState prev = state_;

    window_.push(frame, prev);

    TickResult result;
    result.t = t;

    DialogueAction predicted;
    try {
        predicted = predictor_.predict(build_request(t));
        result.predicted = predicted;
        if (!is_legal(prev, predicted)) {
            result.coerced = true;
            ++trace_.coercions;
            predicted = keep_action(prev);
        }
    } catch (const Error& e) {
        result.error = e.what();
        ++trace_.predictor_failures;
        predicted = keep_action(prev);
        result.predicted = predicted;
    }
    result.action = predicted;

    const DialogueState next = apply_action(prev, predicted);
    state_ = next;
    ctx_.on_transition(prev, next, t);

    // An interruption hands the agent the monitored window frames so the
    // interrupting words are not lost; everything older or from another state
    // stays filtered.
    std::vector<std::int64_t> prefill_indices;
    if (prev == DialogueState::Speak && next == DialogueState::Listen &&
        !speak_run_.empty()) {
        std::size_t keep = window_.capacity() > 0 ? window_.capacity() - 1 : 0;
        std::size_t start = speak_run_.size() > keep ? speak_run_.size() - keep : 0;
        std::span<const AudioFrame> seed(speak_run_.data() + start,
                                         speak_run_.size() - start);
        ctx_.seed_pending_user(seed);
        if (agent_) agent_->prefill(seed, t);
        for (const AudioFrame& f : seed) prefill_indices.push_back(f.index);
    }

    ctx_.ingest_user_frame(frame, next);
    if (next == DialogueState::Speak) {
        if (prev != DialogueState::Speak) speak_run_.clear();
        speak_run_.push_back(frame);
    } else if (prev == DialogueState::Speak) {
        speak_run_.clear();
    }

    if (prev == DialogueState::Speak && next != DialogueState::Speak) {
        result.signals.push_back({ControlSignal::Kind::Revoke, {}});
        if (agent_) {
            RevokeInfo info = agent_->revoke(t);
            trace_.agent_events.push_back(
                {t, "revoke", "", info.chunks_emitted, info.mid_response});
        }
    }
    if (next == DialogueState::Listen) {
        prefill_indices.push_back(frame.index);
        if (agent_) agent_->prefill({&frame, 1}, t);
        result.signals.push_back(
            {ControlSignal::Kind::Prefill, std::move(prefill_indices)});
    } else if (next == DialogueState::Idle) {
        ++trace_.dropped_frames;
        result.signals.push_back({ControlSignal::Kind::Drop, {frame.index}});
    }
    if (next == DialogueState::Speak && prev != DialogueState::Speak) {
        result.signals.push_back({ControlSignal::Kind::GrantFloor, {}});
        if (agent_) {
            agent_->grant(t);
            trace_.agent_events.push_back({t, "grant", "", 0, false});
        }
        // Back to the bounded regime: the accumulated frames were consumed.
        window_.truncate_to_capacity();
    }

    result.state = next;
    trace_.ticks.push_back(result);
    return result;
}

void Controller::deliver_chunks(std::int64_t t) {
    if (!agent_) return;
    for (AgentChunkMsg& c : agent_->step(t)) {
        if (state_ == DialogueState::Speak) {
            ctx_.ingest_assistant_chunk({c.t, c.text}, state_);
            trace_.agent_events.push_back({t, "chunk", std::move(c.text), 0, false});
        }
        // Chunks surfacing outside Speak (e.g. late socket deliveries right
        // after a revoke) are discarded; the revoke already recorded the cut.
    }
}

SessionTrace Controller::run_session(std::span<const AudioFrame> stream) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    for (const AudioFrame& f : stream) {
        TickResult r = tick(f);
        deliver_chunks(r.t);
        if (agent_ && agent_->eos()) {
            bool already = false;
            for (auto it = trace_.agent_events.rbegin();
                 it != trace_.agent_events.rend(); ++it) {
                if (it->kind == "grant") break;
                if (it->kind == "eos") { already = true; break; }
            }
            if (!already) trace_.agent_events.push_back({r.t, "eos", "", 0, false});
        }
        if (cfg_.realtime) {
            std::this_thread::sleep_until(
                start + std::chrono::milliseconds((r.t + 1) * cfg_.tick_ms));
        }
    }
    return trace_;
}

}  // namespace duplex
