#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duplex/agent.hpp"
#include "duplex/context.hpp"
#include "duplex/frame.hpp"
#include "duplex/fsm.hpp"
#include "duplex/predictors.hpp"
#include "duplex/window.hpp"

namespace duplex {

// Control signals sent to the half-duplex agent.
//   GrantFloor - emitted exactly on transitions into Speak
//   Revoke     - emitted exactly on transitions out of Speak
//   Prefill    - frames forwarded while in Listen (plus, on an interruption,
//                the monitored window frames that triggered it)
//   Drop       - Idle-state frames that were filtered out
struct ControlSignal {
    enum class Kind : std::uint8_t { GrantFloor, Revoke, Prefill, Drop };
    Kind kind = Kind::Drop;
    std::vector<std::int64_t> frames;  // frame indices carried by Prefill/Drop
};

constexpr std::string_view signal_kind_name(ControlSignal::Kind k) {
    switch (k) {
        case ControlSignal::Kind::GrantFloor: return "grant";
        case ControlSignal::Kind::Revoke: return "revoke";
        case ControlSignal::Kind::Prefill: return "prefill";
        case ControlSignal::Kind::Drop: return "drop";
    }
    return "";  // unreachable
}

struct TickResult {
    std::int64_t t = 0;
    DialogueAction predicted = DialogueAction::KeepIdling;  // raw policy output
    DialogueAction action = DialogueAction::KeepIdling;     // applied action
    DialogueState state = DialogueState::Idle;              // state after the action
    bool coerced = false;
    std::optional<std::string> error;  // predictor failure, if any
    std::vector<ControlSignal> signals;
};

struct AgentEvent {
    std::int64_t t = 0;
    std::string kind;  // grant | revoke | chunk | eos
    std::string text;
    int chunks_emitted = 0;
    bool mid_response = false;
};

struct SessionTrace {
    std::string dialogue_id;
    std::string predictor;
    std::size_t window_w = 4;
    std::vector<TickResult> ticks;
    std::vector<AgentEvent> agent_events;
    std::int64_t dropped_frames = 0;
    std::int64_t coercions = 0;
    std::int64_t predictor_failures = 0;

    bool action_at(std::int64_t t, DialogueAction a) const {
        return t >= 0 && static_cast<std::size_t>(t) < ticks.size() &&
               ticks[static_cast<std::size_t>(t)].action == a;
    }
};

struct ControllerConfig {
    std::int64_t tick_ms = kDefaultFrameMs;
    std::size_t window_w = 4;
    std::size_t context_n = 20;
    bool realtime = false;
    double energy_threshold = 0.05;
};

// The state manager: one 120ms tick ingests one frame, asks the policy for an
// action, validates it, applies the transition, and emits control signals.
class Controller {
public:
    Controller(ControllerConfig cfg, Predictor& predictor,
               HalfDuplexAgent* agent = nullptr);

    TickResult tick(AudioFrame frame);

    // Runs the whole stream through tick(), stepping the agent in between.
    SessionTrace run_session(std::span<const AudioFrame> stream);

    DialogueState state() const { return state_; }
    const DialogueContext& context() const { return ctx_; }
    const SlidingWindow& window() const { return window_; }
    SessionTrace take_trace() { return std::move(trace_); }
    const SessionTrace& trace() const { return trace_; }
    void set_dialogue_id(std::string id) { trace_.dialogue_id = std::move(id); }

private:
    PredictorRequest build_request(std::int64_t t) const;
    void deliver_chunks(std::int64_t t);

    ControllerConfig cfg_;
    Predictor& predictor_;
    HalfDuplexAgent* agent_;
    DialogueState state_ = DialogueState::Idle;
    SlidingWindow window_;
    DialogueContext ctx_;
    SessionTrace trace_;
    std::vector<AudioFrame> speak_run_;  // frames monitored since entering Speak
    std::int64_t next_index_ = 0;
};

}  // namespace duplex
