#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "duplex/context.hpp"
#include "duplex/frame.hpp"
#include "duplex/fsm.hpp"
#include "duplex/wire.hpp"

namespace duplex {

struct FrameDescriptor {
    std::int64_t index = 0;
    bool speech = false;
};

// What a policy sees at each tick: the committed history, the state the
// controller was in before this tick, and the sliding window contents.
struct PredictorRequest {
    std::int64_t t = 0;
    DialogueState state = DialogueState::Idle;
    std::vector<ContextEntry> context;  // chronological, most recent last
    std::vector<FrameDescriptor> window;
    bool agent_eos = false;  // half-duplex agent finished its response; not on the wire
};

// One JSON line, fixed field order:
// {"t":0,"state":"Idle","context":[{"role":"user","text":"..."}],"window":[{"index":0,"speech":false}]}
std::string serialize_predictor_request(const PredictorRequest& req);

// Parses {"action":"K.S"} etc. Throws BadToken on anything else.
DialogueAction parse_predictor_response(const std::string& line);

class Predictor {
public:
    virtual ~Predictor() = default;
    virtual DialogueAction predict(const PredictorRequest& req) = 0;
    virtual std::string name() const = 0;
};

// Replays a gold label sequence. Throws MissingLabel past the end.
class OraclePredictor : public Predictor {
public:
    explicit OraclePredictor(std::vector<DialogueAction> labels)
        : labels_(std::move(labels)) {}
    DialogueAction predict(const PredictorRequest& req) override;
    std::string name() const override { return "oracle"; }

private:
    std::vector<DialogueAction> labels_;
};

struct SilenceConfig {
    std::int64_t silence_threshold_ms = 500;
    int speech_onset_frames = 1;
    std::int64_t frame_ms = kDefaultFrameMs;
};

// VAD-style threshold baseline. A pure function of the state, the window's
// activity pattern, and the config.
class SilencePredictor : public Predictor {
public:
    explicit SilencePredictor(SilenceConfig cfg = {}) : cfg_(cfg) {}
    DialogueAction predict(const PredictorRequest& req) override;
    std::string name() const override { return "silence"; }

    static DialogueAction decide(const PredictorRequest& req, const SilenceConfig& cfg);

private:
    SilenceConfig cfg_;
};

// Client for an external policy speaking the newline-delimited JSON protocol.
// Answers that miss the deadline are abandoned (and drained later), never
// applied late.
class RemotePredictor : public Predictor {
public:
    RemotePredictor(const std::string& endpoint, int deadline_ms = 100);
    DialogueAction predict(const PredictorRequest& req) override;
    std::string name() const override { return "remote"; }

private:
    TcpStream stream_;
    int deadline_ms_;
    int stale_responses_ = 0;
};

}  // namespace duplex
