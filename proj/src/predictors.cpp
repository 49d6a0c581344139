#include "duplex/predictors.hpp"

#include <string>

#include "json.hpp"

#include "duplex/errors.hpp"

namespace duplex {

std::string serialize_predictor_request(const PredictorRequest& req) {
    // Field order is part of the wire contract, so the line is built by hand;
    // nlohmann::json would re-sort the keys.
    std::string out = "{\"t\":" + std::to_string(req.t) + ",\"state\":\"" +
                      std::string(state_name(req.state)) + "\",\"context\":[";
    bool first = true;
    for (const ContextEntry& e : req.context) {
        if (!first) out += ',';
        first = false;
        out += "{\"role\":\"";
        out += role_name(e.role);
        out += "\",\"text\":";
        out += nlohmann::json(e.text).dump();
        out += '}';
    }
    out += "],\"window\":[";
    first = true;
    for (const FrameDescriptor& d : req.window) {
        if (!first) out += ',';
        first = false;
        out += "{\"index\":" + std::to_string(d.index) +
               ",\"speech\":" + (d.speech ? "true" : "false") + "}";
    }
    out += "]}";
    return out;
}

DialogueAction parse_predictor_response(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object() || !j.contains("action") ||
        !j["action"].is_string()) {
        throw BadToken("malformed predictor response: " + line);
    }
    return action_from_token(j["action"].get<std::string>());
}

DialogueAction OraclePredictor::predict(const PredictorRequest& req) {
    if (req.t < 0 || static_cast<std::size_t>(req.t) >= labels_.size()) {
        throw MissingLabel("no gold label at t=" + std::to_string(req.t));
    }
    return labels_[static_cast<std::size_t>(req.t)];
}

DialogueAction SilencePredictor::predict(const PredictorRequest& req) {
    return decide(req, cfg_);
}

namespace {

// Consecutive frames matching `active` at the end of the window, optionally
// skipping the newest frame.
int trailing_run(const std::vector<FrameDescriptor>& window, bool active,
                 bool skip_newest) {
    int run = 0;
    auto it = window.rbegin();
    if (skip_newest && it != window.rend()) ++it;
    for (; it != window.rend(); ++it) {
        if (it->speech != active) break;
        ++run;
    }
    return run;
}

}  // namespace

DialogueAction SilencePredictor::decide(const PredictorRequest& req,
                                        const SilenceConfig& cfg) {
    switch (req.state) {
        case DialogueState::Idle: {
            int active = trailing_run(req.window, true, /*skip_newest=*/false);
            return active >= cfg.speech_onset_frames ? DialogueAction::IdleToListen
                                                     : DialogueAction::KeepIdling;
        }
        case DialogueState::Listen: {
            // The decision for tick t lands at the start of frame t, so the
            // elapsed silence is measured over the frames before it. Firing
            // on the in-flight frame would respond a frame too early.
            int silent = trailing_run(req.window, false, /*skip_newest=*/true);
            std::int64_t silence_ms = static_cast<std::int64_t>(silent) * cfg.frame_ms;
            return silence_ms >= cfg.silence_threshold_ms
                       ? DialogueAction::ListenToSpeak
                       : DialogueAction::KeepListening;
        }
        case DialogueState::Speak: {
            int active = trailing_run(req.window, true, /*skip_newest=*/false);
            if (active >= cfg.speech_onset_frames) return DialogueAction::SpeakToListen;
            if (req.agent_eos) return DialogueAction::SpeakToIdle;
            return DialogueAction::KeepSpeaking;
        }
    }
    return keep_action(req.state);  // unreachable
}

RemotePredictor::RemotePredictor(const std::string& endpoint, int deadline_ms)
    : deadline_ms_(deadline_ms) {
    auto [host, port] = parse_endpoint(endpoint);
    stream_ = TcpStream::connect(host, port);
}

DialogueAction RemotePredictor::predict(const PredictorRequest& req) {
    stream_.write_line(serialize_predictor_request(req));
    // Requests and responses are strictly ordered on the connection, so after
    // a timeout the next arriving lines answer abandoned requests and must be
    // skipped before the current one.
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::milliseconds(deadline_ms_);
    for (;;) {
        auto remain = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - clock::now())
                          .count();
        if (remain < 0) remain = 0;
        auto line = stream_.read_line(static_cast<int>(remain));
        if (!line) {
            ++stale_responses_;
            throw PredictorTimeout("no predictor response within " +
                                   std::to_string(deadline_ms_) + "ms at t=" +
                                   std::to_string(req.t));
        }
        if (stale_responses_ > 0) {
            --stale_responses_;
            continue;
        }
        return parse_predictor_response(*line);
    }
}

}  // namespace duplex
