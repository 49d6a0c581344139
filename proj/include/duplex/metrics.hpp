#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "duplex/controller.hpp"
#include "duplex/fsm.hpp"

namespace duplex {

// A gold takeover point, in frame units.
//   assistant_take - the assistant should start speaking (L2S)
//   user_take      - the assistant should yield (S2L or S2I)
struct GoldEvent {
    enum class Kind : std::uint8_t { assistant_take, user_take };
    Kind kind = Kind::assistant_take;
    std::int64_t frame = 0;
};

struct PredictedTransition {
    GoldEvent::Kind kind = GoldEvent::Kind::assistant_take;
    std::int64_t frame = 0;
};

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
};

// One speaker-turn sample for the false interruption rate: how much of the
// intended speech survived before a wrongful cutoff (all of it when the turn
// was never falsely interrupted).
struct InterruptionSample {
    Role speaker = Role::user;
    std::int64_t expected_duration_ms = 0;
    std::int64_t survived_ms = 0;
};

struct MetricReport {
    std::vector<int> ks;
    std::map<int, F1Score> assistant_f1;
    std::map<int, F1Score> user_f1;
    double combined_f1 = 0.0;  // mean of assistant and user F1 at K=1
    double fa = 0.0;
    double fu = 0.0;
    double combined_fir = 0.0;
    double latency_ms = 0.0;
    std::int64_t latency_pairs = 0;
    std::int64_t fa_samples = 0;
    std::int64_t fu_samples = 0;
    std::string matching = "greedy-earliest-first";

    std::string to_json() const;
    std::string to_table() const;
};

// Positive F1 @offset-K with greedy earliest-first matching: a gold event at
// frame g matches the earliest unmatched prediction in [g, g+K-1]. Unmatched
// gold events are false negatives; unmatched predictions false positives.
// F1 is 0 when precision+recall is 0.
F1Score turn_take_f1(const std::vector<GoldEvent>& gold,
                     const std::vector<PredictedTransition>& predicted,
                     GoldEvent::Kind kind, int k);

// 1 - mean(survived / expected). Throws EmptySamples on an empty set.
double false_interruption_rate(const std::vector<InterruptionSample>& samples);

// Mean of (L2S frame start - gold user-turn end) over greedily matched pairs,
// in ms; negative when the controller anticipates turn ends. Throws NoMatches
// when nothing pairs up.
double response_latency(const std::vector<std::int64_t>& gold_turn_ends_ms,
                        const std::vector<std::int64_t>& predicted_l2s_frames,
                        std::int64_t frame_ms = kDefaultFrameMs);

// Transitions of interest extracted from a trace, in tick order.
std::vector<PredictedTransition> extract_transitions(const SessionTrace& trace);

// Gold events read off a gold label sequence.
std::vector<GoldEvent> extract_gold_events(const std::vector<DialogueAction>& labels);

}  // namespace duplex
