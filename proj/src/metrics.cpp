#include "duplex/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

#include "duplex/errors.hpp"

namespace duplex {

F1Score turn_take_f1(const std::vector<GoldEvent>& gold,
                     const std::vector<PredictedTransition>& predicted,
                     GoldEvent::Kind kind, int k) {
    std::vector<std::int64_t> gold_frames;
    for (const GoldEvent& g : gold) {
        if (g.kind == kind) gold_frames.push_back(g.frame);
    }
    std::vector<std::int64_t> pred_frames;
    for (const PredictedTransition& p : predicted) {
        if (p.kind == kind) pred_frames.push_back(p.frame);
    }
    std::sort(gold_frames.begin(), gold_frames.end());
    std::sort(pred_frames.begin(), pred_frames.end());

    // Greedy earliest-first: windows [g, g+k-1] advance with g, so any
    // prediction before the current window can never match a later event.
    std::int64_t tp = 0;
    std::size_t pi = 0;
    for (std::int64_t g : gold_frames) {
        while (pi < pred_frames.size() && pred_frames[pi] < g) ++pi;
        if (pi < pred_frames.size() && pred_frames[pi] <= g + k - 1) {
            ++tp;
            ++pi;
        }
    }

    F1Score s;
    s.tp = tp;
    s.fp = static_cast<std::int64_t>(pred_frames.size()) - tp;
    s.fn = static_cast<std::int64_t>(gold_frames.size()) - tp;
    s.precision = pred_frames.empty()
                      ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(pred_frames.size());
    s.recall = gold_frames.empty()
                   ? 0.0
                   : static_cast<double>(tp) / static_cast<double>(gold_frames.size());
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

double false_interruption_rate(const std::vector<InterruptionSample>& samples) {
    if (samples.empty()) throw EmptySamples("false_interruption_rate over no samples");
    double sum = 0.0;
    for (const InterruptionSample& s : samples) {
        sum += static_cast<double>(s.survived_ms) /
               static_cast<double>(s.expected_duration_ms);
    }
    return 1.0 - sum / static_cast<double>(samples.size());
}

double response_latency(const std::vector<std::int64_t>& gold_turn_ends_ms,
                        const std::vector<std::int64_t>& predicted_l2s_frames,
                        std::int64_t frame_ms) {
    std::vector<std::int64_t> ends = gold_turn_ends_ms;
    std::sort(ends.begin(), ends.end());
    std::vector<std::int64_t> preds = predicted_l2s_frames;
    std::sort(preds.begin(), preds.end());

    double sum = 0.0;
    std::int64_t matched = 0;
    std::size_t pi = 0;
    for (std::size_t gi = 0; gi < ends.size(); ++gi) {
        if (pi >= preds.size()) break;
        std::int64_t next_end =
            gi + 1 < ends.size() ? ends[gi + 1] : std::numeric_limits<std::int64_t>::max();
        std::int64_t start = frame_start_ms(preds[pi], frame_ms);
        if (start < next_end) {
            sum += static_cast<double>(start - ends[gi]);
            ++matched;
            ++pi;
        }
    }
    if (matched == 0) throw NoMatches("no L2S matched a gold user-turn end");
    return sum / static_cast<double>(matched);
}

std::vector<PredictedTransition> extract_transitions(const SessionTrace& trace) {
    std::vector<PredictedTransition> out;
    for (const TickResult& r : trace.ticks) {
        if (r.action == DialogueAction::ListenToSpeak) {
            out.push_back({GoldEvent::Kind::assistant_take, r.t});
        } else if (r.action == DialogueAction::SpeakToListen ||
                   r.action == DialogueAction::SpeakToIdle) {
            out.push_back({GoldEvent::Kind::user_take, r.t});
        }
    }
    return out;
}

std::vector<GoldEvent> extract_gold_events(const std::vector<DialogueAction>& labels) {
    std::vector<GoldEvent> out;
    for (std::size_t t = 0; t < labels.size(); ++t) {
        if (labels[t] == DialogueAction::ListenToSpeak) {
            out.push_back({GoldEvent::Kind::assistant_take, static_cast<std::int64_t>(t)});
        } else if (labels[t] == DialogueAction::SpeakToListen ||
                   labels[t] == DialogueAction::SpeakToIdle) {
            out.push_back({GoldEvent::Kind::user_take, static_cast<std::int64_t>(t)});
        }
    }
    return out;
}

namespace {

nlohmann::json f1_json(const F1Score& s) {
    return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
            {"tp", s.tp},               {"fp", s.fp},         {"fn", s.fn}};
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string MetricReport::to_json() const {
    nlohmann::json j;
    j["k"] = ks;
    for (const auto& [k, s] : assistant_f1) j["assistant_f1"][std::to_string(k)] = f1_json(s);
    for (const auto& [k, s] : user_f1) j["user_f1"][std::to_string(k)] = f1_json(s);
    j["combined_f1"] = combined_f1;
    j["false_interruption"] = {{"assistant", fa}, {"user", fu}, {"combined", combined_fir},
                               {"assistant_samples", fa_samples}, {"user_samples", fu_samples}};
    j["latency_ms"] = latency_ms;
    j["latency_pairs"] = latency_pairs;
    j["matching"] = matching;
    return j.dump(2);
}

std::string MetricReport::to_table() const {
    auto triplet = [this](const std::map<int, F1Score>& m) {
        std::string out;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (i) out += '/';
            auto it = m.find(ks[i]);
            out += it == m.end() ? "-" : fmt2(it->second.f1);
        }
        return out;
    };
    std::string header =
        "                     Turn-taking                              False Interruption Rate\n"
        "  Assistant (Pos. F1@";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (i) header += '/';
        header += std::to_string(ks[i]);
    }
    header += ")  User (Pos. F1@";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (i) header += '/';
        header += std::to_string(ks[i]);
    }
    header += ")  Combined   Assistant  User   Combined  Latency\n";

    char row[256];
    std::snprintf(row, sizeof(row), "  %-26s %-22s %-10s %-10s %-6s %-9s %.2fms\n",
                  triplet(assistant_f1).c_str(), triplet(user_f1).c_str(),
                  fmt2(combined_f1).c_str(), fmt2(fa).c_str(), fmt2(fu).c_str(),
                  fmt2(combined_fir).c_str(), latency_ms);
    return header + row;
}

}  // namespace duplex
