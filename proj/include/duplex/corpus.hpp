#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duplex/context.hpp"
#include "duplex/frame.hpp"
#include "duplex/fsm.hpp"

namespace duplex {

enum class Channel : std::uint8_t { A, B };

constexpr std::string_view channel_name(Channel c) { return c == Channel::A ? "A" : "B"; }

// A VAD-marked speech span on one recording channel.
struct VadSegment {
    Channel channel = Channel::A;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string text;
};

enum class IpuKind : std::uint8_t { turn_part, backchannel, third_party };

std::string_view ipu_kind_name(IpuKind k);
IpuKind ipu_kind_from_name(std::string_view name);

// Inter-pausal unit: a continuous speech segment from one speaker. Within a
// channel, consecutive IPUs are separated by at least the merge gap.
struct Ipu {
    Channel channel = Channel::A;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string text;
    IpuKind kind = IpuKind::turn_part;

    std::int64_t duration_ms() const { return end_ms - start_ms; }
};

struct TurnRecord {
    Role role = Role::user;
    std::vector<Ipu> ipus;  // retained turn_part IPUs, in time order

    std::int64_t start_ms() const { return ipus.empty() ? 0 : ipus.front().start_ms; }
    std::int64_t end_ms() const { return ipus.empty() ? 0 : ipus.back().end_ms; }
    std::string text() const;
};

// Per-frame action labels plus a provenance tag for each frame.
struct LabeledFrameSequence {
    std::int64_t frame_ms = kDefaultFrameMs;
    std::vector<DialogueAction> labels;
    std::vector<std::string> sources;

    // Checks the labels form a valid FSM path starting from Idle.
    void validate() const;
    std::vector<DialogueState> states() const;
};

// Merges per-channel segments into IPUs: consecutive segments whose silent
// gap is < merge_gap_ms become one IPU (a gap of exactly merge_gap_ms does
// not merge). Overlapping segments are unioned. Throws InvalidSegment when
// start >= end. Output is sorted by (start, end, channel).
std::vector<Ipu> extract_ipus(const std::vector<VadSegment>& segments,
                              std::int64_t merge_gap_ms = 160);

// Marks every IPU that lies entirely inside the union of the other channel's
// IPU spans as a backchannel. Symmetric in the two channels.
void classify_backchannels(std::vector<Ipu>& ipus);

// Groups maximal same-channel runs of turn_part IPUs (in start order) into
// alternating turn records.
std::vector<TurnRecord> assemble_turns(const std::vector<Ipu>& ipus,
                                       Channel user_channel);

// --- third-party filtering -------------------------------------------------

struct JudgeSegment {
    int id = 0;
    std::string text;
};

struct JudgeRequest {
    std::vector<ContextEntry> prior_dialogue;
    std::vector<JudgeSegment> final_utterance;
    std::string dialogue_id;  // lookup key metadata, not on the wire
    int turn_index = 0;
};

struct JudgeVerdict {
    int id = 0;
    bool is_relevant = true;
};

struct JudgeResponse {
    std::vector<JudgeVerdict> verdicts;
};

// {"prior_dialogue":[{"role":"Speaker 1","text":...}],"final_utterance":[{"id":1,"text":...}]}
std::string serialize_judge_request(const JudgeRequest& req);
JudgeResponse parse_judge_response(const std::string& body);

class JudgeClient {
public:
    virtual ~JudgeClient() = default;
    // Throws JudgeUnavailable when no answer can be produced.
    virtual JudgeResponse evaluate(const JudgeRequest& req) = 0;
};

// Replays responses from a JSON file keyed by "<dialogue_id>:<turn_index>"
// (with an optional "default" entry).
class CannedJudge : public JudgeClient {
public:
    explicit CannedJudge(const std::string& path);
    JudgeResponse evaluate(const JudgeRequest& req) override;

private:
    std::map<std::string, JudgeResponse> responses_;
    std::optional<JudgeResponse> default_;
};

// POSTs the request to an HTTP endpoint and parses the JSON reply.
class HttpJudge : public JudgeClient {
public:
    explicit HttpJudge(std::string url) : url_(std::move(url)) {}
    JudgeResponse evaluate(const JudgeRequest& req) override;

private:
    std::string url_;
};

struct FilterOutcome {
    TurnRecord turn;             // retained IPUs
    std::vector<Ipu> excluded;   // kind == third_party
    std::vector<std::string> warnings;
};

// Asks the judge which IPUs of the turn belong to the conversation. Irrelevant
// ones are marked third_party and dropped from the turn; at least one IPU is
// always retained (the longest, if the judge rejects everything). A judge
// failure keeps the turn intact and records a warning.
FilterOutcome filter_third_party(const TurnRecord& turn,
                                 const std::vector<ContextEntry>& prior,
                                 JudgeClient* judge);

// --- frame labeling ----------------------------------------------------------

struct LabelConfig {
    std::int64_t frame_ms = kDefaultFrameMs;
    std::int64_t onset_delay_ms = 500;
    std::int64_t tail_frames = 5;
};

// Turns the assembled dialogue flow into per-frame actions:
//   - a user turn onset at u switches to Listen at the first frame starting
//     at or after u + onset_delay (S2L instead of I2L during assistant speech);
//   - a user turn end hands over strictly after the end when an assistant
//     turn follows, else the sequence stays in Listen;
//   - an assistant turn end returns to Idle strictly after the end unless a
//     barge-in already took the floor.
// Backchannel and third-party IPUs are not in `turns` and so never transition.
LabeledFrameSequence derive_frame_labels(const std::vector<TurnRecord>& turns,
                                         const LabelConfig& cfg = {},
                                         std::vector<std::string>* warnings = nullptr);

// --- statistics ----------------------------------------------------------------

struct LabelStats {
    std::int64_t total = 0;
    std::map<DialogueAction, std::int64_t> counts;  // all 7 actions present

    double percent(DialogueAction a) const;
    std::string to_table() const;
    std::string to_json() const;
};

LabelStats label_stats(const std::vector<DialogueAction>& labels);

// --- per-dialogue driver ---------------------------------------------------------

// External input format: {"channels":{"A":[{"start_ms":..,"end_ms":..,"text":..}],"B":[...]}}
struct DialogueDoc {
    std::string id;
    std::vector<VadSegment> segments;

    static DialogueDoc from_json(const std::string& body, const std::string& id);
    std::string to_json() const;
};

enum class RoleAssignment : std::uint8_t { a_user, b_user, random_seeded };

struct AnnotateConfig {
    std::int64_t merge_gap_ms = 160;
    LabelConfig label;
    RoleAssignment roles = RoleAssignment::a_user;
    std::uint64_t seed = 0;
};

struct AnnotatedDialogue {
    std::string id;
    Channel user_channel = Channel::A;
    std::vector<Ipu> ipus;  // every IPU with its final kind
    std::vector<TurnRecord> turns;
    LabeledFrameSequence labels;
    LabelStats stats;
    std::vector<std::string> warnings;
};

AnnotatedDialogue annotate_dialogue(const DialogueDoc& doc, const AnnotateConfig& cfg,
                                    JudgeClient* judge);

// The instruction template shipped for wiring a real LLM behind JudgeClient.
const std::string& judge_prompt_template();

}  // namespace duplex
