#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duplex/frame.hpp"
#include "duplex/wire.hpp"

namespace duplex {

struct AgentChunkMsg {
    std::int64_t t = 0;
    std::string text;
};

struct RevokeInfo {
    int chunks_emitted = 0;   // truncation point within the current response
    bool mid_response = false;
};

// Minimal half-duplex agent contract: receive prefilled audio, start talking
// on GrantFloor, stop immediately on Revoke, and surface chunks produced
// since the last tick. `eos` reports that the current response finished.
class HalfDuplexAgent {
public:
    virtual ~HalfDuplexAgent() = default;
    virtual void prefill(std::span<const AudioFrame> frames, std::int64_t t) = 0;
    virtual void grant(std::int64_t t) = 0;
    virtual RevokeInfo revoke(std::int64_t t) = 0;
    virtual std::vector<AgentChunkMsg> step(std::int64_t t) = 0;
    virtual bool eos() const = 0;
};

struct AgentScript {
    int chunks = 1;      // response length in ticks
    std::string text;    // words dealt out one per chunk
};

// Deterministic scripted agent for simulation: emits one chunk per tick while
// granted, then reports end of speech. Scripts are consumed in order; once
// they run out a grant produces an immediate empty response.
class StubAgent : public HalfDuplexAgent {
public:
    explicit StubAgent(std::vector<AgentScript> scripts = {});

    void prefill(std::span<const AudioFrame> frames, std::int64_t t) override;
    void grant(std::int64_t t) override;
    RevokeInfo revoke(std::int64_t t) override;
    std::vector<AgentChunkMsg> step(std::int64_t t) override;
    bool eos() const override { return eos_; }

    std::int64_t prefilled_frames() const { return prefilled_; }

private:
    std::vector<AgentScript> scripts_;
    std::size_t next_script_ = 0;
    std::vector<std::string> words_;  // chunk texts of the active response
    bool speaking_ = false;
    bool eos_ = false;
    int emitted_ = 0;
    int planned_ = 0;
    std::int64_t prefilled_ = 0;
};

// Agent protocol messages, one JSON object per line.
//   downstream: {"type":"grant"|"revoke"|"prefill","t":int,"payload":base64?}
//   upstream:   {"type":"chunk","t":int,"text":string} | {"type":"eos","t":int}
std::string serialize_agent_grant(std::int64_t t);
std::string serialize_agent_revoke(std::int64_t t);
std::string serialize_agent_prefill(std::int64_t t, std::span<const AudioFrame> frames);
std::string serialize_agent_chunk(std::int64_t t, const std::string& text);
std::string serialize_agent_eos(std::int64_t t);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Drives a remote agent over the line protocol. The remote side streams its
// chunks eagerly; this adapter paces delivery to one chunk per tick so a
// socket agent behaves like the in-process stub.
class SocketAgent : public HalfDuplexAgent {
public:
    explicit SocketAgent(const std::string& endpoint, int poll_ms = 20);

    void prefill(std::span<const AudioFrame> frames, std::int64_t t) override;
    void grant(std::int64_t t) override;
    RevokeInfo revoke(std::int64_t t) override;
    std::vector<AgentChunkMsg> step(std::int64_t t) override;
    bool eos() const override { return eos_; }

private:
    void pump(int deadline_ms);

    TcpStream stream_;
    int poll_ms_;
    std::vector<std::string> queued_;  // chunks received but not yet delivered
    bool speaking_ = false;
    bool eos_ = false;
    bool eos_seen_ = false;  // eos line observed behind queued chunks
    int emitted_ = 0;
};

// Serves a StubAgent behind the agent line protocol. Blocks until the peer
// disconnects; `serve_agent_once` handles a single connection.
void serve_agent_once(TcpStream conn, std::vector<AgentScript> scripts);

}  // namespace duplex
