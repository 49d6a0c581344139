#include "duplex/agent.hpp"

#include <sstream>

#include "json.hpp"

#include "duplex/errors.hpp"

namespace duplex {

StubAgent::StubAgent(std::vector<AgentScript> scripts) : scripts_(std::move(scripts)) {}

void StubAgent::prefill(std::span<const AudioFrame> frames, std::int64_t) {
    prefilled_ += static_cast<std::int64_t>(frames.size());
}

void StubAgent::grant(std::int64_t) {
    speaking_ = true;
    eos_ = false;
    emitted_ = 0;
    words_.clear();
    if (next_script_ < scripts_.size()) {
        const AgentScript& s = scripts_[next_script_++];
        planned_ = s.chunks;
        std::istringstream words(s.text);
        std::string w;
        while (words >> w) words_.push_back(w);
    } else {
        planned_ = 0;  // out of material: reply is empty, eos right away
    }
}

RevokeInfo StubAgent::revoke(std::int64_t) {
    RevokeInfo info{emitted_, speaking_ && emitted_ < planned_};
    speaking_ = false;
    eos_ = false;
    return info;
}

std::vector<AgentChunkMsg> StubAgent::step(std::int64_t t) {
    std::vector<AgentChunkMsg> out;
    if (!speaking_) return out;
    if (emitted_ < planned_) {
        std::string text = static_cast<std::size_t>(emitted_) < words_.size()
                               ? words_[static_cast<std::size_t>(emitted_)]
                               : "...";
        out.push_back({t, std::move(text)});
        ++emitted_;
    }
    if (emitted_ >= planned_) eos_ = true;
    return out;
}

namespace {
constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 2 < bytes.size()) {
        std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += kB64[(v >> 6) & 63];
        out += kB64[v & 63];
        i += 3;
    }
    if (i + 1 == bytes.size()) {
        std::uint32_t v = bytes[i] << 16;
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == bytes.size()) {
        std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out += kB64[(v >> 18) & 63];
        out += kB64[(v >> 12) & 63];
        out += kB64[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    auto val = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<std::uint8_t> out;
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=') break;
        int v = val(c);
        if (v < 0) throw WireError("bad base64 payload");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xff));
        }
    }
    return out;
}

std::string serialize_agent_grant(std::int64_t t) {
    return "{\"type\":\"grant\",\"t\":" + std::to_string(t) + "}";
}

std::string serialize_agent_revoke(std::int64_t t) {
    return "{\"type\":\"revoke\",\"t\":" + std::to_string(t) + "}";
}

std::string serialize_agent_prefill(std::int64_t t, std::span<const AudioFrame> frames) {
    std::vector<std::uint8_t> payload;
    for (const AudioFrame& f : frames) {
        payload.insert(payload.end(), f.payload.begin(), f.payload.end());
    }
    std::string msg = "{\"type\":\"prefill\",\"t\":" + std::to_string(t);
    if (!payload.empty()) {
        msg += ",\"payload\":\"" + base64_encode(payload) + "\"";
    }
    msg += "}";
    return msg;
}

std::string serialize_agent_chunk(std::int64_t t, const std::string& text) {
    return "{\"type\":\"chunk\",\"t\":" + std::to_string(t) +
           ",\"text\":" + nlohmann::json(text).dump() + "}";
}

std::string serialize_agent_eos(std::int64_t t) {
    return "{\"type\":\"eos\",\"t\":" + std::to_string(t) + "}";
}

SocketAgent::SocketAgent(const std::string& endpoint, int poll_ms)
    : poll_ms_(poll_ms) {
    auto [host, port] = parse_endpoint(endpoint);
    stream_ = TcpStream::connect(host, port);
}

void SocketAgent::pump(int deadline_ms) {
    for (;;) {
        auto line = stream_.read_line(deadline_ms);
        if (!line) return;
        nlohmann::json j = nlohmann::json::parse(*line, nullptr, false);
        if (j.is_discarded() || !j.contains("type")) {
            throw WireError("malformed agent message: " + *line);
        }
        std::string type = j["type"].get<std::string>();
        if (type == "chunk") {
            queued_.push_back(j.value("text", std::string{}));
        } else if (type == "eos") {
            eos_seen_ = true;
            return;
        } else {
            throw WireError("unexpected agent message type: " + type);
        }
        deadline_ms = 0;  // drain whatever else is already buffered
    }
}

void SocketAgent::prefill(std::span<const AudioFrame> frames, std::int64_t t) {
    stream_.write_line(serialize_agent_prefill(t, frames));
}

void SocketAgent::grant(std::int64_t t) {
    stream_.write_line(serialize_agent_grant(t));
    speaking_ = true;
    eos_ = false;
    eos_seen_ = false;
    emitted_ = 0;
    queued_.clear();
}

RevokeInfo SocketAgent::revoke(std::int64_t t) {
    stream_.write_line(serialize_agent_revoke(t));
    RevokeInfo info{emitted_, speaking_ && !(eos_seen_ && queued_.empty())};
    // Discard anything still in flight up to the remote's eos acknowledgement.
    if (speaking_ && !eos_seen_) {
        try {
            pump(poll_ms_ * 5);
        } catch (const WireError&) {
        }
    }
    speaking_ = false;
    eos_ = false;
    queued_.clear();
    return info;
}

std::vector<AgentChunkMsg> SocketAgent::step(std::int64_t t) {
    std::vector<AgentChunkMsg> out;
    if (!speaking_) return out;
    if (queued_.empty() && !eos_seen_) pump(poll_ms_);
    if (!queued_.empty()) {
        out.push_back({t, queued_.front()});
        queued_.erase(queued_.begin());
        ++emitted_;
    }
    if (eos_seen_ && queued_.empty()) eos_ = true;
    return out;
}

void serve_agent_once(TcpStream conn, std::vector<AgentScript> scripts) {
    std::size_t next = 0;
    for (;;) {
        std::optional<std::string> line;
        try {
            line = conn.read_line(-1);
        } catch (const WireError&) {
            return;  // peer closed
        }
        if (!line) continue;
        nlohmann::json j = nlohmann::json::parse(*line, nullptr, false);
        if (j.is_discarded() || !j.contains("type")) continue;
        std::string type = j["type"].get<std::string>();
        std::int64_t t = j.value("t", std::int64_t{0});
        if (type == "grant") {
            // Stream the whole response; the client paces delivery per tick.
            if (next < scripts.size()) {
                const AgentScript& s = scripts[next++];
                std::istringstream words(s.text);
                std::string w;
                std::vector<std::string> ws;
                while (words >> w) ws.push_back(w);
                for (int i = 0; i < s.chunks; ++i) {
                    const std::string& text =
                        static_cast<std::size_t>(i) < ws.size()
                            ? ws[static_cast<std::size_t>(i)]
                            : "...";
                    conn.write_line(serialize_agent_chunk(t + i, text));
                }
            }
            conn.write_line(serialize_agent_eos(t));
        } else if (type == "revoke") {
            // Nothing to tear down for a scripted response; the eos for the
            // granted response has already been sent.
        } else if (type == "prefill") {
            // Scripted agent ignores audio.
        }
    }
}

}  // namespace duplex
