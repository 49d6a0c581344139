#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "duplex/errors.hpp"

namespace duplex {

// The three dialogue states of the duplex controller.
enum class DialogueState : std::uint8_t { Speak, Listen, Idle };

// The seven dialogue actions. Each action has exactly one source state and
// one target state; there is deliberately no Listen->Idle or Idle->Speak edge.
enum class DialogueAction : std::uint8_t {
    KeepSpeaking,   // Speak  -> Speak   "K.S"
    KeepListening,  // Listen -> Listen  "K.L"
    KeepIdling,     // Idle   -> Idle    "K.I"
    SpeakToListen,  // Speak  -> Listen  "S2L"
    SpeakToIdle,    // Speak  -> Idle    "S2I"
    ListenToSpeak,  // Listen -> Speak   "L2S"
    IdleToListen,   // Idle   -> Listen  "I2L"
};

inline constexpr std::array<DialogueAction, 7> kAllActions = {
    DialogueAction::KeepSpeaking,  DialogueAction::KeepListening,
    DialogueAction::KeepIdling,    DialogueAction::SpeakToListen,
    DialogueAction::SpeakToIdle,   DialogueAction::ListenToSpeak,
    DialogueAction::IdleToListen,
};

constexpr DialogueState action_source(DialogueAction a) {
    switch (a) {
        case DialogueAction::KeepSpeaking:
        case DialogueAction::SpeakToListen:
        case DialogueAction::SpeakToIdle: return DialogueState::Speak;
        case DialogueAction::KeepListening:
        case DialogueAction::ListenToSpeak: return DialogueState::Listen;
        case DialogueAction::KeepIdling:
        case DialogueAction::IdleToListen: return DialogueState::Idle;
    }
    return DialogueState::Idle;  // unreachable
}

constexpr DialogueState action_target(DialogueAction a) {
    switch (a) {
        case DialogueAction::KeepSpeaking:
        case DialogueAction::ListenToSpeak: return DialogueState::Speak;
        case DialogueAction::KeepListening:
        case DialogueAction::SpeakToListen:
        case DialogueAction::IdleToListen: return DialogueState::Listen;
        case DialogueAction::KeepIdling:
        case DialogueAction::SpeakToIdle: return DialogueState::Idle;
    }
    return DialogueState::Idle;  // unreachable
}

// The maintain action of a state ("keep-current").
constexpr DialogueAction keep_action(DialogueState s) {
    switch (s) {
        case DialogueState::Speak: return DialogueAction::KeepSpeaking;
        case DialogueState::Listen: return DialogueAction::KeepListening;
        case DialogueState::Idle: return DialogueAction::KeepIdling;
    }
    return DialogueAction::KeepIdling;  // unreachable
}

constexpr bool is_legal(DialogueState s, DialogueAction a) {
    return action_source(a) == s;
}

// Fixed wire tokens for the seven actions.
constexpr std::string_view action_token(DialogueAction a) {
    switch (a) {
        case DialogueAction::KeepSpeaking: return "K.S";
        case DialogueAction::KeepListening: return "K.L";
        case DialogueAction::KeepIdling: return "K.I";
        case DialogueAction::SpeakToListen: return "S2L";
        case DialogueAction::SpeakToIdle: return "S2I";
        case DialogueAction::ListenToSpeak: return "L2S";
        case DialogueAction::IdleToListen: return "I2L";
    }
    return "";  // unreachable
}

inline DialogueAction action_from_token(std::string_view token) {
    for (DialogueAction a : kAllActions) {
        if (action_token(a) == token) return a;
    }
    throw BadToken("unknown action token: " + std::string(token));
}

constexpr std::string_view state_name(DialogueState s) {
    switch (s) {
        case DialogueState::Speak: return "Speak";
        case DialogueState::Listen: return "Listen";
        case DialogueState::Idle: return "Idle";
    }
    return "";  // unreachable
}

inline DialogueState state_from_name(std::string_view name) {
    if (name == "Speak") return DialogueState::Speak;
    if (name == "Listen") return DialogueState::Listen;
    if (name == "Idle") return DialogueState::Idle;
    throw BadToken("unknown state name: " + std::string(name));
}

// Actions legal in a given state: Speak has 3, Listen and Idle have 2 each.
inline std::span<const DialogueAction> legal_actions(DialogueState s) {
    static constexpr std::array<DialogueAction, 3> from_speak = {
        DialogueAction::KeepSpeaking, DialogueAction::SpeakToListen,
        DialogueAction::SpeakToIdle};
    static constexpr std::array<DialogueAction, 2> from_listen = {
        DialogueAction::KeepListening, DialogueAction::ListenToSpeak};
    static constexpr std::array<DialogueAction, 2> from_idle = {
        DialogueAction::KeepIdling, DialogueAction::IdleToListen};
    switch (s) {
        case DialogueState::Speak: return from_speak;
        case DialogueState::Listen: return from_listen;
        case DialogueState::Idle: return from_idle;
    }
    return {};  // unreachable
}

// Applies `a` to `state`, returning the target state. Throws IllegalTransition
// when the action's source state differs from `state`.
inline DialogueState apply_action(DialogueState state, DialogueAction a) {
    if (!is_legal(state, a)) {
        throw IllegalTransition(std::string(action_token(a)) + " applied in state " +
                                std::string(state_name(state)));
    }
    return action_target(a);
}

}  // namespace duplex
