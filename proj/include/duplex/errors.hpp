#pragma once

#include <stdexcept>
#include <string>

namespace duplex {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Action's source state does not match the current dialogue state.
struct IllegalTransition : Error { using Error::Error; };

// Non-contiguous frame index pushed into a sliding window.
struct FrameGap : Error { using Error::Error; };

// Assistant chunk received while the dialogue state is not Speak.
struct NotSpeaking : Error { using Error::Error; };

// Gold label lookup past the end of the labeled sequence.
struct MissingLabel : Error { using Error::Error; };

// Unknown action token on the wire.
struct BadToken : Error { using Error::Error; };

// Remote predictor did not answer within its deadline.
struct PredictorTimeout : Error { using Error::Error; };

// VAD segment with start >= end.
struct InvalidSegment : Error { using Error::Error; };

// Third-party judge endpoint could not be reached or answered garbage.
struct JudgeUnavailable : Error { using Error::Error; };

// Metric computation over an empty sample set.
struct EmptySamples : Error { using Error::Error; };

// Latency computation found no matched transition pairs.
struct NoMatches : Error { using Error::Error; };

// Traces and gold records could not be paired by dialogue id.
struct AlignmentError : Error { using Error::Error; };

// Socket / framing failure on a wire connection.
struct WireError : Error { using Error::Error; };

// Invalid configuration value.
struct ConfigError : Error { using Error::Error; };

}  // namespace duplex
