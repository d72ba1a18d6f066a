#pragma once

// Multi-process no-signaling demonstration.  A source/referee process and
// two detector processes exchange newline-delimited JSON messages over
// local stream sockets, strictly in a star topology (detA <-> source <->
// detB; the detectors never talk to each other).  The source logs every
// message it sends or receives to a transcript, and audit() later verifies
// -- from the transcript alone -- the star topology, the per-trial message
// ordering, and that each side's outcome marginal is statistically
// independent of the remote side's setting.
//
// Wire protocol (protocol_version "1"), one JSON object per line; field
// names: type, pair_id, side, setting_index, outcome, role,
// protocol_version, n_pairs, code, detail.  Message types and their fields:
//   hello    role, side (detectors only), protocol_version, n_pairs (source reply only)
//   setting  pair_id, side, setting_index
//   outcome  pair_id, side, outcome (+1 or -1)
//   done     n_pairs
//   error    code, detail
// Per trial: each detector sends one Setting; the source waits for both,
// samples the joint outcome from the exact distribution for those settings
// (same seed/substream/draw-slot contract as the montecarlo module), and
// sends each side only its own Outcome.  The source doubles as referee by
// design: the harness demonstrates no-signaling of the statistics, not a
// local-realist mechanism.

#include "qcorr/montecarlo.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcorr {

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kProtocolVersion = "1";

// Endpoint names as they appear in transcripts.
inline constexpr const char* kEndpointSource = "source";
inline constexpr const char* kEndpointDetA = "detA";
inline constexpr const char* kEndpointDetB = "detB";

const char* endpoint_name(Side side);
const char* side_label(Side side);  // "A" / "B"

struct WireMessage {
    std::string type;  // "hello" | "setting" | "outcome" | "done" | "error"
    std::optional<std::uint64_t> pair_id;
    std::optional<std::string> side;
    std::optional<int> setting_index;
    std::optional<int> outcome;
    std::optional<std::string> role;
    std::optional<std::string> protocol_version;
    std::optional<std::uint64_t> n_pairs;
    std::optional<std::string> code;
    std::optional<std::string> detail;
};

std::string encode_message(const WireMessage& msg);        // single line, no '\n'
WireMessage decode_message(const std::string& line);       // throws ProtocolError

struct TranscriptRecord {
    std::uint64_t timestamp_ns = 0;
    std::string from;
    std::string to;
    std::string raw;  // the message line exactly as sent
};
using Transcript = std::vector<TranscriptRecord>;

void write_transcript(std::ostream& os, const Transcript& transcript);
Transcript read_transcript(std::istream& is);

struct HarnessTimeouts {
    std::chrono::milliseconds handshake{5000};
    std::chrono::milliseconds trial{30000};
};

struct SourceOptions {
    RunConfig config;
    std::uint16_t port = 0;  // 0 picks an ephemeral port
    HarnessTimeouts timeouts{};
    // Negative-test hook: appends a synthetic detA->detB probe record to the
    // transcript so the audit has something to catch.
    bool inject_fault = false;
    // Invoked with the bound port once the source is accepting connections.
    std::function<void(std::uint16_t)> on_listening;
};

struct SessionResult {
    Transcript transcript;
    std::vector<EventRecord> events;
    TallySummary tally;
    bool complete = false;
    std::string failure;  // set when complete is false
};

// Runs one full session: accept two detectors, serve n_pairs trials, log
// the transcript.  Protocol violations and timeouts end the session early
// with complete = false and a partial transcript.
SessionResult run_source(const SourceOptions& options);

struct DetectorOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
    Side side = Side::A;
    std::vector<DetectorSetting> settings;  // indices must match the session config
    SettingPolicy policy = SettingPolicy::fixed;
    std::uint64_t local_seed = 0;  // drives per-trial setting choice when random
    HarnessTimeouts timeouts{};
    int connect_retries = 25;  // 100 ms backoff between attempts
};

struct LocalTrial {
    std::uint64_t pair_id = 0;
    int setting_index = 0;
    int outcome = 0;
};

struct DetectorLog {
    std::vector<LocalTrial> trials;
    bool complete = false;
    std::string failure;
};

// Single-threaded detector loop: choose a setting (locally seeded), send
// it, wait for this trial's outcome, repeat; never opens a connection to
// the other detector.
DetectorLog run_detector(const DetectorOptions& options);

struct AuditCheck {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditCheck> checks;
    bool pass() const;
};

// Pure function of the transcript; flags offending record indices in the
// failing check's detail.
AuditReport audit(const Transcript& transcript);

}  // namespace qcorr
