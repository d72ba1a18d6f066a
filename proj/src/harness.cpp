#include "qcorr/harness.hpp"

#include <json.hpp>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace qcorr {

const char* endpoint_name(Side side)
{
    return side == Side::A ? kEndpointDetA : kEndpointDetB;
}

const char* side_label(Side side)
{
    return side == Side::A ? "A" : "B";
}

// ---------------------------------------------------------------------------
// Wire encoding

std::string encode_message(const WireMessage& msg)
{
    nlohmann::ordered_json j;
    j["type"] = msg.type;
    if (msg.pair_id) j["pair_id"] = *msg.pair_id;
    if (msg.side) j["side"] = *msg.side;
    if (msg.setting_index) j["setting_index"] = *msg.setting_index;
    if (msg.outcome) j["outcome"] = *msg.outcome;
    if (msg.role) j["role"] = *msg.role;
    if (msg.protocol_version) j["protocol_version"] = *msg.protocol_version;
    if (msg.n_pairs) j["n_pairs"] = *msg.n_pairs;
    if (msg.code) j["code"] = *msg.code;
    if (msg.detail) j["detail"] = *msg.detail;
    return j.dump();
}

WireMessage decode_message(const std::string& line)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed message: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ProtocolError("malformed message: missing type");
    WireMessage m;
    try {
        m.type = j["type"].get<std::string>();
        if (j.contains("pair_id")) m.pair_id = j["pair_id"].get<std::uint64_t>();
        if (j.contains("side")) m.side = j["side"].get<std::string>();
        if (j.contains("setting_index")) m.setting_index = j["setting_index"].get<int>();
        if (j.contains("outcome")) m.outcome = j["outcome"].get<int>();
        if (j.contains("role")) m.role = j["role"].get<std::string>();
        if (j.contains("protocol_version"))
            m.protocol_version = j["protocol_version"].get<std::string>();
        if (j.contains("n_pairs")) m.n_pairs = j["n_pairs"].get<std::uint64_t>();
        if (j.contains("code")) m.code = j["code"].get<std::string>();
        if (j.contains("detail")) m.detail = j["detail"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed message field: ") + e.what());
    }
    return m;
}

// ---------------------------------------------------------------------------
// Transcript persistence (one JSON record per line)

void write_transcript(std::ostream& os, const Transcript& transcript)
{
    for (const auto& rec : transcript) {
        nlohmann::ordered_json j;
        j["timestamp_ns"] = rec.timestamp_ns;
        j["from"] = rec.from;
        j["to"] = rec.to;
        j["raw"] = rec.raw;
        os << j.dump() << '\n';
    }
}

Transcript read_transcript(std::istream& is)
{
    Transcript t;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            TranscriptRecord rec;
            rec.timestamp_ns = j.at("timestamp_ns").get<std::uint64_t>();
            rec.from = j.at("from").get<std::string>();
            rec.to = j.at("to").get<std::string>();
            rec.raw = j.at("raw").get<std::string>();
            t.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("malformed transcript record: ") + e.what());
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Socket plumbing

namespace {

std::uint64_t now_ns()
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

struct Deadline {
    std::chrono::steady_clock::time_point at;

    static Deadline in(std::chrono::milliseconds d)
    {
        return {std::chrono::steady_clock::now() + d};
    }
    int remaining_ms() const
    {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      at - std::chrono::steady_clock::now())
                      .count();
        return ms > 0 ? static_cast<int>(std::min<long long>(ms, 1 << 30)) : 0;
    }
};

class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    Fd(Fd&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Fd& operator=(Fd&& other) noexcept
    {
        if (this != &other) {
            reset();
            std::swap(fd_, other.fd_);
        }
        return *this;
    }
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    ~Fd() { reset(); }

    int get() const { return fd_; }
    bool valid() const { return fd_ >= 0; }
    void reset()
    {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_ = -1;
};

// Newline-delimited message channel over a connected socket.
class LineChannel {
public:
    explicit LineChannel(Fd fd) : fd_(std::move(fd)) {}

    int fd() const { return fd_.get(); }

    void write_line(const std::string& line)
    {
        std::string out = line;
        out.push_back('\n');
        std::size_t sent = 0;
        while (sent < out.size()) {
            const ssize_t n =
                ::send(fd_.get(), out.data() + sent, out.size() - sent, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError(std::string("send failed: ") + std::strerror(errno));
            }
            sent += static_cast<std::size_t>(n);
        }
    }

    // Next full line, or nullopt if the deadline passes first.  EOF and
    // socket errors throw.
    std::optional<std::string> read_line(Deadline deadline)
    {
        for (;;) {
            const auto pos = buf_.find('\n');
            if (pos != std::string::npos) {
                std::string line = buf_.substr(0, pos);
                buf_.erase(0, pos + 1);
                return line;
            }
            struct pollfd pfd{fd_.get(), POLLIN, 0};
            const int pr = ::poll(&pfd, 1, deadline.remaining_ms());
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError(std::string("poll failed: ") + std::strerror(errno));
            }
            if (pr == 0) return std::nullopt;
            char chunk[4096];
            const ssize_t n = ::recv(fd_.get(), chunk, sizeof(chunk), 0);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw ProtocolError(std::string("recv failed: ") + std::strerror(errno));
            }
            if (n == 0) throw ProtocolError("peer disconnected");
            buf_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    Fd fd_;
    std::string buf_;
};

sockaddr_in loopback_addr(std::uint16_t port)
{
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    return addr;
}

}  // namespace

// ---------------------------------------------------------------------------
// Source / referee

namespace {

struct SourceState {
    SessionResult result;

    void log(const std::string& from, const std::string& to, const std::string& raw)
    {
        result.transcript.push_back({now_ns(), from, to, raw});
    }
};

}  // namespace

SessionResult run_source(const SourceOptions& options)
{
    SourceState st;
    auto fail = [&](const std::string& why) -> SessionResult& {
        st.result.complete = false;
        st.result.failure = why;
        return st.result;
    };

    try {
        validate_config(options.config);
    } catch (const std::exception& e) {
        return fail(std::string("invalid config: ") + e.what());
    }

    Fd listener(::socket(AF_INET, SOCK_STREAM, 0));
    if (!listener.valid()) return fail(std::string("socket failed: ") + std::strerror(errno));
    const int one = 1;
    ::setsockopt(listener.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr = loopback_addr(options.port);
    if (::bind(listener.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        return fail(std::string("bind failed: ") + std::strerror(errno));
    if (::listen(listener.get(), 2) != 0)
        return fail(std::string("listen failed: ") + std::strerror(errno));
    socklen_t alen = sizeof(addr);
    if (::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&addr), &alen) != 0)
        return fail(std::string("getsockname failed: ") + std::strerror(errno));
    const std::uint16_t port = ntohs(addr.sin_port);
    if (options.on_listening) options.on_listening(port);

    // --- handshake: accept both detectors, identified by their hello ---
    std::map<Side, std::unique_ptr<LineChannel>> chans;
    const Deadline handshake = Deadline::in(options.timeouts.handshake);
    try {
        for (int k = 0; k < 2; ++k) {
            struct pollfd pfd{listener.get(), POLLIN, 0};
            const int pr = ::poll(&pfd, 1, handshake.remaining_ms());
            if (pr <= 0) return fail("handshake timeout waiting for detectors");
            Fd conn(::accept(listener.get(), nullptr, nullptr));
            if (!conn.valid())
                return fail(std::string("accept failed: ") + std::strerror(errno));
            auto chan = std::make_unique<LineChannel>(std::move(conn));

            const auto line = chan->read_line(handshake);
            if (!line) return fail("handshake timeout reading hello");
            const WireMessage hello = decode_message(*line);
            if (hello.type != "hello" || !hello.role || *hello.role != "detector" ||
                !hello.side || (*hello.side != "A" && *hello.side != "B"))
                return fail("handshake: expected detector hello");
            if (!hello.protocol_version || *hello.protocol_version != kProtocolVersion) {
                WireMessage err{.type = "error",
                                .code = "protocol-version",
                                .detail = "unsupported protocol version"};
                chan->write_line(encode_message(err));
                return fail("handshake: protocol version mismatch");
            }
            const Side side = (*hello.side == "A") ? Side::A : Side::B;
            if (chans.count(side)) return fail("handshake: duplicate side");
            st.log(endpoint_name(side), kEndpointSource, *line);

            WireMessage reply{.type = "hello",
                              .role = "source",
                              .protocol_version = kProtocolVersion,
                              .n_pairs = options.config.n_pairs};
            const std::string reply_line = encode_message(reply);
            chan->write_line(reply_line);
            st.log(kEndpointSource, endpoint_name(side), reply_line);
            chans[side] = std::move(chan);
        }
    } catch (const ProtocolError& e) {
        return fail(std::string("handshake: ") + e.what());
    }

    // --- trial loop ---
    const RunConfig& cfg = options.config;
    auto abort_session = [&](const std::string& code, const std::string& why) {
        WireMessage err{.type = "error", .code = code, .detail = why};
        const std::string line = encode_message(err);
        for (auto& [side, chan] : chans) {
            try {
                chan->write_line(line);
                st.log(kEndpointSource, endpoint_name(side), line);
            } catch (const ProtocolError&) {
            }
        }
        return fail(why);
    };

    st.result.events.reserve(cfg.n_pairs);
    for (std::uint64_t i = 0; i < cfg.n_pairs; ++i) {
        const Deadline trial = Deadline::in(options.timeouts.trial);
        int idx[2] = {0, 0};
        for (Side side : {Side::A, Side::B}) {
            std::optional<std::string> line;
            try {
                line = chans[side]->read_line(trial);
            } catch (const ProtocolError& e) {
                return fail(std::string("detector ") + side_label(side) +
                            " lost mid-session: " + e.what());
            }
            if (!line) return abort_session("timeout", "trial timeout waiting for setting");

            WireMessage msg;
            try {
                msg = decode_message(*line);
            } catch (const ProtocolError& e) {
                return abort_session("malformed", e.what());
            }
            st.log(endpoint_name(side), kEndpointSource, *line);
            if (msg.type != "setting" || !msg.pair_id || !msg.side || !msg.setting_index)
                return abort_session("protocol", "expected a setting message");
            if (*msg.side != side_label(side))
                return abort_session("protocol", "setting carries the wrong side label");
            if (*msg.pair_id != i)
                return abort_session("protocol", "out-of-order pair_id in setting");
            const auto& list = (side == Side::A) ? cfg.settings_a : cfg.settings_b;
            if (*msg.setting_index < 0 ||
                static_cast<std::size_t>(*msg.setting_index) >= list.size())
                return abort_session("protocol", "setting_index out of range");
            idx[side == Side::A ? 0 : 1] = *msg.setting_index;
        }

        // Same sampling contract as montecarlo: theta from slot 0, outcome
        // from slot 3; the setting slots stay reserved for the detectors.
        const SubStream stream = trial_stream(cfg.seed, i);
        EventRecord ev;
        ev.pair_id = i;
        ev.theta_hidden = stream.uniform(DrawSlot::theta) * kTwoPi;
        ev.setting_a = idx[0];
        ev.setting_b = idx[1];
        const JointDistribution dist = joint_distribution_for(
            cfg.family, cfg.settings_a[size_t(idx[0])], cfg.settings_b[size_t(idx[1])]);
        const auto [sa, sb] = sample_outcome(dist, stream.uniform(DrawSlot::outcome));
        ev.outcome_a = sa;
        ev.outcome_b = sb;
        st.result.events.push_back(ev);

        for (Side side : {Side::A, Side::B}) {
            WireMessage out{.type = "outcome",
                            .pair_id = i,
                            .side = side_label(side),
                            .outcome = (side == Side::A) ? sa : sb};
            const std::string line = encode_message(out);
            try {
                chans[side]->write_line(line);
            } catch (const ProtocolError& e) {
                return fail(std::string("detector ") + side_label(side) +
                            " lost mid-session: " + e.what());
            }
            st.log(kEndpointSource, endpoint_name(side), line);
        }
    }

    WireMessage done{.type = "done", .n_pairs = cfg.n_pairs};
    const std::string done_line = encode_message(done);
    for (auto& [side, chan] : chans) {
        try {
            chan->write_line(done_line);
            st.log(kEndpointSource, endpoint_name(side), done_line);
        } catch (const ProtocolError& e) {
            return fail(std::string("detector lost at done: ") + e.what());
        }
    }

    if (options.inject_fault) {
        // Synthetic detector-to-detector probe; a faithful session can never
        // contain such a record, so the audit must flag it.
        WireMessage probe{.type = "error",
                          .code = "injected-probe",
                          .detail = "synthetic fault for the audit negative test"};
        st.log(kEndpointDetA, kEndpointDetB, encode_message(probe));
    }

    st.result.tally = estimate(st.result.events, cfg);
    st.result.complete = true;
    return st.result;
}

// ---------------------------------------------------------------------------
// Detector

DetectorLog run_detector(const DetectorOptions& options)
{
    DetectorLog log;
    auto fail = [&](const std::string& why) -> DetectorLog& {
        log.complete = false;
        log.failure = why;
        return log;
    };
    if (options.settings.empty()) return fail("no settings configured");

    // Connect with bounded backoff; the source may still be binding.
    Fd sock;
    for (int attempt = 0;; ++attempt) {
        sock = Fd(::socket(AF_INET, SOCK_STREAM, 0));
        if (!sock.valid()) return fail(std::string("socket failed: ") + std::strerror(errno));
        sockaddr_in addr = loopback_addr(options.port);
        if (::inet_pton(AF_INET, options.host.c_str(), &addr.sin_addr) != 1)
            return fail("bad host address: " + options.host);
        if (::connect(sock.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) break;
        sock.reset();
        if (attempt >= options.connect_retries)
            return fail(std::string("source unreachable: ") + std::strerror(errno));
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    LineChannel chan(std::move(sock));

    try {
        WireMessage hello{.type = "hello",
                          .side = side_label(options.side),
                          .role = "detector",
                          .protocol_version = kProtocolVersion};
        chan.write_line(encode_message(hello));

        const auto reply_line = chan.read_line(Deadline::in(options.timeouts.handshake));
        if (!reply_line) return fail("handshake timeout");
        const WireMessage reply = decode_message(*reply_line);
        if (reply.type == "error")
            return fail("source rejected handshake: " + reply.detail.value_or(""));
        if (reply.type != "hello" || !reply.role || *reply.role != "source" || !reply.n_pairs)
            return fail("unexpected handshake reply");
        const std::uint64_t n_pairs = *reply.n_pairs;

        log.trials.reserve(n_pairs);
        for (std::uint64_t i = 0; i < n_pairs; ++i) {
            int index = 0;
            if (options.policy == SettingPolicy::uniform_random_per_trial) {
                const DrawSlot slot =
                    options.side == Side::A ? DrawSlot::setting_a : DrawSlot::setting_b;
                const double u = trial_stream(options.local_seed, i).uniform(slot);
                index = static_cast<int>(
                    std::min(u * static_cast<double>(options.settings.size()),
                             static_cast<double>(options.settings.size() - 1)));
            }
            WireMessage setting{.type = "setting",
                                .pair_id = i,
                                .side = side_label(options.side),
                                .setting_index = index};
            chan.write_line(encode_message(setting));

            const auto line = chan.read_line(Deadline::in(options.timeouts.trial));
            if (!line) return fail("trial timeout waiting for outcome");
            const WireMessage msg = decode_message(*line);
            if (msg.type == "error")
                return fail("session aborted by source: " + msg.detail.value_or(""));
            if (msg.type != "outcome" || !msg.pair_id || !msg.outcome ||
                *msg.pair_id != i || !msg.side || *msg.side != side_label(options.side))
                return fail("unexpected message while awaiting outcome");
            if (*msg.outcome != 1 && *msg.outcome != -1)
                return fail("outcome out of range");
            log.trials.push_back({i, index, *msg.outcome});
        }

        const auto done_line = chan.read_line(Deadline::in(options.timeouts.trial));
        if (!done_line) return fail("timeout waiting for done");
        const WireMessage done = decode_message(*done_line);
        if (done.type != "done") return fail("expected done message");
    } catch (const ProtocolError& e) {
        return fail(e.what());
    }

    log.complete = true;
    return log;
}

// ---------------------------------------------------------------------------
// Audit

bool AuditReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const AuditCheck& c) { return c.pass; });
}

namespace {

std::string join_indices(const std::vector<std::size_t>& idx, std::size_t limit = 8)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < idx.size() && i < limit; ++i) {
        if (i) os << ",";
        os << idx[i];
    }
    if (idx.size() > limit) os << ",...";
    return os.str();
}

struct TrialView {
    std::optional<int> setting_a, setting_b;
    std::optional<int> outcome_a, outcome_b;
};

}  // namespace

AuditReport audit(const Transcript& transcript)
{
    AuditReport report;

    // 1. every record decodes
    std::vector<WireMessage> msgs(transcript.size());
    {
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < transcript.size(); ++i) {
            try {
                msgs[i] = decode_message(transcript[i].raw);
            } catch (const ProtocolError&) {
                bad.push_back(i);
            }
        }
        report.checks.push_back({"messages_decode", bad.empty(),
                                 static_cast<double>(bad.size()), 0.0,
                                 bad.empty() ? "" : "records " + join_indices(bad)});
        if (!bad.empty()) return report;
    }

    // 2. star topology: every edge touches the source, and no detA<->detB
    // edge exists in either direction
    {
        const std::set<std::pair<std::string, std::string>> allowed = {
            {kEndpointDetA, kEndpointSource}, {kEndpointDetB, kEndpointSource},
            {kEndpointSource, kEndpointDetA}, {kEndpointSource, kEndpointDetB}};
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < transcript.size(); ++i)
            if (!allowed.count({transcript[i].from, transcript[i].to})) bad.push_back(i);
        report.checks.push_back(
            {"star_topology", bad.empty(), static_cast<double>(bad.size()), 0.0,
             bad.empty() ? "all edges touch the source"
                         : "forbidden edges at records " + join_indices(bad)});
    }

    // 3. session complete: one detector hello per side, source replies, and
    // done messages to both sides
    std::uint64_t n_pairs = 0;
    {
        int hello_a = 0, hello_b = 0, done_count = 0;
        for (std::size_t i = 0; i < transcript.size(); ++i) {
            const auto& m = msgs[i];
            if (m.type == "hello" && m.role && *m.role == "detector" && m.side)
                (*m.side == "A" ? hello_a : hello_b)++;
            if (m.type == "done" && transcript[i].from == kEndpointSource) {
                ++done_count;
                if (m.n_pairs) n_pairs = *m.n_pairs;
            }
        }
        const bool ok = hello_a == 1 && hello_b == 1 && done_count == 2;
        std::ostringstream os;
        os << "hello A=" << hello_a << " B=" << hello_b << ", done=" << done_count;
        report.checks.push_back({"session_complete", ok,
                                 static_cast<double>(done_count), 2.0, os.str()});
    }

    // 4. ordering: per side, setting pair_ids contiguous from 0, and every
    // outcome follows its setting
    std::map<std::uint64_t, TrialView> trials;
    {
        std::vector<std::size_t> bad;
        for (const char* side : {"A", "B"}) {
            std::uint64_t expected = 0;
            std::map<std::uint64_t, std::size_t> setting_at;
            for (std::size_t i = 0; i < transcript.size(); ++i) {
                const auto& m = msgs[i];
                if (!m.side || *m.side != side || !m.pair_id) continue;
                if (m.type == "setting") {
                    if (*m.pair_id != expected || setting_at.count(*m.pair_id)) {
                        bad.push_back(i);
                        continue;
                    }
                    setting_at[*m.pair_id] = i;
                    ++expected;
                    auto& tv = trials[*m.pair_id];
                    (side[0] == 'A' ? tv.setting_a : tv.setting_b) = m.setting_index.value_or(0);
                } else if (m.type == "outcome") {
                    if (!setting_at.count(*m.pair_id)) {
                        bad.push_back(i);
                        continue;
                    }
                    auto& tv = trials[*m.pair_id];
                    (side[0] == 'A' ? tv.outcome_a : tv.outcome_b) = m.outcome.value_or(0);
                }
            }
        }
        report.checks.push_back(
            {"message_order", bad.empty(), static_cast<double>(bad.size()), 0.0,
             bad.empty() ? "settings contiguous from 0; outcomes follow settings"
                         : "violations at records " + join_indices(bad)});
        if (n_pairs != 0 && trials.size() != n_pairs) {
            report.checks.push_back({"trial_count", false,
                                     static_cast<double>(trials.size()),
                                     static_cast<double>(n_pairs), "trials missing"});
        } else {
            report.checks.push_back({"trial_count", true,
                                     static_cast<double>(trials.size()),
                                     static_cast<double>(n_pairs), ""});
        }
    }

    // 5. marginal independence: each side's frequency of outcome +1, grouped
    // by the remote side's setting, stays within 3 sigma of the pooled rate
    {
        double max_z = 0.0;
        std::string where = "single remote setting";
        bool enough = true;
        for (int side = 0; side < 2; ++side) {
            std::map<int, std::pair<std::uint64_t, std::uint64_t>> groups;  // remote -> (n, plus)
            std::uint64_t n_tot = 0, plus_tot = 0;
            for (const auto& [pair_id, tv] : trials) {
                const auto& remote = side == 0 ? tv.setting_b : tv.setting_a;
                const auto& outcome = side == 0 ? tv.outcome_a : tv.outcome_b;
                if (!remote || !outcome) continue;
                auto& g = groups[*remote];
                g.first++;
                if (*outcome == +1) g.second++;
                n_tot++;
                if (*outcome == +1) plus_tot++;
            }
            if (n_tot == 0) {
                enough = false;
                continue;
            }
            const double pooled = static_cast<double>(plus_tot) / static_cast<double>(n_tot);
            for (const auto& [remote, g] : groups) {
                if (g.first == 0) continue;
                const double se =
                    std::sqrt(std::max(pooled * (1.0 - pooled), 1e-12) /
                              static_cast<double>(g.first));
                const double p_hat =
                    static_cast<double>(g.second) / static_cast<double>(g.first);
                const double z = std::abs(p_hat - pooled) / se;
                if (z > max_z) {
                    max_z = z;
                    std::ostringstream os;
                    os << "side " << (side == 0 ? "A" : "B") << " vs remote setting "
                       << remote << ": p=" << p_hat << " pooled=" << pooled;
                    where = os.str();
                }
            }
        }
        report.checks.push_back(
            {"marginal_independence", enough && max_z < 3.0, max_z, 3.0, where});
    }

    return report;
}

}  // namespace qcorr
