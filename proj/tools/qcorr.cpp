// qcorr: scans, CHSH reports, event generation, the multi-process
// no-signaling session, and the invariant validation suite.
//
// Exit codes: 0 success (for chsh: the inequality is violated; for
// nosignal: session complete and audit passed), 1 negative result or
// failed checks, 2 usage error, 3 I/O or orchestration error.

#include "qcorr/correlate.hpp"
#include "qcorr/harness.hpp"
#include "qcorr/montecarlo.hpp"
#include "qcorr/scan.hpp"
#include "qcorr/serialize.hpp"
#include "qcorr/validate.hpp"

#include <CLI11.hpp>

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qcorr;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

FamilyKind parse_family(const std::string& name)
{
    if (name == "chiral") return FamilyKind::chiral;
    if (name == "spin") return FamilyKind::spin_theta;
    if (name == "linear") return FamilyKind::linear_theta;
    if (name == "crypto") return FamilyKind::crypto;
    throw CLI::ValidationError("--family", "expected chiral|spin|linear|crypto");
}

const char* family_name(FamilyKind f)
{
    switch (f) {
    case FamilyKind::chiral: return "chiral";
    case FamilyKind::spin_theta: return "spin";
    case FamilyKind::linear_theta: return "linear";
    case FamilyKind::crypto: return "crypto";
    }
    return "?";
}

double to_radians(double v, bool degrees) { return degrees ? v * kPi / 180.0 : v; }

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& tok, const std::string& what)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw CLI::ValidationError(what, "'" + tok + "' is not a number");
    }
}

// Settings lists, one token per entry: angles in radians (or degrees with
// --degrees) for spin and linear, L|R for chiral, z for crypto.
std::vector<DetectorSetting> parse_settings(FamilyKind family, const std::string& csv,
                                            bool degrees, const std::string& flag)
{
    std::vector<DetectorSetting> out;
    for (const std::string& tok : split(csv, ',')) {
        if (tok.empty()) throw CLI::ValidationError(flag, "empty settings entry");
        switch (family) {
        case FamilyKind::spin_theta:
            out.push_back(SternGerlach{to_radians(parse_number(tok, flag), degrees)});
            break;
        case FamilyKind::linear_theta:
            out.push_back(LinearPolarizer{to_radians(parse_number(tok, flag), degrees)});
            break;
        case FamilyKind::chiral:
            if (tok == "L") out.push_back(ChiralityFilter{Helicity::left});
            else if (tok == "R") out.push_back(ChiralityFilter{Helicity::right});
            else throw CLI::ValidationError(flag, "chiral settings are L or R");
            break;
        case FamilyKind::crypto:
            if (tok == "z") out.push_back(QubitBasis{});
            else throw CLI::ValidationError(flag, "crypto settings are z");
            break;
        }
    }
    return out;
}

std::string settings_csv(FamilyKind family, const std::vector<DetectorSetting>& settings)
{
    std::string out;
    for (std::size_t i = 0; i < settings.size(); ++i) {
        if (i) out += ',';
        switch (family) {
        case FamilyKind::spin_theta:
            out += format_double(std::get<SternGerlach>(settings[i]).omega);
            break;
        case FamilyKind::linear_theta:
            out += format_double(std::get<LinearPolarizer>(settings[i]).omega);
            break;
        case FamilyKind::chiral:
            out += std::get<ChiralityFilter>(settings[i]).select == Helicity::left ? "L" : "R";
            break;
        case FamilyKind::crypto:
            out += "z";
            break;
        }
    }
    return out;
}

// Flags shared by the data-producing subcommands.
struct CommonArgs {
    std::string family = "spin";
    double omega = 0.0;
    bool omega_set = false;
    std::string scan_range;
    bool degrees = false;
    int nodes = 256;
    std::uint64_t seed = 0;
    std::uint64_t n = 10000;
    std::string format = "csv";
    std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool with_scan)
{
    cmd->add_option("--family", args.family, "pair family: chiral|spin|linear|crypto")
        ->check(CLI::IsMember({"chiral", "spin", "linear", "crypto"}));
    cmd->add_option("--omega", args.omega,
                    "relative analyzer angle (radians unless --degrees)")
        ->trigger_on_parse()
        ->each([&args](const std::string&) { args.omega_set = true; });
    if (with_scan)
        cmd->add_option("--scan", args.scan_range, "omega grid start:stop:step");
    cmd->add_flag("--degrees", args.degrees, "angle inputs are degrees (outputs stay radians)");
    cmd->add_option("--nodes", args.nodes, "quadrature node count (>= 8)");
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--n", args.n, "number of pairs");
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--out", args.out_path, "output path (default: stdout)");
}

OutputFormat parse_format(const std::string& f)
{
    return f == "jsonl" ? OutputFormat::jsonl : OutputFormat::csv;
}

// Stream selection: data goes to --out (or stdout); diagnostics go to
// stdout when the data went to a file, otherwise to stderr.
struct OutputTarget {
    std::ofstream file;
    bool to_file = false;

    static OutputTarget open(const std::string& path)
    {
        OutputTarget t;
        if (!path.empty()) {
            t.file.open(path, std::ios::binary);
            if (!t.file) throw std::runtime_error("cannot open output path: " + path);
            t.to_file = true;
        }
        return t;
    }
    std::ostream& data() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
    std::ostream& report() { return to_file ? std::cout : std::cerr; }
};

// ---------------------------------------------------------------------------
// scan

int cmd_scan(const CommonArgs& args)
{
    const FamilyKind family = parse_family(args.family);
    if (family != FamilyKind::spin_theta && family != FamilyKind::linear_theta) {
        std::cerr << "scan: only spin and linear families scan over omega\n";
        return kExitUsage;
    }
    if (args.scan_range.empty() == !args.omega_set) {
        std::cerr << "scan: provide exactly one of --omega or --scan\n";
        return kExitUsage;
    }

    std::vector<double> grid;
    try {
        if (!args.scan_range.empty()) {
            const auto parts = split(args.scan_range, ':');
            if (parts.size() != 3) throw std::invalid_argument("scan range");
            const double start = to_radians(parse_number(parts[0], "--scan"), args.degrees);
            const double stop = to_radians(parse_number(parts[1], "--scan"), args.degrees);
            const double step = to_radians(parse_number(parts[2], "--scan"), args.degrees);
            grid = scan_grid(start, stop, step);
        } else {
            grid = {to_radians(args.omega, args.degrees)};
        }
    } catch (const std::exception& e) {
        std::cerr << "scan: invalid range: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const ScanResult result = scan_family(family, grid, args.nodes);
        OutputTarget out = OutputTarget::open(args.out_path);
        write_scan(out.data(), result, parse_format(args.format));
        const std::string summary = scan_summary(result);
        if (!summary.empty()) out.report() << summary << '\n';
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "scan: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "scan: " << e.what() << '\n';
        return kExitIo;
    }
}

// ---------------------------------------------------------------------------
// chsh

int cmd_chsh(const std::string& settings, bool degrees, std::uint64_t mc_n,
             std::uint64_t seed)
{
    double a = 0.0, ap = kPi / 2, b = kPi / 4, bp = 3 * kPi / 4;
    if (!settings.empty()) {
        const auto parts = split(settings, ':');
        if (parts.size() != 4) {
            std::cerr << "chsh: --settings needs a:a':b:b' (four angles)\n";
            return kExitUsage;
        }
        try {
            a = to_radians(parse_number(parts[0], "--settings"), degrees);
            ap = to_radians(parse_number(parts[1], "--settings"), degrees);
            b = to_radians(parse_number(parts[2], "--settings"), degrees);
            bp = to_radians(parse_number(parts[3], "--settings"), degrees);
        } catch (const std::exception& e) {
            std::cerr << "chsh: " << e.what() << '\n';
            return kExitUsage;
        }
    }

    const ChshResult q = chsh(a, ap, b, bp);
    const ChshResult l = chsh(a, ap, b, bp, LhvModel{});
    std::cout << "settings: a=" << format_double(a) << " a'=" << format_double(ap)
              << " b=" << format_double(b) << " b'=" << format_double(bp) << '\n';
    std::cout << "quantum S    = " << format_double(q.s_value) << '\n';
    std::cout << "LHV S        = " << format_double(l.s_value) << '\n';
    std::cout << "difference   = " << format_double(q.s_value - l.s_value) << '\n';
    if (mc_n > 0) {
        const McChshResult mc = mc_chsh(seed, mc_n, a, ap, b, bp);
        std::cout << "monte carlo S = " << format_double(mc.s_value) << " +- "
                  << format_double(mc.s_stderr) << "  (n=" << mc_n << "/setting, seed="
                  << seed << ")\n";
    }
    std::cout << (q.s_value > 2.0 ? "classical bound exceeded\n"
                                  : "no violation at these settings\n");
    return q.s_value > 2.0 ? kExitOk : kExitNegative;
}

// ---------------------------------------------------------------------------
// events

struct RunArgs {
    std::string settings_a_csv, settings_b_csv;
    std::string policy = "fixed";
};

RunConfig build_run_config(const CommonArgs& args, const RunArgs& run)
{
    RunConfig cfg;
    cfg.seed = args.seed;
    cfg.n_pairs = args.n;
    cfg.family = parse_family(args.family);
    cfg.policy = run.policy == "random" ? SettingPolicy::uniform_random_per_trial
                                        : SettingPolicy::fixed;

    const double omega = to_radians(args.omega, args.degrees);
    auto default_a = [&]() -> std::string {
        switch (cfg.family) {
        case FamilyKind::spin_theta:
        case FamilyKind::linear_theta: return "0";
        case FamilyKind::chiral: return "L";
        case FamilyKind::crypto: return "z";
        }
        return "0";
    };
    auto default_b = [&]() -> std::string {
        switch (cfg.family) {
        case FamilyKind::spin_theta:
        case FamilyKind::linear_theta: return format_double(omega);
        case FamilyKind::chiral: return "L";
        case FamilyKind::crypto: return "z";
        }
        return "0";
    };
    // Note: --omega is already folded into the defaults above in radians, so
    // parse_settings must not convert it twice; explicit lists convert.
    cfg.settings_a = run.settings_a_csv.empty()
                         ? parse_settings(cfg.family, default_a(), false, "--settings-a")
                         : parse_settings(cfg.family, run.settings_a_csv, args.degrees,
                                          "--settings-a");
    cfg.settings_b = run.settings_b_csv.empty()
                         ? parse_settings(cfg.family, default_b(), false, "--settings-b")
                         : parse_settings(cfg.family, run.settings_b_csv, args.degrees,
                                          "--settings-b");
    return cfg;
}

int cmd_events(const CommonArgs& args, const RunArgs& run)
{
    try {
        const RunConfig cfg = build_run_config(args, run);
        const auto events = generate_events(cfg);
        OutputTarget out = OutputTarget::open(args.out_path);
        write_events(out.data(), events, parse_format(args.format));
        out.data().flush();
        if (args.out_path.empty()) std::cout.flush();
        out.report() << tally_report(estimate(events, cfg));
        return kExitOk;
    } catch (const CLI::Error&) {
        throw;
    } catch (const std::invalid_argument& e) {
        std::cerr << "events: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "events: " << e.what() << '\n';
        return kExitIo;
    }
}

// ---------------------------------------------------------------------------
// nosignal: orchestrator plus the source/detector child roles

struct NosignalArgs {
    std::string role = "session";  // session | source | detector
    std::string side = "A";
    int port = 0;
    std::string transcript_path;
    bool inject_fault = false;
};

int role_source(const CommonArgs& args, const RunArgs& run, const NosignalArgs& ns)
{
    SourceOptions src;
    try {
        src.config = build_run_config(args, run);
    } catch (const std::exception& e) {
        std::cerr << "source: " << e.what() << '\n';
        return kExitUsage;
    }
    src.inject_fault = ns.inject_fault;
    src.on_listening = [](std::uint16_t port) {
        std::printf("PORT %u\n", unsigned(port));
        std::fflush(stdout);
    };

    const SessionResult session = run_source(src);

    if (!ns.transcript_path.empty()) {
        std::ofstream tf(ns.transcript_path, std::ios::binary);
        if (!tf) {
            std::cerr << "source: cannot write transcript: " << ns.transcript_path << '\n';
            return kExitIo;
        }
        write_transcript(tf, session.transcript);
    }
    if (!session.complete) {
        std::cout << "SESSION failed: " << session.failure << '\n';
        return kExitNegative;
    }
    std::cout << "SESSION complete: " << session.events.size() << " pairs\n";
    std::cout << tally_report(session.tally);
    return kExitOk;
}

int role_detector(const CommonArgs& args, const RunArgs& run, const NosignalArgs& ns)
{
    DetectorOptions det;
    det.port = static_cast<std::uint16_t>(ns.port);
    det.side = ns.side == "B" ? Side::B : Side::A;
    det.policy = run.policy == "random" ? SettingPolicy::uniform_random_per_trial
                                        : SettingPolicy::fixed;
    det.local_seed = detector_seed(args.seed, det.side == Side::A ? 0 : 1);

    const FamilyKind family = parse_family(args.family);
    const std::string& csv =
        det.side == Side::A ? run.settings_a_csv : run.settings_b_csv;
    try {
        det.settings = parse_settings(family, csv, args.degrees,
                                      det.side == Side::A ? "--settings-a" : "--settings-b");
    } catch (const std::exception& e) {
        std::cerr << "detector: " << e.what() << '\n';
        return kExitUsage;
    }

    const DetectorLog log = run_detector(det);
    if (!log.complete) {
        std::cerr << "detector " << ns.side << " failed: " << log.failure << '\n';
        return kExitNegative;
    }
    std::cout << "detector " << ns.side << " complete: " << log.trials.size() << " trials\n";
    return kExitOk;
}

struct Child {
    pid_t pid = -1;
    int out_fd = -1;
    std::string output;
};

Child spawn_child(const std::vector<std::string>& args)
{
    int fds[2];
    if (::pipe(fds) != 0) throw std::runtime_error("pipe failed");
    const pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error("fork failed");
    if (pid == 0) {
        ::dup2(fds[1], STDOUT_FILENO);
        ::close(fds[0]);
        ::close(fds[1]);
        std::vector<char*> argv;
        static const char* exe = "/proc/self/exe";
        argv.push_back(const_cast<char*>(exe));
        for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        ::execv(exe, argv.data());
        std::perror("execv");
        ::_exit(127);
    }
    ::close(fds[1]);
    return Child{pid, fds[0], {}};
}

// Read from the child until a line with the given prefix appears; collects
// everything read into child.output.
std::optional<std::string> read_until_prefix(Child& child, const std::string& prefix,
                                             int timeout_ms)
{
    std::string buf;
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
        std::size_t start = 0;
        for (std::size_t pos = buf.find('\n'); pos != std::string::npos;
             pos = buf.find('\n', start)) {
            const std::string line = buf.substr(start, pos - start);
            start = pos + 1;
            if (line.rfind(prefix, 0) == 0) {
                child.output += buf.substr(0, start);
                buf.erase(0, start);
                child.output += buf;  // keep any tail for the final report
                return line;
            }
        }
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   deadline - std::chrono::steady_clock::now())
                                   .count();
        if (remaining <= 0) break;
        struct pollfd pfd{child.out_fd, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(remaining));
        if (pr <= 0) break;
        char chunk[1024];
        const ssize_t n = ::read(child.out_fd, chunk, sizeof(chunk));
        if (n <= 0) break;
        buf.append(chunk, static_cast<std::size_t>(n));
    }
    child.output += buf;
    return std::nullopt;
}

void drain_child(Child& child)
{
    char chunk[4096];
    for (;;) {
        const ssize_t n = ::read(child.out_fd, chunk, sizeof(chunk));
        if (n <= 0) break;
        child.output.append(chunk, static_cast<std::size_t>(n));
    }
    ::close(child.out_fd);
    child.out_fd = -1;
}

int wait_child(Child& child)
{
    int status = 0;
    ::waitpid(child.pid, &status, 0);
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

int role_session(const CommonArgs& args, RunArgs run, NosignalArgs ns)
{
    // Defaults: a mixed-settings spin session so the marginal-independence
    // audit has distinct remote-setting groups to compare.
    if (run.settings_a_csv.empty() && run.settings_b_csv.empty() && !args.omega_set &&
        parse_family(args.family) == FamilyKind::spin_theta) {
        run.settings_a_csv = "0," + format_double(kPi / 2);
        run.settings_b_csv = format_double(kPi / 4) + "," + format_double(3 * kPi / 4);
        run.policy = "random";
    }

    // Freeze the fully resolved config once so all three processes agree.
    CommonArgs resolved = args;
    RunConfig cfg;
    try {
        cfg = build_run_config(args, run);
    } catch (const std::exception& e) {
        std::cerr << "nosignal: " << e.what() << '\n';
        return kExitUsage;
    }
    const RunArgs wire{settings_csv(cfg.family, cfg.settings_a),
                       settings_csv(cfg.family, cfg.settings_b),
                       cfg.policy == SettingPolicy::uniform_random_per_trial ? "random"
                                                                             : "fixed"};
    resolved.degrees = false;  // wire settings are already radians

    if (ns.transcript_path.empty()) {
        ns.transcript_path = (args.out_path.empty())
                                 ? "qcorr_transcript_" + std::to_string(::getpid()) + ".jsonl"
                                 : args.out_path;
    }

    try {
        std::vector<std::string> src_args = {
            "nosignal", "--role", "source", "--family", family_name(cfg.family),
            "--seed", std::to_string(cfg.seed), "--n", std::to_string(cfg.n_pairs),
            "--settings-a", wire.settings_a_csv, "--settings-b", wire.settings_b_csv,
            "--policy", wire.policy, "--transcript", ns.transcript_path};
        if (ns.inject_fault) src_args.push_back("--inject-fault");
        Child source = spawn_child(src_args);

        const auto port_line = read_until_prefix(source, "PORT ", 5000);
        if (!port_line) {
            drain_child(source);
            wait_child(source);
            std::cerr << "nosignal: source did not report a port\n" << source.output;
            return kExitIo;
        }
        const std::string port = port_line->substr(5);

        auto detector_args = [&](const char* side, const std::string& settings_flag,
                                 const std::string& csv) {
            return std::vector<std::string>{
                "nosignal", "--role", "detector", "--side", side, "--port", port,
                "--family", family_name(cfg.family), "--seed", std::to_string(cfg.seed),
                settings_flag, csv, "--policy", wire.policy};
        };
        Child det_a = spawn_child(detector_args("A", "--settings-a", wire.settings_a_csv));
        Child det_b = spawn_child(detector_args("B", "--settings-b", wire.settings_b_csv));

        drain_child(det_a);
        drain_child(det_b);
        drain_child(source);
        const int rc_a = wait_child(det_a);
        const int rc_b = wait_child(det_b);
        const int rc_src = wait_child(source);

        std::cout << source.output;
        if (rc_a != 0) std::cout << det_a.output;
        if (rc_b != 0) std::cout << det_b.output;
        const bool session_ok = rc_src == 0 && rc_a == 0 && rc_b == 0;
        std::cout << "processes: source rc=" << rc_src << ", detA rc=" << rc_a
                  << ", detB rc=" << rc_b << '\n';

        std::ifstream tf(ns.transcript_path, std::ios::binary);
        if (!tf) {
            std::cerr << "nosignal: transcript missing: " << ns.transcript_path << '\n';
            return kExitIo;
        }
        const Transcript transcript = read_transcript(tf);
        const AuditReport report = audit(transcript);
        for (const auto& c : report.checks) {
            std::cout << "audit " << c.name << ": " << (c.pass ? "PASS" : "FAIL")
                      << " (observed=" << format_double(c.observed)
                      << ", threshold=" << format_double(c.threshold) << ")";
            if (!c.detail.empty()) std::cout << "  " << c.detail;
            std::cout << '\n';
        }
        std::cout << "transcript: " << ns.transcript_path << " (" << transcript.size()
                  << " records)\n";
        const bool ok = session_ok && report.pass();
        std::cout << (ok ? "no-signaling session: PASS\n" : "no-signaling session: FAIL\n");
        return ok ? kExitOk : kExitNegative;
    } catch (const std::exception& e) {
        std::cerr << "nosignal: orchestration error: " << e.what() << '\n';
        return kExitIo;
    }
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate()
{
    const ValidationReport report = run_validation_suite();
    int failed = 0;
    for (const auto& c : report.checks) {
        std::printf("[%s] %-34s observed=%-13.6g tol=%-8.3g %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.observed, c.tolerance, c.note.c_str());
        if (!c.pass) ++failed;
    }
    std::printf("%zu checks, %d failed\n", report.checks.size(), failed);
    return failed == 0 ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-particle conserved-quantity correlation simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file")->envname("QCORR_CONFIG");

    CommonArgs scan_args;
    auto* scan_cmd =
        app.add_subcommand("scan", "tabulate probability laws against the quadrature oracle");
    add_common_flags(scan_cmd, scan_args, true);

    std::string chsh_settings;
    bool chsh_degrees = false;
    std::uint64_t chsh_mc_n = 0, chsh_seed = 0;
    auto* chsh_cmd = app.add_subcommand("chsh", "quantum vs local-hidden-variable CHSH report");
    chsh_cmd->add_option("--settings", chsh_settings, "a:a':b:b' (default 0:pi/2:pi/4:3pi/4)");
    chsh_cmd->add_flag("--degrees", chsh_degrees, "angle inputs are degrees");
    chsh_cmd->add_option("--mc", chsh_mc_n, "also estimate S from Monte Carlo runs of this size");
    chsh_cmd->add_option("--seed", chsh_seed, "Monte Carlo seed");

    CommonArgs events_args;
    RunArgs events_run;
    auto* events_cmd = app.add_subcommand("events", "generate a seeded event stream");
    add_common_flags(events_cmd, events_args, false);
    events_cmd->add_option("--settings-a", events_run.settings_a_csv,
                           "side A settings list (comma separated)");
    events_cmd->add_option("--settings-b", events_run.settings_b_csv,
                           "side B settings list (comma separated)");
    events_cmd->add_option("--policy", events_run.policy, "setting policy per trial")
        ->check(CLI::IsMember({"fixed", "random"}));

    CommonArgs ns_args;
    RunArgs ns_run;
    NosignalArgs ns;
    auto* ns_cmd = app.add_subcommand(
        "nosignal", "run the multi-process no-signaling session and audit its transcript");
    add_common_flags(ns_cmd, ns_args, false);
    ns_cmd->add_option("--settings-a", ns_run.settings_a_csv, "side A settings list");
    ns_cmd->add_option("--settings-b", ns_run.settings_b_csv, "side B settings list");
    ns_cmd->add_option("--policy", ns_run.policy, "setting policy per trial")
        ->check(CLI::IsMember({"fixed", "random"}));
    ns_cmd->add_option("--transcript", ns.transcript_path, "transcript output path");
    ns_cmd->add_flag("--inject-fault", ns.inject_fault,
                     "append a synthetic detector-to-detector probe (audit negative test)");
    ns_cmd->add_option("--role", ns.role, "internal: process role in the session")
        ->check(CLI::IsMember({"session", "source", "detector"}));
    ns_cmd->add_option("--side", ns.side, "internal: detector side")
        ->check(CLI::IsMember({"A", "B"}));
    ns_cmd->add_option("--port", ns.port, "internal: source port");

    auto* validate_cmd =
        app.add_subcommand("validate", "run the full invariant suite and report each check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the error message
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (scan_cmd->parsed()) return cmd_scan(scan_args);
        if (chsh_cmd->parsed())
            return cmd_chsh(chsh_settings, chsh_degrees, chsh_mc_n, chsh_seed);
        if (events_cmd->parsed()) return cmd_events(events_args, events_run);
        if (ns_cmd->parsed()) {
            if (ns.role == "source") return role_source(ns_args, ns_run, ns);
            if (ns.role == "detector") return role_detector(ns_args, ns_run, ns);
            return role_session(ns_args, ns_run, ns);
        }
        if (validate_cmd->parsed()) return cmd_validate();
    } catch (const CLI::Error& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}
