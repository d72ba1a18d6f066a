#include "qcorr/serialize.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace qcorr {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* const kEventCsvHeader = "pair_id,theta_hidden,setting_a,setting_b,outcome_a,outcome_b";

std::string event_row_csv(const EventRecord& ev)
{
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%s,%d,%d,%d,%d", ev.pair_id,
                  format_double(ev.theta_hidden).c_str(), ev.setting_a, ev.setting_b,
                  ev.outcome_a, ev.outcome_b);
    return buf;
}

std::string event_row_jsonl(const EventRecord& ev)
{
    nlohmann::ordered_json j;
    j["pair_id"] = ev.pair_id;
    j["theta_hidden"] = ev.theta_hidden;
    j["setting_a"] = ev.setting_a;
    j["setting_b"] = ev.setting_b;
    j["outcome_a"] = ev.outcome_a;
    j["outcome_b"] = ev.outcome_b;
    return j.dump();
}

void write_events(std::ostream& os, std::span<const EventRecord> events, OutputFormat format)
{
    if (format == OutputFormat::csv) {
        os << kEventCsvHeader << '\n';
        for (const auto& ev : events) os << event_row_csv(ev) << '\n';
    } else {
        for (const auto& ev : events) os << event_row_jsonl(ev) << '\n';
    }
}

std::string tally_report(const TallySummary& tally)
{
    std::ostringstream os;
    os << "pairs total: " << tally.n_total << '\n';
    for (const auto& [key, c] : tally.cells) {
        char line[512];
        std::snprintf(line, sizeof(line),
                      "settings (%d,%d): n=%" PRIu64
                      "  p_updn=%.6f p_dnup=%.6f p_upup=%.6f p_dndn=%.6f"
                      "  p_opposite=%.6f (se %.6f)  E=%.6f (se %.6f)",
                      key.first, key.second, c.n, c.p_updn(), c.p_dnup(), c.p_upup(),
                      c.p_dndn(), c.p_opposite(), c.stderr_of(c.p_opposite()), c.e_value(),
                      c.e_stderr());
        os << line << '\n';
    }
    return os.str();
}

}  // namespace qcorr
