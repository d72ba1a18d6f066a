#include "qcorr/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

namespace qcorr {

namespace {

int pick_index(double u, std::size_t count)
{
    auto i = static_cast<std::size_t>(u * static_cast<double>(count));
    if (i >= count) i = count - 1;  // u is in [0,1) but guard the edge anyway
    return static_cast<int>(i);
}

}  // namespace

JointDistribution joint_distribution_for(FamilyKind family, const DetectorSetting& a,
                                         const DetectorSetting& b)
{
    switch (family) {
    case FamilyKind::spin_theta: {
        const auto* sa = std::get_if<SternGerlach>(&a);
        const auto* sb = std::get_if<SternGerlach>(&b);
        if (!sa || !sb)
            throw std::invalid_argument("spin family requires Stern-Gerlach settings on both sides");
        return joint_distribution_spin(sb->omega - sa->omega);
    }
    case FamilyKind::chiral: {
        const auto* fa = std::get_if<ChiralityFilter>(&a);
        const auto* fb = std::get_if<ChiralityFilter>(&b);
        if (!fa || !fb)
            throw std::invalid_argument("chiral family requires chirality filters on both sides");
        return joint_distribution_chiral(fa->select, fb->select);
    }
    case FamilyKind::linear_theta: {
        const auto* pa = std::get_if<LinearPolarizer>(&a);
        const auto* pb = std::get_if<LinearPolarizer>(&b);
        if (!pa || !pb)
            throw std::invalid_argument("linear family requires polarizer settings on both sides");
        return joint_distribution_linear_closed(pb->omega - pa->omega);
    }
    case FamilyKind::crypto: {
        if (!std::holds_alternative<QubitBasis>(a) || !std::holds_alternative<QubitBasis>(b))
            throw std::invalid_argument("crypto family requires qubit-basis readout on both sides");
        return joint_distribution_crypto();
    }
    }
    throw std::invalid_argument("unknown family");
}

std::pair<int, int> sample_outcome(const JointDistribution& dist, double u)
{
    double edge = dist.p_updn;
    if (u < edge) return {+1, -1};
    edge += dist.p_dnup;
    if (u < edge) return {-1, +1};
    edge += dist.p_upup;
    if (u < edge) return {+1, +1};
    return {-1, -1};
}

void validate_config(const RunConfig& config)
{
    if (config.n_pairs < 1) throw std::invalid_argument("RunConfig: n_pairs must be >= 1");
    if (config.settings_a.empty() || config.settings_b.empty())
        throw std::invalid_argument("RunConfig: settings lists must be nonempty");
    // Surface pairing errors at config time rather than mid-run.
    for (const auto& a : config.settings_a)
        for (const auto& b : config.settings_b) joint_distribution_for(config.family, a, b);
}

EventRecord generate_event(const RunConfig& config, std::uint64_t pair_id)
{
    const SubStream s = trial_stream(config.seed, pair_id);

    EventRecord ev;
    ev.pair_id = pair_id;
    ev.theta_hidden = s.uniform(DrawSlot::theta) * kTwoPi;
    if (config.policy == SettingPolicy::uniform_random_per_trial) {
        ev.setting_a = pick_index(s.uniform(DrawSlot::setting_a), config.settings_a.size());
        ev.setting_b = pick_index(s.uniform(DrawSlot::setting_b), config.settings_b.size());
    }

    const JointDistribution dist =
        joint_distribution_for(config.family, config.settings_a[size_t(ev.setting_a)],
                               config.settings_b[size_t(ev.setting_b)]);
    const auto [sa, sb] = sample_outcome(dist, s.uniform(DrawSlot::outcome));
    ev.outcome_a = sa;
    ev.outcome_b = sb;
    return ev;
}

std::vector<EventRecord> generate_events(const RunConfig& config)
{
    validate_config(config);
    std::vector<EventRecord> events;
    events.reserve(config.n_pairs);
    for (std::uint64_t i = 0; i < config.n_pairs; ++i)
        events.push_back(generate_event(config, i));
    return events;
}

const CellTally& TallySummary::only_cell() const
{
    if (cells.size() != 1)
        throw std::logic_error("TallySummary: run used more than one settings pair");
    return cells.begin()->second;
}

TallySummary estimate(std::span<const EventRecord> events, const RunConfig& config)
{
    if (events.empty()) throw std::invalid_argument("estimate: empty event stream");
    TallySummary t;
    for (const auto& ev : events) {
        if (size_t(ev.setting_a) >= config.settings_a.size() ||
            size_t(ev.setting_b) >= config.settings_b.size())
            throw std::invalid_argument("estimate: event setting index out of range");
        CellTally& c = t.cells[{ev.setting_a, ev.setting_b}];
        ++c.n;
        if (ev.outcome_a == +1 && ev.outcome_b == -1) ++c.n_updn;
        else if (ev.outcome_a == -1 && ev.outcome_b == +1) ++c.n_dnup;
        else if (ev.outcome_a == +1 && ev.outcome_b == +1) ++c.n_upup;
        else if (ev.outcome_a == -1 && ev.outcome_b == -1) ++c.n_dndn;
        else throw std::invalid_argument("estimate: outcome values must be +-1");
        ++t.n_total;
    }
    return t;
}

McChshResult mc_chsh(std::uint64_t seed, std::uint64_t n_per_setting, double a, double a_prime,
                     double b, double b_prime)
{
    const double angles_a[4] = {a, a, a_prime, a_prime};
    const double angles_b[4] = {b, b_prime, b, b_prime};

    McChshResult r;
    double var_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        RunConfig cfg;
        cfg.seed = derived_seed(seed, static_cast<std::uint64_t>(k));
        cfg.n_pairs = n_per_setting;
        cfg.family = FamilyKind::spin_theta;
        cfg.settings_a = {SternGerlach{angles_a[k]}};
        cfg.settings_b = {SternGerlach{angles_b[k]}};
        const auto events = generate_events(cfg);
        const CellTally cell = estimate(events, cfg).only_cell();
        r.e[k] = cell.e_value();
        const double se = cell.e_stderr();
        var_sum += se * se;
    }
    r.s_value = chsh_s_from(r.e[0], r.e[1], r.e[2], r.e[3]);
    r.s_stderr = std::sqrt(var_sum);
    return r;
}

}  // namespace qcorr
