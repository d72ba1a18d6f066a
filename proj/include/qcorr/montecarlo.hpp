#pragma once

// Seeded stochastic event generation reproducing the analytic joint
// distributions.  Outcomes are sampled from the exact JointDistribution for
// the realized settings; the hidden orientation theta is recorded for audit
// but never consulted when sampling (the analytic distributions are already
// theta-independent).

#include "qcorr/correlate.hpp"
#include "qcorr/detectors.hpp"
#include "qcorr/rng.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace qcorr {

enum class SettingPolicy { fixed, uniform_random_per_trial };

struct RunConfig {
    std::uint64_t seed = 0;
    std::uint64_t n_pairs = 1;
    FamilyKind family = FamilyKind::spin_theta;
    std::vector<DetectorSetting> settings_a;
    std::vector<DetectorSetting> settings_b;
    SettingPolicy policy = SettingPolicy::fixed;  // fixed always uses index 0
};

struct EventRecord {
    std::uint64_t pair_id = 0;
    double theta_hidden = 0.0;
    int setting_a = 0;  // index into settings_a
    int setting_b = 0;  // index into settings_b
    int outcome_a = 0;  // +1 or -1
    int outcome_b = 0;
};

// The exact four-outcome distribution for one realized settings pair; also
// the single place where family/detector pairings are enforced.
JointDistribution joint_distribution_for(FamilyKind family, const DetectorSetting& a,
                                         const DetectorSetting& b);

// Map a uniform variate to a joint outcome by the pinned cumulative order
// (updn, dnup, upup, dndn); part of the reproducibility contract.
std::pair<int, int> sample_outcome(const JointDistribution& dist, double u);

void validate_config(const RunConfig& config);

// One trial; trials are independent given the substream seeding, so any
// subset may be generated in any order.
EventRecord generate_event(const RunConfig& config, std::uint64_t pair_id);

// All trials in pair_id order.  Identical (seed, config) give bit-identical
// streams.
std::vector<EventRecord> generate_events(const RunConfig& config);

struct CellTally {
    std::uint64_t n = 0;
    std::uint64_t n_updn = 0, n_dnup = 0, n_upup = 0, n_dndn = 0;

    double p_updn() const { return n ? double(n_updn) / double(n) : 0.0; }
    double p_dnup() const { return n ? double(n_dnup) / double(n) : 0.0; }
    double p_upup() const { return n ? double(n_upup) / double(n) : 0.0; }
    double p_dndn() const { return n ? double(n_dndn) / double(n) : 0.0; }
    double p_opposite() const { return n ? double(n_updn + n_dnup) / double(n) : 0.0; }
    double p_same() const { return n ? double(n_upup + n_dndn) / double(n) : 0.0; }
    double marginal_a_up() const { return n ? double(n_upup + n_updn) / double(n) : 0.0; }
    double marginal_b_up() const { return n ? double(n_upup + n_dnup) / double(n) : 0.0; }

    // Binomial standard error of an estimated cell probability.
    double stderr_of(double p_hat) const
    {
        return n ? std::sqrt(p_hat * (1.0 - p_hat) / double(n)) : 0.0;
    }

    // E = p_opposite - p_same (the documented outcome-product convention)
    // and its propagated standard error.
    double e_value() const { return p_opposite() - p_same(); }
    double e_stderr() const { return 2.0 * stderr_of(p_opposite()); }
};

struct TallySummary {
    std::map<std::pair<int, int>, CellTally> cells;  // keyed by (setting_a, setting_b)
    std::uint64_t n_total = 0;

    const CellTally& only_cell() const;
};

// Frequencies and binomial errors per settings pair; deterministic fold.
TallySummary estimate(std::span<const EventRecord> events, const RunConfig& config);

// CHSH from four fixed-settings runs of n_per_setting pairs each, with the
// per-run seeds derived from the base seed.  Returns the estimated S and
// its propagated binomial error.
struct McChshResult {
    double s_value = 0.0;
    double s_stderr = 0.0;
    double e[4] = {0, 0, 0, 0};  // E(a,b), E(a,b'), E(a',b), E(a',b')
};
McChshResult mc_chsh(std::uint64_t seed, std::uint64_t n_per_setting, double a, double a_prime,
                     double b, double b_prime);

}  // namespace qcorr
