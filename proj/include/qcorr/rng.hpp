#pragma once

// Counter-based splittable random numbers (SplitMix64 finalizer over a
// Weyl sequence).  Trial i of a run owns substream i, and each substream is
// indexed by draw slot, so trials can be generated in any order — or on any
// number of workers — and still produce bit-identical streams.  The
// generator identity, the substream derivation, and the fixed slot layout
// below are all part of the reproducibility contract; changing any of them
// changes every published event stream.
//
// Slot layout per trial (positions are reserved even when a policy skips a
// draw, so fixed- and random-setting runs share outcome streams):
//   slot 0  hidden orientation theta
//   slot 1  side A setting choice
//   slot 2  side B setting choice
//   slot 3  joint outcome

#include <cstdint>

namespace qcorr {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Map 64 random bits to a double in [0, 1) with 53-bit resolution.
inline double to_unit_double(std::uint64_t x)
{
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

enum class DrawSlot : std::uint64_t {
    theta = 0,
    setting_a = 1,
    setting_b = 2,
    outcome = 3,
};

// One trial's private stream of random values, indexed by slot.
class SubStream {
public:
    explicit SubStream(std::uint64_t base) : base_(base) {}

    std::uint64_t bits(std::uint64_t slot) const { return mix64(base_ + kGolden * (slot + 1)); }
    double uniform(DrawSlot slot) const
    {
        return to_unit_double(bits(static_cast<std::uint64_t>(slot)));
    }

private:
    std::uint64_t base_;
};

inline SubStream trial_stream(std::uint64_t seed, std::uint64_t trial)
{
    return SubStream(mix64(seed + kGolden * (trial + 1)));
}

// Deterministic derived seed for auxiliary streams (per-run seeds of a
// multi-run experiment, detector-local seeds, ...).  Double mixing keeps
// derived streams disjoint from the trial substreams of the parent seed.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag)
{
    return mix64(seed ^ mix64(kGolden * (tag + 1)));
}

// Independent seed for a detector process; the harness detectors draw their
// setting choices locally, tagged by side so the two never share a stream.
inline std::uint64_t detector_seed(std::uint64_t session_seed, int side_index)
{
    return derived_seed(session_seed, 0x5EED5EEDull + static_cast<std::uint64_t>(side_index));
}

}  // namespace qcorr
