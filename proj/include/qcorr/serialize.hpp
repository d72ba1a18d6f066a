#pragma once

// Table and record serialization.  CSV output is bit-stable for fixed
// inputs: fixed column order, 17-significant-digit floats via "%.17g"
// (round-trip exact), '.' decimal separator, '\n' line endings.

#include "qcorr/montecarlo.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace qcorr {

enum class OutputFormat { csv, jsonl };

// "%.17g" with the classic locale; round-trips any finite double.
std::string format_double(double v);

extern const char* const kEventCsvHeader;  // pair_id,theta_hidden,...

std::string event_row_csv(const EventRecord& ev);
std::string event_row_jsonl(const EventRecord& ev);

void write_events(std::ostream& os, std::span<const EventRecord> events, OutputFormat format);

// Human-readable per-settings-pair frequencies with binomial errors.
std::string tally_report(const TallySummary& tally);

}  // namespace qcorr
