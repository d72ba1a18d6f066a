#pragma once

// Omega scans comparing the closed-form probability laws against the
// theta-quadrature oracle at every grid point; the linear family
// additionally tabulates the claimed pass-pass law (1 - cos w)/2 next to
// what the covector pipeline actually produces, so the disagreement between
// the two is reported rather than silently resolved.

#include "qcorr/correlate.hpp"
#include "qcorr/serialize.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace qcorr {

struct ScanRow {
    double omega = 0.0;
    double p_opposite = 0.0;
    double p_same = 0.0;
    double e = 0.0;
    double oracle_p_opposite = 0.0;
    double abs_error = 0.0;               // |p_opposite - oracle_p_opposite|
    std::optional<double> claim_p;        // linear only: claimed pass-pass value
    std::optional<double> oracle_pass_pass;  // linear only: covector-pipeline value
};

struct ScanResult {
    FamilyKind family = FamilyKind::spin_theta;
    int node_count = 0;
    std::vector<ScanRow> rows;

    // Linear only: max |oracle_pass_pass - claim_p| over the grid and where
    // it occurs.
    std::optional<double> max_claim_discrepancy;
    std::optional<double> max_claim_discrepancy_omega;
};

// Inclusive grid start, start+step, ..., stop (within a step*1e-9 slack).
std::vector<double> scan_grid(double start, double stop, double step);

// Supported families: spin_theta and linear_theta (the chiral and crypto
// families have no continuously tunable relative angle).
ScanResult scan_family(FamilyKind family, const std::vector<double>& omegas, int node_count);

// Data rows; the linear claim-discrepancy summary is returned by
// scan_summary and belongs on the diagnostic stream, not in the table.
void write_scan(std::ostream& os, const ScanResult& scan, OutputFormat format);

// One-line max-discrepancy summary for the linear family; empty for spin.
std::string scan_summary(const ScanResult& scan);

}  // namespace qcorr
