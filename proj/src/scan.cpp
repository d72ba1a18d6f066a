#include "qcorr/scan.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qcorr {

std::vector<double> scan_grid(double start, double stop, double step)
{
    if (!(step > 0.0)) throw std::invalid_argument("scan: step must be positive");
    if (stop < start) throw std::invalid_argument("scan: stop must be >= start");
    std::vector<double> grid;
    const double slack = step * 1e-9;
    for (int k = 0;; ++k) {
        const double w = start + k * step;
        if (w > stop + slack) break;
        grid.push_back(w);
    }
    return grid;
}

ScanResult scan_family(FamilyKind family, const std::vector<double>& omegas, int node_count)
{
    if (family != FamilyKind::spin_theta && family != FamilyKind::linear_theta)
        throw std::invalid_argument("scan: only the spin and linear families scan over omega");
    if (node_count < 8) throw std::invalid_argument("scan: node_count must be >= 8");
    if (omegas.empty()) throw std::invalid_argument("scan: empty omega grid");

    const QuadratureRule rule = QuadratureRule::uniform(node_count);
    ScanResult result;
    result.family = family;
    result.node_count = node_count;
    result.rows.reserve(omegas.size());

    for (double w : omegas) {
        ScanRow row;
        row.omega = w;
        if (family == FamilyKind::spin_theta) {
            const JointDistribution closed = joint_distribution_spin(w);
            const JointDistribution oracle = joint_distribution_spin_averaged(w, rule);
            row.p_opposite = closed.p_opposite();
            row.p_same = closed.p_same();
            row.e = correlation_E(w);
            row.oracle_p_opposite = oracle.p_opposite();
        } else {
            const JointDistribution closed = joint_distribution_linear_closed(w);
            const JointDistribution oracle = joint_distribution_linear(w, rule);
            row.p_opposite = closed.p_opposite();
            row.p_same = closed.p_same();
            row.e = closed.p_opposite() - closed.p_same();
            row.oracle_p_opposite = oracle.p_opposite();
            row.claim_p = (1.0 - std::cos(w)) / 2.0;
            row.oracle_pass_pass = oracle.p_upup;
            const double disc = std::abs(*row.oracle_pass_pass - *row.claim_p);
            if (!result.max_claim_discrepancy || disc > *result.max_claim_discrepancy) {
                result.max_claim_discrepancy = disc;
                result.max_claim_discrepancy_omega = w;
            }
        }
        row.abs_error = std::abs(row.p_opposite - row.oracle_p_opposite);
        result.rows.push_back(row);
    }
    return result;
}

void write_scan(std::ostream& os, const ScanResult& scan, OutputFormat format)
{
    const bool linear = scan.family == FamilyKind::linear_theta;
    if (format == OutputFormat::csv) {
        os << "omega,p_opposite,p_same,E,oracle_p_opposite,abs_error";
        if (linear) os << ",paper_claim_p";
        os << '\n';
        for (const auto& r : scan.rows) {
            os << format_double(r.omega) << ',' << format_double(r.p_opposite) << ','
               << format_double(r.p_same) << ',' << format_double(r.e) << ','
               << format_double(r.oracle_p_opposite) << ',' << format_double(r.abs_error);
            if (linear) os << ',' << format_double(*r.claim_p);
            os << '\n';
        }
    } else {
        for (const auto& r : scan.rows) {
            nlohmann::ordered_json j;
            j["omega"] = r.omega;
            j["p_opposite"] = r.p_opposite;
            j["p_same"] = r.p_same;
            j["E"] = r.e;
            j["oracle_p_opposite"] = r.oracle_p_opposite;
            j["abs_error"] = r.abs_error;
            if (linear) j["paper_claim_p"] = *r.claim_p;
            os << j.dump() << '\n';
        }
    }
}

std::string scan_summary(const ScanResult& scan)
{
    if (!scan.max_claim_discrepancy) return {};
    std::ostringstream os;
    os << "max |pass-pass(oracle) - paper_claim_p| = "
       << format_double(*scan.max_claim_discrepancy) << " at omega = "
       << format_double(*scan.max_claim_discrepancy_omega);
    return os.str();
}

}  // namespace qcorr
