#pragma once

// Machine-checkable invariant suite covering every module: quadrature
// exactness, spinor algebra, family structure (momenta, conserved tags,
// exchange signs, norms), theta-independence, distribution laws, CHSH
// ordering, Monte Carlo reproducibility and statistics, and an in-process
// harness session with its audit.  The CLI's validate subcommand prints one
// line per check.

#include <string>
#include <vector>

namespace qcorr {

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double observed = 0.0;   // the measured deviation / statistic
    double tolerance = 0.0;  // bound it is compared against
    std::string note;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass() const;
};

ValidationReport run_validation_suite();

}  // namespace qcorr
