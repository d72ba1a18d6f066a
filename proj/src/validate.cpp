#include "qcorr/validate.hpp"

#include "qcorr/correlate.hpp"
#include "qcorr/harness.hpp"
#include "qcorr/montecarlo.hpp"
#include "qcorr/scan.hpp"
#include "qcorr/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <sstream>
#include <thread>

namespace qcorr {

bool ValidationReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass; });
}

namespace {

void add(ValidationReport& r, const std::string& name, double observed, double tol,
         const std::string& note = "")
{
    r.checks.push_back({name, observed <= tol, observed, tol, note});
}

void add_bool(ValidationReport& r, const std::string& name, bool pass,
              const std::string& note = "")
{
    r.checks.push_back({name, pass, pass ? 0.0 : 1.0, 0.0, note});
}

Spinor2 random_unit_spinor(std::uint64_t seed, std::uint64_t i)
{
    const SubStream s = trial_stream(seed, i);
    const double a = s.uniform(DrawSlot::theta) * 2.0 - 1.0;
    const double b = s.uniform(DrawSlot::setting_a) * 2.0 - 1.0;
    const double c = s.uniform(DrawSlot::setting_b) * 2.0 - 1.0;
    const double d = s.uniform(DrawSlot::outcome) * 2.0 - 1.0;
    Spinor2 psi;
    psi << Complex(a, b), Complex(c, d);
    const double n = psi.norm();
    return n > 1e-6 ? Spinor2(psi / n) : Spinor2(Spinor2::Unit(0));
}

double sawtooth(double omega)
{
    double w = std::abs(wrap_angle(omega));
    if (w > kPi) w = kTwoPi - w;
    return 1.0 - 2.0 * w / kPi;
}

std::vector<double> omega_grid(int n)
{
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = kTwoPi * i / n;
    return g;
}

double max_cell_diff(const JointDistribution& x, const JointDistribution& y)
{
    return std::max({std::abs(x.p_updn - y.p_updn), std::abs(x.p_dnup - y.p_dnup),
                     std::abs(x.p_upup - y.p_upup), std::abs(x.p_dndn - y.p_dndn)});
}

// --- qmath ---

void check_quadrature(ValidationReport& r)
{
    const auto rule = QuadratureRule::uniform(64);
    double wsum = 0.0;
    for (std::size_t i = 0; i < rule.nodes().size(); ++i) wsum += rule.weight();
    add(r, "quadrature_weights_sum", std::abs(wsum - kTwoPi), 1e-12);

    double worst = 0.0;
    for (int k : {0, 1, 3, 31}) {
        const Complex val = integrate_periodic(
            [&](double t) { return Complex(std::cos(k * t), std::sin(k * t)); }, rule);
        const Complex expect = (k == 0) ? Complex(kTwoPi, 0.0) : Complex(0.0, 0.0);
        worst = std::max(worst, std::abs(val - expect));
    }
    add(r, "quadrature_trig_exactness", worst, 1e-12, "e^{ik t}, k in {0,1,3,31}, 64 nodes");
}

void check_spinor_algebra(ValidationReport& r)
{
    double norm_dev = 0.0, imag_dev = 0.0, ortho = 0.0, eig = 0.0;
    for (double t : omega_grid(64)) {
        for (SpinPort p : {SpinPort::up, SpinPort::dn}) {
            const Spinor2 s = theta_spinor(t, p);
            const Complex self = inner(s, s);
            norm_dev = std::max(norm_dev, std::abs(self.real() - 1.0));
            imag_dev = std::max(imag_dev, std::abs(self.imag()));
            const double lambda = (p == SpinPort::up) ? 0.5 : -0.5;
            eig = std::max(eig,
                           (sigma_theta(t) * s - lambda * s).cwiseAbs().maxCoeff());
        }
        ortho = std::max(ortho, std::abs(inner(theta_spinor(t, SpinPort::up),
                                               theta_spinor(t, SpinPort::dn))));
    }
    add(r, "spinor_unit_norm", norm_dev, 1e-12);
    add(r, "inner_self_real", imag_dev, 1e-12);
    add(r, "port_orthogonality", ortho, 1e-12);
    add(r, "sigma_theta_eigenspinors", eig, 1e-12);

    double comp = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const Spinor2 psi = random_unit_spinor(0xC0FFEE, i);
        const double w = omega_grid(100)[static_cast<std::size_t>(i)] * 0.64;
        const double tot = std::norm(inner(sg_spinor(w, SpinPort::up), psi)) +
                           std::norm(inner(sg_spinor(w, SpinPort::dn), psi));
        comp = std::max(comp, std::abs(tot - 1.0));
    }
    add(r, "port_completeness", comp, 1e-12, "random unit spinors");

    double h0 = 0.0;
    for (SpinPort p : {SpinPort::up, SpinPort::dn})
        h0 = std::max(h0, (sg_spinor(0.0, p) - theta_spinor(0.0, p)).cwiseAbs().maxCoeff());
    add(r, "sg_zero_matches_reference", h0, 0.0, "bitwise equal spinors");
}

// --- states ---

void check_families(ValidationReport& r)
{
    const PairFamily families[] = {make_chiral_pair(), make_spin_pair(), make_linear_pair(),
                                   make_crypto_pair(+1), make_crypto_pair(-1)};

    int momentum_bad = 0;
    double tag_dev = 0.0;
    for (const auto& fam : families) {
        for (double t : omega_grid(16)) {
            for (const auto& term : fam.terms_at(t)) {
                if (term.a.momentum.sign + term.b.momentum.sign != 0) ++momentum_bad;
                switch (fam.conserved()) {
                case ConservedTag::jz_total_zero: {
                    const int jz =
                        chiral_jz(std::get<Helicity>(term.a.dof), term.a.momentum) +
                        chiral_jz(std::get<Helicity>(term.b.dof), term.b.momentum);
                    tag_dev = std::max(tag_dev, std::abs(double(jz)));
                    break;
                }
                case ConservedTag::jtheta_total_zero: {
                    const auto& da = std::get<SpinThetaDof>(term.a.dof);
                    const auto& db = std::get<SpinThetaDof>(term.b.dof);
                    if (da.port == db.port) tag_dev = std::max(tag_dev, 1.0);
                    tag_dev = std::max(tag_dev, std::abs(da.theta - db.theta));
                    break;
                }
                case ConservedTag::e_total_zero: {
                    const LineVec sum = line_vector(std::get<EFieldLineDof>(term.a.dof)) +
                                        line_vector(std::get<EFieldLineDof>(term.b.dof));
                    tag_dev = std::max(tag_dev, sum.cwiseAbs().maxCoeff());
                    break;
                }
                case ConservedTag::parity_bit: {
                    const int ba = std::get<QubitDof>(term.a.dof).value;
                    const int bb = std::get<QubitDof>(term.b.dof).value;
                    tag_dev = std::max(tag_dev, std::abs(double(ba - bb)));
                    break;
                }
                }
            }
        }
    }
    add(r, "momentum_conservation", double(momentum_bad), 0.0, "opposite momenta in every term");
    add(r, "conserved_tags", tag_dev, 1e-12);

    int exchange_bad = 0;
    const int expected_signs[] = {+1, -1, +1, +1, +1};
    for (std::size_t f = 0; f < std::size(families); ++f)
        for (double t : omega_grid(16)) {
            const auto sign = exchange_eigensign(families[f].terms_at(t));
            if (!sign || *sign != expected_signs[f]) ++exchange_bad;
        }
    add(r, "exchange_signs", double(exchange_bad), 0.0,
        "chiral +1, spin -1, linear +1, crypto +1");

    double norm_dev = 0.0;
    for (const auto& fam : families) norm_dev = std::max(norm_dev, std::abs(norm(fam) - 1.0));
    add(r, "family_norms", norm_dev, 1e-10, "quadrature over the orientation measure");
}

// --- correlate ---

void check_correlations(ValidationReport& r)
{
    double dev = 0.0;
    for (double w : omega_grid(64)) {
        Complex base[4];
        int k = 0;
        for (SpinPort pa : {SpinPort::up, SpinPort::dn})
            for (SpinPort pb : {SpinPort::up, SpinPort::dn})
                base[k++] = amplitude_spin(0.0, pa, w, pb);
        for (int i = 0; i < 256; ++i) {
            const double t = kTwoPi * i / 256;
            k = 0;
            for (SpinPort pa : {SpinPort::up, SpinPort::dn})
                for (SpinPort pb : {SpinPort::up, SpinPort::dn}) {
                    dev = std::max(dev, std::abs(amplitude_spin(t, pa, w, pb) - base[k]));
                    ++k;
                }
        }
    }
    add(r, "theta_independence", dev, 1e-12, "256 theta x 64 omega x 4 ports");

    const auto rule = default_rule();
    double sum_dev = 0.0, range_bad = 0.0, closed_spin = 0.0, closed_linear = 0.0;
    double marg = 0.0;
    for (double w : omega_grid(64)) {
        for (const JointDistribution& d :
             {joint_distribution_spin(w), joint_distribution_linear_closed(w)}) {
            sum_dev = std::max(sum_dev, std::abs(d.sum() - 1.0));
            for (double p : {d.p_updn, d.p_dnup, d.p_upup, d.p_dndn})
                if (p < -1e-15 || p > 1.0 + 1e-15) range_bad += 1.0;
        }
        closed_spin = std::max(closed_spin, max_cell_diff(joint_distribution_spin(w),
                                                          joint_distribution_spin_averaged(w, rule)));
        closed_linear = std::max(closed_linear,
                                 max_cell_diff(joint_distribution_linear_closed(w),
                                               joint_distribution_linear(w, rule)));
        for (Side side : {Side::A, Side::B})
            for (FamilyKind fam : {FamilyKind::spin_theta, FamilyKind::linear_theta,
                                   FamilyKind::chiral, FamilyKind::crypto})
                marg = std::max(marg, std::abs(marginal(w, side, fam) - 0.5));
    }
    add(r, "distribution_normalization", sum_dev, 1e-12);
    add(r, "probability_range", range_bad, 0.0);
    add(r, "spin_closed_vs_quadrature", closed_spin, 1e-10);
    add(r, "linear_closed_vs_quadrature", closed_linear, 1e-10);
    add(r, "no_signaling_marginals", marg, 1e-12, "all families, both sides, 64 omegas");

    double branch = 0.0, total = 0.0;
    for (double w : {0.0, 0.37, kPi / 2, 2.0, kPi - 0.1}) {
        const auto t = linear_branch_totals(w, rule);
        branch = std::max(branch, std::abs(t.plus - t.minus));
        total = std::max(total, std::abs(t.sum() - 2.0));
    }
    add(r, "linear_branch_symmetry", branch, 1e-10);
    add(r, "linear_weight_total", total, 1e-10, "raw branch-summed weight is 2");

    double line_dev = 0.0;
    for (double w : omega_grid(16))
        line_dev = std::max(line_dev, max_cell_diff(joint_distribution_linear(w, rule),
                                                    joint_distribution_linear(w + kPi, rule)));
    add(r, "linear_line_insensitivity", line_dev, 1e-12, "omega vs omega + pi");

    const double mismatched = coincidence_chiral(Helicity::left, Helicity::right);
    const double matched = coincidence_chiral(Helicity::left, Helicity::left);
    add_bool(r, "chirality_all_or_nothing", mismatched == 0.0 && matched == 0.5,
             "exactly 0 mismatched, exactly 1/2 matched");

    double lhv_dev = 0.0;
    const LhvModel model;
    for (double w : omega_grid(97))
        lhv_dev = std::max(lhv_dev, std::abs(lhv_correlation(model, w) - sawtooth(w)));
    add(r, "lhv_sawtooth_closed_form", lhv_dev, 1e-12);

    // Dual-route check: the exact piecewise integral against a dense
    // midpoint average of the same integrand.
    double lhv_grid_dev = 0.0;
    for (double w : {0.4, kPi / 4, 1.9, 4.5}) {
        const int n = 200001;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = (i + 0.5) * kTwoPi / n;
            acc += (std::cos(t) >= 0 ? 1.0 : -1.0) * (std::cos(t - w) >= 0 ? 1.0 : -1.0);
        }
        lhv_grid_dev = std::max(lhv_grid_dev, std::abs(acc / n - lhv_correlation(model, w)));
    }
    add(r, "lhv_vs_grid_average", lhv_grid_dev, 5e-5, "200001-point midpoint average");

    const ChshResult q = chsh(0.0, kPi / 2, kPi / 4, 3 * kPi / 4);
    add(r, "chsh_quantum_canonical", std::abs(q.s_value - 2.0 * std::sqrt(2.0)), 1e-12);
    const ChshResult l = chsh(0.0, kPi / 2, kPi / 4, 3 * kPi / 4, model);
    add(r, "chsh_lhv_canonical", std::abs(l.s_value - 2.0), 1e-12);

    double max_lhv_s = 0.0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const SubStream s = trial_stream(0xB411, i);
        const double a = s.uniform(DrawSlot::theta) * kTwoPi;
        const double ap = s.uniform(DrawSlot::setting_a) * kTwoPi;
        const double b = s.uniform(DrawSlot::setting_b) * kTwoPi;
        const double bp = s.uniform(DrawSlot::outcome) * kTwoPi;
        max_lhv_s = std::max(max_lhv_s, chsh(a, ap, b, bp, model).s_value);
    }
    const double gap = q.s_value - max_lhv_s;
    r.checks.push_back({"chsh_quantum_lhv_gap", gap >= 0.8 - 1e-9, gap, 0.8,
                        "min gap over 1e4 random LHV settings (pass if >= threshold)"});
}

// --- montecarlo ---

RunConfig spin_run(std::uint64_t seed, std::uint64_t n, double omega)
{
    RunConfig cfg;
    cfg.seed = seed;
    cfg.n_pairs = n;
    cfg.family = FamilyKind::spin_theta;
    cfg.settings_a = {SternGerlach{0.0}};
    cfg.settings_b = {SternGerlach{omega}};
    return cfg;
}

void check_montecarlo(ValidationReport& r)
{
    {
        const RunConfig cfg = spin_run(20250401, 2000, kPi / 3);
        const auto ev1 = generate_events(cfg);
        const auto ev2 = generate_events(cfg);
        std::ostringstream s1, s2;
        write_events(s1, ev1, OutputFormat::csv);
        write_events(s2, ev2, OutputFormat::csv);
        add_bool(r, "mc_reproducibility", s1.str() == s2.str(),
                 "identical seed gives byte-identical serialization");

        // Outcomes must be a function of the outcome slot alone; regenerate
        // them without ever looking at theta.
        bool slots_ok = true;
        const JointDistribution dist = joint_distribution_spin(kPi / 3);
        for (const auto& ev : ev1) {
            const auto [sa, sb] = sample_outcome(
                dist, trial_stream(cfg.seed, ev.pair_id).uniform(DrawSlot::outcome));
            if (sa != ev.outcome_a || sb != ev.outcome_b) slots_ok = false;
        }
        add_bool(r, "mc_theta_slot_isolation", slots_ok,
                 "outcomes regenerate from the outcome slot alone");
    }

    {
        int in_band = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const RunConfig cfg = spin_run(seed, 10000, kPi / 3);
            const CellTally cell = estimate(generate_events(cfg), cfg).only_cell();
            const double p = cell.p_opposite();
            const double se = cell.stderr_of(p);
            if (std::abs(p - 0.75) <= 3.0 * se) ++in_band;
        }
        r.checks.push_back({"mc_statistical_soundness", in_band >= 19, double(in_band), 19.0,
                            "seeds 1..20, omega=pi/3, n=1e4, 3-sigma band (pass if >= 19)"});
    }

    {
        RunConfig cfg;
        cfg.seed = 7;
        cfg.n_pairs = 2000;
        cfg.family = FamilyKind::chiral;
        cfg.settings_a = {ChiralityFilter{Helicity::left}};
        cfg.settings_b = {ChiralityFilter{Helicity::right}};
        const CellTally cell = estimate(generate_events(cfg), cfg).only_cell();
        add(r, "mc_chiral_mismatched_coincidences", double(cell.n_upup), 0.0,
            "filters (L,R): both-pass count");
    }
}

// --- harness (in-process session over loopback) ---

void check_harness(ValidationReport& r)
{
    SourceOptions src;
    src.config = spin_run(99, 2000, 0.0);

    std::uint16_t port = 0;
    std::mutex m;
    std::condition_variable cv;
    src.on_listening = [&](std::uint16_t p) {
        std::lock_guard<std::mutex> lock(m);
        port = p;
        cv.notify_all();
    };

    SessionResult session;
    std::thread source_thread([&] { session = run_source(src); });
    {
        std::unique_lock<std::mutex> lock(m);
        cv.wait_for(lock, std::chrono::seconds(5), [&] { return port != 0; });
    }

    DetectorLog log_a, log_b;
    std::thread det_a([&] {
        DetectorOptions d;
        d.port = port;
        d.side = Side::A;
        d.settings = src.config.settings_a;
        log_a = run_detector(d);
    });
    std::thread det_b([&] {
        DetectorOptions d;
        d.port = port;
        d.side = Side::B;
        d.settings = src.config.settings_b;
        log_b = run_detector(d);
    });
    det_a.join();
    det_b.join();
    source_thread.join();

    const bool all_opposite =
        session.complete &&
        std::all_of(session.events.begin(), session.events.end(),
                    [](const EventRecord& e) { return e.outcome_a == -e.outcome_b; });
    add_bool(r, "harness_session_complete",
             session.complete && log_a.complete && log_b.complete,
             session.failure.empty() ? "2000 trials, fixed omega=0" : session.failure);
    add_bool(r, "harness_perfect_anticorrelation", all_opposite, "omega=0 -> opposite outcomes");
    add_bool(r, "harness_audit_pass", audit(session.transcript).pass(), "");

    const auto reference = generate_events(src.config);
    bool match = session.events.size() == reference.size();
    for (std::size_t i = 0; match && i < reference.size(); ++i)
        match = session.events[i].outcome_a == reference[i].outcome_a &&
                session.events[i].outcome_b == reference[i].outcome_b &&
                session.events[i].theta_hidden == reference[i].theta_hidden;
    add_bool(r, "harness_matches_montecarlo", match,
             "fixed settings, same seed: identical event stream");

    Transcript bad = session.transcript;
    bad.push_back({0, kEndpointDetA, kEndpointDetB,
                   encode_message({.type = "error", .code = "probe"})});
    add_bool(r, "audit_flags_injected_edge", !audit(bad).pass(), "negative test");
}

}  // namespace

ValidationReport run_validation_suite()
{
    ValidationReport report;
    check_quadrature(report);
    check_spinor_algebra(report);
    check_families(report);
    check_correlations(report);
    check_montecarlo(report);
    check_harness(report);
    return report;
}

}  // namespace qcorr
