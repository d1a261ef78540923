#include "tskam/acceptance.hpp"

#include "tskam/averaging.hpp"
#include "tskam/bnf.hpp"
#include "tskam/domain.hpp"
#include "tskam/dynamics.hpp"
#include "tskam/kam.hpp"
#include "tskam/tfseries.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

namespace tskam {

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// ---------------------------------------------------------------- constants
Verdict crit_constants(std::mt19937_64&) {
    const double k = underline_k();
    // roots of a^3 - 9a - 8 from the companion matrix, independent of the closed forms
    Eigen::Matrix3d C;
    C << 0, 0, 8, 1, 0, 9, 0, 1, 0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(C);
    std::vector<double> num;
    for (int i = 0; i < 3; ++i) num.push_back(es.eigenvalues()[i].real());
    std::sort(num.begin(), num.end());
    const TangencyCubic t = tangency_cubic();
    double rootdiff = 0;
    for (int i = 0; i < 3; ++i) rootdiff = std::max(rootdiff, std::abs(num[i] - t.roots[i]));
    const double th = theta_validity_bound();
    const bool ok = std::abs(k - 1.5704) <= 1e-3 && t.residual < 1e-12 &&
                    rootdiff < 1e-12 && std::abs(th - 0.1423) <= 1e-3;
    return {ok, "k=" + fmt("%.6f", k) + " cubic_residual=" + fmt("%.1e", t.residual) + " root_diff=" +
                    fmt("%.1e", rootdiff) + " theta_bound=" + fmt("%.6f", th)};
}

// ---------------------------------------------------------------- x* bracket
Verdict crit_xstar(std::mt19937_64&) {
    int bad = 0;
    double worst = 0;
    for (int i = 1; i <= 100; ++i) {
        const double th = 0.1 * i / 100;  // (0, 0.1]
        const BracketReport b = xstar_bracket(th);
        const bool ok = b.bracket_ok && b.root_inside && b.g_lo < 0 && b.g_hi > 0 && 1 + 4 * th < b.xstar &&
                        b.xstar < 1 + 6 * th;
        if (!ok) ++bad;
        worst = std::max(worst, (b.xstar - 1) / th);
    }
    return {bad == 0, "100 thetas, failures=" + std::to_string(bad) + " max (x*-1)/theta=" + fmt("%.4f", worst)};
}

// ---------------------------------------------------------------- inclusion
Verdict crit_inclusion(std::mt19937_64& rng) {
    DomainSpec s;
    const InclusionHypotheses h = check_inclusion_hypotheses(s);
    if (!h.all()) return {false, "hypotheses fail: " + h.failures()};
    const InclusionReport r = verify_inclusion_X(s, 10000, rng());
    return {r.pass(), "samples=" + std::to_string(r.samples) + " in_all=" + std::to_string(r.in_all) +
                          " chord_ok=" + std::to_string(r.chord_ok)};
}

// ---------------------------------------------------------------- measure chain
Verdict crit_measure(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    bool ok = true;
    std::ostringstream os;
    for (int d = 0; d < 5; ++d) {
        DomainSpec s;
        // admissible: the inclusion hypotheses (k_+ >= 2 needs alpha_+ >= 0.04 at these masses) and the
        // measure preconditions
        for (;;) {
            s.G = 0.5 + 1.5 * u(rng);
            s.eps = 0.2 + 0.8 * u(rng);
            s.gamma = 0.5 * u(rng) * s.c1 * s.c1 * s.eps * s.eps;
            s.alpha_plus = 0.02 + (s.c * s.c / 16 - 0.02) * u(rng);
            s.Lambda_minus = 0.5 * s.G;
            s.Lambda_plus = lambda_plus_of_G(s.G);
            if (check_inclusion_hypotheses(s).all() && s.alpha_plus < s.c * s.c / 16) break;
        }
        const MeasureReport m = measure_Astar(s, 100000, rng());
        const bool c1 = m.monte_carlo + 2 * m.mc_sigma >= m.integral;
        const bool c2 = m.integral >= m.bound;
        ok = ok && c1 && c2;
        os << (d ? "; " : "") << "mc=" << fmt("%.4g", m.monte_carlo) << "+-" << fmt("%.2g", m.mc_sigma)
           << " int=" << fmt("%.4g", m.integral) << " bound=" << fmt("%.4g", m.bound);
    }
    return {ok, os.str()};
}

// ---------------------------------------------------------------- symplecticity
CartesianState random_state(std::mt19937_64& rng, const MassParams& mp) {
    std::uniform_real_distribution<double> u(0, 1);
    KeplerElements e1{0.5 + 0.5 * u(rng), 0.05 + 0.4 * u(rng), 0.1 + 1.0 * u(rng), kTwoPi * u(rng), kTwoPi * u(rng),
                      kTwoPi * u(rng)};
    KeplerElements e2{3.0 + 2.0 * u(rng), 0.05 + 0.4 * u(rng), 0.1 + 1.0 * u(rng), kTwoPi * u(rng), kTwoPi * u(rng),
                      kTwoPi * u(rng)};
    CartesianState s;
    cartesian_from_elements(e1, mp.mred(1), mp.Mred(1), s.y1, s.x1);
    cartesian_from_elements(e2, mp.mred(2), mp.Mred(2), s.y2, s.x2);
    return s;
}

Verdict crit_symplectic(std::mt19937_64& rng) {
    MassParams mp{1.0, 10.0, 1.0, 1e-3};
    std::array<bool, 12> none{}, jrd{}, rps{};
    for (int i = 6; i < 12; ++i) jrd[i] = true;
    rps[6] = rps[7] = rps[11] = true;
    double worst = 0, hworst = 0;
    std::string worst_map;
    auto upd = [&](double d, const char* name) {
        if (d > worst) worst = d, worst_map = name;
    };
    for (int i = 0; i < 20; ++i) {
        const CartesianState s = random_state(rng, mp);
        const Phase12 xc = s.phase();
        const JrdCoords j = jrd_from_cartesian(s, mp);
        const RpsCoords r = rps_from_cartesian(s, mp);
        const PeriheliaCoords p = perihelia_from_cartesian(s, mp);
        auto C = [](const Phase12& z) { return CartesianState::from_phase(z); };
        upd(symplecticity_defect([&](const Phase12& z) { return jrd_from_cartesian(C(z), mp).phase(); }, xc, jrd),
            "cartesian->jrd");
        upd(symplecticity_defect([&](const Phase12& z) { return cartesian_from_jrd(JrdCoords::from_phase(z), mp).phase(); },
                                 j.phase(), none),
            "jrd->cartesian");
        upd(symplecticity_defect([&](const Phase12& z) { return rps_from_cartesian(C(z), mp).phase(); }, xc, rps),
            "cartesian->rps");
        upd(symplecticity_defect([&](const Phase12& z) { return cartesian_from_rps(RpsCoords::from_phase(z), mp).phase(); },
                                 r.phase(), none),
            "rps->cartesian");
        upd(symplecticity_defect([&](const Phase12& z) { return perihelia_from_cartesian(C(z), mp).phase(); }, xc, jrd),
            "cartesian->perihelia");
        upd(symplecticity_defect(
                [&](const Phase12& z) { return cartesian_from_perihelia(PeriheliaCoords::from_phase(z), mp).phase(); },
                p.phase(), none),
            "perihelia->cartesian");
        upd(symplecticity_defect([&](const Phase12& z) { return rps_from_jrd(JrdCoords::from_phase(z)).phase(); },
                                 j.phase(), rps),
            "jrd->rps");
        const double h0 = hamiltonian(s, mp);
        for (double h : {hamiltonian(j, mp), hamiltonian(r, mp), hamiltonian(p, mp)})
            hworst = std::max(hworst, std::abs(h - h0) / std::abs(h0));
    }
    return {worst < 1e-6 && hworst < 1e-10, "max defect=" + fmt("%.2e", worst) + " (" + worst_map +
                                                ") max cross-chart dH/H=" + fmt("%.2e", hworst)};
}

// ---------------------------------------------------------------- equilibria
Verdict crit_equilibria(std::mt19937_64& rng) {
    DomainSpec spec;
    QuadratureConfig q;
    q.strict = false;
    bool ok = true;
    double ge = 0, gh = 0, re_ratio = 0;
    int n_ell = 0, n_hyp = 0;
    for (int d = 0; d < 10; ++d) {
        double L1, L2, G2;
        if (!sample_Ap_physical(spec, rng, L1, L2, G2)) return {false, "no admissible draw"};
        const EquilibriumReport e = elliptic_equilibrium_check(L1, L2, spec.masses, q);
        double mx = 0, re = 0;
        for (auto z : e.eigenvalues) mx = std::max(mx, std::abs(z)), re = std::max(re, std::abs(z.real()));
        re_ratio = std::max(re_ratio, re / mx);
        ge = std::max(ge, e.gradient_ratio);
        const EquilibriumReport h = hyperbolic_equilibrium_check(L1, L2, G2, spec, q);
        gh = std::max(gh, h.gradient_ratio);
        const bool eo = e.gradient_ratio < 1e-8 && re <= 1e-6 * mx && e.classification == "elliptic";
        const bool ho = h.gradient_ratio < 1e-8 && h.classification == "hyperbolic";
        n_ell += eo;
        n_hyp += ho;
        ok = ok && eo && ho;
    }
    return {ok, "elliptic " + std::to_string(n_ell) + "/10 (max grad ratio " + fmt("%.1e", ge) + ", max |Re|/|lambda| " +
                    fmt("%.1e", re_ratio) + "), hyperbolic " + std::to_string(n_hyp) + "/10 (max grad ratio " +
                    fmt("%.1e", gh) + ")"};
}

// ---------------------------------------------------------------- BNF
Verdict crit_bnf(std::mt19937_64& rng) {
    const MassParams mp = DomainSpec{}.masses;
    std::ostringstream os;
    bool ok = true;
    const double L1 = 2.5, L2 = 1.5;
    for (int s : {2, 4}) {
        BnfConfig c;
        c.s = s;
        const BnfResult r = bnf_at(L1, L2, mp, c);
        std::vector<double> radii;
        for (int i = 0; i < 5; ++i) radii.push_back(0.04 * std::sqrt(L2) * std::pow(10.0, i / 4.0));
        const RemainderFit f = remainder_scaling(r, radii, 24, rng());
        const bool pass = std::abs(f.exponent - (2 * s + 1)) <= 0.3;
        ok = ok && pass;
        os << "s=" << s << " exponent=" << fmt("%.3f", f.exponent) << " (target " << 2 * s + 1 << "+-0.3); ";
    }
    DomainSpec spec;
    double worst = 1e300;
    for (int d = 0; d < 5; ++d) {
        double a, b, g;
        if (!sample_Ap_physical(spec, rng, a, b, g)) return {false, "no admissible draw"};
        BnfConfig c;
        c.s = 2;
        const TorsionReport t = torsion_det(bnf_at(a, b, mp, c));
        worst = std::min(worst, t.ratio());
    }
    const bool det_ok = worst > 1e-8;
    os << "min |det T|/max|T|^3 over 5 Lambda=" << fmt("%.3e", worst);
    return {ok && det_ok, os.str()};
}

// ---------------------------------------------------------------- KAM recursion
Verdict crit_kam(std::mt19937_64& rng) {
    int good = 0;
    std::string first_fail;
    for (int i = 0; i < 20; ++i) {
        const KamInput in = sample_admissible(rng);
        const RunResult r = run(in, 8);
        if (r.verdict && r.states.size() == 9) ++good;
        else if (first_fail.empty() && !r.failures.empty()) first_fail = r.failures.front();
    }
    KamInput bad = sample_admissible(rng);
    bad.E = 1e-2;  // c_hat E_hat far above 1
    const RunResult rb = run(bad, 8);
    const bool caught = !rb.verdict && !rb.conditions_passed;
    return {good == 20 && caught, std::to_string(good) + "/20 runs pass all step bounds; violating input " +
                                      (caught ? "caught" : "NOT caught") + (first_fail.empty() ? "" : "; " + first_fail)};
}

// ---------------------------------------------------------------- homological step
Verdict crit_homological(std::mt19937_64& rng) {
    const int K = 28;
    const double s = 0.5, eps = 1.0, r = 0.1;
    const double s_hat = 0.2, eps_hat = 0.2, r_hat = 0.05;
    DivisorSpec div;
    div.omega1 = {1.0};
    div.omega2 = {(std::sqrt(5.0) - 1) / 2};
    div.nu = {cplx(1.0, 0.0)};
    div.K = K;
    div.lattice = Lattice{{false, false}};
    div.alpha1 = div.alpha2 = 1e-300;
    const NonresonanceReport nr = check_nonresonance(div, K);
    const double amin = std::min(nr.min_fast, nr.min_slow);
    div.alpha1 = div.alpha2 = 0.99 * amin;
    const double c1 = bracket_constant_bound(2, 1);
    TruncationWindow w;
    w.jet_degree = 2;
    w.max_degree = 4;
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> kd(-40, 40), bit(0, 1);
    bool ok = true;
    double worst = 0;
    std::ostringstream os;
    for (int ex = 0; ex < 5; ++ex) {
        TFSeries f(2, 1, w, {0.0, 0.0});
        while (f.size() < 60) {
            const int k1 = kd(rng), k2 = kd(rng);
            if (std::abs(k1) + std::abs(k2) > 40) continue;
            const int al = bit(rng), be = bit(rng);
            f.add(f.make({k1, k2}, {al}, {be}, {bit(rng), 0}), std::polar(std::exp(-(std::abs(k1) + std::abs(k2)) * s),
                                                                          kTwoPi * u(rng)));
        }
        const double raw = weighted_norm(f, s, eps, r);
        const double target = 1e-6 * amin / 0.02;
        f *= cplx(target / raw);
        const double nf = weighted_norm(f, s, eps, r);
        const AveragingSmallness sm = check_averaging_smallness(K, s_hat, eps_hat, eps, r_hat, c1, nf, div.alpha2);
        if (!sm.pass()) {
            ok = false;
            os << "example " << ex << " violates the smallness condition; ";
            continue;
        }
        const TFSeries h = linear_hamiltonian(div, 1, w, {0.0, 0.0});
        const TFSeries phi = solve_homological(f, div);
        const TFSeries H1 = lie_transform(phi, h + f, 4);
        const TFSeries R = H1 - h - normal_form_part(truncate_K(f, K), div.lattice);
        const double nr1 = weighted_norm(R, s - s_hat, eps - eps_hat, r - r_hat);
        const double bound = std::exp(-K * sm.sigma_hat / 4) * nf;
        worst = std::max(worst, nr1 / bound);
        ok = ok && nr1 < 2 * bound;
    }
    os << "K=" << K << " sigma_hat=" << s_hat << " max residual/(e^{-K sigma/4}|f|)=" << fmt("%.3e", worst)
       << " (limit 2)";
    return {ok, os.str()};
}

// ---------------------------------------------------------------- dynamics
Verdict crit_dynamics(std::mt19937_64&) {
    std::ostringstream os;
    MassParams mp = DomainSpec{}.masses;
    // integrable limit
    const RpsCoords seed{2.5, 1.5, 0.01, 0.01, 0.01, 0.9, 0.0, 1.0, 0.01, -0.01, 0.005, 0.2};
    IntegratorConfig cfg;
    cfg.time = 30 * kTwoPi / kepler_frequency(2, 1.5, mp);
    cfg.stride = 8;
    const Trajectory tr = integrate(cartesian_from_rps(seed, mp), mp, cfg);
    const FrequencySpectrum fs = frequency_analysis(tr, mp, {"lambda1", "lambda2"});
    const double e1 = std::abs(fs.fast[0].frequency / kepler_frequency(1, 2.5, mp) - 1);
    const double e2 = std::abs(fs.fast[1].frequency / kepler_frequency(2, 1.5, mp) - 1);
    const bool ok0 = e1 < 1e-6 && e2 < 1e-6;
    os << "mu=0 rel freq err " << fmt("%.1e", e1) << "," << fmt("%.1e", e2) << "; ";

    // slow frequencies against mu
    const SlowSweep sw = slow_frequency_sweep(6.0, 1.5, mp, {1e-5, 2e-5, 4e-5}, 2, 0.02, 20000.0);
    const bool ok1 = std::abs(sw.exponent - 1.0) <= 0.1;
    os << "slow exponent " << fmt("%.4f", sw.exponent) << "; ";

    // transverse e-folding near N_0
    DomainSpec spec;
    spec.masses.mu = 0.005;
    QuadratureConfig q;
    q.strict = false;
    const double L1 = 3.0, L2 = 1.5, G2 = 1.2;
    const EquilibriumReport h = hyperbolic_equilibrium_check(L1, L2, G2, spec, q);
    const double lam = h.rates.empty() ? 0.0 : h.rates.front();
    IntegratorConfig hc;
    // P1/24 and P1/32 splitting errors swamp the 1e-5 secular rate; P1/64 does not
    hc.step = kTwoPi / kepler_frequency(1, L1, spec.masses) / 64;
    hc.time = 6.0 / lam;
    hc.stride = 1;
    const StabilityReport st = stability_perihelia(L1, L2, G2, spec.G, 1e-3, spec.masses, hc, 20.0);
    const double ratio = lam > 0 ? st.growth_rate / lam : 0.0;
    const bool ok2 = st.classification == "hyperbolic" && std::abs(ratio - 1) <= 0.2;
    os << "e-folding " << fmt("%.4e", st.growth_rate) << " vs lambda " << fmt("%.4e", lam) << " (ratio "
       << fmt("%.3f", ratio) << ")";
    return {ok0 && ok1 && ok2, os.str()};
}

struct Entry {
    const char* id;
    const char* name;
    Verdict (*fn)(std::mt19937_64&);
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> e{
        {"constants", "closed-form constants", crit_constants},
        {"xstar", "x* bracket over 100 thetas", crit_xstar},
        {"inclusion", "X0 inside X1 X2 X3 (1e4 samples)", crit_inclusion},
        {"measure", "measure chain MC >= integral >= bound", crit_measure},
        {"symplectic", "chart symplecticity and cross-chart H", crit_symplectic},
        {"equilibria", "elliptic z=0 / hyperbolic N0", crit_equilibria},
        {"bnf", "BNF remainder exponent and torsion", crit_bnf},
        {"kam", "KAM recursion bounds", crit_kam},
        {"homological", "one averaging step residual", crit_homological},
        {"dynamics", "frequencies, O(mu) slow scale, e-folding", crit_dynamics},
    };
    return e;
}

}  // namespace

std::vector<std::string> acceptance_ids() {
    std::vector<std::string> v;
    for (const auto& e : entries()) v.push_back(e.id);
    return v;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < entries().size(); ++i) {
        const Entry& e = entries()[i];
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), e.id) == opt.only.end()) continue;
        // per-criterion stream: results do not depend on which subset runs
        std::mt19937_64 rng(opt.seed + 7919 * i);
        CriterionResult r;
        r.id = e.id;
        r.name = e.name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Verdict v = e.fn(rng);
            r.pass = v.pass;
            r.detail = v.detail;
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(r);
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    return std::string(r.pass ? "PASS " : "FAIL ") + r.id + " " + r.name + ": " + r.detail + " (" +
           fmt("%.1f", r.seconds) + " s)";
}

std::string summary_json(const std::vector<CriterionResult>& rs) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rs) arr.push_back({{"id", r.id}, {"pass", r.pass}});
    j["criteria"] = arr;
    return j.dump(2) + "\n";
}

}  // namespace tskam
