// Command-line entry point. Exit status: 0 success, 1 assertion failure (a checked property or a
// module precondition does not hold), 2 configuration error.

#include "tskam/acceptance.hpp"
#include "tskam/averaging.hpp"
#include "tskam/bnf.hpp"
#include "tskam/domain.hpp"
#include "tskam/dynamics.hpp"
#include "tskam/io.hpp"
#include "tskam/kam.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace tskam;
namespace fs = std::filesystem;

namespace {

struct Assertion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    std::string config_path;
    std::string out;
    bool json_mode = false;
    std::int64_t seed = -1;
    json cfg = json::object();
    fs::path dir;
    std::uint64_t rng_seed = 20240611;
    MassParams masses = DomainSpec{}.masses;

    const json& block(const char* name) const {
        static const json empty = json::object();
        return cfg.contains(name) ? cfg.at(name) : empty;
    }
};

void load(Context& c) {
    if (!c.config_path.empty()) c.cfg = read_json(c.config_path);
    reject_unknown(c.cfg, {"schema", "seed", "output_dir", "masses", "coords", "average", "bnf", "domains", "kam",
                           "simulate", "report"},
                   "config");
    const int schema = get_int(c.cfg, "schema", "config", kSchemaVersion);
    if (schema != kSchemaVersion)
        throw Error(Error::Kind::Config, "config.schema: unsupported version " + std::to_string(schema));
    if (c.cfg.contains("seed")) {
        const auto& s = c.cfg.at("seed");
        if (!s.is_number_unsigned()) throw Error(Error::Kind::Config, "config.seed: expected a non-negative integer");
        c.rng_seed = s.get<std::uint64_t>();
    }
    if (c.seed >= 0) c.rng_seed = std::uint64_t(c.seed);
    if (c.cfg.contains("masses")) c.masses = masses_from_json(c.cfg.at("masses"), "config.masses", c.masses);
    const std::string od = get_string(c.cfg, "output_dir", "config", "out");
    c.dir = output_dir(c.out.empty() ? od : c.out);
}

void emit(const Context& c, const std::string& name, const json& j) {
    const std::string text = dump(j);
    atomic_write(c.dir / (name + ".json"), text);
    if (c.json_mode) std::cout << text;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void say(const Context& c, const std::string& line) {
    if (!c.json_mode) std::cout << line << "\n";
}

DomainSpec domain_spec(const json& b, const std::string& p, const MassParams& mp) {
    DomainSpec s;
    s.masses = mp;
    s.G = get_positive(b, "G", p, s.G);
    s.Lambda_minus = get_positive(b, "Lambda_minus", p, 0.5 * s.G);
    s.Lambda_plus = get_positive(b, "Lambda_plus", p, lambda_plus_of_G(s.G));
    s.alpha_minus = get_positive(b, "alpha_minus", p, s.alpha_minus);
    s.alpha_plus = get_positive(b, "alpha_plus", p, s.alpha_plus);
    s.c = get_positive(b, "c", p, s.c);
    s.c1 = get_positive(b, "c1", p, s.c1);
    s.delta = get_positive(b, "delta", p, s.delta);
    s.eps = get_positive(b, "eps", p, s.eps);
    s.gamma = get_number(b, "gamma", p, s.gamma);
    try {
        validate(s);
    } catch (const Error& e) {
        throw Error(Error::Kind::Config, p + ": " + e.what());
    }
    return s;
}

// ---------------------------------------------------------------- coords
int cmd_coords(Context& c) {
    const json& b = c.block("coords");
    reject_unknown(b, {"state"}, "config.coords");
    ChartState st = b.contains("state")
                        ? state_from_json(b.at("state"), "config.coords.state")
                        : ChartState(cartesian_from_rps(RpsCoords{2.5, 1.5, 0.01, 0.01, 0.01, 0.9, 0.0, 1.0, 0.01, -0.01,
                                                                  0.005, 0.2},
                                                        c.masses));
    const MassParams& mp = c.masses;
    const CartesianState cs = std::visit(
        [&](const auto& s) -> CartesianState {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CartesianState>) return s;
            else if constexpr (std::is_same_v<T, JrdCoords>) return cartesian_from_jrd(s, mp);
            else if constexpr (std::is_same_v<T, RpsCoords>) return cartesian_from_rps(s, mp);
            else return cartesian_from_perihelia(s, mp);
        },
        st);
    json j;
    j["schema"] = kSchemaVersion;
    j["masses"] = to_json_value(mp);
    j["input_chart"] = chart_name(st);
    json charts = json::array();
    const double h0 = hamiltonian(cs, mp);
    double worst = 0;
    auto add = [&](const ChartState& s, double h) {
        json e = state_to_json(s);
        e["H"] = h;
        charts.push_back(e);
        worst = std::max(worst, std::abs(h - h0) / std::abs(h0));
    };
    add(cs, h0);
    const JrdCoords jr = jrd_from_cartesian(cs, mp);
    add(jr, hamiltonian(jr, mp));
    const RpsCoords rp = rps_from_cartesian(cs, mp);
    add(rp, hamiltonian(rp, mp));
    const PeriheliaCoords pe = perihelia_from_cartesian(cs, mp);
    add(pe, hamiltonian(pe, mp));
    j["charts"] = charts;
    j["max_relative_H_spread"] = worst;
    emit(c, "coords", j);
    say(c, "coords: 4 charts, max relative H spread " + sci(worst));
    if (!(worst < 1e-10)) throw Assertion("coords: chart Hamiltonians disagree");
    return 0;
}

// ---------------------------------------------------------------- average
int cmd_average(Context& c) {
    const json& b = c.block("average");
    const std::string p = "config.average";
    reject_unknown(b, {"Lambda1", "Lambda2", "Gamma2", "G", "N", "check"}, p);
    const double L1 = get_positive(b, "Lambda1", p, 3.0), L2 = get_positive(b, "Lambda2", p, 1.5);
    const double G2 = get_positive(b, "Gamma2", p, 1.2);
    QuadratureConfig q;
    q.N = get_int(b, "N", p, q.N);
    q.strict = false;
    try {
        validate(q);
    } catch (const Error& e) {
        throw Error(Error::Kind::Config, p + ".N: " + e.what());
    }
    const std::string which = get_string(b, "check", p, "both");
    if (which != "both" && which != "elliptic" && which != "hyperbolic")
        throw Error(Error::Kind::Config, p + ".check: expected elliptic | hyperbolic | both");
    json j;
    j["schema"] = kSchemaVersion;
    bool ok = true;
    if (which != "hyperbolic") {
        const EquilibriumReport e = elliptic_equilibrium_check(L1, L2, c.masses, q);
        j["elliptic"] = json::parse(to_json(e));
        ok = ok && e.ok() && e.classification == "elliptic";
        say(c, "average: z=0 is " + e.classification);
    }
    if (which != "elliptic") {
        DomainSpec s = domain_spec(json::object(), p, c.masses);
        s.G = get_positive(b, "G", p, s.G);
        const EquilibriumReport h = hyperbolic_equilibrium_check(L1, L2, G2, s, q);
        j["hyperbolic"] = json::parse(to_json(h));
        ok = ok && h.ok() && h.classification == "hyperbolic";
        say(c, "average: N0 is " + h.classification);
    }
    emit(c, "average", j);
    if (!ok) throw Assertion("average: equilibrium classification differs from the expected one");
    return 0;
}

// ---------------------------------------------------------------- bnf
int cmd_bnf(Context& c) {
    const json& b = c.block("bnf");
    const std::string p = "config.bnf";
    reject_unknown(b, {"Lambda1", "Lambda2", "s", "N", "rho_rel", "radii", "directions"}, p);
    BnfConfig bc;
    const double L1 = get_positive(b, "Lambda1", p, 2.5), L2 = get_positive(b, "Lambda2", p, 1.5);
    bc.s = get_int(b, "s", p, 2);
    if (bc.s < 1) throw Error(Error::Kind::Config, p + ".s: must be >= 1");
    bc.N = get_int(b, "N", p, bc.N);
    if (bc.N < 8 || bc.N % 2) throw Error(Error::Kind::Config, p + ".N: must be even and >= 8");
    bc.rho_rel = get_positive(b, "rho_rel", p, bc.rho_rel);
    double lo = 0.04, hi = 0.4;
    if (b.contains("radii")) {
        const auto& r = b.at("radii");
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number() || !(r[0].get<double>() > 0) ||
            !(r[1].get<double>() > r[0].get<double>()))
            throw Error(Error::Kind::Config, p + ".radii: expected [lo, hi] with 0 < lo < hi");
        lo = r[0].get<double>(), hi = r[1].get<double>();
    }
    const int dirs = get_int(b, "directions", p, 24);
    if (dirs < 1) throw Error(Error::Kind::Config, p + ".directions: must be >= 1");
    const BnfResult r = bnf_at(L1, L2, c.masses, bc);
    std::vector<double> radii;
    for (int i = 0; i < 5; ++i) radii.push_back(lo * std::sqrt(L2) * std::pow(hi / lo, i / 4.0));
    const RemainderFit fit = remainder_scaling(r, radii, dirs, c.rng_seed);
    json j = json::parse(to_json(r, &fit));
    emit(c, "bnf", j);
    const TorsionReport t = torsion_det(r);
    say(c, "bnf: s=" + std::to_string(bc.s) + " remainder exponent " + sci(fit.exponent) +
               " |det T|/max|T|^3 " + sci(t.ratio()));
    return 0;
}

// ---------------------------------------------------------------- domains
int cmd_domains(Context& c, int figure) {
    const json& b = c.block("domains");
    const std::string p = "config.domains";
    reject_unknown(b, {"G", "Lambda_minus", "Lambda_plus", "alpha_minus", "alpha_plus", "c", "c1", "delta", "eps",
                       "gamma", "samples", "points"},
                   p);
    json spec_only = b;
    spec_only.erase("samples");
    spec_only.erase("points");
    const DomainSpec s = domain_spec(spec_only, p, DomainSpec{}.masses);
    const int samples = get_int(b, "samples", p, 10000);
    const int points = get_int(b, "points", p, 200);
    if (samples < 1) throw Error(Error::Kind::Config, p + ".samples: must be >= 1");
    if (points < 2) throw Error(Error::Kind::Config, p + ".points: must be >= 2");
    if (figure != 0) {
        const std::string name = "figure" + std::to_string(figure) + ".csv";
        atomic_write(c.dir / name, plot_csv(figure_data(s, figure, points)));
        say(c, "domains: wrote " + (c.dir / name).string());
        if (c.json_mode) std::cout << dump({{"figure", figure}, {"csv", (c.dir / name).string()}});
        return 0;
    }
    json j;
    j["schema"] = kSchemaVersion;
    const TangencyCubic tc = tangency_cubic();
    j["constants"] = {{"underline_k", underline_k()},
                      {"tangency_roots", tc.roots},
                      {"tangency_residual", tc.residual},
                      {"theta_bound", theta_validity_bound()}};
    const InclusionHypotheses h = check_inclusion_hypotheses(s);
    j["hypotheses"] = {{"pass", h.all()}, {"failures", h.failures()}};
    bool ok = true;
    if (h.all()) {
        const InclusionReport in = verify_inclusion_X(s, std::size_t(samples), c.rng_seed);
        j["inclusion"] = {{"samples", in.samples}, {"in_all", in.in_all}, {"chord_ok", in.chord_ok}, {"pass", in.pass()}};
        ok = ok && in.pass();
    }
    const double w = s.c1 * s.c1 * s.eps * s.eps;
    if (s.G >= 10 * w && s.alpha_plus < s.c * s.c / 16) {
        const MeasureReport m = measure_Astar(s, std::size_t(samples), c.rng_seed);
        j["measure"] = {{"monte_carlo", m.monte_carlo}, {"mc_sigma", m.mc_sigma}, {"integral", m.integral},
                        {"bound", m.bound}, {"theta", m.theta}, {"xstar", m.xstar}, {"chain_ok", m.chain_ok(2.0)}};
        ok = ok && m.chain_ok(2.0);
    }
    emit(c, "domains", j);
    say(c, std::string("domains: ") + (ok ? "all checks hold" : "a check failed"));
    if (!ok) throw Assertion("domains: inclusion or measure chain failed");
    return 0;
}

// ---------------------------------------------------------------- kam
int cmd_kam(Context& c) {
    const json& b = c.block("kam");
    const std::string p = "config.kam";
    reject_unknown(b, {"n1", "n2", "tau", "gamma1", "gamma2", "s", "rho", "eps", "eps_bar", "M", "M_hat", "M_bar",
                       "M_bar1", "M_bar2", "E", "lambda", "steps", "random"},
                   p);
    KamInput in;
    // without a kam block the input is an admissible draw from the seed
    if (get_bool(b, "random", p, b.empty())) {
        std::mt19937_64 rng(c.rng_seed);
        in = sample_admissible(rng);
    }
    in.n1 = get_int(b, "n1", p, in.n1);
    in.n2 = get_int(b, "n2", p, in.n2);
    if (in.n1 < 1 || in.n2 < 0) throw Error(Error::Kind::Config, p + ": need n1 >= 1 and n2 >= 0");
    in.tau = get_positive(b, "tau", p, in.tau);
    in.gamma1 = get_positive(b, "gamma1", p, in.gamma1);
    in.gamma2 = get_positive(b, "gamma2", p, in.gamma2);
    in.s = get_positive(b, "s", p, in.s);
    in.rho = get_positive(b, "rho", p, in.rho);
    in.eps = get_positive(b, "eps", p, in.eps);
    in.eps_bar = get_number(b, "eps_bar", p, in.eps_bar);
    if (in.eps_bar < 0) throw Error(Error::Kind::Config, p + ".eps_bar: must be >= 0");
    in.M = get_positive(b, "M", p, in.M);
    in.M_hat = get_positive(b, "M_hat", p, in.M_hat);
    in.M_bar = get_positive(b, "M_bar", p, in.M_bar);
    in.M_bar1 = get_positive(b, "M_bar1", p, in.M_bar1);
    in.M_bar2 = get_positive(b, "M_bar2", p, in.M_bar2);
    in.E = get_positive(b, "E", p, in.E);
    in.lambda = get_positive(b, "lambda", p, in.lambda);
    const int steps = get_int(b, "steps", p, 8);
    if (steps < 1) throw Error(Error::Kind::Config, p + ".steps: must be >= 1");

    const RunResult r = run(in, steps);
    const ConditionReport cr = check_conditions(in);
    json j;
    j["schema"] = kSchemaVersion;
    j["conditions"] = {{"pass", cr.pass()},
                       {"c_hat_E_hat", double(cr.c_hat_E_hat)},
                       {"c_tilde_E_tilde", double(cr.c_tilde_E_tilde)},
                       {"lambda_cond", double(cr.lambda_cond)},
                       {"failures", cr.failures()}};
    json st = json::array();
    for (const auto& s : r.states) {
        std::ostringstream eh;
        eh.precision(6);
        eh << std::scientific << s.E_hat;  // E_hat underflows double after a few steps
        st.push_back({{"j", s.j}, {"K", double(s.K)}, {"rho_hat", double(s.rho_hat)}, {"E_hat", eh.str()},
                      {"lambda", double(s.lambda)}});
    }
    j["states"] = st;
    j["verdict"] = r.verdict;
    j["failures"] = r.failures;
    emit(c, "kam", j);
    atomic_write(c.dir / "kam.csv", kam_csv(r));
    say(c, std::string("kam: ") + (r.verdict ? "all step bounds hold" : "bounds violated"));
    if (!r.verdict) throw Assertion("kam: " + (r.failures.empty() ? std::string("verdict false") : r.failures.front()));
    return 0;
}

// ---------------------------------------------------------------- simulate
int cmd_simulate(Context& c, const std::string& seed_chart_flag) {
    const json& b = c.block("simulate");
    const std::string p = "config.simulate";
    reject_unknown(b, {"seed_chart", "state", "Lambda1", "Lambda2", "Gamma2", "G", "rho", "delta", "scheme", "step",
                       "time", "stride", "output_chart", "growth_cap"},
                   p);
    const MassParams& mp = c.masses;
    std::string seed_chart = seed_chart_flag.empty() ? get_string(b, "seed_chart", p, "rps") : seed_chart_flag;
    if (seed_chart != "rps" && seed_chart != "perihelia")
        throw Error(Error::Kind::Config, p + ".seed_chart: expected rps | perihelia");
    IntegratorConfig ic;
    ic.scheme = get_string(b, "scheme", p, ic.scheme);
    ic.step = get_number(b, "step", p, 0.0);
    ic.stride = get_int(b, "stride", p, 16);
    const double L1 = get_positive(b, "Lambda1", p, seed_chart == "rps" ? 2.5 : 3.0);
    const double L2 = get_positive(b, "Lambda2", p, 1.5);
    const double G2 = get_positive(b, "Gamma2", p, 1.2);
    const double G = get_positive(b, "G", p, 1.0);
    const double rho = get_positive(b, "rho", p, 0.02);
    const double delta = get_positive(b, "delta", p, 1e-3);
    const double cap = get_positive(b, "growth_cap", p, 20.0);
    const std::string out_chart = get_string(b, "output_chart", p, seed_chart);
    if (out_chart != "cartesian" && out_chart != "jrd" && out_chart != "rps" && out_chart != "perihelia")
        throw Error(Error::Kind::Config, p + ".output_chart: expected cartesian | jrd | rps | perihelia");
    ic.time = get_positive(b, "time", p, 20 * kTwoPi / kepler_frequency(2, L2, mp));
    try {
        validate(ic);
    } catch (const Error& e) {
        throw Error(Error::Kind::Config, p + ": " + e.what());
    }

    CartesianState s0;
    if (b.contains("state")) {
        const ChartState st = state_from_json(b.at("state"), p + ".state");
        s0 = std::visit(
            [&](const auto& s) -> CartesianState {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, CartesianState>) return s;
                else if constexpr (std::is_same_v<T, JrdCoords>) return cartesian_from_jrd(s, mp);
                else if constexpr (std::is_same_v<T, RpsCoords>) return cartesian_from_rps(s, mp);
                else return cartesian_from_perihelia(s, mp);
            },
            st);
    } else if (seed_chart == "rps") {
        // all three secular modes lightly excited: the rps inverse passes through a chart singular
        // at exactly coplanar states; the invariable plane is tilted so that Z < G
        s0 = cartesian_from_rps(RpsCoords{L1, L2, rho, 0.3 * rho, 0.3 * rho, (L1 - L2) * std::cos(0.4), 0.0, 1.0,
                                          0.3 * rho, -0.3 * rho, 0.3 * rho, 0.2},
                                mp);
    } else {
        s0 = cartesian_from_perihelia(perihelia_point(L1, L2, G2, delta, 0.0, G), mp);
    }

    const Trajectory tr = integrate(s0, mp, ic);
    atomic_write(c.dir / "trajectory.csv", trajectory_csv(tr, mp, out_chart));
    json j;
    j["schema"] = kSchemaVersion;
    j["masses"] = to_json_value(mp);
    j["seed_chart"] = seed_chart;
    j["initial_state"] = state_to_json(s0);
    j["step"] = tr.step;
    j["samples"] = tr.t.size();
    j["max_energy_error"] = tr.max_energy_error();
    j["max_c_error"] = tr.max_c_error();
    const FrequencySpectrum fs = frequency_analysis(tr, mp, {"lambda1", "lambda2"});
    j["spectrum"] = json::parse(to_json(fs));
    if (seed_chart == "perihelia" && !b.contains("state") && mp.mu > 0) {
        const StabilityReport sr = stability_perihelia(L1, L2, G2, G, delta, mp, ic, cap);
        j["stability"] = json::parse(to_json(sr));
    } else if (seed_chart == "rps" && mp.mu > 0) {
        const StabilityReport sr = stability_rps(rps_from_cartesian(s0, mp), mp, ic);
        j["stability"] = json::parse(to_json(sr));
    }
    emit(c, "simulate", j);
    say(c, "simulate: " + std::to_string(tr.t.size()) + " samples, max |dE/E| " +
               sci(tr.max_energy_error()));
    return 0;
}

// ---------------------------------------------------------------- report
int cmd_report(Context& c, bool all, const std::vector<std::string>& only, const std::string& golden) {
    const json& b = c.block("report");
    reject_unknown(b, {"only"}, "config.report");
    AcceptanceOptions opt;
    opt.seed = c.rng_seed;
    if (!all) {
        opt.only = only;
        if (opt.only.empty() && b.contains("only")) {
            if (!b.at("only").is_array()) throw Error(Error::Kind::Config, "config.report.only: expected an array");
            for (const auto& e : b.at("only")) {
                if (!e.is_string()) throw Error(Error::Kind::Config, "config.report.only: expected strings");
                opt.only.push_back(e.get<std::string>());
            }
        }
        if (opt.only.empty()) throw Error(Error::Kind::Config, "report: pass --all or --only <id>");
        const auto ids = acceptance_ids();
        for (const auto& id : opt.only)
            if (std::find(ids.begin(), ids.end(), id) == ids.end())
                throw Error(Error::Kind::Config, "report.only: unknown criterion " + id);
    }
    const auto results = run_acceptance(opt, [&](const CriterionResult& r) { say(c, format_line(r)); });
    json j;
    j["schema"] = kSchemaVersion;
    j["seed"] = opt.seed;
    json arr = json::array();
    for (const auto& r : results) arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    j["criteria"] = arr;
    emit(c, "report", j);
    const std::string summary = summary_json(results);
    atomic_write(c.dir / "summary.json", summary);
    if (!golden.empty()) {
        const json want = read_json(golden), got = json::parse(summary);
        if (want != got) {
            std::cerr << "report: summary differs from " << golden << "\n" << summary;
            return 1;
        }
        say(c, "report: summary matches " + golden);
        return 0;
    }
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tskam: three-body secular normal forms, domains, KAM bookkeeping and numerical checks"};
    app.require_subcommand(1);
    Context c;
    app.add_option("--config", c.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", c.out, "output directory (TSKAM_OUTPUT_DIR overrides)");
    app.add_option("--seed", c.seed, "random seed (overrides config.seed)");
    app.add_flag("--json", c.json_mode, "print the JSON report on stdout");

    int figure = 0;
    std::string seed_chart, golden;
    bool all = false;
    std::vector<std::string> only;
    auto* coords = app.add_subcommand("coords", "convert one state through all charts");
    auto* average = app.add_subcommand("average", "equilibria of the averaged perturbation");
    auto* bnf = app.add_subcommand("bnf", "Birkhoff normal form at z = 0 and remainder scaling");
    auto* domains = app.add_subcommand("domains", "domain constants, inclusion, measure chain, figure data");
    domains->add_option("--figure", figure, "write plot data for figure 1 or 2")->check(CLI::IsMember({1, 2}));
    auto* kam = app.add_subcommand("kam", "KAM condition check and step recursion");
    auto* simulate = app.add_subcommand("simulate", "integrate the three-body flow");
    simulate->add_option("--seed-chart", seed_chart, "rps | perihelia")->check(CLI::IsMember({"rps", "perihelia"}));
    auto* report = app.add_subcommand("report", "acceptance suite");
    report->add_flag("--all", all, "run every criterion");
    report->add_option("--only", only, "criterion ids");
    report->add_option("--golden", golden, "compare the pass/fail summary against this file")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        load(c);
        if (*coords) return cmd_coords(c);
        if (*average) return cmd_average(c);
        if (*bnf) return cmd_bnf(c);
        if (*domains) return cmd_domains(c, figure);
        if (*kam) return cmd_kam(c);
        if (*simulate) return cmd_simulate(c, seed_chart);
        if (*report) return cmd_report(c, all, only, golden);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == Error::Kind::Config ? 2 : 1;
    } catch (const Assertion& e) {
        std::cerr << "assertion failed: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
