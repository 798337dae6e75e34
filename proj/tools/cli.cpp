#include "cli.hpp"

#include "checks.hpp"
#include "softedge/algebra.hpp"
#include "softedge/expansion.hpp"
#include "softedge/sampler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace softedge::cli {

namespace {

using nlohmann::json;

// Raised for problems with the configuration rather than the computation.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    int beta = 2;
    std::string kind = "gaussian";
    std::optional<int> n, p;
    int m = 0;
    double t_min = -5.0, t_max = 3.0, t_step = 0.1;
    std::uint64_t N = 1000000;
    std::uint64_t seed = 1;
    std::string eta = "1";
    bool third = false;
    std::string out, batch_out, batch_in;
    std::vector<std::string> checks;
    double mc_scale = 1.0;
    std::optional<int> j;
    std::optional<std::string> coeff_eta;
    std::optional<int> derive_m;
    std::optional<std::string> derive_kind;
    std::string pq_case = "hermite";
    std::optional<std::string> a2;
    int K = 6;
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

EnsembleKind parse_kind(const std::string& s) { return s == "laguerre" ? EnsembleKind::Laguerre : EnsembleKind::Gaussian; }

const char* kind_name(EnsembleKind k) { return k == EnsembleKind::Laguerre ? "laguerre" : "gaussian"; }

BigRational parse_positive_rational(const std::string& text, const char* what) {
    BigRational r;
    try {
        r = parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": not a rational number: " + text);
    }
    if (r <= 0) throw UsageError(std::string(what) + " must be positive");
    return r;
}

json poly_json(const RatPoly& p) { return json::parse(to_json(p)); }

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

ScalingParams scaling_of(const Config& c) {
    if (!c.n) throw UsageError("--n is required");
    const EnsembleKind kind = parse_kind(c.kind);
    if (kind == EnsembleKind::Laguerre && !c.p) throw UsageError("--p is required for the Laguerre ensemble");
    std::optional<double> p;
    if (kind == EnsembleKind::Laguerre) p = double(*c.p);
    try {
        return make_scaling(kind, c.beta, double(*c.n), p);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// Grid points on a 1e-9 lattice so that decimal steps print exactly.
std::vector<double> t_grid(const Config& c) {
    if (!(c.t_step > 0) || !(c.t_max >= c.t_min)) throw UsageError("t grid needs t-step > 0 and t-max >= t-min");
    const long long a = std::llround(c.t_min * 1e9), b = std::llround(c.t_step * 1e9);
    if (b == 0) throw UsageError("t-step below the 1e-9 grid resolution");
    const long long count = (std::llround(c.t_max * 1e9) - a) / b + 1;
    if (count > 10000000) throw UsageError("t grid too large");
    std::vector<double> t;
    for (long long i = 0; i < count; ++i) t.push_back(double(a + i * b) / 1e9);
    return t;
}

int cmd_tabulate(const Config& c, std::ostream& out) {
    if (c.m < 0 || c.m > 3) throw UsageError("--m must be 0..3");
    const EnsembleKind kind = parse_kind(c.kind);
    ScalingParams sp;
    sp.beta = c.beta;
    sp.kind = kind;
    if (c.m > 0) sp = scaling_of(c);
    const auto terms = expansion_terms(c.beta, kind);
    const auto grid = t_grid(c);
    const TWLabel label = tw_label(c.beta);

    std::string s = "t,F,dF";
    for (int j = 1; j <= c.m; ++j) {
        const std::string k = std::to_string(j);
        s += ",E" + k + ",dE" + k + ",S" + k + ",dS" + k;
    }
    s += '\n';
    for (double t : grid) {
        const auto F = F_derivs(label, 2 * c.m + 1, t);
        double S = F[0], dS = F[1], hj = 1.0;
        s += num(t) + ',' + num(F[0]) + ',' + num(F[1]);
        for (int j = 0; j < c.m; ++j) {
            hj *= sp.h;
            const double E = terms[j].eval(F, t, sp.tau), dE = terms[j].eval(F, t, sp.tau, 1);
            S += hj * E;
            dS += hj * dE;
            s += ',' + num(E) + ',' + num(dE) + ',' + num(S) + ',' + num(dS);
        }
        s += '\n';
    }
    emit(s, c.out, out);
    return kExitOk;
}

int cmd_simulate(const Config& c, std::ostream& out) {
    const BigRational eta = parse_positive_rational(c.eta, "--eta");
    SampleBatch batch;
    if (!c.batch_in.empty()) {
        batch = read_batch(c.batch_in);
    } else {
        const ScalingParams sp = scaling_of(c);
        const EnsembleSpec spec{c.beta, sp.kind, *c.n, sp.kind == EnsembleKind::Laguerre ? *c.p : 0};
        if (c.N == 0) throw UsageError("--N must be positive");
        batch = sample_batch(spec, c.N, c.seed);
    }
    if (!c.batch_out.empty()) write_batch(batch, c.batch_out);

    Histogram H;
    try {
        H = mc_histogram(batch, eta.get_d());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const ScalingParams& sp = batch.scaling;
    const auto base = expansion_terms(sp.beta, sp.kind);
    const auto adj = histogram_adjust(base, eta);
    const TWLabel label = tw_label(sp.beta);
    const double h = sp.h;

    std::string s = "t_mid,density,F" + std::to_string(sp.beta) + "p,corr1,corr2_adj,diff1_scaled,diff2_scaled,ci_lo,ci_hi";
    if (c.third) s += ",corr2,corr3_adj";
    s += '\n';
    for (std::size_t i = 0; i < H.counts.size(); ++i) {
        const double t = H.mid(i);
        const auto F = F_derivs(label, 7, t);
        const double d = H.density(i);
        const double c1 = adj[0].eval(F, t, sp.tau, 1), c2 = adj[1].eval(F, t, sp.tau, 1);
        const auto [lo, hi] = H.ci(i);
        s += num(t) + ',' + num(d) + ',' + num(F[1]) + ',' + num(c1) + ',' + num(c2) + ',' + num((d - F[1]) / h) + ',' +
             num((d - F[1] - h * c1) / (h * h)) + ',' + num(lo) + ',' + num(hi);
        if (c.third) s += ',' + num(base[1].eval(F, t, sp.tau, 1)) + ',' + num(adj[2].eval(F, t, sp.tau, 1));
        s += '\n';
    }
    emit(s, c.out, out);
    return kExitOk;
}

int cmd_validate(const Config& c, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names = c.checks;
    if (names.empty()) names = checks::check_names();
    const auto& known = checks::check_names();
    for (const auto& n : names)
        if (std::find(known.begin(), known.end(), n) == known.end()) throw UsageError("unknown check: " + n);
    if (!(c.mc_scale > 0)) throw UsageError("--mc-scale must be positive");

    checks::McOptions opt;
    opt.scale = c.mc_scale;
    opt.seed = c.seed;
    json report = {{"format", "softedge-validate"}, {"version", 1}, {"code_version", kCodeVersion}};
    json list = json::array();
    bool all = true;
    for (const auto& n : names) {
        const auto r = checks::run_check(n, opt);
        all &= r.pass;
        list.push_back({{"name", r.name},
                        {"pass", r.pass},
                        {"value", r.value},
                        {"tolerance", r.tolerance},
                        {"detail", r.detail},
                        {"seconds", r.seconds}});
        err << (r.pass ? "PASS " : "FAIL ") << r.name << '\n';
    }
    report["checks"] = list;
    report["pass"] = all;
    emit(report.dump(2) + '\n', c.out, out);
    return all ? kExitOk : kExitFailure;
}

int cmd_coeffs(const Config& c, std::ostream& out) {
    const EnsembleKind kind = parse_kind(c.kind);
    if (c.j && (*c.j < 1 || *c.j > 3)) throw UsageError("--j must be 1..3");
    auto terms = expansion_terms(c.beta, kind);
    json doc = {{"format", "softedge-coeffs"}, {"version", 1}, {"beta", c.beta}, {"kind", kind_name(kind)}};
    if (c.coeff_eta) {
        const BigRational eta = parse_positive_rational(*c.coeff_eta, "--eta");
        terms = histogram_adjust(terms, eta);
        doc["eta"] = to_string(eta);
    }
    json list = json::array();
    for (int j = 1; j <= 3; ++j) {
        if (c.j && *c.j != j) continue;
        json coeffs = json::object(), text = json::object();
        const auto& t = terms[j - 1];
        for (std::size_t k = 0; k < t.coeffs.size(); ++k) {
            coeffs[std::to_string(k + 1)] = poly_json(t.coeffs[k]);
            text[std::to_string(k + 1)] = t.coeffs[k].str();
        }
        list.push_back({{"j", j}, {"coeffs", coeffs}, {"text", text}});
    }
    doc["terms"] = list;
    emit(doc.dump(2) + '\n', c.out, out);
    return kExitOk;
}

json poly_list(const std::vector<RatPoly>& v, int first_k) {
    json o = json::object();
    for (std::size_t i = 0; i < v.size(); ++i) o[std::to_string(first_k + int(i))] = poly_json(v[i]);
    return o;
}

int cmd_derive(const Config& c, std::ostream& out, std::ostream& err) {
    if (c.derive_m && (*c.derive_m < 1 || *c.derive_m > 3)) throw UsageError("--m must be 1..3");
    std::vector<EnsembleKind> kinds{EnsembleKind::Gaussian, EnsembleKind::Laguerre};
    if (c.derive_kind) kinds = {parse_kind(*c.derive_kind)};

    json doc = {{"format", "softedge-derive"}, {"version", 1}};
    bool ok = true;
    for (EnsembleKind kind : kinds) {
        json k = json::object();
        for (int m = 1; m <= 3; ++m) {
            if (c.derive_m && *c.derive_m != m) continue;
            json e = json::object();
            bool match = true;
            try {
                std::vector<RatPoly> pplus;
                if (m == 1) {
                    // assemble_and_solve raises unless p_{+,1k} = p_{-,1k}.
                    pplus = assemble_and_solve(kind);
                    const auto& e21 = expansion_term(2, 1, kind);
                    match &= pplus.size() == 2 && pplus[0] == e21.coeffs[0] && pplus[1] == 2 * e21.coeffs[1];
                    if (kind == EnsembleKind::Gaussian) {
                        const RelationSystem rs = assemble_system_m1(kind, true);
                        const PolyVector x = solve_exact(rs.system);
                        json sym = json::object();
                        for (Eigen::Index i = 0; i < x.size(); ++i) sym[rs.system.unknowns[std::size_t(i)]] = x(i).str();
                        e["symbolic"] = sym;
                    }
                } else {
                    pplus = transform_m23(m, kind);
                }
                e["p_plus"] = poly_list(pplus, 1);
                e["p_minus"] = poly_list(pplus, 1);
                const ExpansionTerm d = derive_beta14(m, kind);
                for (int beta : {1, 4}) {
                    const auto& shown = expansion_term(beta, m, kind);
                    bool same = d.coeffs.size() == shown.coeffs.size();
                    for (std::size_t i = 0; same && i < d.coeffs.size(); ++i) same = d.coeffs[i] == shown.coeffs[i];
                    match &= same;
                }
                e["beta14_coeffs"] = poly_list(d.coeffs, 1);
            } catch (const std::logic_error& ex) {
                match = false;
                e["error"] = ex.what();
            }
            e["match"] = match;
            if (!match) err << "mismatch: " << kind_name(kind) << " m=" << m << '\n';
            ok &= match;
            k["m" + std::to_string(m)] = e;
        }
        doc[kind_name(kind)] = k;
    }
    doc["match"] = ok;
    emit(doc.dump(2) + '\n', c.out, out);
    return ok ? kExitOk : kExitFailure;
}

int cmd_pq(const Config& c, std::ostream& out, std::ostream& err) {
    if (c.K < 1 || c.K > 6) throw UsageError("--K must be 1..6");
    PQCase pc = PQCase::hermite();
    if (c.pq_case == "laguerre")
        pc = c.a2 ? PQCase::laguerre(parse_positive_rational(*c.a2, "--a2")) : PQCase::laguerre_symbolic();
    else if (c.a2)
        throw UsageError("--a2 applies to the Laguerre case only");

    const PQTable T = pq_recursion(pc, c.K);
    json doc = {{"format", "softedge-pq"}, {"version", 1}, {"case", c.pq_case}};
    if (pc.a2) doc["a2"] = to_string(*pc.a2);
    bool ok = true;
    json entries = json::array();
    for (int k = 1; k <= T.size(); ++k) {
        json e = {{"k", k},
                  {"P", poly_json(T[k].P)},
                  {"Q", poly_json(T[k].Q)},
                  {"lambda", poly_json(T[k].lambda)},
                  {"P_text", T[k].P.str()},
                  {"Q_text", T[k].Q.str()}};
        ok &= pq_residual(pc, k, T[k]).is_zero();
        if (k % 2 == 1 && k <= 5) ok &= T[k].lambda == lambda_closed(pc, (k + 1) / 2);
        entries.push_back(e);
    }
    if (!pc.a2) {
        const auto shown = displayed_P12(pc.kind);
        for (int k = 1; k <= std::min(2, T.size()); ++k) ok &= T[k].P == shown[std::size_t(k - 1)];
    }
    doc["entries"] = entries;
    doc["match"] = ok;
    if (!ok) err << "mismatch against the displayed recursion values\n";
    emit(doc.dump(2) + '\n', c.out, out);
    return ok ? kExitOk : kExitFailure;
}

std::string config_scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) return num(v.get<double>());
    throw UsageError("unsupported config value: " + v.dump());
}

// Expands --config FILE into flags placed ahead of the user's own flags, so the
// TakeLast policy lets the command line win.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::optional<std::string> path;
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    std::vector<std::string> result{args.empty() ? "softedge" : args[0]};
    if (!path) {
        result.insert(result.end(), rest.begin(), rest.end());
        return result;
    }
    std::ifstream f(*path);
    if (!f) throw UsageError("cannot read config " + *path);
    json cfg;
    try {
        cfg = json::parse(f);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");

    std::optional<std::string> sub;
    if (!rest.empty() && rest[0].rfind("-", 0) != 0) {
        sub = rest[0];
        rest.erase(rest.begin());
    }
    if (cfg.contains("command")) {
        const std::string c = cfg["command"].get<std::string>();
        if (sub && *sub != c) throw UsageError("config command '" + c + "' does not match '" + *sub + "'");
        sub = c;
    }
    if (!sub) throw UsageError("no subcommand given");
    result.push_back(*sub);
    for (const auto& [key, v] : cfg.items()) {
        if (key == "command") continue;
        const std::string flag = "--" + key;
        if (v.is_boolean()) {
            if (v.get<bool>()) result.push_back(flag);
        } else if (v.is_array()) {
            std::string joined;
            for (const auto& x : v) joined += (joined.empty() ? "" : ",") + config_scalar(x);
            result.push_back(flag);
            result.push_back(joined);
        } else {
            result.push_back(flag);
            result.push_back(config_scalar(v));
        }
    }
    result.insert(result.end(), rest.begin(), rest.end());
    return result;
}

void add_ensemble(CLI::App* s, Config& c) {
    s->add_option("--beta", c.beta, "Dyson index")->check(CLI::IsMember({1, 2, 4}));
    s->add_option("--kind", c.kind, "gaussian or laguerre")->check(CLI::IsMember({"gaussian", "laguerre"}));
    s->add_option("--n", c.n, "matrix size")->check(CLI::PositiveNumber);
    s->add_option("--p", c.p, "Laguerre parameter p")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Soft-edge finite-size expansions of largest-eigenvalue laws", "softedge"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kCodeVersion);
    app.add_option("--config", "JSON file of option values; flags override it");

    auto* tab = app.add_subcommand("tabulate", "F_beta, corrections E_{beta,j} and partial sums on a t grid as CSV");
    add_ensemble(tab, c);
    tab->add_option("--m", c.m, "number of corrections, 0..3");
    tab->add_option("--t-min", c.t_min);
    tab->add_option("--t-max", c.t_max);
    tab->add_option("--t-step", c.t_step);
    tab->add_option("--out", c.out, "output file, default stdout");

    auto* sim = app.add_subcommand("simulate", "Monte-Carlo histogram with correction overlays as CSV");
    add_ensemble(sim, c);
    sim->add_option("--N", c.N, "number of draws");
    sim->add_option("--seed", c.seed);
    sim->add_option("--eta", c.eta, "bin width over h, an exact rational");
    sim->add_flag("--third", c.third, "also emit corr2 and corr3_adj");
    sim->add_option("--out", c.out, "histogram CSV, default stdout");
    sim->add_option("--batch", c.batch_out, "write the batch to this file plus a .json sidecar");
    sim->add_option("--from-batch", c.batch_in, "histogram an existing batch instead of sampling");

    auto* val = app.add_subcommand("validate", "run the named checks and write a JSON report");
    val->add_option("--check", c.checks, "check names, default all")->delimiter(',');
    val->add_option("--mc-scale", c.mc_scale, "scale factor on Monte-Carlo sample sizes");
    val->add_option("--seed", c.seed);
    val->add_option("--out", c.out);

    auto* co = app.add_subcommand("coeffs", "coefficients p_{beta,jk} as JSON");
    co->add_option("--beta", c.beta)->check(CLI::IsMember({1, 2, 4}));
    co->add_option("--kind", c.kind)->check(CLI::IsMember({"gaussian", "laguerre"}));
    co->add_option("--j", c.j, "single order 1..3");
    co->add_option("--eta", c.coeff_eta, "histogram-adjusted terms for this bin ratio");
    co->add_option("--out", c.out);

    auto* de = app.add_subcommand("derive", "derive the beta = 1, 4 coefficients from beta = 2 as JSON");
    de->add_option("--m", c.derive_m, "single order 1..3");
    de->add_option("--kind", c.derive_kind)->check(CLI::IsMember({"gaussian", "laguerre"}));
    de->add_option("--out", c.out);

    auto* pq = app.add_subcommand("pq", "turning-point polynomials P_k, Q_k, lambda_k as JSON");
    pq->add_option("--case", c.pq_case)->check(CLI::IsMember({"hermite", "laguerre"}));
    pq->add_option("--a2", c.a2, "rational a^2; symbolic when omitted");
    pq->add_option("--K", c.K, "highest k, 1..6");
    pq->add_option("--out", c.out);

    for (auto* s : {tab, sim, val, co, de, pq}) s->fallthrough(false);

    try {
        const std::vector<std::string> args = expand_config(argc, argv);
        std::vector<const char*> ptrs;
        for (const auto& a : args) ptrs.push_back(a.c_str());
        app.parse(int(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*tab) return cmd_tabulate(c, out);
        if (*sim) return cmd_simulate(c, out);
        if (*val) return cmd_validate(c, out, err);
        if (*co) return cmd_coeffs(c, out);
        if (*de) return cmd_derive(c, out, err);
        if (*pq) return cmd_pq(c, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace softedge::cli
