#include "softedge/polyalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace softedge {

namespace {

std::atomic<unsigned> g_degree_cap{64};

int var_rank(std::string_view v) {
    static constexpr std::array<std::string_view, 8> kOrder = {"t", "tau", "q", "qp",
                                                               "a", "s", "h", "hr"};
    for (std::size_t i = 0; i < kOrder.size(); ++i)
        if (kOrder[i] == v) return static_cast<int>(i);
    return static_cast<int>(kOrder.size());
}

bool var_less(const std::string& a, const std::string& b) {
    int ra = var_rank(a), rb = var_rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
}

std::vector<std::string> merge_vars(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), var_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int index_of(const std::vector<std::string>& vars, std::string_view name) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return static_cast<int>(i);
    return -1;
}

void check_cap(unsigned e) {
    if (e > g_degree_cap.load(std::memory_order_relaxed))
        throw PolyError("exponent " + std::to_string(e) + " exceeds the degree cap");
}

}  // namespace

void set_degree_cap(unsigned cap) { g_degree_cap.store(cap); }
unsigned degree_cap() { return g_degree_cap.load(); }

BigRational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '+'; }),
            s.end());
    if (s.empty()) throw PolyError("empty rational literal");
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        BigRational r;
        if (r.set_str(s, 10) != 0) throw PolyError("bad rational literal: " + std::string(text));
        if (r.get_den() == 0) throw PolyError("zero denominator: " + std::string(text));
        r.canonicalize();
        return r;
    }
    bool neg = s[0] == '-';
    std::string digits = s.substr(neg ? 1 : 0);
    dot = digits.find('.');
    std::string whole = digits.substr(0, dot);
    std::string frac = digits.substr(dot + 1);
    if ((whole + frac).empty() ||
        !std::all_of(whole.begin(), whole.end(), ::isdigit) ||
        !std::all_of(frac.begin(), frac.end(), ::isdigit))
        throw PolyError("bad decimal literal: " + std::string(text));
    mpz_class num(whole + frac == "" ? "0" : whole + frac, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    BigRational r(num, den);
    r.canonicalize();
    return neg ? BigRational(-r) : r;
}

std::string to_string(const BigRational& x) { return x.get_str(10); }

// ---------------------------------------------------------------- RatPoly

RatPoly::RatPoly(long c) : RatPoly(BigRational(c)) {}

RatPoly::RatPoly(const BigRational& c) {
    BigRational v = c;
    v.canonicalize();
    if (v != 0) terms_.emplace(Exponents{}, std::move(v));
}

RatPoly RatPoly::variable(std::string_view name) {
    RatPoly p;
    p.vars_.emplace_back(name);
    p.terms_.emplace(Exponents{1}, BigRational(1));
    return p;
}

RatPoly RatPoly::monomial(const BigRational& c,
                          std::initializer_list<std::pair<std::string_view, unsigned>> powers) {
    RatPoly p(c);
    for (const auto& [name, e] : powers) p *= pow(variable(name), e);
    return p;
}

RatPoly poly_from_terms(std::vector<std::string> vars, RatPoly::TermMap terms) {
    std::vector<std::size_t> perm(vars.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return var_less(vars[a], vars[b]); });
    RatPoly p;
    for (std::size_t i = 0; i < perm.size(); ++i) p.vars_.push_back(vars[perm[i]]);
    for (std::size_t i = 1; i < p.vars_.size(); ++i)
        if (p.vars_[i] == p.vars_[i - 1]) throw PolyError("duplicate variable " + p.vars_[i]);
    for (auto& [e, c] : terms) {
        if (e.size() != vars.size()) throw PolyError("exponent length mismatch");
        c.canonicalize();
        if (c == 0) continue;
        RatPoly::Exponents f(e.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            check_cap(e[perm[i]]);
            f[i] = e[perm[i]];
        }
        p.terms_[f] += c;
    }
    p.prune();
    return p;
}

bool RatPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && vars_.empty());
}

bool RatPoly::uses(std::string_view name) const { return index_of(vars_, name) >= 0; }

unsigned RatPoly::degree(std::string_view name) const {
    int i = index_of(vars_, name);
    if (i < 0) return 0;
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max<unsigned>(d, e[i]);
    return d;
}

BigRational RatPoly::constant_term() const {
    auto it = terms_.find(Exponents(vars_.size(), 0));
    return it == terms_.end() ? BigRational(0) : it->second;
}

void RatPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second == 0 ? terms_.erase(it) : std::next(it);
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) vars.push_back(vars_[i]);
    TermMap terms;
    for (auto& [e, c] : terms_) {
        Exponents f;
        f.reserve(vars.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            if (used[i]) f.push_back(e[i]);
        terms.emplace(std::move(f), c);
    }
    vars_ = std::move(vars);
    terms_ = std::move(terms);
}

RatPoly RatPoly::embedded(const std::vector<std::string>& vars) const {
    if (vars == vars_) return *this;
    std::vector<int> where(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        where[i] = index_of(vars, vars_[i]);
        if (where[i] < 0) throw PolyError("embedding drops variable " + vars_[i]);
    }
    RatPoly p;
    p.vars_ = vars;
    for (const auto& [e, c] : terms_) {
        Exponents f(vars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) f[where[i]] = e[i];
        p.terms_.emplace(std::move(f), c);
    }
    return p;
}

void RatPoly::add_scaled(const RatPoly& rhs, int sign) {
    if (rhs.terms_.empty()) return;
    auto vars = merge_vars(vars_, rhs.vars_);
    RatPoly a = embedded(vars);
    RatPoly b = rhs.embedded(vars);
    for (const auto& [e, c] : b.terms_) {
        auto [it, inserted] = a.terms_.try_emplace(e, 0);
        if (sign > 0)
            it->second += c;
        else
            it->second -= c;
    }
    a.prune();
    *this = std::move(a);
}

RatPoly& RatPoly::operator+=(const RatPoly& rhs) {
    add_scaled(rhs, 1);
    return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& rhs) {
    add_scaled(rhs, -1);
    return *this;
}

RatPoly RatPoly::operator-() const {
    RatPoly p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
}

RatPoly operator*(const RatPoly& lhs, const RatPoly& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return RatPoly();
    auto vars = merge_vars(lhs.vars_, rhs.vars_);
    RatPoly a = lhs.embedded(vars);
    RatPoly b = rhs.embedded(vars);
    RatPoly out;
    out.vars_ = vars;
    RatPoly::Exponents f(vars.size());
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < f.size(); ++i) {
                unsigned e = unsigned(ea[i]) + eb[i];
                check_cap(e);
                f[i] = static_cast<std::uint16_t>(e);
            }
            out.terms_[f] += ca * cb;
        }
    }
    out.prune();
    return out;
}

RatPoly& RatPoly::operator*=(const RatPoly& rhs) {
    *this = *this * rhs;
    return *this;
}

bool operator==(const RatPoly& lhs, const RatPoly& rhs) {
    return lhs.vars_ == rhs.vars_ && lhs.terms_ == rhs.terms_;
}

RatPoly pow(const RatPoly& base, unsigned exponent) {
    RatPoly result(1L);
    RatPoly b = base;
    while (exponent) {
        if (exponent & 1U) result *= b;
        exponent >>= 1U;
        if (exponent) b *= b;
    }
    return result;
}

std::vector<RatPoly> RatPoly::collect(std::string_view name) const {
    int idx = index_of(vars_, name);
    if (idx < 0) return {*this};
    std::vector<TermMap> parts(degree(name) + 1);
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        unsigned k = f[idx];
        f[idx] = 0;
        parts[k].emplace(std::move(f), c);
    }
    std::vector<RatPoly> out;
    out.reserve(parts.size());
    for (auto& part : parts) {
        RatPoly p;
        p.vars_ = vars_;
        p.terms_ = std::move(part);
        p.prune();
        out.push_back(std::move(p));
    }
    return out;
}

RatPoly RatPoly::derivative(std::string_view name) const {
    int idx = index_of(vars_, name);
    if (idx < 0) return RatPoly();
    RatPoly p;
    p.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        if (e[idx] == 0) continue;
        Exponents f = e;
        f[idx] -= 1;
        p.terms_[f] += c * e[idx];
    }
    p.prune();
    return p;
}

RatPoly RatPoly::substitute(std::string_view name, const RatPoly& value) const {
    auto parts = collect(name);
    RatPoly acc = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;) acc = acc * value + parts[k];
    return acc;
}

RatPoly RatPoly::substitute(std::string_view name, const BigRational& value) const {
    return substitute(name, RatPoly(value));
}

double RatPoly::evaluate(const std::vector<std::pair<std::string, double>>& values) const {
    std::vector<double> x(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find_if(values.begin(), values.end(),
                               [&](const auto& kv) { return kv.first == vars_[i]; });
        if (it == values.end()) throw PolyError("unbound variable " + vars_[i]);
        x[i] = it->second;
    }
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) term *= std::pow(x[i], e[i]);
        sum += term;
    }
    return sum;
}

CompiledPoly::CompiledPoly(const RatPoly& p, std::vector<std::string> order) : order_(std::move(order)) {
    std::vector<int> slot(p.vars().size());
    for (std::size_t i = 0; i < p.vars().size(); ++i) {
        auto it = std::find(order_.begin(), order_.end(), p.vars()[i]);
        if (it == order_.end()) throw PolyError("CompiledPoly: variable " + p.vars()[i] + " not in order");
        slot[i] = static_cast<int>(it - order_.begin());
    }
    for (const auto& [e, c] : p.terms()) {
        coeff_.push_back(c.get_d());
        std::vector<std::uint16_t> row(order_.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) row[slot[i]] = e[i];
        exps_.insert(exps_.end(), row.begin(), row.end());
    }
}

double CompiledPoly::operator()(std::span<const double> x) const {
    if (x.size() != order_.size()) throw PolyError("CompiledPoly: wrong argument count");
    const std::size_t nv = order_.size();
    double sum = 0.0;
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
        double term = coeff_[k];
        for (std::size_t i = 0; i < nv; ++i)
            for (unsigned e = exps_[k * nv + i]; e > 0; --e) term *= x[i];
        sum += term;
    }
    return sum;
}

std::string RatPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        BigRational a = abs(c);
        os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        bool unit = a == 1;
        bool any = false;
        if (!unit) os << a.get_str();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (!unit || any) os << '*';
            os << vars_[i];
            if (e[i] > 1) os << '^' << e[i];
            any = true;
        }
        if (unit && !any) os << '1';
        first = false;
    }
    return os.str();
}

std::optional<RatPoly> divide_exact(const RatPoly& num, const RatPoly& den) {
    if (den.is_zero()) throw PolyError("division by zero polynomial");
    if (num.is_zero()) return RatPoly();
    auto vars = merge_vars(num.vars_, den.vars_);
    RatPoly r = num.embedded(vars);
    RatPoly d = den.embedded(vars);
    const auto& [ld, cd] = *d.terms_.rbegin();
    RatPoly quotient;
    quotient.vars_ = vars;
    while (!r.terms_.empty()) {
        const auto& [lr, cr] = *r.terms_.rbegin();
        RatPoly m;
        m.vars_ = vars;
        RatPoly::Exponents f(vars.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (lr[i] < ld[i]) return std::nullopt;
            f[i] = static_cast<std::uint16_t>(lr[i] - ld[i]);
        }
        m.terms_.emplace(f, cr / cd);
        quotient.terms_[f] += cr / cd;
        r -= m * d;
        if (!r.terms_.empty()) r = r.embedded(vars);
    }
    quotient.prune();
    return quotient;
}

RatPoly painleve_diff(const RatPoly& p) {
    for (const auto& v : p.vars())
        if (v != "t" && v != "tau" && v != "q" && v != "qp")
            throw PolyError("painleve_diff: unknown indeterminate " + v);
    RatPoly t = RatPoly::variable("t");
    RatPoly q = RatPoly::variable("q");
    RatPoly qp = RatPoly::variable("qp");
    return p.derivative("t") + qp * p.derivative("q") +
           (t * q + RatPoly(2L) * pow(q, 3)) * p.derivative("qp");
}

std::string to_json(const RatPoly& p) {
    nlohmann::ordered_json j;
    j["vars"] = p.vars();
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& [e, c] : p.terms()) {
        nlohmann::ordered_json term;
        term["exp"] = e;
        term["num"] = c.get_num().get_str();
        term["den"] = c.get_den().get_str();
        j["terms"].push_back(std::move(term));
    }
    return j.dump();
}

RatPoly from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw PolyError(std::string("polynomial JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vars") || !j.contains("terms"))
        throw PolyError("polynomial JSON needs vars and terms");
    auto vars = j.at("vars").get<std::vector<std::string>>();
    RatPoly::TermMap terms;
    for (const auto& term : j.at("terms")) {
        auto e = term.at("exp").get<RatPoly::Exponents>();
        mpz_class num(term.at("num").get<std::string>(), 10);
        mpz_class den(term.at("den").get<std::string>(), 10);
        if (den <= 0) throw PolyError("polynomial JSON: non-positive denominator");
        BigRational c(num, den);
        c.canonicalize();
        terms[e] += c;
    }
    return poly_from_terms(std::move(vars), std::move(terms));
}

// ---------------------------------------------------------------- series

TruncatedSeries::TruncatedSeries(std::string var, int order)
    : var_(std::move(var)), order_(order), c_(static_cast<std::size_t>(order + 1)) {
    if (order < 0) throw PolyError("negative series order");
}

TruncatedSeries::TruncatedSeries(std::string var, int order, std::vector<RatPoly> coeffs)
    : TruncatedSeries(std::move(var), order) {
    if (coeffs.size() > c_.size()) coeffs.resize(c_.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) c_[k] = std::move(coeffs[k]);
}

TruncatedSeries TruncatedSeries::from_poly(const RatPoly& p, std::string var, int order) {
    auto parts = p.collect(var);
    return TruncatedSeries(std::move(var), order, std::move(parts));
}

RatPoly TruncatedSeries::to_poly() const {
    RatPoly v = RatPoly::variable(var_);
    RatPoly acc;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * v + c_[k];
    return acc;
}

TruncatedSeries::Parity TruncatedSeries::parity() const {
    bool even = false, odd = false;
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (!c_[k].is_zero()) (k % 2 ? odd : even) = true;
    if (even && odd) return Parity::Mixed;
    if (odd) return Parity::Odd;
    return even ? Parity::Even : Parity::Zero;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& rhs) const {
    if (var_ != rhs.var_) throw PolyError("series in different variables");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
    check_compatible(rhs);
    order_ = std::min(order_, rhs.order_);
    c_.resize(static_cast<std::size_t>(order_ + 1));
    for (int k = 0; k <= order_; ++k) c_[k] += rhs.c_[k];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
    check_compatible(rhs);
    order_ = std::min(order_, rhs.order_);
    c_.resize(static_cast<std::size_t>(order_ + 1));
    for (int k = 0; k <= order_; ++k) c_[k] -= rhs.c_[k];
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_compatible(b);
    TruncatedSeries out(a.var_, std::min(a.order_, b.order_));
    for (int i = 0; i <= out.order_; ++i) {
        if (a.c_[i].is_zero()) continue;
        for (int j = 0; i + j <= out.order_; ++j)
            if (!b.c_[j].is_zero()) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return out;
}

TruncatedSeries operator*(const RatPoly& a, const TruncatedSeries& b) {
    TruncatedSeries out = b;
    for (auto& c : out.c_) c = a * c;
    return out;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.var_ == b.var_ && a.order_ == b.order_ && a.c_ == b.c_;
}

TruncatedSeries substitute_series(const RatPoly& p, std::string_view name,
                                  const TruncatedSeries& s) {
    auto parts = p.collect(name);
    TruncatedSeries acc(s.var(), s.order());
    for (std::size_t k = parts.size(); k-- > 0;) {
        acc = acc * s;
        acc[0] += parts[k];
    }
    return acc;
}

TruncatedSeries compose(const TruncatedSeries& f, std::string_view name,
                        const TruncatedSeries& g) {
    if (f.var() != g.var()) throw PolyError("compose: series in different variables");
    const int n = std::min(f.order(), g.order());
    TruncatedSeries out(f.var(), n);
    for (int j = 0; j <= n; ++j) {
        if (f[j].is_zero()) continue;
        TruncatedSeries cj = substitute_series(f[j], name, g);
        for (int k = 0; k + j <= n; ++k) out[k + j] += cj[k];
    }
    return out;
}

TruncatedSeries series_reverse(const TruncatedSeries& s, std::string_view leading,
                               std::string_view image) {
    if (s[0] != RatPoly::variable(leading))
        throw PolyError("series_reverse: leading coefficient must be the bare variable");
    for (int k = 1; k <= s.order(); ++k)
        if (s[k].uses(image)) throw PolyError("series_reverse: image variable already in use");
    const int n = s.order();
    TruncatedSeries x(s.var(), n);
    x[0] = RatPoly::variable(image);
    // Fixed point x = y - sum_j c_j(x) v^j gains one order per sweep.
    for (int sweep = 0; sweep < n; ++sweep) {
        TruncatedSeries next(s.var(), n);
        next[0] = RatPoly::variable(image);
        for (int j = 1; j <= n; ++j) {
            if (s[j].is_zero()) continue;
            TruncatedSeries cj = substitute_series(s[j], leading, x);
            for (int k = 0; k + j <= n; ++k) next[k + j] -= cj[k];
        }
        x = std::move(next);
    }
    return x;
}

// ---------------------------------------------------------------- Bareiss

PolyVector solve_exact(const ExactLinearSystem& sys) {
    const Eigen::Index m = sys.matrix.rows();
    const Eigen::Index n = sys.matrix.cols();
    if (sys.rhs.size() != m) throw SolveError(SolveError::Kind::Shape, "rhs length mismatch");
    if (m < n) throw SolveError(SolveError::Kind::RankDeficient, "fewer rows than unknowns");

    PolyMatrix M(m, n + 1);
    M.leftCols(n) = sys.matrix;
    M.col(n) = sys.rhs;

    RatPoly prev(1L);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = -1;
        std::size_t best = 0;
        for (Eigen::Index i = k; i < m; ++i) {
            if (M(i, k).is_zero()) continue;
            std::size_t size = M(i, k).terms().size();
            if (pivot < 0 || size < best) {
                pivot = i;
                best = size;
            }
        }
        if (pivot < 0)
            throw SolveError(SolveError::Kind::RankDeficient,
                             "no pivot in column " + std::to_string(k));
        if (pivot != k) M.row(k).swap(M.row(pivot));
        const RatPoly p = M(k, k);
        for (Eigen::Index i = k + 1; i < m; ++i) {
            for (Eigen::Index j = k + 1; j <= n; ++j) {
                RatPoly num = M(i, j) * p - M(i, k) * M(k, j);
                auto q = divide_exact(num, prev);
                if (!q) throw PolyError("Bareiss step lost exactness");
                M(i, j) = std::move(*q);
            }
            M(i, k) = RatPoly();
        }
        prev = p;
    }
    for (Eigen::Index i = n; i < m; ++i)
        if (!M(i, n).is_zero())
            throw SolveError(SolveError::Kind::Inconsistent,
                             "row " + std::to_string(i) + " is inconsistent");

    PolyVector x(n);
    for (Eigen::Index i = n; i-- > 0;) {
        RatPoly acc = M(i, n);
        for (Eigen::Index j = i + 1; j < n; ++j) acc -= M(i, j) * x(j);
        auto q = divide_exact(acc, M(i, i));
        if (!q)
            throw SolveError(SolveError::Kind::NonPolynomial,
                             "unknown " + std::to_string(i) + " is not polynomial");
        x(i) = std::move(*q);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        RatPoly r = -sys.rhs(i);
        for (Eigen::Index j = 0; j < n; ++j) r += sys.matrix(i, j) * x(j);
        if (!r.is_zero())
            throw SolveError(SolveError::Kind::Inconsistent,
                             "residual in row " + std::to_string(i));
    }
    return x;
}

}  // namespace softedge
