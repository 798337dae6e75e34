#pragma once

// Exact rational arithmetic, sparse multivariate polynomials over Q,
// truncated power series and fraction-free linear solves.
//
// Indeterminates are named. The canonical order is
//   t, tau, q, qp, a, s, h, hr
// (qp is q', hr is a formal square root of h); any other name sorts after
// these, alphabetically. Unused variables are pruned after every operation,
// so two polynomials are equal iff their term maps are equal.

#include <gmpxx.h>

#include <Eigen/Core>

#include <atomic>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace softedge {

using BigRational = mpq_class;

BigRational parse_rational(std::string_view text);
std::string to_string(const BigRational& x);

class PolyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-variable exponent cap; exceeding it raises PolyError.
void set_degree_cap(unsigned cap);
unsigned degree_cap();

class RatPoly {
public:
    using Exponents = std::vector<std::uint16_t>;
    using TermMap = std::map<Exponents, BigRational>;

    RatPoly() = default;
    RatPoly(long c);  // NOLINT: integers promote implicitly
    RatPoly(const BigRational& c);  // NOLINT

    static RatPoly variable(std::string_view name);
    static RatPoly monomial(const BigRational& c,
                            std::initializer_list<std::pair<std::string_view, unsigned>> powers);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool uses(std::string_view name) const;
    unsigned degree(std::string_view name) const;
    /// Constant term, or the coefficient of a pure constant polynomial.
    BigRational constant_term() const;

    /// Coefficients c_k with p = sum_k c_k * name^k.
    std::vector<RatPoly> collect(std::string_view name) const;
    RatPoly derivative(std::string_view name) const;
    RatPoly substitute(std::string_view name, const RatPoly& value) const;
    RatPoly substitute(std::string_view name, const BigRational& value) const;

    /// Numeric evaluation; every used variable must be bound.
    double evaluate(const std::vector<std::pair<std::string, double>>& values) const;

    RatPoly& operator+=(const RatPoly& rhs);
    RatPoly& operator-=(const RatPoly& rhs);
    RatPoly& operator*=(const RatPoly& rhs);
    RatPoly operator-() const;

    friend RatPoly operator+(RatPoly lhs, const RatPoly& rhs) { return lhs += rhs; }
    friend RatPoly operator-(RatPoly lhs, const RatPoly& rhs) { return lhs -= rhs; }
    friend RatPoly operator*(const RatPoly& lhs, const RatPoly& rhs);
    friend bool operator==(const RatPoly& lhs, const RatPoly& rhs);
    friend bool operator!=(const RatPoly& lhs, const RatPoly& rhs) { return !(lhs == rhs); }

    std::string str() const;

private:
    std::vector<std::string> vars_;
    TermMap terms_;

    void add_scaled(const RatPoly& rhs, int sign);
    void prune();
    RatPoly embedded(const std::vector<std::string>& vars) const;

    friend RatPoly pow(const RatPoly& base, unsigned exponent);
    friend std::optional<RatPoly> divide_exact(const RatPoly& num, const RatPoly& den);
    friend RatPoly poly_from_terms(std::vector<std::string> vars, RatPoly::TermMap terms);
};

RatPoly pow(const RatPoly& base, unsigned exponent);

/// Floating-point snapshot of a RatPoly over a fixed variable order, for
/// hot evaluation loops. Every variable used by p must appear in order.
class CompiledPoly {
public:
    CompiledPoly() = default;
    CompiledPoly(const RatPoly& p, std::vector<std::string> order);

    const std::vector<std::string>& order() const { return order_; }
    double operator()(std::span<const double> x) const;

private:
    std::vector<std::string> order_;
    std::vector<double> coeff_;
    std::vector<std::uint16_t> exps_;  // coeff_.size() rows of order_.size()
};

/// Quotient if den divides num in Q[vars], otherwise nullopt.
std::optional<RatPoly> divide_exact(const RatPoly& num, const RatPoly& den);

/// Builds a polynomial from raw terms; zero terms are dropped and
/// variables are brought into canonical order.
RatPoly poly_from_terms(std::vector<std::string> vars, RatPoly::TermMap terms);

/// Derivative in t under the Painleve II closure q' = qp, qp' = t q + 2 q^3.
/// tau is a constant; any other indeterminate raises PolyError.
RatPoly painleve_diff(const RatPoly& p);

/// Polynomial serialization {"vars":[..],"terms":[{"exp":[..],"num":"..","den":".."}]}.
std::string to_json(const RatPoly& p);
RatPoly from_json(std::string_view text);

/// Truncated power series sum_{k<=order} c_k v^k with polynomial coefficients,
/// where v is either h or the formal root hr (hr^2 = h).
class TruncatedSeries {
public:
    enum class Parity { Zero, Even, Odd, Mixed };

    TruncatedSeries(std::string var, int order);
    TruncatedSeries(std::string var, int order, std::vector<RatPoly> coeffs);

    /// Splits p by powers of var, dropping powers above order.
    static TruncatedSeries from_poly(const RatPoly& p, std::string var, int order);

    const std::string& var() const { return var_; }
    int order() const { return order_; }
    const RatPoly& operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
    RatPoly& operator[](int k) { return c_.at(static_cast<std::size_t>(k)); }
    const std::vector<RatPoly>& coeffs() const { return c_; }

    RatPoly to_poly() const;
    Parity parity() const;

    TruncatedSeries& operator+=(const TruncatedSeries& rhs);
    TruncatedSeries& operator-=(const TruncatedSeries& rhs);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const RatPoly& a, const TruncatedSeries& b);
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

private:
    std::string var_;
    int order_;
    std::vector<RatPoly> c_;

    void check_compatible(const TruncatedSeries& rhs) const;
};

/// Substitutes the series for the indeterminate name inside p.
TruncatedSeries substitute_series(const RatPoly& p, std::string_view name, const TruncatedSeries& s);

/// f(name := g) for series f, g in the same variable v.
TruncatedSeries compose(const TruncatedSeries& f, std::string_view name, const TruncatedSeries& g);

/// Given s = x + c_1(x) v + ... + c_N(x) v^N with leading variable x, returns
/// x = y + d_1(y) v + ... + d_N(y) v^N, the compositional inverse in the image
/// variable y, truncated at the same order.
TruncatedSeries series_reverse(const TruncatedSeries& s, std::string_view leading,
                               std::string_view image);

}  // namespace softedge

namespace Eigen {
template <>
struct NumTraits<softedge::RatPoly> : GenericNumTraits<softedge::RatPoly> {
    using Real = softedge::RatPoly;
    using NonInteger = softedge::RatPoly;
    using Literal = softedge::RatPoly;
    using Nested = softedge::RatPoly;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 100,
        MulCost = 1000
    };
};
}  // namespace Eigen

namespace softedge {

using PolyMatrix = Eigen::Matrix<RatPoly, Eigen::Dynamic, Eigen::Dynamic>;
using PolyVector = Eigen::Matrix<RatPoly, Eigen::Dynamic, 1>;

/// A x = b over Q[t,tau] (plus any symbolic parameters); rows >= columns allowed.
struct ExactLinearSystem {
    PolyMatrix matrix;
    PolyVector rhs;
    std::vector<std::string> unknowns;
};

class SolveError : public std::runtime_error {
public:
    enum class Kind { Inconsistent, NonPolynomial, RankDeficient, Shape };
    SolveError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Fraction-free (Bareiss) elimination; the solution must be polynomial and
/// is checked against every row before it is returned.
PolyVector solve_exact(const ExactLinearSystem& sys);

}  // namespace softedge
