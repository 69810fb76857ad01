#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace solvshear {

/// Exact rational number (arbitrary precision).
using Rational = boost::multiprecision::cpp_rational;

/// Interning table for symbolic parameter names.
///
/// Names are canonicalised by stripping underscores ("a_1" and "a1" are the
/// same parameter). Ids are dense and stable for the lifetime of the process.
class Params {
public:
  /// Canonical spelling of a parameter name.
  static std::string canonical(const std::string& name);
  /// Id of (possibly new) parameter `name`.
  static int id(const std::string& name);
  /// Name of an existing parameter id.
  static const std::string& name(int id);
  /// Number of interned parameters.
  static int count();
};

/// Monomial: sorted (parameter id, exponent > 0) pairs; empty means 1.
using Mono = std::vector<std::pair<int, unsigned>>;

/// Exact multivariate polynomial over the rationals.
///
/// This is the coefficient domain for all symbolic computations: structure
/// constants, form coefficients and endomorphism entries are Scalars. Only
/// division by nonzero rational constants is total; polynomial division is
/// exposed as try_divide and fails softly when the quotient is not exact.
class Scalar {
public:
  Scalar() = default;
  Scalar(int v);
  Scalar(const Rational& v);

  /// The polynomial consisting of the single variable `name`.
  static Scalar param(const std::string& name);

  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  /// Value of a constant polynomial; throws std::logic_error otherwise.
  [[nodiscard]] Rational constant_value() const;
  /// Total degree (0 for constants; -1 for the zero polynomial).
  [[nodiscard]] int degree() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  /// Division by a nonzero rational constant.
  Scalar operator/(const Rational& c) const;

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  /// Arbitrary total order (for use as map key); not a numeric order.
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.terms_ < b.terms_; }

  /// Exact quotient *this / d, or nullopt when the division is not exact
  /// (including d == 0).
  [[nodiscard]] std::optional<Scalar> try_divide(const Scalar& d) const;

  /// Substitute a polynomial for one parameter (composition).
  [[nodiscard]] Scalar substitute(int param_id, const Scalar& value) const;
  /// Substitute rational values for parameters; ids absent from `values`
  /// stay symbolic.
  [[nodiscard]] Scalar instantiate(const std::map<int, Rational>& values) const;
  /// Collect the parameter ids that occur in this polynomial.
  void collect_params(std::vector<int>& ids) const;

  /// Plain text form, deterministic ("2*a1*a2 - 1/2*b"). Debug oriented; the
  /// notation module owns the compact example-style form.
  [[nodiscard]] std::string str() const;

  [[nodiscard]] const std::map<Mono, Rational>& terms() const { return terms_; }

private:
  void add_term(const Mono& m, const Rational& c);
  std::map<Mono, Rational> terms_;  // invariant: no zero coefficients
};

inline Scalar operator*(const Scalar& a, const Rational& c) { return a * Scalar(c); }
inline Scalar operator*(const Rational& c, const Scalar& a) { return a * Scalar(c); }

/// One scalar `lambda` with a == lambda * b, if it exists (requires b != 0;
/// the quotient of any pair of corresponding coefficients must be exact and
/// consistent across all of them).
std::optional<Scalar> proportionality_factor(const std::vector<Scalar>& a,
                                             const std::vector<Scalar>& b);

}  // namespace solvshear
