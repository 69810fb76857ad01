#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "solvshear/linalg.hpp"
#include "solvshear/scalar.hpp"

namespace solvshear {

/// Strictly increasing 0-based index tuple naming a basis k-form e^I.
using Idx = std::vector<uint8_t>;

/// Alternating k-form with polynomial coefficients on an n-dimensional space,
/// stored sparsely in the basis {e^I : I strictly increasing}.
class KForm {
public:
  KForm() = default;
  KForm(int n, int k) : n_(n), k_(k) {}

  /// c * e^I for a not-necessarily-sorted tuple (sign normalised); returns
  /// the zero form when the tuple has a repeated index.
  static KForm monomial(int n, const Idx& indices, const Scalar& c);

  [[nodiscard]] int dim() const { return n_; }
  [[nodiscard]] int degree() const { return k_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] const std::map<Idx, Scalar>& terms() const { return terms_; }
  /// Coefficient of e^I (I must be sorted).
  [[nodiscard]] Scalar coeff(const Idx& sorted) const;
  void set_coeff(const Idx& sorted, const Scalar& c);
  /// Adds c * e^I, normalising the tuple's order.
  void add(const Idx& indices, const Scalar& c);

  friend bool operator==(const KForm& a, const KForm& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const KForm& a, const KForm& b) { return !(a == b); }

  KForm operator+(const KForm& o) const;
  KForm operator-(const KForm& o) const;
  KForm operator-() const;
  friend KForm operator*(const Scalar& c, const KForm& f);

  /// Wedge product.
  [[nodiscard]] KForm wedge(const KForm& o) const;
  /// Interior product v .| (contraction in the first slot).
  [[nodiscard]] KForm interior(const Vec& v) const;
  /// Full evaluation on k vectors.
  [[nodiscard]] Scalar eval(const std::vector<Vec>& vectors) const;
  /// Natural action of an endomorphism: (f.b)(x1,..,xk) = -sum_j b(x1,..,f xj,..,xk).
  [[nodiscard]] KForm endo_action(const Mat& f) const;
  /// Pullback along the linear map x -> L x.
  [[nodiscard]] KForm pullback(const Mat& L) const;
  /// k-fold wedge power.
  [[nodiscard]] KForm wedge_pow(int p) const;

  /// Hodge star for the identity metric and volume e^{1..n}: pure sign
  /// combinatorics, exact.
  [[nodiscard]] KForm hodge_id() const;
  /// <.,.> with the identity metric (basis forms e^I orthonormal).
  [[nodiscard]] Scalar norm_sq_id() const;
  /// Coefficient of the top-degree form e^{1..n} (requires k == n).
  [[nodiscard]] Scalar top_coeff() const;

  [[nodiscard]] KForm instantiate(const std::map<int, Rational>& values) const;
  [[nodiscard]] std::string str() const;

private:
  int n_ = 0, k_ = 0;
  std::map<Idx, Scalar> terms_;  // invariant: sorted tuples, nonzero coefficients
};

/// Sorts `v` in place, returning the permutation sign, or 0 on duplicates.
int sort_sign(Idx& v);

/// Vector-valued k-form: comps[q] is the coefficient form of the q-th value
/// basis vector.
struct VForm {
  int n = 0, k = 0;
  std::vector<KForm> comps;

  VForm() = default;
  VForm(int n_, int k_, int r) : n(n_), k(k_), comps(r, KForm(n_, k_)) {}
  [[nodiscard]] int values() const { return static_cast<int>(comps.size()); }
  [[nodiscard]] bool is_zero() const;
  /// Evaluation on k vectors: vector of length values().
  [[nodiscard]] Vec eval(const std::vector<Vec>& vectors) const;
  friend bool operator==(const VForm& a, const VForm& b) {
    return a.n == b.n && a.k == b.k && a.comps == b.comps;
  }
  VForm operator+(const VForm& o) const;
  VForm operator-(const VForm& o) const;
  /// Post-compose the values with a linear map (r' x r matrix).
  [[nodiscard]] VForm map_values(const Mat& m) const;
  [[nodiscard]] VForm instantiate(const std::map<int, Rational>& values) const;
};

/// Contraction kappa(sum_q b_q (x) v_q) = sum_q v_q .| b_q, where
/// value_vectors[q] is the ambient vector of the q-th value basis vector.
KForm kappa(const VForm& w, const std::vector<Vec>& value_vectors);

/// All strictly increasing k-tuples in {0,..,n-1}, lexicographic.
std::vector<Idx> index_tuples(int n, int k);

}  // namespace solvshear
