#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solvshear/exterior.hpp"
#include "solvshear/linalg.hpp"
#include "solvshear/scalar.hpp"

namespace solvshear {

/// Finite-dimensional Lie algebra given by structure constants on a fixed
/// basis e_1,..,e_n. Coefficients may contain symbolic parameters.
///
/// The stored constants are bracket coefficients: [e_i,e_j] = sum_k c^k_ij e_k.
/// (The dual differential convention d a(x,y) = -a([x,y]) connects these to
/// the usual "de^k = ..." shorthand; the notation module performs that
/// translation.)
class LieAlgebra {
public:
  LieAlgebra() = default;
  explicit LieAlgebra(int n);

  [[nodiscard]] int dim() const { return n_; }

  /// Sets [e_i, e_j] = v (0-based, i < j required).
  void set_bracket(int i, int j, const Vec& v);
  /// [e_i, e_j] for arbitrary i, j.
  [[nodiscard]] Vec bracket_basis(int i, int j) const;
  /// Bilinear extension.
  [[nodiscard]] Vec bracket(const Vec& x, const Vec& y) const;
  /// ad(x) = [x, .] as a matrix.
  [[nodiscard]] Mat ad(const Vec& x) const;

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
    return a.n_ == b.n_ && a.c_ == b.c_;
  }
  friend bool operator!=(const LieAlgebra& a, const LieAlgebra& b) { return !(a == b); }

  /// One Jacobi identity defect [[x,y],z]+[[y,z],x]+[[z,x],y] per basis triple.
  struct JacobiDefect {
    int i, j, k;
    Vec value;
  };
  [[nodiscard]] std::vector<JacobiDefect> jacobi_defects() const;
  [[nodiscard]] bool satisfies_jacobi() const;

  [[nodiscard]] bool is_abelian() const;

  /// Chevalley-Eilenberg differential on forms.
  [[nodiscard]] KForm d(const KForm& b) const;
  /// Componentwise differential of a vector-valued form.
  [[nodiscard]] VForm d(const VForm& b) const;

  /// span{[x,y] : x,y in s}.
  [[nodiscard]] Subspace derived_of(const Subspace& s) const;
  /// Derived series g >= [g,g] >= ... ; returns the nonzero terms, starting
  /// with g itself.
  [[nodiscard]] std::vector<Subspace> derived_series() const;
  /// Number of nonzero derived series terms (0 for the zero algebra,
  /// 1 for nonzero abelian ones).
  [[nodiscard]] int derived_length() const;
  [[nodiscard]] bool is_solvable() const;
  /// Lower central series g >= [g,g] >= [g,[g,g]] >= ...; nonzero terms.
  [[nodiscard]] std::vector<Subspace> lower_central_series() const;
  [[nodiscard]] bool is_nilpotent() const;

  [[nodiscard]] Subspace center() const;
  /// Centraliser restricted to a subspace: {v in s : [v, s] = 0}.
  [[nodiscard]] Subspace center_of(const Subspace& s) const;
  [[nodiscard]] Subspace full_space() const;

  [[nodiscard]] bool is_subalgebra(const Subspace& s) const;
  [[nodiscard]] bool is_ideal(const Subspace& s) const;
  [[nodiscard]] bool is_abelian_subspace(const Subspace& s) const;

  /// Quotient by an ideal. The quotient basis is the pivot-complement of the
  /// ideal (deterministic); proj_out, when given, receives the quotient map.
  [[nodiscard]] LieAlgebra quotient(const Subspace& ideal, Mat* proj_out = nullptr) const;

  /// g + R^r with the extra directions central and abelian.
  [[nodiscard]] static LieAlgebra direct_sum_abelian(const LieAlgebra& g, int r);

  [[nodiscard]] LieAlgebra instantiate(const std::map<int, Rational>& values) const;
  /// Parameter ids occurring in the structure constants.
  [[nodiscard]] std::vector<int> params() const;

private:
  int n_ = 0;
  std::vector<std::vector<Vec>> c_;  // c_[i][j] = [e_i,e_j] for i < j
};

/// Nijenhuis tensor N_J(x,y) = [Jx,Jy] - J[Jx,y] - J[x,Jy] - [x,y] of a
/// (not necessarily almost complex) endomorphism, as a vector-valued 2-form.
VForm nijenhuis(const LieAlgebra& g, const Mat& J);

/// Connection-type objects: theta assigns to each basis vector of g an
/// endomorphism of an auxiliary r-dimensional space, theta[i] = theta(e_i).
using EndoForm = std::vector<Mat>;

/// Evaluation theta(x).
Mat endo_eval(const EndoForm& theta, const Vec& x);

/// Flatness: theta([x,y]) = [theta(x), theta(y)] for all basis pairs.
bool is_flat(const LieAlgebra& g, const EndoForm& theta);

/// Covariant differential d^theta b = theta ^ b + d b on vector-valued forms:
/// (theta ^ b)(x_0,..,x_k) = sum_i (-1)^i theta(x_i) b(x_0,..,no x_i,..,x_k).
VForm covariant_d(const LieAlgebra& g, const EndoForm& theta, const VForm& b);

}  // namespace solvshear
