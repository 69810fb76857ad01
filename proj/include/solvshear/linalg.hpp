#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "solvshear/scalar.hpp"

namespace solvshear {

/// Coordinate vector with polynomial entries.
using Vec = std::vector<Scalar>;

/// Thrown by rank-sensitive operations when a decision would depend on
/// whether a symbolic parameter vanishes. The policy is to refuse honestly
/// rather than split into cases; callers may instantiate parameters and
/// retry.
struct ParametricRankError : std::runtime_error {
  explicit ParametricRankError(const std::string& what) : std::runtime_error(what) {}
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Scalar& c, const Vec& v);
bool is_zero(const Vec& v);
Vec zero_vec(int n);
/// Standard basis vector e_i (0-based) in dimension n.
Vec basis_vec(int n, int i);

/// Dense matrix with polynomial entries, row major.
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static Mat identity(int n);
  /// Matrix with the given columns.
  static Mat from_cols(const std::vector<Vec>& cols, int rows);
  static Mat from_rows(const std::vector<Vec>& rows, int cols);

  [[nodiscard]] int rows() const { return r_; }
  [[nodiscard]] int cols() const { return c_; }
  Scalar& at(int i, int j) { return a_[i * c_ + j]; }
  [[nodiscard]] const Scalar& at(int i, int j) const { return a_[i * c_ + j]; }
  [[nodiscard]] Vec col(int j) const;
  [[nodiscard]] Vec row(int i) const;

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_constant() const;
  friend bool operator==(const Mat& x, const Mat& y) { return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_; }
  friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator-() const;
  Mat operator*(const Mat& o) const;
  [[nodiscard]] Vec apply(const Vec& v) const;
  [[nodiscard]] Mat transpose() const;
  [[nodiscard]] Scalar trace() const;
  friend Mat operator*(const Scalar& c, const Mat& m);

  /// Exact determinant (Laplace expansion with subset memoisation; fine for
  /// the small dimensions used here).
  [[nodiscard]] Scalar det() const;
  /// Exact inverse via adjugate; requires det to be a nonzero rational
  /// constant, otherwise throws ParametricRankError.
  [[nodiscard]] Mat inverse() const;

  [[nodiscard]] Mat instantiate(const std::map<int, Rational>& values) const;
  [[nodiscard]] std::string str() const;

private:
  int r_ = 0, c_ = 0;
  std::vector<Scalar> a_;
};

/// Result of constant-pivot row reduction.
struct Rref {
  Mat m;                    // reduced matrix
  std::vector<int> pivots;  // pivot column of each pivot row
  int rank = 0;
};

/// Reduced row echelon form using only pivots that are nonzero rational
/// constants. If some column contains nonzero entries but none of them is
/// constant (so the rank would depend on parameter values), throws
/// ParametricRankError.
Rref rref(Mat m);

/// Row space basis (RREF rows), i.e. span of the given vectors.
std::vector<Vec> row_space(const std::vector<Vec>& vectors, int n);

/// Kernel basis of m (right null space), via constant-pivot RREF.
std::vector<Vec> kernel(const Mat& m);

/// Direction of v with its polynomial content removed: divides v by its
/// first nonzero entry. Every quotient must be exact and constant, i.e. v
/// must be (polynomial) * (constant vector); otherwise throws
/// ParametricRankError. The result is only equivalent to v generically
/// (where the content is nonzero); callers must accept that caveat.
Vec strip_content(const Vec& v);

/// Kernel basis valid for generic parameter values: like kernel(), but a
/// column without constant pivots may still be eliminated when some row can
/// be normalised exactly by its entry in that column. Throws
/// ParametricRankError when no such row exists.
std::vector<Vec> kernel_generic(const Mat& m);

/// Span of content-stripped generators (see strip_content): the subspace
/// the vectors span at generic parameter values. All stripped directions
/// are constant, so the result supports exact membership tests.
class Subspace;
Subspace generic_span(const std::vector<Vec>& vectors, int n);

/// Solution of A x = b with A a *constant* matrix and b polynomial-valued.
struct AffineSolution {
  Vec particular;               // one solution; free variables set to 0
  std::vector<Vec> nullspace;   // basis of solutions of A x = 0 (constant)
};

/// Solves A x = b exactly. A must have constant entries (throws
/// std::invalid_argument otherwise); returns nullopt when inconsistent.
/// The particular solution is the deterministic RREF one (free variables 0).
std::optional<AffineSolution> solve_affine(const Mat& A, const Vec& b);

/// Linear span with exact membership tests. Stored as an RREF basis.
class Subspace {
public:
  Subspace() = default;
  /// Span of the given vectors in ambient dimension n.
  Subspace(const std::vector<Vec>& vectors, int n);

  [[nodiscard]] int dim() const { return static_cast<int>(basis_.size()); }
  [[nodiscard]] int ambient() const { return n_; }
  [[nodiscard]] const std::vector<Vec>& basis() const { return basis_; }
  [[nodiscard]] const std::vector<int>& pivots() const { return pivots_; }

  [[nodiscard]] bool contains(const Vec& v) const;
  [[nodiscard]] bool contains(const Subspace& other) const;
  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.n_ == b.n_ && a.basis_ == b.basis_;
  }

  /// Coordinates of v in this subspace's basis; nullopt if v is outside.
  [[nodiscard]] std::optional<Vec> coordinates(const Vec& v) const;

  /// Sum and intersection of subspaces.
  [[nodiscard]] Subspace operator+(const Subspace& o) const;
  [[nodiscard]] Subspace intersect(const Subspace& o) const;

  /// Indices of the non-pivot coordinates: a deterministic complement of
  /// this subspace spanned by standard basis vectors.
  [[nodiscard]] std::vector<int> complement_indices() const;

  /// Projection of v onto this subspace along the pivot-complement.
  [[nodiscard]] Vec project_along_complement(const Vec& v) const;

private:
  int n_ = 0;
  std::vector<Vec> basis_;   // RREF rows
  std::vector<int> pivots_;  // pivot column per basis row
};

}  // namespace solvshear
