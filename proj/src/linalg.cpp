#include "solvshear/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace solvshear {

Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec operator*(const Scalar& c, const Vec& v) {
  Vec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec zero_vec(int n) { return Vec(n); }

Vec basis_vec(int n, int i) {
  Vec v(n);
  v[i] = Scalar(1);
  return v;
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

Mat Mat::from_cols(const std::vector<Vec>& cols, int rows) {
  Mat m(rows, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = cols[j][i];
  return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, int cols) {
  Mat m(static_cast<int>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
  return m;
}

Vec Mat::col(int j) const {
  Vec v(r_);
  for (int i = 0; i < r_; ++i) v[i] = at(i, j);
  return v;
}

Vec Mat::row(int i) const {
  Vec v(c_);
  for (int j = 0; j < c_; ++j) v[j] = at(i, j);
  return v;
}

bool Mat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool Mat::is_constant() const {
  return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_constant(); });
}

Mat Mat::operator+(const Mat& o) const {
  Mat m(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
  return m;
}

Mat Mat::operator-(const Mat& o) const {
  Mat m(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
  return m;
}

Mat Mat::operator-() const {
  Mat m(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = -a_[i];
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  Mat m(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (int j = 0; j < o.c_; ++j) m.at(i, j) += at(i, k) * o.at(k, j);
    }
  return m;
}

Vec Mat::apply(const Vec& v) const {
  Vec r(r_);
  for (int j = 0; j < c_; ++j) {
    if (v[j].is_zero()) continue;
    for (int i = 0; i < r_; ++i) r[i] += at(i, j) * v[j];
  }
  return r;
}

Mat Mat::transpose() const {
  Mat m(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m.at(j, i) = at(i, j);
  return m;
}

Scalar Mat::trace() const {
  Scalar t;
  for (int i = 0; i < r_; ++i) t += at(i, i);
  return t;
}

Mat operator*(const Scalar& c, const Mat& m) {
  Mat r(m.r_, m.c_);
  for (size_t i = 0; i < m.a_.size(); ++i) r.a_[i] = c * m.a_[i];
  return r;
}

namespace {

// det of the minor using rows i..n-1 and the column set `mask`, memoised.
Scalar det_rec(const Mat& m, int i, unsigned mask, std::map<std::pair<int, unsigned>, Scalar>& memo) {
  int n = m.rows();
  if (i == n) return Scalar(1);
  auto key = std::make_pair(i, mask);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  Scalar d;
  int sign = 1;
  for (int j = 0; j < n; ++j) {
    if (!(mask & (1u << j))) continue;
    if (!m.at(i, j).is_zero()) {
      Scalar sub = det_rec(m, i + 1, mask & ~(1u << j), memo);
      d += (sign > 0 ? m.at(i, j) : -m.at(i, j)) * sub;
    }
    sign = -sign;
  }
  memo[key] = d;
  return d;
}

}  // namespace

Scalar Mat::det() const {
  if (r_ != c_) throw std::logic_error("det of non-square matrix");
  if (r_ == 0) return Scalar(1);
  if (r_ > 20) throw std::logic_error("det: dimension too large");
  std::map<std::pair<int, unsigned>, Scalar> memo;
  return det_rec(*this, 0, (1u << r_) - 1u, memo);
}

Mat Mat::inverse() const {
  if (r_ != c_) throw std::logic_error("inverse of non-square matrix");
  Scalar d = det();
  if (!d.is_constant() || d.is_zero())
    throw ParametricRankError("matrix inverse needs a nonzero constant determinant, got " + d.str());
  Rational dv = d.constant_value();
  Mat inv(r_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) {
      // cofactor expansion of the (j,i) minor
      Mat minor(r_ - 1, r_ - 1);
      for (int a = 0, ai = 0; a < r_; ++a) {
        if (a == j) continue;
        for (int b = 0, bj = 0; b < r_; ++b) {
          if (b == i) continue;
          minor.at(ai, bj) = at(a, b);
          ++bj;
        }
        ++ai;
      }
      Scalar cof = minor.det();
      if ((i + j) % 2 == 1) cof = -cof;
      inv.at(i, j) = cof / dv;
    }
  return inv;
}

Mat Mat::instantiate(const std::map<int, Rational>& values) const {
  Mat m(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i].instantiate(values);
  return m;
}

std::string Mat::str() const {
  std::ostringstream os;
  for (int i = 0; i < r_; ++i) {
    os << "[";
    for (int j = 0; j < c_; ++j) os << (j ? ", " : "") << at(i, j).str();
    os << "]\n";
  }
  return os.str();
}

Rref rref(Mat m) {
  Rref out;
  int rows = m.rows(), cols = m.cols();
  int lead = 0;
  for (int col = 0; col < cols && lead < rows; ++col) {
    // Find a constant nonzero pivot in this column at or below `lead`.
    int pivot = -1;
    bool has_nonzero = false;
    for (int i = lead; i < rows; ++i) {
      const Scalar& e = m.at(i, col);
      if (e.is_zero()) continue;
      has_nonzero = true;
      if (e.is_constant()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) {
      if (has_nonzero)
        throw ParametricRankError(
            "row reduction: column " + std::to_string(col + 1) +
            " has only parametric entries; rank depends on parameter values");
      continue;
    }
    if (pivot != lead)
      for (int j = 0; j < cols; ++j) std::swap(m.at(pivot, j), m.at(lead, j));
    Rational p = m.at(lead, col).constant_value();
    for (int j = 0; j < cols; ++j) m.at(lead, j) = m.at(lead, j) / p;
    for (int i = 0; i < rows; ++i) {
      if (i == lead || m.at(i, col).is_zero()) continue;
      Scalar f = m.at(i, col);
      for (int j = 0; j < cols; ++j) m.at(i, j) -= f * m.at(lead, j);
    }
    out.pivots.push_back(col);
    ++lead;
  }
  out.rank = static_cast<int>(out.pivots.size());
  out.m = std::move(m);
  return out;
}

std::vector<Vec> row_space(const std::vector<Vec>& vectors, int n) {
  if (vectors.empty()) return {};
  Rref r = rref(Mat::from_rows(vectors, n));
  std::vector<Vec> basis;
  for (int i = 0; i < r.rank; ++i) basis.push_back(r.m.row(i));
  return basis;
}

std::vector<Vec> kernel(const Mat& m) {
  Rref r = rref(m);
  int n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (int p : r.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    Vec v(n);
    v[j] = Scalar(1);
    for (int i = 0; i < r.rank; ++i) v[r.pivots[i]] = -r.m.at(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

Vec strip_content(const Vec& v) {
  size_t first = v.size();
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) {
      first = i;
      break;
    }
  if (first == v.size()) return v;  // zero vector
  Vec dir(v.size());
  for (size_t i = first; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    std::optional<Scalar> q = v[i].try_divide(v[first]);
    if (!q || !q->is_constant())
      throw ParametricRankError("strip_content: vector is not (polynomial) * (constant direction): " +
                                v[i].str() + " vs " + v[first].str());
    dir[i] = *q;
  }
  return dir;
}

std::vector<Vec> kernel_generic(const Mat& m_in) {
  Mat m = m_in;
  int rows = m.rows(), cols = m.cols();
  int lead = 0;
  std::vector<int> pivots;
  for (int col = 0; col < cols && lead < rows; ++col) {
    int pivot = -1;
    for (int i = lead; i < rows; ++i) {
      const Scalar& e = m.at(i, col);
      if (!e.is_zero() && e.is_constant()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) {
      // Try to normalise some row by its (parametric) entry in this column.
      for (int i = lead; i < rows && pivot < 0; ++i) {
        const Scalar& e = m.at(i, col);
        if (e.is_zero()) continue;
        std::vector<Scalar> scaled(cols);
        bool ok = true;
        for (int j = 0; j < cols && ok; ++j) {
          if (m.at(i, j).is_zero()) continue;
          std::optional<Scalar> q = m.at(i, j).try_divide(e);
          if (!q)
            ok = false;
          else
            scaled[j] = *q;
        }
        if (ok) {
          for (int j = 0; j < cols; ++j) m.at(i, j) = scaled[j];
          pivot = i;
        }
      }
      if (pivot < 0) {
        bool has_nonzero = false;
        for (int i = lead; i < rows; ++i)
          if (!m.at(i, col).is_zero()) has_nonzero = true;
        if (has_nonzero)
          throw ParametricRankError(
              "generic row reduction: column " + std::to_string(col + 1) +
              " cannot be normalised; rank depends on parameter values");
        continue;
      }
    }
    if (pivot != lead)
      for (int j = 0; j < cols; ++j) std::swap(m.at(pivot, j), m.at(lead, j));
    if (m.at(lead, col).is_constant()) {
      Rational p = m.at(lead, col).constant_value();
      for (int j = 0; j < cols; ++j) m.at(lead, j) = m.at(lead, j) / p;
    }
    for (int i = 0; i < rows; ++i) {
      if (i == lead || m.at(i, col).is_zero()) continue;
      Scalar f = m.at(i, col);
      for (int j = 0; j < cols; ++j) m.at(i, j) -= f * m.at(lead, j);
    }
    pivots.push_back(col);
    ++lead;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (int j = 0; j < cols; ++j) {
    if (is_pivot[j]) continue;
    Vec v(cols);
    v[j] = Scalar(1);
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m.at(static_cast<int>(i), j);
    basis.push_back(std::move(v));
  }
  return basis;
}

Subspace generic_span(const std::vector<Vec>& vectors, int n) {
  std::vector<Vec> stripped;
  for (const Vec& v : vectors) {
    if (is_zero(v)) continue;
    stripped.push_back(strip_content(v));
  }
  return Subspace(stripped, n);
}

std::optional<AffineSolution> solve_affine(const Mat& A, const Vec& b) {
  if (!A.is_constant())
    throw std::invalid_argument("solve_affine: coefficient matrix must be constant");
  int rows = A.rows(), n = A.cols();
  Mat aug(rows, n + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, n) = b[i];
  }
  // Eliminate on the A-columns only; pivots are constant since A is.
  int lead = 0;
  std::vector<int> pivots;
  for (int col = 0; col < n && lead < rows; ++col) {
    int pivot = -1;
    for (int i = lead; i < rows; ++i)
      if (!aug.at(i, col).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != lead)
      for (int j = 0; j <= n; ++j) std::swap(aug.at(pivot, j), aug.at(lead, j));
    Rational p = aug.at(lead, col).constant_value();
    for (int j = 0; j <= n; ++j) aug.at(lead, j) = aug.at(lead, j) / p;
    for (int i = 0; i < rows; ++i) {
      if (i == lead || aug.at(i, col).is_zero()) continue;
      Scalar f = aug.at(i, col);
      for (int j = 0; j <= n; ++j) aug.at(i, j) -= f * aug.at(lead, j);
    }
    pivots.push_back(col);
    ++lead;
  }
  for (int i = lead; i < rows; ++i)
    if (!aug.at(i, n).is_zero()) return std::nullopt;  // 0 = nonzero: inconsistent

  AffineSolution sol;
  sol.particular = Vec(n);
  for (size_t i = 0; i < pivots.size(); ++i) sol.particular[pivots[i]] = aug.at(static_cast<int>(i), n);
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    Vec v(n);
    v[j] = Scalar(1);
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -aug.at(static_cast<int>(i), j);
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

Subspace::Subspace(const std::vector<Vec>& vectors, int n) : n_(n) {
  if (vectors.empty()) return;
  Rref r = rref(Mat::from_rows(vectors, n));
  for (int i = 0; i < r.rank; ++i) basis_.push_back(r.m.row(i));
  pivots_ = r.pivots;
}

bool Subspace::contains(const Vec& v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(),
                     [&](const Vec& v) { return contains(v); });
}

std::optional<Vec> Subspace::coordinates(const Vec& v) const {
  Vec rem = v;
  Vec coords(basis_.size());
  for (size_t i = 0; i < basis_.size(); ++i) {
    coords[i] = rem[pivots_[i]];
    if (!coords[i].is_zero()) rem = rem - coords[i] * basis_[i];
  }
  if (!solvshear::is_zero(rem)) return std::nullopt;
  return coords;
}

Subspace Subspace::operator+(const Subspace& o) const {
  std::vector<Vec> all = basis_;
  all.insert(all.end(), o.basis_.begin(), o.basis_.end());
  return Subspace(all, n_);
}

Subspace Subspace::intersect(const Subspace& o) const {
  // x in U iff A_U x = 0 where the rows of A_U annihilate U; stack both
  // annihilators and take the kernel.
  auto annihilator = [](const Subspace& s) {
    return kernel(Mat::from_rows(s.basis_, s.n_));
  };
  std::vector<Vec> ann = annihilator(*this);
  std::vector<Vec> ann2 = annihilator(o);
  ann.insert(ann.end(), ann2.begin(), ann2.end());
  if (ann.empty()) return *this;  // both are the full space
  return Subspace(kernel(Mat::from_rows(ann, n_)), n_);
}

std::vector<int> Subspace::complement_indices() const {
  std::vector<bool> is_pivot(n_, false);
  for (int p : pivots_) is_pivot[p] = true;
  std::vector<int> out;
  for (int j = 0; j < n_; ++j)
    if (!is_pivot[j]) out.push_back(j);
  return out;
}

Vec Subspace::project_along_complement(const Vec& v) const {
  Vec p(n_);
  for (size_t i = 0; i < basis_.size(); ++i) p = p + v[pivots_[i]] * basis_[i];
  return p;
}

}  // namespace solvshear
