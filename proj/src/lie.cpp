#include "solvshear/lie.hpp"

#include <algorithm>

namespace solvshear {

LieAlgebra::LieAlgebra(int n) : n_(n), c_(n) {
  for (int i = 0; i < n; ++i) c_[i].assign(n, Vec(n));
}

void LieAlgebra::set_bracket(int i, int j, const Vec& v) {
  if (i >= j) throw std::logic_error("set_bracket expects i < j");
  c_[i][j] = v;
}

Vec LieAlgebra::bracket_basis(int i, int j) const {
  if (i == j) return Vec(n_);
  if (i < j) return c_[i][j];
  Vec v = c_[j][i];
  for (auto& s : v) s = -s;
  return v;
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  Vec r(n_);
  for (int i = 0; i < n_; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < n_; ++j) {
      if (i == j || y[j].is_zero()) continue;
      Scalar f = x[i] * y[j];
      const Vec& b = (i < j) ? c_[i][j] : c_[j][i];
      if (i < j)
        for (int k = 0; k < n_; ++k) r[k] += f * b[k];
      else
        for (int k = 0; k < n_; ++k) r[k] -= f * b[k];
    }
  }
  return r;
}

Mat LieAlgebra::ad(const Vec& x) const {
  Mat m(n_, n_);
  for (int j = 0; j < n_; ++j) {
    Vec v = bracket(x, basis_vec(n_, j));
    for (int i = 0; i < n_; ++i) m.at(i, j) = v[i];
  }
  return m;
}

std::vector<LieAlgebra::JacobiDefect> LieAlgebra::jacobi_defects() const {
  std::vector<JacobiDefect> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) {
        Vec ei = basis_vec(n_, i), ej = basis_vec(n_, j), ek = basis_vec(n_, k);
        Vec v = bracket(bracket(ei, ej), ek) + bracket(bracket(ej, ek), ei) +
                bracket(bracket(ek, ei), ej);
        if (!is_zero(v)) out.push_back({i, j, k, std::move(v)});
      }
  return out;
}

bool LieAlgebra::satisfies_jacobi() const { return jacobi_defects().empty(); }

bool LieAlgebra::is_abelian() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!is_zero(c_[i][j])) return false;
  return true;
}

KForm LieAlgebra::d(const KForm& b) const {
  // db(x_0,..,x_k) = sum_{p<q} (-1)^{p+q} b([x_p,x_q], x_0,..,^x_p,..,^x_q,..)
  int k = b.degree();
  KForm r(n_, k + 1);
  for (const Idx& t : index_tuples(n_, k + 1)) {
    Scalar coeff;
    for (size_t p = 0; p < t.size(); ++p)
      for (size_t q = p + 1; q < t.size(); ++q) {
        Vec br = bracket_basis(t[p], t[q]);
        if (is_zero(br)) continue;
        std::vector<Vec> args;
        args.push_back(br);
        for (size_t m = 0; m < t.size(); ++m)
          if (m != p && m != q) args.push_back(basis_vec(n_, t[m]));
        Scalar term = b.eval(args);
        if ((p + q) % 2 == 1) term = -term;  // (-1)^{p+q}
        coeff += term;
      }
    r.set_coeff(t, coeff);
  }
  return r;
}

VForm LieAlgebra::d(const VForm& b) const {
  VForm r(b.n, b.k + 1, b.values());
  for (int q = 0; q < b.values(); ++q) r.comps[q] = d(b.comps[q]);
  return r;
}

Subspace LieAlgebra::derived_of(const Subspace& s) const {
  std::vector<Vec> gens;
  for (size_t i = 0; i < s.basis().size(); ++i)
    for (size_t j = i + 1; j < s.basis().size(); ++j)
      gens.push_back(bracket(s.basis()[i], s.basis()[j]));
  return Subspace(gens, n_);
}

std::vector<Subspace> LieAlgebra::derived_series() const {
  std::vector<Subspace> out;
  Subspace cur = full_space();
  while (cur.dim() > 0) {
    out.push_back(cur);
    Subspace next = derived_of(cur);
    if (next.dim() == cur.dim()) {
      // stabilised without reaching zero (not solvable); stop here
      break;
    }
    cur = next;
  }
  return out;
}

int LieAlgebra::derived_length() const {
  std::vector<Subspace> s = derived_series();
  if (s.empty()) return 0;
  if (derived_of(s.back()).dim() == s.back().dim() && s.back().dim() > 0 &&
      !is_abelian_subspace(s.back()))
    throw std::logic_error("derived_length: algebra is not solvable");
  return static_cast<int>(s.size());
}

bool LieAlgebra::is_solvable() const {
  std::vector<Subspace> s = derived_series();
  return s.empty() || is_abelian_subspace(s.back());
}

std::vector<Subspace> LieAlgebra::lower_central_series() const {
  std::vector<Subspace> out;
  Subspace cur = full_space();
  Subspace g = full_space();
  while (cur.dim() > 0) {
    out.push_back(cur);
    std::vector<Vec> gens;
    for (const Vec& x : g.basis())
      for (const Vec& y : cur.basis()) gens.push_back(bracket(x, y));
    Subspace next(gens, n_);
    if (next.dim() == cur.dim()) break;
    cur = next;
  }
  return out;
}

bool LieAlgebra::is_nilpotent() const {
  std::vector<Subspace> s = lower_central_series();
  if (s.empty()) return true;
  const Subspace& last = s.back();
  Subspace full = full_space();
  std::vector<Vec> gens;
  for (const Vec& x : full.basis())
    for (const Vec& y : last.basis()) gens.push_back(bracket(x, y));
  return Subspace(gens, n_).dim() < last.dim() || last.dim() == 0;
}

Subspace LieAlgebra::center() const { return center_of(full_space()); }

Subspace LieAlgebra::center_of(const Subspace& s) const {
  // v in s with [v, w] = 0 for all w in s: kernel of the stacked ad-columns,
  // intersected with s.
  std::vector<Vec> rows;
  for (const Vec& w : s.basis()) {
    Mat adw = ad(w);
    // [v,w] = -ad(w) v = 0
    for (int i = 0; i < n_; ++i) rows.push_back(adw.row(i));
  }
  Subspace ker = rows.empty() ? full_space() : Subspace(kernel(Mat::from_rows(rows, n_)), n_);
  return ker.intersect(s);
}

Subspace LieAlgebra::full_space() const {
  std::vector<Vec> b;
  for (int i = 0; i < n_; ++i) b.push_back(basis_vec(n_, i));
  return Subspace(b, n_);
}

bool LieAlgebra::is_subalgebra(const Subspace& s) const {
  for (size_t i = 0; i < s.basis().size(); ++i)
    for (size_t j = i + 1; j < s.basis().size(); ++j)
      if (!s.contains(bracket(s.basis()[i], s.basis()[j]))) return false;
  return true;
}

bool LieAlgebra::is_ideal(const Subspace& s) const {
  for (int i = 0; i < n_; ++i)
    for (const Vec& y : s.basis())
      if (!s.contains(bracket(basis_vec(n_, i), y))) return false;
  return true;
}

bool LieAlgebra::is_abelian_subspace(const Subspace& s) const {
  for (size_t i = 0; i < s.basis().size(); ++i)
    for (size_t j = i + 1; j < s.basis().size(); ++j)
      if (!is_zero(bracket(s.basis()[i], s.basis()[j]))) return false;
  return true;
}

LieAlgebra LieAlgebra::quotient(const Subspace& ideal, Mat* proj_out) const {
  if (!is_ideal(ideal)) throw std::logic_error("quotient by a non-ideal");
  std::vector<int> comp = ideal.complement_indices();
  int m = static_cast<int>(comp.size());
  // quotient coordinates of an ambient vector
  auto project = [&](const Vec& v) {
    Vec rem = v - ideal.project_along_complement(v);
    Vec out(m);
    for (int r = 0; r < m; ++r) out[r] = rem[comp[r]];
    return out;
  };
  LieAlgebra q(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      q.set_bracket(i, j, project(bracket_basis(comp[i], comp[j])));
  if (proj_out) {
    Mat p(m, n_);
    for (int j = 0; j < n_; ++j) {
      Vec col = project(basis_vec(n_, j));
      for (int r = 0; r < m; ++r) p.at(r, j) = col[r];
    }
    *proj_out = p;
  }
  return q;
}

LieAlgebra LieAlgebra::direct_sum_abelian(const LieAlgebra& g, int r) {
  LieAlgebra s(g.n_ + r);
  for (int i = 0; i < g.n_; ++i)
    for (int j = i + 1; j < g.n_; ++j) {
      Vec v(g.n_ + r);
      for (int k = 0; k < g.n_; ++k) v[k] = g.c_[i][j][k];
      s.set_bracket(i, j, v);
    }
  return s;
}

LieAlgebra LieAlgebra::instantiate(const std::map<int, Rational>& values) const {
  LieAlgebra g(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      Vec v = c_[i][j];
      for (auto& s : v) s = s.instantiate(values);
      g.set_bracket(i, j, v);
    }
  return g;
}

std::vector<int> LieAlgebra::params() const {
  std::vector<int> ids;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (const Scalar& s : c_[i][j]) s.collect_params(ids);
  std::sort(ids.begin(), ids.end());
  return ids;
}

VForm nijenhuis(const LieAlgebra& g, const Mat& J) {
  int n = g.dim();
  VForm r(n, 2, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec x = basis_vec(n, i), y = basis_vec(n, j);
      Vec jx = J.apply(x), jy = J.apply(y);
      Vec v = g.bracket(jx, jy) - J.apply(g.bracket(jx, y)) - J.apply(g.bracket(x, jy)) -
              g.bracket(x, y);
      for (int k = 0; k < n; ++k) r.comps[k].add({(uint8_t)i, (uint8_t)j}, v[k]);
    }
  return r;
}

Mat endo_eval(const EndoForm& theta, const Vec& x) {
  Mat m = theta.empty() ? Mat() : Mat(theta[0].rows(), theta[0].cols());
  for (size_t i = 0; i < theta.size(); ++i)
    if (!x[i].is_zero()) m = m + x[i] * theta[i];
  return m;
}

bool is_flat(const LieAlgebra& g, const EndoForm& theta) {
  int n = g.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat lhs = endo_eval(theta, g.bracket_basis(i, j));
      Mat rhs = theta[i] * theta[j] - theta[j] * theta[i];
      if (lhs != rhs) return false;
    }
  return true;
}

VForm covariant_d(const LieAlgebra& g, const EndoForm& theta, const VForm& b) {
  VForm db = g.d(b);
  int n = b.n, k = b.k, r = b.values();
  VForm wedge_part(n, k + 1, r);
  for (const Idx& t : index_tuples(n, k + 1)) {
    Vec val(r);
    for (size_t p = 0; p < t.size(); ++p) {
      std::vector<Vec> rest;
      for (size_t m = 0; m < t.size(); ++m)
        if (m != p) rest.push_back(basis_vec(n, t[m]));
      Vec bv = b.eval(rest);
      Vec contrib = theta[t[p]].apply(bv);
      if (p % 2 == 1)
        val = val - contrib;
      else
        val = val + contrib;
    }
    for (int q = 0; q < r; ++q) wedge_part.comps[q].set_coeff(t, val[q]);
  }
  return wedge_part + db;
}

}  // namespace solvshear
