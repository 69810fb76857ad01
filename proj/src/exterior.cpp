#include "solvshear/exterior.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace solvshear {

int sort_sign(Idx& v) {
  int sign = 1;
  for (size_t i = 1; i < v.size(); ++i)
    for (size_t j = i; j > 0 && v[j - 1] >= v[j]; --j) {
      if (v[j - 1] == v[j]) return 0;
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  return sign;
}

KForm KForm::monomial(int n, const Idx& indices, const Scalar& c) {
  KForm f(n, static_cast<int>(indices.size()));
  f.add(indices, c);
  return f;
}

Scalar KForm::coeff(const Idx& sorted) const {
  auto it = terms_.find(sorted);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void KForm::set_coeff(const Idx& sorted, const Scalar& c) {
  if (c.is_zero())
    terms_.erase(sorted);
  else
    terms_[sorted] = c;
}

void KForm::add(const Idx& indices, const Scalar& c) {
  if (c.is_zero()) return;
  Idx s = indices;
  int sign = sort_sign(s);
  if (sign == 0) return;
  Scalar v = coeff(s) + (sign > 0 ? c : -c);
  set_coeff(s, v);
}

KForm KForm::operator+(const KForm& o) const {
  KForm r = *this;
  for (auto& [i, c] : o.terms_) r.set_coeff(i, r.coeff(i) + c);
  return r;
}

KForm KForm::operator-(const KForm& o) const {
  KForm r = *this;
  for (auto& [i, c] : o.terms_) r.set_coeff(i, r.coeff(i) - c);
  return r;
}

KForm KForm::operator-() const {
  KForm r(n_, k_);
  for (auto& [i, c] : terms_) r.terms_[i] = -c;
  return r;
}

KForm operator*(const Scalar& c, const KForm& f) {
  KForm r(f.n_, f.k_);
  if (c.is_zero()) return r;
  for (auto& [i, v] : f.terms_) {
    Scalar p = c * v;
    if (!p.is_zero()) r.terms_[i] = p;
  }
  return r;
}

KForm KForm::wedge(const KForm& o) const {
  KForm r(n_, k_ + o.k_);
  for (auto& [i, c] : terms_)
    for (auto& [j, d] : o.terms_) {
      Idx merged = i;
      merged.insert(merged.end(), j.begin(), j.end());
      r.add(merged, c * d);
    }
  return r;
}

KForm KForm::interior(const Vec& v) const {
  KForm r(n_, k_ - 1);
  if (k_ == 0) return r;
  for (auto& [i, c] : terms_)
    for (size_t p = 0; p < i.size(); ++p) {
      const Scalar& vp = v[i[p]];
      if (vp.is_zero()) continue;
      Idx rest;
      for (size_t q = 0; q < i.size(); ++q)
        if (q != p) rest.push_back(i[q]);
      Scalar term = c * vp;
      if (p % 2 == 1) term = -term;
      r.set_coeff(rest, r.coeff(rest) + term);
    }
  return r;
}

Scalar KForm::eval(const std::vector<Vec>& vectors) const {
  KForm f = *this;
  for (const Vec& v : vectors) f = f.interior(v);
  if (f.degree() != 0) throw std::logic_error("KForm::eval: wrong number of vectors");
  return f.coeff({});
}

KForm KForm::endo_action(const Mat& f) const {
  // f.(e^I) = -sum_p e^{i1} ^ .. ^ (f^T row of e^{ip}) ^ .. ^ e^{ik}
  KForm r(n_, k_);
  for (auto& [i, c] : terms_)
    for (size_t p = 0; p < i.size(); ++p)
      for (int j = 0; j < n_; ++j) {
        const Scalar& fij = f.at(i[p], j);
        if (fij.is_zero()) continue;
        Idx t = i;
        t[p] = static_cast<uint8_t>(j);
        r.add(t, -(c * fij));
      }
  return r;
}

KForm KForm::pullback(const Mat& L) const {
  KForm r(n_, k_);
  for (auto& [i, c] : terms_) {
    // (L* e^{i1}) ^ ... ^ (L* e^{ik}), expanded term by term
    KForm acc = KForm::monomial(n_, {}, c);
    for (uint8_t ip : i) {
      KForm cov(n_, 1);
      for (int j = 0; j < n_; ++j) cov.add({static_cast<uint8_t>(j)}, L.at(ip, j));
      acc = acc.wedge(cov);
    }
    r = r + acc;
  }
  return r;
}

KForm KForm::wedge_pow(int p) const {
  KForm r = KForm::monomial(n_, {}, Scalar(1));
  for (int i = 0; i < p; ++i) r = r.wedge(*this);
  return r;
}

KForm KForm::hodge_id() const {
  KForm r(n_, n_ - k_);
  for (auto& [i, c] : terms_) {
    Idx comp;
    std::vector<bool> used(n_, false);
    for (uint8_t x : i) used[x] = true;
    for (int j = 0; j < n_; ++j)
      if (!used[j]) comp.push_back(static_cast<uint8_t>(j));
    // sign of the permutation (I, I^c) of (1..n)
    Idx all = i;
    all.insert(all.end(), comp.begin(), comp.end());
    int sign = sort_sign(all);
    r.set_coeff(comp, r.coeff(comp) + (sign > 0 ? c : -c));
  }
  return r;
}

Scalar KForm::norm_sq_id() const {
  Scalar s;
  for (auto& [i, c] : terms_) s += c * c;
  return s;
}

Scalar KForm::top_coeff() const {
  if (k_ != n_) throw std::logic_error("top_coeff: not a top-degree form");
  Idx top;
  for (int j = 0; j < n_; ++j) top.push_back(static_cast<uint8_t>(j));
  return coeff(top);
}

KForm KForm::instantiate(const std::map<int, Rational>& values) const {
  KForm r(n_, k_);
  for (auto& [i, c] : terms_) r.set_coeff(i, c.instantiate(values));
  return r;
}

std::string KForm::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [i, c] : terms_) {
    os << (first ? "" : " + ") << "(" << c.str() << ")e^{";
    for (size_t p = 0; p < i.size(); ++p) os << (p ? "," : "") << int(i[p]) + 1;
    os << "}";
    first = false;
  }
  return os.str();
}

bool VForm::is_zero() const {
  return std::all_of(comps.begin(), comps.end(), [](const KForm& f) { return f.is_zero(); });
}

Vec VForm::eval(const std::vector<Vec>& vectors) const {
  Vec out(comps.size());
  for (size_t q = 0; q < comps.size(); ++q) out[q] = comps[q].eval(vectors);
  return out;
}

VForm VForm::operator+(const VForm& o) const {
  VForm r = *this;
  for (size_t q = 0; q < comps.size(); ++q) r.comps[q] = r.comps[q] + o.comps[q];
  return r;
}

VForm VForm::operator-(const VForm& o) const {
  VForm r = *this;
  for (size_t q = 0; q < comps.size(); ++q) r.comps[q] = r.comps[q] - o.comps[q];
  return r;
}

VForm VForm::map_values(const Mat& m) const {
  VForm r(n, k, m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int q = 0; q < m.cols(); ++q) r.comps[i] = r.comps[i] + m.at(i, q) * comps[q];
  return r;
}

VForm VForm::instantiate(const std::map<int, Rational>& values) const {
  VForm r = *this;
  for (auto& c : r.comps) c = c.instantiate(values);
  return r;
}

KForm kappa(const VForm& w, const std::vector<Vec>& value_vectors) {
  KForm r(w.n, w.k - 1);
  for (size_t q = 0; q < w.comps.size(); ++q) r = r + w.comps[q].interior(value_vectors[q]);
  return r;
}

std::vector<Idx> index_tuples(int n, int k) {
  std::vector<Idx> out;
  Idx cur;
  // iterative enumeration of increasing tuples
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int j = start; j < n; ++j) {
      cur.push_back(static_cast<uint8_t>(j));
      rec(j + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace solvshear
