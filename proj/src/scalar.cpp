#include "solvshear/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace solvshear {

namespace {

std::vector<std::string>& param_names() {
  static std::vector<std::string> names;
  return names;
}

std::map<std::string, int>& param_index() {
  static std::map<std::string, int> index;
  return index;
}

// Graded lexicographic comparison; a proper monomial order, unlike the map
// key order, so it is what the division algorithm uses.
unsigned total_degree(const Mono& m) {
  unsigned d = 0;
  for (auto& [id, e] : m) d += e;
  return d;
}

bool grlex_less(const Mono& a, const Mono& b) {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  // lex tie-break: larger exponent on the earliest variable wins
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first != b[j].first) return a[i].first > b[j].first;
    if (a[i].second != b[j].second) return a[i].second < b[j].second;
    ++i, ++j;
  }
  return false;  // equal (same degree, same leading part forces same tail)
}

// Quotient monomial a / b, if b divides a.
std::optional<Mono> mono_divide(const Mono& a, const Mono& b) {
  Mono q;
  size_t i = 0;
  for (auto& [id, e] : b) {
    while (i < a.size() && a[i].first < id) q.push_back(a[i++]);
    if (i == a.size() || a[i].first != id || a[i].second < e) return std::nullopt;
    if (a[i].second > e) q.emplace_back(id, a[i].second - e);
    ++i;
  }
  while (i < a.size()) q.push_back(a[i++]);
  return q;
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    }
  }
  return r;
}

}  // namespace

std::string Params::canonical(const std::string& name) {
  std::string out;
  for (char c : name)
    if (c != '_') out.push_back(c);
  return out;
}

int Params::id(const std::string& name) {
  std::string c = canonical(name);
  if (c.empty()) throw std::invalid_argument("empty parameter name");
  auto it = param_index().find(c);
  if (it != param_index().end()) return it->second;
  int id = static_cast<int>(param_names().size());
  param_names().push_back(c);
  param_index()[c] = id;
  return id;
}

const std::string& Params::name(int id) { return param_names().at(id); }

int Params::count() { return static_cast<int>(param_names().size()); }

Scalar::Scalar(int v) {
  if (v != 0) terms_[{}] = v;
}

Scalar::Scalar(const Rational& v) {
  if (v != 0) terms_[{}] = v;
}

Scalar Scalar::param(const std::string& name) {
  Scalar s;
  s.terms_[{{Params::id(name), 1u}}] = 1;
  return s;
}

bool Scalar::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Scalar::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw std::logic_error("Scalar::constant_value on non-constant " + str());
  return terms_.begin()->second;
}

int Scalar::degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (auto& [m, c] : terms_) d = std::max(d, static_cast<int>(total_degree(m)));
  return d;
}

void Scalar::add_term(const Mono& m, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Scalar Scalar::operator-() const {
  Scalar r;
  for (auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  for (auto& [ma, ca] : a.terms_)
    for (auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
  return r;
}

Scalar Scalar::operator/(const Rational& c) const {
  if (c == 0) throw std::domain_error("Scalar: division by zero");
  Scalar r;
  for (auto& [m, v] : terms_) r.terms_[m] = v / c;
  return r;
}

std::optional<Scalar> Scalar::try_divide(const Scalar& d) const {
  if (d.is_zero()) return std::nullopt;
  if (d.is_constant()) return *this / d.constant_value();
  // Long division by a single divisor; any lead term that the divisor's lead
  // term cannot cancel would survive into the remainder, so fail right there.
  auto lead = [](const std::map<Mono, Rational>& t) {
    auto best = t.begin();
    for (auto it = std::next(t.begin()); it != t.end(); ++it)
      if (grlex_less(best->first, it->first)) best = it;
    return best;
  };
  Scalar rem = *this, quot;
  auto dl = lead(d.terms_);
  while (!rem.terms_.empty()) {
    auto rl = lead(rem.terms_);
    auto qm = mono_divide(rl->first, dl->first);
    if (!qm) return std::nullopt;
    Scalar step;
    step.terms_[*qm] = rl->second / dl->second;
    quot += step;
    rem -= step * d;
  }
  return quot;
}

Scalar Scalar::substitute(int param_id, const Scalar& value) const {
  Scalar r;
  for (auto& [m, c] : terms_) {
    Scalar term(c);
    Scalar power(1);
    Mono rest;
    for (auto& [id, e] : m) {
      if (id == param_id) {
        for (unsigned k = 0; k < e; ++k) power *= value;
      } else {
        rest.emplace_back(id, e);
      }
    }
    Scalar base;
    base.terms_[rest] = 1;
    r += term * base * power;
  }
  return r;
}

Scalar Scalar::instantiate(const std::map<int, Rational>& values) const {
  Scalar r = *this;
  for (auto& [id, v] : values) r = r.substitute(id, Scalar(v));
  return r;
}

void Scalar::collect_params(std::vector<int>& ids) const {
  for (auto& [m, c] : terms_)
    for (auto& [id, e] : m)
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
}

std::string Scalar::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool wrote = false;
    if (a != 1 || m.empty()) {
      os << a;
      wrote = true;
    }
    for (auto& [id, e] : m) {
      if (wrote) os << "*";
      os << Params::name(id);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

std::optional<Scalar> proportionality_factor(const std::vector<Scalar>& a,
                                             const std::vector<Scalar>& b) {
  std::optional<Scalar> lambda;
  for (size_t i = 0; i < b.size(); ++i) {
    if (b[i].is_zero()) continue;
    auto q = a[i].try_divide(b[i]);
    if (!q) return std::nullopt;
    if (!lambda) {
      lambda = *q;
    } else if (*lambda != *q) {
      return std::nullopt;
    }
  }
  if (!lambda) return std::nullopt;  // b identically zero
  // The quotient must also explain the entries where b vanishes.
  for (size_t i = 0; i < a.size(); ++i) {
    Scalar rhs = (i < b.size()) ? b[i] * *lambda : Scalar(0);
    if (a[i] != rhs) return std::nullopt;
  }
  return lambda;
}

}  // namespace solvshear
