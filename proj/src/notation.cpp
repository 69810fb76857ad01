#include "solvshear/notation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace solvshear {

namespace {

// Replaces the UTF-8 minus sign by '-' and drops whitespace.
std::string normalize(const std::string& in) {
  std::string out;
  for (size_t i = 0; i < in.size(); ++i) {
    unsigned char c = in[i];
    if (c == 0xE2 && i + 2 < in.size() && (unsigned char)in[i + 1] == 0x88 &&
        (unsigned char)in[i + 2] == 0x92) {
      out.push_back('-');
      i += 2;
    } else if (!std::isspace(c)) {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  [[nodiscard]] bool done() const { return pos >= s.size(); }
  [[nodiscard]] char peek() const { return done() ? '\0' : s[pos]; }
  char eat() { return s[pos++]; }
  void expect(char c) {
    if (peek() != c)
      throw NotationError("expected '" + std::string(1, c) + "' at position " +
                          std::to_string(pos) + " in \"" + s + "\"");
    ++pos;
  }
};

Rational parse_int(Cursor& c) {
  if (!std::isdigit(static_cast<unsigned char>(c.peek())))
    throw NotationError("expected a number at position " + std::to_string(c.pos) + " in \"" + c.s + "\"");
  std::string digits;
  while (std::isdigit(static_cast<unsigned char>(c.peek()))) digits.push_back(c.eat());
  return Rational(boost::multiprecision::cpp_int(digits));
}

std::string parse_name(Cursor& c) {
  std::string name;
  while (std::isalpha(static_cast<unsigned char>(c.peek())) || c.peek() == '_' ||
         (!name.empty() && std::isdigit(static_cast<unsigned char>(c.peek()))))
    name.push_back(c.eat());
  if (name.empty())
    throw NotationError("expected a name at position " + std::to_string(c.pos) + " in \"" + c.s + "\"");
  return name;
}

Scalar parse_expr(Cursor& c);

Scalar parse_factor(Cursor& c) {
  if (c.peek() == '(') {
    c.eat();
    Scalar s = parse_expr(c);
    c.expect(')');
    return s;
  }
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) return Scalar(parse_int(c));
  return Scalar::param(parse_name(c));
}

Scalar parse_product(Cursor& c) {
  Scalar p = parse_factor(c);
  for (;;) {
    char ch = c.peek();
    if (ch == '*') {
      c.eat();
      p *= parse_factor(c);
    } else if (ch == '/') {
      c.eat();
      Rational d = parse_int(c);
      if (d == 0) throw NotationError("division by zero in \"" + c.s + "\"");
      p = p / d;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      p *= Scalar::param(parse_name(c));  // juxtaposition: "2a1"
    } else {
      break;
    }
  }
  return p;
}

Scalar parse_expr(Cursor& c) {
  Scalar sum;
  bool first = true;
  for (;;) {
    int sign = 1;
    if (c.peek() == '+' || c.peek() == '-') {
      if (c.eat() == '-') sign = -1;
    } else if (!first) {
      break;
    }
    Scalar term = parse_product(c);
    sum += (sign > 0) ? term : -term;
    first = false;
    if (c.done() || (c.peek() != '+' && c.peek() != '-')) break;
  }
  return sum;
}

// Splits text into top-level signed chunks at +/- outside parentheses.
std::vector<std::pair<int, std::string>> split_terms(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  int depth = 0, sign = 1;
  std::string cur;
  for (char ch : text) {
    if (depth == 0 && (ch == '+' || ch == '-')) {
      if (!cur.empty()) {
        out.emplace_back(sign, cur);
        cur.clear();
        sign = 1;
      }
      if (ch == '-') sign = -sign;
      continue;
    }
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    cur.push_back(ch);
  }
  if (!cur.empty()) out.emplace_back(sign, cur);
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Index run "257" -> 0-based tuple {1,4,6}; validates range.
Idx parse_run(const std::string& run, int n) {
  Idx t;
  for (char ch : run) {
    int v = ch - '0';
    if (v < 1 || v > n)
      throw NotationError("index " + std::string(1, ch) + " out of range 1.." + std::to_string(n));
    t.push_back(static_cast<uint8_t>(v - 1));
  }
  return t;
}

// Parses a group: either a digit run or "(12+34-56)"; returns signed runs.
std::vector<std::pair<int, std::string>> parse_group(const std::string& g) {
  if (!g.empty() && g.front() == '(') {
    if (g.back() != ')') throw NotationError("unbalanced parentheses in group \"" + g + "\"");
    std::string inner = g.substr(1, g.size() - 2);
    auto parts = split_terms(inner);
    for (auto& [sign, run] : parts)
      if (!all_digits(run)) throw NotationError("expected indices in group \"" + g + "\"");
    return parts;
  }
  if (!all_digits(g)) throw NotationError("expected an index run, got \"" + g + "\"");
  return {{1, g}};
}

size_t find_top_level(const std::string& s, char target) {
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && s[i] == target) return i;
  }
  return std::string::npos;
}

}  // namespace

Scalar parse_scalar(const std::string& text) {
  std::string t = normalize(text);
  if (t.empty()) throw NotationError("empty coefficient");
  Cursor c{t};
  Scalar s = parse_expr(c);
  if (!c.done())
    throw NotationError("trailing characters at position " + std::to_string(c.pos) + " in \"" + t + "\"");
  return s;
}

KForm parse_form(const std::string& text, int n, int degree) {
  std::string t = normalize(text);
  if (t.empty()) throw NotationError("empty form");
  if (t == "0") {
    if (degree < 0) throw NotationError("cannot infer the degree of \"0\"");
    return KForm(n, degree);
  }
  auto terms = split_terms(t);
  int deg = degree;
  // First pass just to infer the degree when not forced.
  if (deg < 0) {
    for (auto& [sign, body] : terms) {
      size_t dot = find_top_level(body, '.');
      std::string g = (dot == std::string::npos) ? body : body.substr(dot + 1);
      if (dot == std::string::npos && !all_digits(g) && g.front() != '(') continue;
      auto runs = parse_group(g);
      deg = static_cast<int>(runs.front().second.size());
      break;
    }
    if (deg < 0) throw NotationError("cannot infer form degree from \"" + t + "\"");
  }
  KForm f(n, deg);
  for (auto& [sign, body] : terms) {
    std::string coeff_text, group_text;
    size_t dot = find_top_level(body, '.');
    if (dot != std::string::npos) {
      coeff_text = body.substr(0, dot);
      group_text = body.substr(dot + 1);
    } else if (all_digits(body)) {
      group_text = body;
    } else if (body.front() == '(' && body.back() == ')') {
      group_text = body;
    } else {
      // Dotless like "c57": the trailing `deg` digits are the indices.
      size_t run = 0;
      while (run < body.size() && std::isdigit(static_cast<unsigned char>(body[body.size() - 1 - run])))
        ++run;
      if (run < static_cast<size_t>(deg))
        throw NotationError("term \"" + body + "\" has no index part");
      coeff_text = body.substr(0, body.size() - deg);
      group_text = body.substr(body.size() - deg);
    }
    Scalar coeff = coeff_text.empty() ? Scalar(1) : parse_scalar(coeff_text);
    if (sign < 0) coeff = -coeff;
    for (auto& [gsign, run] : parse_group(group_text)) {
      if (static_cast<int>(run.size()) != deg)
        throw NotationError("mixed degrees in \"" + t + "\"");
      f.add(parse_run(run, n), gsign > 0 ? coeff : -coeff);
    }
  }
  return f;
}

Vec parse_vector(const std::string& text, int n) {
  std::string t = normalize(text);
  Vec v(n);
  if (t.empty() || t == "0") return v;
  for (auto& [sign, body] : split_terms(t)) {
    // forms: "e5", "2a*e6", "(c/2)*e5"
    size_t epos = std::string::npos;
    int depth = 0;
    for (size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '(') ++depth;
      if (body[i] == ')') --depth;
      if (depth == 0 && body[i] == 'e' &&
          (i == 0 || body[i - 1] == '*') &&
          i + 1 < body.size() && std::isdigit(static_cast<unsigned char>(body[i + 1]))) {
        epos = i;
        break;
      }
    }
    if (epos == std::string::npos) throw NotationError("vector term \"" + body + "\" lacks e<k>");
    std::string coeff_text = body.substr(0, epos);
    if (!coeff_text.empty() && coeff_text.back() == '*') coeff_text.pop_back();
    std::string idx = body.substr(epos + 1);
    if (!all_digits(idx)) throw NotationError("bad basis index in \"" + body + "\"");
    int k = std::stoi(idx);
    if (k < 1 || k > n) throw NotationError("basis index out of range in \"" + body + "\"");
    Scalar coeff = coeff_text.empty() ? Scalar(1) : parse_scalar(coeff_text);
    if (sign < 0) coeff = -coeff;
    v[k - 1] += coeff;
  }
  return v;
}

LieAlgebra parse_algebra(const std::string& text) {
  std::string t = normalize(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw NotationError("algebra shorthand must be parenthesised: \"" + t + "\"");
  std::string inner = t.substr(1, t.size() - 2);
  // split entries on top-level commas
  std::vector<std::string> entries;
  int depth = 0;
  std::string cur;
  for (char ch : inner) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && ch == ',') {
      entries.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  entries.push_back(cur);
  int n = static_cast<int>(entries.size());
  if (n > 9) throw NotationError("differential shorthand supports dimension at most 9");
  LieAlgebra g(n);
  std::vector<std::vector<Vec>> brackets(n, std::vector<Vec>(n, Vec(n)));
  for (int k = 0; k < n; ++k) {
    KForm dk = parse_form(entries[k], n, 2);
    for (auto& [idx, c] : dk.terms()) {
      // de^k = sum c e^{ij}  =>  [e_i, e_j] has e_k-coefficient -c
      brackets[idx[0]][idx[1]][k] -= c;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_bracket(i, j, brackets[i][j]);
  return g;
}

std::map<int, KForm> parse_valued_form(const std::string& text, int n, int degree) {
  std::map<int, KForm> out;
  std::string t = normalize(text);
  if (t.empty() || t == "0") return out;
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ';')) {
    size_t at = part.rfind('@');
    if (at == std::string::npos) throw NotationError("component \"" + part + "\" lacks '@k'");
    std::string idx = part.substr(at + 1);
    if (!all_digits(idx)) throw NotationError("bad value index in \"" + part + "\"");
    int k = std::stoi(idx);
    if (k < 1 || k > n) throw NotationError("value index out of range in \"" + part + "\"");
    KForm f = parse_form(part.substr(0, at), n, degree);
    auto it = out.find(k);
    if (it == out.end())
      out.emplace(k, f);
    else
      it->second = it->second + f;
  }
  return out;
}

std::map<int, Vec> parse_endo(const std::string& text, int n) {
  std::map<int, Vec> out;
  std::string t = normalize(text);
  if (t.empty() || t == "0") return out;
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ';')) {
    size_t colon = part.find(':');
    if (colon == std::string::npos) throw NotationError("image \"" + part + "\" lacks 'k:'");
    std::string idx = part.substr(0, colon);
    if (!all_digits(idx)) throw NotationError("bad basis index in \"" + part + "\"");
    int k = std::stoi(idx);
    if (k < 1 || k > n) throw NotationError("basis index out of range in \"" + part + "\"");
    out[k] = parse_vector(part.substr(colon + 1), n);
  }
  return out;
}

namespace {

// Monomial of a Scalar in print order: sign, numerator, names, denominator.
struct PrintMono {
  int sign = 1;
  Rational magnitude;  // positive
  std::vector<std::pair<std::string, unsigned>> names;
};

std::vector<PrintMono> print_monos(const Scalar& s) {
  std::vector<PrintMono> out;
  for (auto& [m, c] : s.terms()) {
    PrintMono pm;
    pm.sign = (c < 0) ? -1 : 1;
    pm.magnitude = (c < 0) ? Rational(-c) : c;
    for (auto& [id, e] : m) pm.names.emplace_back(Params::name(id), e);
    out.push_back(std::move(pm));
  }
  std::sort(out.begin(), out.end(),
            [](const PrintMono& a, const PrintMono& b) { return a.names < b.names; });
  return out;
}

// "2a1", "a1*a2/2", "1/2", "1"  (no sign)
std::string mono_body(const PrintMono& pm) {
  std::ostringstream os;
  Rational num = boost::multiprecision::numerator(pm.magnitude);
  Rational den = boost::multiprecision::denominator(pm.magnitude);
  bool wrote = false;
  if (num != 1 || pm.names.empty()) {
    os << num;
    wrote = true;
  }
  for (auto& [name, e] : pm.names)
    for (unsigned i = 0; i < e; ++i) {
      if (wrote) os << "*";
      os << name;
      wrote = true;
    }
  if (den != 1) os << "/" << den;
  std::string s = os.str();
  // "2a1" juxtaposition: drop the '*' between a leading integer and a name
  if (num != 1 && !pm.names.empty()) {
    size_t star = s.find('*');
    if (star != std::string::npos) s.erase(star, 1);
  }
  return s;
}

// Renders a coefficient for use before ".indices": (sign, body, elide_dot)
struct CoeffText {
  int sign = 1;
  std::string body;  // empty means coefficient 1 (print bare indices)
};

CoeffText coeff_text(const Scalar& c) {
  CoeffText out;
  auto monos = print_monos(c);
  if (monos.size() == 1) {
    out.sign = monos[0].sign;
    if (monos[0].magnitude == 1 && monos[0].names.empty())
      out.body.clear();
    else
      out.body = mono_body(monos[0]);
    return out;
  }
  // multi-term coefficient: parenthesised, factoring the first term's sign
  out.sign = monos[0].sign;
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < monos.size(); ++i) {
    int s = monos[i].sign * out.sign;  // +1 for i == 0 by construction
    if (i > 0) os << (s > 0 ? "+" : "-");
    os << mono_body(monos[i]);
  }
  os << ")";
  out.body = os.str();
  return out;
}

std::string run_text(const Idx& idx) {
  std::string s;
  for (uint8_t v : idx) s.push_back(static_cast<char>('1' + v));
  return s;
}

}  // namespace

std::string print_scalar(const Scalar& s) {
  if (s.is_zero()) return "0";
  auto monos = print_monos(s);
  std::ostringstream os;
  for (size_t i = 0; i < monos.size(); ++i) {
    if (monos[i].sign < 0)
      os << "-";
    else if (i > 0)
      os << "+";
    os << mono_body(monos[i]);
  }
  return os.str();
}

std::string print_form(const KForm& f) {
  if (f.is_zero()) return "0";
  if (f.dim() > 9) throw NotationError("compact form printing supports dimension at most 9");
  std::ostringstream os;
  bool first = true;
  for (auto& [idx, c] : f.terms()) {
    CoeffText ct = coeff_text(c);
    if (ct.sign < 0)
      os << "-";
    else if (!first)
      os << "+";
    if (!ct.body.empty()) os << ct.body << ".";
    os << run_text(idx);
    first = false;
  }
  return os.str();
}

std::string print_vector(const Vec& v) {
  if (is_zero(v)) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    CoeffText ct = coeff_text(v[k]);
    if (ct.sign < 0)
      os << "-";
    else if (!first)
      os << "+";
    if (!ct.body.empty()) os << ct.body << "*";
    os << "e" << (k + 1);
    first = false;
  }
  return os.str();
}

std::string print_algebra(const LieAlgebra& g) {
  int n = g.dim();
  if (n > 9) throw NotationError("differential shorthand supports dimension at most 9");
  std::ostringstream os;
  os << "(";
  for (int k = 0; k < n; ++k) {
    KForm dk(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Scalar c = g.bracket_basis(i, j)[k];
        if (!c.is_zero()) dk.add({(uint8_t)i, (uint8_t)j}, -c);
      }
    os << (k ? "," : "") << print_form(dk);
  }
  os << ")";
  return os.str();
}

std::string canonical_form_string(const std::string& text, int n, int degree) {
  return print_form(parse_form(text, n, degree));
}

std::string canonical_algebra_string(const std::string& text) {
  return print_algebra(parse_algebra(text));
}

bool same_algebra(const std::string& a, const std::string& b) {
  return parse_algebra(a) == parse_algebra(b);
}

bool same_form(const std::string& a, const std::string& b, int n, int degree) {
  return parse_form(a, n, degree) == parse_form(b, n, degree);
}

}  // namespace solvshear
