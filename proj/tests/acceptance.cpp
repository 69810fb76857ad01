// End-to-end acceptance checks, one [PASS]/[FAIL] line per criterion.
#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "solvshear/builtins.hpp"
#include "solvshear/g2.hpp"
#include "solvshear/notation.hpp"

using namespace solvshear;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, const std::string& detail = {}) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++failures;
}

KForm psi_of(const std::string& kind) {
  if (kind == "cocalibrated") return standard_star_phi_cocalibrated();
  if (kind == "calibrated") return standard_phi_calibrated();
  return standard_sigma_6d().wedge_pow(2);
}

std::vector<ShearData> frame_corpus() {
  std::vector<ShearData> out;
  for (const BuiltinExample& ex : builtin_examples())
    if (ex.kind != "abelianize") out.push_back(builtin_data(ex));
  return out;
}

std::vector<ShearData> full_corpus() {
  std::vector<ShearData> out = frame_corpus();
  out.push_back(abelianize_data(parse_algebra("(0,0,12)")));
  out.push_back(abelianize_data(parse_algebra("(0,-12,13,-23)")));
  return out;
}

Rational rand_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 3);
  int v = num(rng);
  if (v == 0) v = 1;
  return Rational(v, den(rng));
}

std::map<int, Rational> rand_values(std::mt19937& rng) {
  std::map<int, Rational> vals;
  for (const char* name : {"a", "b", "c", "a1", "a2", "a3", "a5"})
    vals[Params::id(name)] = rand_rational(rng);
  return vals;
}

// --- criterion 1: built-in example regression ---
void criterion1() {
  std::vector<ReproduceResult> results = reproduce_all();
  int passed = 0;
  bool direct = true;
  for (const ReproduceResult& r : results) passed += r.ok() ? 1 : 0;
  for (const BuiltinExample& ex : builtin_examples()) {
    if (ex.kind == "abelianize") continue;
    LieAlgebra h = shear(builtin_data(ex));
    if (ex.kind == "cocalibrated")
      direct = direct && is_cocalibrated(h, standard_phi_cocalibrated());
    else if (ex.kind == "calibrated")
      direct = direct && is_calibrated(h, standard_phi_calibrated());
    else
      direct = direct && h.d(standard_sigma_6d().wedge_pow(2)).is_zero();
  }
  report(1, "built-in example regression", passed == 12 && direct,
         std::to_string(passed) + "/12 reproduced, closedness exact on every shear");
}

// --- criterion 2: quotient path equals the closed-form bracket ---
void criterion2() {
  std::mt19937 rng(20260814);
  bool ok = true;
  int count = 0;
  auto check_one = [&](const ShearData& d) {
    ok = ok && validate(d).ok() && shear(d) == shear_via_quotient(d);
    ++count;
  };
  for (const ShearData& d : full_corpus()) {
    check_one(d);
    check_one(invert(d));
  }
  for (const char* id : {"cocal.a.i", "cocal.c", "cal.b", "ask.basic"}) {
    for (int k = 0; k < 2; ++k) check_one(builtin_data(*find_builtin(id)).instantiate(rand_values(rng)));
  }
  report(2, "extension-quotient bracket equals the closed form", ok && count >= 20,
         std::to_string(count) + " validated instances");
}

// --- criterion 3: transferred differential equals the direct one ---
void criterion3() {
  bool ok = true;
  int count = 0;
  for (const ShearData& d : frame_corpus()) {
    LieAlgebra h = shear(d);
    int n = d.g.dim();
    for (int mask = 1; mask < (1 << n); ++mask) {
      int deg = __builtin_popcount(static_cast<unsigned>(mask));
      if (deg < 1 || deg > 4) continue;
      Idx idx;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) idx.push_back(static_cast<uint8_t>(i));
      KForm b = KForm::monomial(n, idx, Scalar(1));
      ok = ok && transfer_d(d, b) == h.d(b);
      ++count;
    }
  }
  report(3, "differential transfer identity on degrees 1-4", ok,
         std::to_string(count) + " basis forms across the corpus");
}

// --- criterion 4: duality round trip ---
void criterion4() {
  bool ok = true;
  int count = 0;
  for (const ShearData& d : full_corpus()) {
    ShearData inv = invert(d);
    ok = ok && validate(inv).ok() && shear(inv) == d.g && shear(d) == inv.g;
    ++count;
  }
  report(4, "shear of the inverted data restores the input", ok,
         std::to_string(count) + " corpus instances");
}

// --- criterion 5: abelianisation chains ---
void criterion5() {
  auto inst = [](const std::string& s, std::map<int, Rational> vals) {
    return parse_algebra(s).instantiate(vals);
  };
  std::map<int, Rational> v1 = {{Params::id("a1"), 1}, {Params::id("a2"), 2}, {Params::id("a3"), 3}};
  std::map<int, Rational> v2 = {{Params::id("a"), 1}, {Params::id("b"), 2}};
  std::map<int, Rational> v3 = {{Params::id("a1"), 1}, {Params::id("a2"), 1},
                                {Params::id("a3"), 2}, {Params::id("a5"), 3}};
  std::vector<LieAlgebra> algs = {
      parse_algebra("(0,0,12)"),
      parse_algebra("(0,-12,13,-23)"),
      parse_algebra("(0,12,13)"),
      parse_algebra("(0,0,12,13)"),
      parse_algebra("(0,-12,13,-23,0)"),
      inst(find_builtin("cocal.a.i")->base, v1),
      inst(find_builtin("cal.b")->base, v2),
      inst(find_builtin("ask.basic")->base, v3),
      shear(builtin_data(*find_builtin("cal.b"))).instantiate(v2),
      shear(builtin_data(*find_builtin("cal.c"))).instantiate(v2),
      shear(builtin_data(*find_builtin("cocal.b"))).instantiate(v1),
  };
  bool ok = true;
  int count = 0;
  for (const LieAlgebra& g : algs) {
    int dl = g.derived_length();
    ok = ok && dl >= 2 && dl <= 3 && g.dim() <= 7;
    std::vector<LieAlgebra> chain = abelianize_chain(g);
    ok = ok && static_cast<int>(chain.size()) == dl - 1;
    for (std::size_t i = 0; i < chain.size(); ++i)
      ok = ok && chain[i].derived_length() == dl - 1 - static_cast<int>(i);
    ok = ok && !chain.empty() && chain.back().is_abelian();
    ++count;
  }
  report(5, "abelianisation drops derived length stepwise to one", ok && count >= 10,
         std::to_string(count) + " instantiated solvable algebras");
}

// --- criterion 6: metric and Hodge duals, numerically ---
void criterion6() {
  bool ok = true;
  G2Metric m = g2_metric(standard_phi_calibrated());
  ok = ok && m.exact_identity;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      ok = ok && std::abs(m.value[i][j] - (i == j ? 1.0 : 0.0)) <= kTolHodge;

  NumMat id7(7, std::vector<double>(7, 0.0));
  for (int i = 0; i < 7; ++i) id7[i][i] = 1.0;
  NumForm star = hodge_numeric(to_numeric(standard_phi_cocalibrated()), 7, 3, id7);
  ok = ok && num_max_diff(star, to_numeric(standard_star_phi_cocalibrated())) <= kTolHodge;

  NumMat id6(6, std::vector<double>(6, 0.0));
  for (int i = 0; i < 6; ++i) id6[i][i] = 1.0;
  KForm sigma = standard_sigma_6d();
  int swept = 0;
  for (const char* txt : {"12-34", "34-56", "13+24", "14-23", "35+46", "36-45", "15+26", "16-25"}) {
    KForm w = parse_form(txt, 6, 2);
    NumForm lhs = hodge_numeric(to_numeric(w), 6, 2, id6);
    NumForm rhs = to_numeric(Scalar(-1) * w.wedge(sigma));
    ok = ok && num_max_diff(lhs, rhs) <= kTolHodge;
    ++swept;
  }
  report(6, "metric normalisation and numeric Hodge duals", ok,
         "identity metric, frozen 4-form, " + std::to_string(swept) + " primitive forms");
}

// --- criterion 7: contraction conditions vs direct closedness ---
void criterion7() {
  bool ok = true;
  int pairs = 0;
  int broken = 0;
  for (const BuiltinExample& ex : builtin_examples()) {
    if (ex.kind == "abelianize") continue;
    ClosednessCheck c = aa_closedness_check(builtin_data(ex), psi_of(ex.kind));
    ok = ok && c.g_closed && c.h_closed && c.both();
    ++pairs;
  }
  auto om_pert = [&](const char* id, int comp, int col) {
    const BuiltinExample* ex = find_builtin(id);
    ShearData d = builtin_data(*ex);
    int n = d.g.dim();
    KForm extra = KForm::monomial(n, {static_cast<uint8_t>(n - 1)}, Scalar(1))
                      .wedge(KForm::monomial(n, {static_cast<uint8_t>(col)}, Scalar(1)));
    d.omega.comps[comp] = d.omega.comps[comp] + extra;
    ok = ok && validate(d).ok();
    ClosednessCheck c = aa_closedness_check(d, psi_of(ex->kind));
    ok = ok && c.both() == c.h_closed;
    if (!c.h_closed) ++broken;
    ++pairs;
  };
  auto nu_pert = [&](const char* id, int val_row, int col, int scale) {
    const BuiltinExample* ex = find_builtin(id);
    ShearData base = builtin_data(*ex);
    Mat nu(base.g.dim(), base.g.dim());
    if (!ex->nu.empty())
      for (auto& [k, img] : parse_endo(ex->nu, base.g.dim()))
        for (int i = 0; i < base.g.dim(); ++i) nu.at(i, k - 1) = img[i];
    nu.at(val_row, col) = nu.at(val_row, col) + Scalar(scale);
    VForm om(base.g.dim(), 2, static_cast<int>(ex->a_indices.size()));
    for (auto& [k, form] : parse_valued_form(ex->omega0, base.g.dim()))
      for (std::size_t q = 0; q < ex->a_indices.size(); ++q)
        if (ex->a_indices[q] == k) om.comps[q] = form;
    ShearData d = aa_build_data(base.g, ex->a_indices, om, nu);
    ok = ok && validate(d).ok();
    ClosednessCheck c = aa_closedness_check(d, psi_of(ex->kind));
    ok = ok && c.both() == c.h_closed;
    if (!c.h_closed) ++broken;
    ++pairs;
  };
  for (auto [c, l] : {std::pair{0, 1}, {0, 2}, {1, 4}, {1, 5}, {0, 4}}) om_pert("cocal.a.i", c, l);
  for (auto [c, l] : {std::pair{0, 1}, {0, 2}, {3, 1}, {1, 2}}) om_pert("cocal.c", c, l);
  for (auto [c, l] : {std::pair{0, 4}, {0, 5}, {1, 4}, {2, 5}}) om_pert("cal.b", c, l);
  for (auto [c, l] : {std::pair{2, 0}, {2, 2}}) om_pert("ask.basic", c, l);
  for (auto [c, l] : {std::pair{0, 0}, {0, 2}}) om_pert("ask.sk", c, l);
  nu_pert("cocal.a.i", 0, 1, 1);
  nu_pert("cocal.a.i", 3, 2, 1);
  nu_pert("cocal.a.i", 0, 4, 2);
  nu_pert("cal.b", 0, 4, 1);
  nu_pert("cal.b", 2, 5, 1);
  nu_pert("ask.basic", 4, 0, 1);
  nu_pert("ask.sk", 4, 0, 1);
  nu_pert("ask.sk", 4, 2, 2);
  report(7, "contraction conditions agree with direct closedness", ok && broken >= 10,
         std::to_string(pairs) + " pairs, " + std::to_string(broken) + " closedness-breaking");
}

// --- criterion 8: two-step checker iff direct calibration ---
void criterion8() {
  KForm phi = standard_phi_calibrated();
  bool ok = true;
  int negatives = 0;
  for (const char* id : {"cal.b", "cal.c"}) {
    LieAlgebra h = shear(builtin_data(*find_builtin(id)));
    ok = ok && is_calibrated(h, phi) && check_calibrated_h3r3(h, phi).ok();
  }
  LieAlgebra h0 = shear(builtin_data(*find_builtin("cal.b")))
                      .instantiate({{Params::id("a"), 1}, {Params::id("b"), 1}});
  for (int t : {2, 3, -1}) {
    LieAlgebra h = h0;
    for (int i = 0; i < 6; ++i) h.set_bracket(i, 6, Scalar(t) * h0.bracket_basis(i, 6));
    ok = ok && h.satisfies_jacobi();
    bool cal = is_calibrated(h, phi);
    ok = ok && check_calibrated_h3r3(h, phi).ok() == cal;
    if (!cal) ++negatives;
  }
  for (auto [d1, d5, d6] : {std::tuple{2, 1, 1}, {3, 1, 2}, {-2, -1, -1}}) {
    LieAlgebra h = h0;
    Vec diag(7);
    diag[0] = Scalar(d1);
    diag[4] = Scalar(d5);
    diag[5] = Scalar(d6);
    for (int i = 0; i < 6; ++i)
      h.set_bracket(i, 6, h0.bracket_basis(i, 6) + Scalar(-1) * diag[i] * basis_vec(7, i));
    ok = ok && h.satisfies_jacobi();
    bool cal = is_calibrated(h, phi);
    ok = ok && check_calibrated_h3r3(h, phi).ok() == cal;
    if (!cal) ++negatives;
  }
  report(8, "two-step calibration checker matches d(phi) == 0", ok && negatives >= 5,
         std::to_string(negatives) + " perturbed negatives");
}

// --- criterion 9: structural hygiene ---
void criterion9() {
  bool ok = true;
  std::vector<LieAlgebra> constructed;
  for (const ShearData& d : full_corpus()) {
    constructed.push_back(d.g);
    constructed.push_back(extension(d));
    constructed.push_back(shear(d));
    constructed.push_back(shear_via_quotient(d));
  }
  for (const LieAlgebra& g : abelianize_chain(parse_algebra("(0,-12,13,-23)")))
    constructed.push_back(g);
  for (const LieAlgebra& g : constructed) ok = ok && g.satisfies_jacobi();
  for (const LieAlgebra& g : constructed) {
    int n = g.dim();
    for (int i = 0; i < n; ++i) {
      KForm b = KForm::monomial(n, {static_cast<uint8_t>(i)}, Scalar(1));
      ok = ok && g.d(g.d(b)).is_zero();
      for (int j = i + 1; j < n; ++j) {
        KForm b2 = KForm::monomial(n, {static_cast<uint8_t>(i), static_cast<uint8_t>(j)}, Scalar(1));
        ok = ok && g.d(g.d(b2)).is_zero();
      }
    }
  }
  std::mt19937 rng(97);
  std::uniform_int_distribution<int> dim(3, 7);
  std::uniform_int_distribution<int> coin(0, 2);
  int round_trips = 0;
  for (int t = 0; t < 100; ++t) {
    int n = dim(rng);
    LieAlgebra g(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng) != 0) continue;
        Vec v(n);
        for (int k = 0; k < n; ++k)
          if (coin(rng) == 0) {
            v[k] = Scalar(rand_rational(rng));
            if (coin(rng) == 0) v[k] = v[k] * Scalar::param("t" + std::to_string(coin(rng)));
          }
        g.set_bracket(i, j, v);
      }
    ok = ok && parse_algebra(print_algebra(g)) == g;
    ++round_trips;
  }
  report(9, "Jacobi and d^2 sweeps, notation round trip", ok,
         std::to_string(constructed.size()) + " constructed algebras, " +
             std::to_string(round_trips) + " random round trips");
}

// --- criterion 10: Nijenhuis tensor transfer ---
void criterion10() {
  bool ok = true;
  ShearData d = builtin_data(*find_builtin("ask.sk"));
  KForm sigma = standard_sigma_6d();
  Mat j(6, 6);
  for (int k = 0; k < 6; ++k)
    for (int l = 0; l < 6; ++l) j.at(k, l) = sigma.eval({basis_vec(6, k), basis_vec(6, l)});
  AcsTransfer t0 = transfer_acs(d, j);
  ok = ok && t0.nijenhuis_g.is_zero() && t0.nijenhuis_h.is_zero() && t0.residual.is_zero();

  // random almost complex structures P J0 P^-1 over the six-dimensional data
  std::mt19937 rng(4242);
  Mat j0(6, 6);
  for (int k = 0; k < 3; ++k) {
    j0.at(2 * k + 1, 2 * k) = Scalar(1);
    j0.at(2 * k, 2 * k + 1) = Scalar(-1);
  }
  auto random_acs = [&]() {
    for (;;) {
      Mat p(6, 6);
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) p.at(a, b) = Scalar(rand_rational(rng));
      try {
        return p * j0 * p.inverse();
      } catch (const ParametricRankError&) {
        continue;  // singular draw
      }
    }
  };
  int non_integrable = 0;
  for (const char* id : {"ask.basic", "ask.sk"}) {
    ShearData data = builtin_data(*find_builtin(id));
    for (int t = 0; t < 3; ++t) {
      AcsTransfer tr = transfer_acs(data, random_acs());
      ok = ok && tr.residual.is_zero();
      if (!tr.nijenhuis_g.is_zero()) ++non_integrable;
    }
  }
  report(10, "Nijenhuis transfer formula is exact", ok && non_integrable >= 5,
         std::to_string(non_integrable) + " non-integrable random J");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::cout << (failures == 0 ? "all criteria passed" : "criteria FAILED: " + std::to_string(failures))
            << "\n";
  return failures == 0 ? 0 : 1;
}
