#include "solvshear/builtins.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "solvshear/g2.hpp"
#include "solvshear/notation.hpp"

namespace solvshear {

namespace {

const std::vector<BuiltinExample> kExamples = {
    {"cocal.a.i",
     "cocalibrated",
     "(a_1.17,a_2.27,a_3.37,-a_1.47,-a_2.57,-a_3.67,0)",
     {1, 4},
     "36-25@1",
     "1:-a1*e1;4:a1*e4",
     "(25-36,a_2.27,a_3.37,0,-a_2.57,-a_3.67,0)",
     {}},
    {"cocal.a.ii",
     "cocalibrated",
     "(a.47,-a.57,b.37,-a.17,a.27,-b.67,0)",
     {3, 6},
     "-12-45@3;-15-24@6",
     "3:-b*e3+2a*e6;6:-2a*e3+b*e6",
     "(a.47,-a.57,-2a.67+12+45,-a.17,a.27,2a.37+15+24,0)",
     {}},
    {"cocal.b",
     "cocalibrated",
     "(a_1.17,a_2.27,-2a_1.37,-a_1.47,-a_2.57,2a_1.67,0)",
     {1, 2, 3, 5},
     "-46@1",
     "4:-e5",
     "(a_1.17+46,a_2.27,-2a_1.37,-a_1.47,-47-a_2.57,2a_1.67,0)",
     {}},
    {"cocal.c",
     "cocalibrated",
     "(a_1.17,a_2.27,a_3.37,-a_1.47,-a_2.57,-a_3.67,0)",
     {1, 4, 5, 6},
     "-c.23@1",
     "1:(a2+a3-a1)*e1;4:(a1-a2-a3-c/2)*e4;5:(c/2)*e5;6:(c/2)*e6",
     "((a_2+a_3).17+c.23,a_2.27,a_3.37,-(a_2+a_3+c/2).47,"
     "(c/2-a_2).57,(c/2-a_3).67,0)",
     {}},
    {"cal.a.i",
     "calibrated",
     "(a.17,a.27,b.37,b.47,-(a+b).57,-(a+b).67,0)",
     {1, 2},
     "2a.(36+45)@1;2a.(35-46)@2",
     "1:-2a*e1;2:-2a*e2",
     "(-a.17-2a.(36+45),-a.27-2a.(35-46),b.37,b.47,-(a+b).57,-(a+b).67,0)",
     {}},
    {"cal.a.ii",
     "calibrated",
     "(0,0,b.37,b.47,-b.57,-b.67,0)",
     {1, 2},
     // coefficients (a1, a2, a3) = (2, 2, -2), satisfying a1^2 + a2 a3 = 0
     "2.(35-46)+2.(36+45)@1;2.(35-46)+2.(36+45)@2",
     "1:-2*e1+2*e2;2:2*e1-2*e2",
     "(-2.17-2.(35-46-27)-2.(36+45),-2.27-2.(35-46)-2.(36+45-17),"
     "b.37,b.47,-b.57,-b.67,0)",
     {}},
    {"cal.b",
     "calibrated",
     "(a.17,a.27,b.37,b.47,-(a+b).57,-(a+b).67,0)",
     {1, 2, 3, 4},
     "-56@1",
     "1:-(3a+2b)*e1;2:-(3a+2b)*e2;3:(3a+2b)*e3;4:(3a+2b)*e4;"
     "5:(1/2)*e3;6:(-1/2)*e4",
     "(-(2a+2b).17+56,-(2a+2b).27,(3a+3b).37+1/2.57,(3a+3b).47-1/2.67,"
     "-(a+b).57,-(a+b).67,0)",
     {}},
    {"cal.c",
     "calibrated",
     "(a.17,a.27,b.37,b.47,-(a+b).57,-(a+b).67,0)",
     {1, 2, 4, 5},
     "4a.36@1",
     "1:-2a*e1;2:-4a*e2;4:2a*e4;5:2a*e5",
     "(-a.17-4a.36,-3a.27,b.37,(b+2a).47,(a-b).57,-(a+b).67,0)",
     {}},
    {"ask.basic",
     "semi_kahler",
     "(a_1.16,a_2.26,a_3.36,-(a_1+a_2+a_3).46,a_5.56,0)",
     {2, 4, 5},
     "-13@5",
     "5:(a1+a3-a5)*e5",
     "(a_1.16,a_2.26,a_3.36,-(a_1+a_2+a_3).46,(a_1+a_3).56+13,0)",
     {}},
    {"ask.sk",
     "semi_kahler",
     "(a_1.16,a_1.26,-a_1.36,-a_1.46,a_5.56,0)",
     {5},
     "-13-24@5",
     "5:-a5*e5",
     "(a_1.16,a_1.26,-a_1.36,-a_1.46,13+24,0)",
     {}},
    {"twist.nilpotent.h3",
     "abelianize",
     "(0,0,12)",
     {},
     "",
     "",
     "",
     {"(0,0,0)"}},
    {"abelianize.demo",
     "abelianize",
     "(0,-12,13,-23)",
     {},
     "",
     "",
     "",
     {"(0,-12,13,0)", "(0,0,0,0)"}},
};

void push(ValidationReport& rep, const std::string& name, bool ok,
          std::string detail = {}) {
  rep.items.push_back({name, ok, true, std::move(detail)});
}

ReproduceResult reproduce_chain(const BuiltinExample& ex) {
  ReproduceResult res;
  res.id = ex.id;
  LieAlgebra g = parse_algebra(ex.base);
  std::vector<LieAlgebra> chain = abelianize_chain(g);
  push(res.steps, "chain_length", chain.size() == ex.chain.size());
  bool match = chain.size() == ex.chain.size();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    std::string printed = print_algebra(chain[i]);
    if (i < ex.chain.size() && !same_algebra(printed, ex.chain[i])) match = false;
    if (!res.produced.empty()) res.produced += ";";
    res.produced += printed;
  }
  push(res.steps, "chain_match", match, res.produced);
  push(res.steps, "chain_abelian", !chain.empty() && chain.back().is_abelian());

  ShearData data = abelianize_data(g);
  push(res.steps, "data_valid", validate(data).ok());
  LieAlgebra h = shear(data, true);
  push(res.steps, "step_match",
       !ex.chain.empty() && same_algebra(print_algebra(h), ex.chain.front()));
  LieAlgebra back = shear(invert(data), true);
  push(res.steps, "inversion_round_trip",
       same_algebra(print_algebra(back), ex.base));
  return res;
}

ReproduceResult reproduce_frame(const BuiltinExample& ex) {
  ReproduceResult res;
  res.id = ex.id;
  LieAlgebra g = parse_algebra(ex.base);
  ShearData data = builtin_data(ex);
  push(res.steps, "data_valid", validate(data).ok());
  LieAlgebra h = shear(data, true);
  res.produced = print_algebra(h);
  push(res.steps, "output_match", same_algebra(res.produced, ex.expected),
       res.produced);
  if (ex.kind == "cocalibrated") {
    KForm phi = standard_phi_cocalibrated();
    push(res.steps, "base_cocalibrated", is_cocalibrated(g, phi));
    push(res.steps, "shear_cocalibrated", is_cocalibrated(h, phi));
  } else if (ex.kind == "calibrated") {
    KForm phi = standard_phi_calibrated();
    push(res.steps, "base_calibrated", is_calibrated(g, phi));
    push(res.steps, "shear_calibrated", is_calibrated(h, phi));
  } else if (ex.kind == "semi_kahler") {
    KForm s2 = standard_sigma_6d().wedge_pow(2);
    push(res.steps, "base_sigma2_closed", g.d(s2).is_zero());
    push(res.steps, "shear_sigma2_closed", h.d(s2).is_zero());
  }
  LieAlgebra back = shear(invert(data), true);
  push(res.steps, "inversion_round_trip",
       same_algebra(print_algebra(back), ex.base));
  return res;
}

}  // namespace

const std::vector<BuiltinExample>& builtin_examples() { return kExamples; }

const BuiltinExample* find_builtin(const std::string& id) {
  for (const BuiltinExample& ex : kExamples)
    if (ex.id == id) return &ex;
  return nullptr;
}

ShearData builtin_data(const BuiltinExample& ex) {
  if (ex.kind == "abelianize")
    throw std::invalid_argument("builtin_data: " + ex.id +
                                " is an abelianisation example");
  LieAlgebra g = parse_algebra(ex.base);
  int n = g.dim();
  int r = static_cast<int>(ex.a_indices.size());
  VForm om(n, 2, r);
  for (auto& [k, form] : parse_valued_form(ex.omega0, n)) {
    auto it = std::find(ex.a_indices.begin(), ex.a_indices.end(), k);
    if (it == ex.a_indices.end())
      throw std::invalid_argument("builtin_data: omega0 value outside a");
    om.comps[it - ex.a_indices.begin()] = form;
  }
  Mat nu(n, n);
  if (!ex.nu.empty())
    for (auto& [k, img] : parse_endo(ex.nu, n))
      for (int i = 0; i < n; ++i) nu.at(i, k - 1) = img[i];
  return aa_build_data(g, ex.a_indices, om, nu);
}

ReproduceResult reproduce(const BuiltinExample& ex) {
  try {
    return ex.kind == "abelianize" ? reproduce_chain(ex) : reproduce_frame(ex);
  } catch (const std::exception& e) {
    ReproduceResult res;
    res.id = ex.id;
    push(res.steps, "computation", false, e.what());
    return res;
  }
}

std::vector<ReproduceResult> reproduce_all() {
  std::vector<ReproduceResult> out;
  out.reserve(kExamples.size());
  for (const BuiltinExample& ex : kExamples) out.push_back(reproduce(ex));
  return out;
}

}  // namespace solvshear
