#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "solvshear/notation.hpp"
#include "solvshear/shear.hpp"

using namespace solvshear;

TEST_CASE("differential convention and d^2 = 0") {
  LieAlgebra h3 = parse_algebra("(0,0,12)");
  // d e^3 = e^{12}
  KForm e3 = KForm::monomial(3, {2}, Scalar(1));
  CHECK(h3.d(e3) == KForm::monomial(3, {0, 1}, Scalar(1)));
  CHECK(h3.d(h3.d(e3)).is_zero());

  LieAlgebra g = parse_algebra("(a_1.17,a_2.27,a_3.37,-a_1.47,-a_2.57,-a_3.67,0)");
  for (int k = 0; k < 7; ++k) {
    KForm ek = KForm::monomial(7, {(uint8_t)k}, Scalar(1));
    CHECK(g.d(g.d(ek)).is_zero());
  }
  // and on a 3-form
  KForm phi = parse_form("126-135-147+234-257-367-456", 7);
  CHECK(g.d(g.d(phi)).is_zero());
}

TEST_CASE("jacobi detection") {
  CHECK(parse_algebra("(0,0,12)").satisfies_jacobi());
  // de1 = 23 and de2 = 13 still satisfies Jacobi (a solvable algebra)
  CHECK(parse_algebra("(23,13,0)").satisfies_jacobi());
  // de1 = 23 and de2 = 14 does not: the cyclic sum over (e1,e3,e4) is
  // [[e4,e1],e3] = [e2,e3] = -e1
  LieAlgebra bad = parse_algebra("(23,14,0,0)");
  CHECK(!bad.satisfies_jacobi());
  REQUIRE(!bad.jacobi_defects().empty());
  auto defect = bad.jacobi_defects().front();
  Vec expect = Scalar(-1) * basis_vec(4, 0);
  CHECK(defect.value == expect);
}

TEST_CASE("ad, abelian, center") {
  LieAlgebra h3 = parse_algebra("(0,0,12)");
  CHECK(!h3.is_abelian());
  CHECK(parse_algebra("(0,0,0)").is_abelian());
  Mat ad1 = h3.ad(basis_vec(3, 0));
  // [e1, e2] = -e3
  CHECK(ad1.at(2, 1) == Scalar(-1));
  Subspace z = h3.center();
  CHECK(z.dim() == 1);
  CHECK(z.contains(basis_vec(3, 2)));
}

TEST_CASE("derived series and solvability") {
  // [e1,e2] = -e2, [e1,e3] = e3, [e2,e3] = -e4
  LieAlgebra g = parse_algebra("(0,-12,13,-23)");
  CHECK(g.satisfies_jacobi());
  auto series = g.derived_series();
  REQUIRE(series.size() == 3);
  CHECK(series[0].dim() == 4);
  CHECK(series[1].dim() == 3);  // span(e2,e3,e4)
  CHECK(series[2].dim() == 1);  // span(e4)
  CHECK(series[2].contains(basis_vec(4, 3)));
  CHECK(g.derived_length() == 3);
  CHECK(g.is_solvable());
  CHECK(!g.is_nilpotent());
  CHECK(parse_algebra("(0,0,12)").is_nilpotent());
}

TEST_CASE("subalgebra, ideal, quotient") {
  LieAlgebra g = parse_algebra("(0,-12,13,-23)");
  Subspace a({basis_vec(4, 3)}, 4);
  CHECK(g.is_ideal(a));
  CHECK(g.is_abelian_subspace(a));
  Mat proj;
  LieAlgebra q = g.quotient(a, &proj);
  CHECK(q.dim() == 3);
  CHECK(print_algebra(q) == "(0,-12,13)");
  CHECK(proj.rows() == 3);
  Subspace notideal({basis_vec(4, 0)}, 4);
  CHECK(!g.is_ideal(notideal));
  CHECK_THROWS_AS((void)g.quotient(notideal), std::logic_error);
}

TEST_CASE("direct sum with an abelian factor") {
  LieAlgebra s = LieAlgebra::direct_sum_abelian(parse_algebra("(0,0,12)"), 2);
  CHECK(s.dim() == 5);
  CHECK(print_algebra(s) == "(0,0,12,0,0)");
  CHECK(s.is_nilpotent());
}

TEST_CASE("nijenhuis tensor") {
  // abelian: N_J = 0 for every J
  LieAlgebra ab = parse_algebra("(0,0,0,0)");
  Mat J(4, 4);
  J.at(1, 0) = Scalar(1);
  J.at(0, 1) = Scalar(-1);
  J.at(3, 2) = Scalar(1);
  J.at(2, 3) = Scalar(-1);
  CHECK(nijenhuis(ab, J).is_zero());
  // on the semi-Kaehler example the standard J is integrable
  LieAlgebra g = parse_algebra("(a_1.16,a_1.26,-a_1.36,-a_1.46,a_5.56,0)");
  // J from sigma = 12+34+56 with the identity metric: J e_j = sum sigma(e_k, e_j) e_k
  Mat J6(6, 6);
  KForm sigma = parse_form("12+34+56", 6);
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k)
      J6.at(k, j) = sigma.eval({basis_vec(6, k), basis_vec(6, j)});
  CHECK(J6 * J6 == -Mat::identity(6));
  CHECK(nijenhuis(g, J6).is_zero());
}

TEST_CASE("flat connections and the covariant differential") {
  LieAlgebra g = parse_algebra("(0,0,12)");
  // eta = 0 is flat; d^0 = d
  EndoForm zero(3, Mat(2, 2));
  CHECK(is_flat(g, zero));
  VForm w(3, 1, 2);
  w.comps[0] = KForm::monomial(3, {2}, Scalar(1));  // e^3 (x) f_1
  VForm dw = covariant_d(g, zero, w);
  CHECK(dw.comps[0] == KForm::monomial(3, {0, 1}, Scalar(1)));
  CHECK(dw.comps[1].is_zero());

  // eta(e1) = N (nilpotent), eta(e2) = eta(e3) = 0 on the abelian algebra is flat
  LieAlgebra ab = parse_algebra("(0,0,0)");
  EndoForm eta(3, Mat(2, 2));
  eta[0].at(0, 1) = Scalar(1);
  CHECK(is_flat(ab, eta));
  // on h3 the same eta fails (d eta + eta^eta has a [e1,e2] term)? here
  // eta([e1,e2]) = eta(-e3) = 0 = [eta(e1), eta(e2)] so it is still flat
  CHECK(is_flat(g, eta));
  // non-flat: eta(e1), eta(e2) non-commuting on h3
  EndoForm bad(3, Mat(2, 2));
  bad[0].at(0, 1) = Scalar(1);
  bad[1].at(1, 0) = Scalar(1);
  CHECK(!is_flat(g, bad));
}
