#include "solvshear/shear.hpp"

#include <algorithm>

namespace solvshear {

EndoForm ShearData::gamma() const {
  int n = g.dim();
  Mat ainv = a.inverse();
  EndoForm out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    // ((xi .| omega)(e_i)) Z = omega(xi Z, e_i)
    Mat m(r, r);
    for (int q = 0; q < r; ++q) {
      Vec val = omega.eval({xi.col(q), basis_vec(n, i)});
      for (int p = 0; p < r; ++p) m.at(p, q) = val[p];
    }
    out.push_back(ainv * m + ainv * eta[i] * a);
  }
  return out;
}

ShearData ShearData::instantiate(const std::map<int, Rational>& values) const {
  ShearData d;
  d.g = g.instantiate(values);
  d.r = r;
  d.xi = xi.instantiate(values);
  d.a = a.instantiate(values);
  d.omega = omega.instantiate(values);
  for (const Mat& m : eta) d.eta.push_back(m.instantiate(values));
  return d;
}

bool ValidationReport::ok() const {
  return std::all_of(items.begin(), items.end(),
                     [](const Condition& c) { return c.ok || !c.required; });
}

const Condition* ValidationReport::find(const std::string& name) const {
  for (const Condition& c : items)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate(const ShearData& data) {
  ValidationReport rep;
  const LieAlgebra& g = data.g;
  int n = g.dim(), r = data.r;
  auto add = [&](std::string name, bool ok, std::string detail = "", bool required = true) {
    rep.items.push_back({std::move(name), ok, required, std::move(detail)});
  };

  {
    Rref rr = rref(data.xi);
    add("xi_injective", rr.rank == r,
        rr.rank == r ? "" : "rank " + std::to_string(rr.rank) + " < " + std::to_string(r));
  }
  {
    Scalar det = data.a.det();
    if (!det.is_constant())
      throw ParametricRankError("invertibility of `a` depends on parameters: det = " + det.str());
    add("a_invertible", !det.is_zero(), det.is_zero() ? "det = 0" : "");
  }
  add("jacobi", g.satisfies_jacobi(), "", true);
  if (!rep.ok()) return rep;  // the remaining checks need a^-1 and a Lie bracket

  EndoForm gamma = data.gamma();
  auto xi_of = [&](const Vec& z) { return data.xi.apply(z); };

  {
    bool ok = true;
    std::string detail;
    for (int p = 0; p < r && ok; ++p)
      for (int q = p + 1; q < r && ok; ++q) {
        Vec zp = basis_vec(r, p), zq = basis_vec(r, q);
        Vec lhs = g.bracket(xi_of(zp), xi_of(zq));
        Vec rhs = xi_of(endo_eval(gamma, xi_of(zp)).apply(zq) -
                        endo_eval(gamma, xi_of(zq)).apply(zp));
        if (!is_zero(lhs - rhs)) {
          ok = false;
          detail = "fails on parameter pair (" + std::to_string(p + 1) + "," + std::to_string(q + 1) + ")";
        }
      }
    add("xi_torsion_free", ok, detail);
  }
  {
    bool ok = true;
    for (int p = 0; p < r && ok; ++p)
      for (int q = p + 1; q < r && ok; ++q)
        ok = is_zero(data.omega.eval({xi_of(basis_vec(r, p)), xi_of(basis_vec(r, q))}));
    add("omega_pullback_zero", ok, ok ? "" : "omega does not vanish on the sheared directions");
  }
  {
    bool ok = true;
    std::string detail;
    for (int q = 0; q < r && ok; ++q)
      for (int i = 0; i < n && ok; ++i) {
        Vec lhs = g.bracket(xi_of(basis_vec(r, q)), basis_vec(n, i));
        Vec rhs = xi_of(gamma[i].apply(basis_vec(r, q)));
        if (!is_zero(lhs + rhs)) {
          ok = false;
          detail = "fails for parameter " + std::to_string(q + 1) + " against e" + std::to_string(i + 1);
        }
      }
    add("xi_equivariant", ok, detail);
  }
  add("eta_flat", is_flat(g, data.eta));
  add("gamma_flat", is_flat(g, gamma));
  add("omega_covariant_closed", covariant_d(g, data.eta, data.omega).is_zero());
  {
    bool ok = true;
    for (int q = 0; q < r && ok; ++q) {
      Mat m = endo_eval(data.eta, xi_of(basis_vec(r, q)));
      ok = m.is_zero();
    }
    add("eta_xi_zero", ok, "implied by the required conditions", false);
  }
  return rep;
}

LieAlgebra extension(const ShearData& data) {
  int n = data.g.dim(), r = data.r;
  LieAlgebra p(n + r);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec v(n + r);
      Vec gb = data.g.bracket_basis(i, j);
      Vec w = data.omega.eval({basis_vec(n, i), basis_vec(n, j)});
      for (int k = 0; k < n; ++k) v[k] = gb[k];
      for (int q = 0; q < r; ++q) v[n + q] = -w[q];
      p.set_bracket(i, j, v);
    }
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < r; ++q) {
      Vec v(n + r);
      for (int pq = 0; pq < r; ++pq) v[n + pq] = data.eta[i].at(pq, q);
      p.set_bracket(i, n + q, v);
    }
  return p;
}

VForm shear_correction(const ShearData& data) {
  return data.omega.map_values(data.xi * data.a.inverse());
}

LieAlgebra shear(const ShearData& data, bool check_paths) {
  int n = data.g.dim();
  VForm f = shear_correction(data);
  LieAlgebra h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec corr(n);
      for (int k = 0; k < n; ++k) corr[k] = f.comps[k].coeff({(uint8_t)i, (uint8_t)j});
      h.set_bracket(i, j, data.g.bracket_basis(i, j) + corr);
    }
  if (check_paths && h != shear_via_quotient(data))
    throw std::logic_error("shear: construction paths disagree");
  return h;
}

LieAlgebra shear_via_quotient(const ShearData& data) {
  int n = data.g.dim(), r = data.r;
  LieAlgebra p = extension(data);
  // the graph of (xi, a) inside p
  std::vector<Vec> graph;
  for (int q = 0; q < r; ++q) {
    Vec v(n + r);
    for (int i = 0; i < n; ++i) v[i] = data.xi.at(i, q);
    for (int pq = 0; pq < r; ++pq) v[n + pq] = data.a.at(pq, q);
    graph.push_back(std::move(v));
  }
  Subspace ideal(graph, n + r);
  Mat proj;
  LieAlgebra q = p.quotient(ideal, &proj);
  // pull the quotient bracket back along x -> class of (x, 0)
  Mat incl(n + r, n);
  for (int i = 0; i < n; ++i) incl.at(i, i) = Scalar(1);
  Mat phi = proj * incl;  // n x n, invertible since the quotient splits off g
  Mat phi_inv = phi.inverse();
  LieAlgebra h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      h.set_bracket(i, j, phi_inv.apply(q.bracket(phi.col(i), phi.col(j))));
  return h;
}

KForm transfer_d(const ShearData& data, const KForm& b) {
  KForm out = data.g.d(b);
  Mat v = data.xi * data.a.inverse();
  for (int q = 0; q < data.r; ++q)
    out = out - b.interior(v.col(q)).wedge(data.omega.comps[q]);
  return out;
}

VForm nijenhuis_residual(const ShearData& data, const Mat& J) {
  int n = data.g.dim();
  VForm f = shear_correction(data);
  VForm res(n, 2, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec x = basis_vec(n, i), y = basis_vec(n, j);
      Vec jx = J.apply(x), jy = J.apply(y);
      Vec val = f.eval({jx, jy}) - J.apply(f.eval({jx, y})) - J.apply(f.eval({x, jy})) -
                f.eval({x, y});
      for (int k = 0; k < n; ++k) res.comps[k].add({(uint8_t)i, (uint8_t)j}, val[k]);
    }
  return res;
}

AcsTransfer transfer_acs(const ShearData& data, const Mat& J) {
  int n = data.g.dim();
  if (J.rows() != n || J.cols() != n)
    throw std::invalid_argument("transfer_acs: J must be square of the algebra dimension");
  Mat j2 = J * J;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j2.at(i, j) != (i == j ? Scalar(-1) : Scalar()))
        throw std::domain_error("transfer_acs: J^2 != -id");
  AcsTransfer t{J, nijenhuis(data.g, J), nijenhuis(shear(data), J), VForm(n, 2, n)};
  t.residual = t.nijenhuis_g + nijenhuis_residual(data, J) - t.nijenhuis_h;
  return t;
}

ShearData invert(const ShearData& data) {
  ShearData s;
  s.g = shear(data);
  s.r = data.r;
  Mat ainv = data.a.inverse();
  s.xi = -(data.xi * ainv);
  s.a = ainv;
  s.omega = data.omega.map_values(ainv);
  s.eta = data.gamma();
  return s;
}

ShearData abelianize_data(const LieAlgebra& g) {
  if (g.is_abelian()) throw std::logic_error("abelianize: the algebra is already abelian");
  if (!g.is_solvable()) throw std::logic_error("abelianize: the algebra is not solvable");
  std::vector<Subspace> series = g.derived_series();
  Subspace a_sub = series.back();
  int n = g.dim(), r = a_sub.dim();

  ShearData d;
  d.g = g;
  d.r = r;
  d.xi = Mat::from_cols(a_sub.basis(), n);
  d.a = Mat::identity(r);
  d.eta.assign(n, Mat(r, r));
  d.omega = VForm(n, 2, r);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec proj = a_sub.project_along_complement(g.bracket_basis(i, j));
      std::optional<Vec> coords = a_sub.coordinates(proj);
      for (int q = 0; q < r; ++q) d.omega.comps[q].add({(uint8_t)i, (uint8_t)j}, -(*coords)[q]);
    }
  return d;
}

LieAlgebra abelianize_step(const LieAlgebra& g) {
  LieAlgebra h = shear(abelianize_data(g));
  if (h.derived_length() != g.derived_length() - 1)
    throw std::logic_error("abelianize_step: derived length did not drop by one");
  return h;
}

std::vector<LieAlgebra> abelianize_chain(const LieAlgebra& g) {
  std::vector<LieAlgebra> out;
  LieAlgebra cur = g;
  while (!cur.is_abelian()) {
    cur = abelianize_step(cur);
    out.push_back(cur);
  }
  return out;
}

}  // namespace solvshear
