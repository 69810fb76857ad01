#pragma once

#include <string>
#include <vector>

#include "solvshear/lie.hpp"

namespace solvshear {

/// Input data for shearing a Lie algebra g along an auxiliary abelian
/// parameter space a_G of dimension r:
///   xi    : a_G -> g, injective (the directions to shear),
///   a     : a_G -> a_G, invertible,
///   omega : 2-form on g with values in a_G,
///   eta   : flat connection form, eta(x) in End(a_G).
/// The derived connection gamma(x) = a^-1 (xi .| omega)(x) + a^-1 eta(x) a,
/// with ((xi .| omega)(x)) Z = omega(xi Z, x).
struct ShearData {
  LieAlgebra g;
  int r = 0;
  Mat xi;        // n x r
  Mat a;         // r x r
  VForm omega;   // degree 2, r value components
  EndoForm eta;  // eta[i] = eta(e_i), each r x r

  [[nodiscard]] EndoForm gamma() const;
  [[nodiscard]] ShearData instantiate(const std::map<int, Rational>& values) const;
};

/// Outcome of checking one defining condition of shear data.
struct Condition {
  std::string name;
  bool ok = false;
  bool required = true;  // informational conditions do not affect validity
  std::string detail;
};

struct ValidationReport {
  std::vector<Condition> items;
  /// All required conditions hold.
  [[nodiscard]] bool ok() const;
  [[nodiscard]] const Condition* find(const std::string& name) const;
};

/// Checks all defining conditions:
///   xi_injective, a_invertible, jacobi,
///   xi_torsion_free    [x_Z, x_W] = xi(gamma(x_Z) W - gamma(x_W) Z) for x_Z = xi Z,
///   omega_pullback_zero    omega(xi Z, xi W) = 0,
///   xi_equivariant     [xi Z, x] = -xi(gamma(x) Z),
///   eta_flat, gamma_flat,
///   omega_covariant_closed   d omega + eta ^ omega = 0,
/// plus the informational eta_xi_zero (eta(xi Z) = 0, implied by the others).
ValidationReport validate(const ShearData& data);

/// The extension algebra p = g + a_P with
/// [x,y]_p = [x,y]_g - omega(x,y), [x,Z]_p = eta(x) Z, a_P abelian.
LieAlgebra extension(const ShearData& data);

/// The shear correction F = xi a^-1 omega, a g-valued 2-form.
VForm shear_correction(const ShearData& data);

/// The sheared algebra on the same coordinates as g:
/// [x,y]_h = [x,y]_g + (xi a^-1) omega(x,y).
LieAlgebra shear(const ShearData& data, bool check_paths = false);

/// The sheared algebra built the long way: quotient of the extension by the
/// graph of (xi, a), pulled back along x -> class of (x, 0). Used to
/// cross-check `shear`.
LieAlgebra shear_via_quotient(const ShearData& data);

/// d of a retagged form computed from g-side data:
/// d_h b = d_g b - sum_q (v_q .| b) ^ omega^q with v_q = (xi a^-1) f_q.
KForm transfer_d(const ShearData& data, const KForm& b);

/// Difference of Nijenhuis tensors N_{J,h} - N_{J,g} for a retagged
/// endomorphism J; equals F(J.,J.) - J F(J.,.) - J F(.,J.) - F with
/// F = xi a^-1 omega, for any linear J.
VForm nijenhuis_residual(const ShearData& data, const Mat& J);

/// Transfer of an almost complex structure across the shear. The structure
/// is retagged unchanged (j_h = J); its Nijenhuis tensor on the shear is
/// predicted by nijenhuis_g plus the difference formula above, and residual
/// holds that prediction minus the directly computed nijenhuis_h — exactly
/// zero whenever both sides refer to the same shear. Throws
/// std::domain_error unless J^2 == -id.
struct AcsTransfer {
  Mat j_h;
  VForm nijenhuis_g;
  VForm nijenhuis_h;
  VForm residual;
};
AcsTransfer transfer_acs(const ShearData& data, const Mat& J);

/// Shear data on h = shear(data) that shears back to g:
/// xi' = -xi a^-1, a' = a^-1, omega' = a^-1 omega, eta' = gamma.
ShearData invert(const ShearData& data);

/// Shear data whose shear abelianises one derived-series step: a_G = last
/// nonzero derived series term, xi = inclusion, a = id, eta = 0 and
/// omega(x,y) = -proj_a [x,y] (projection along the pivot complement).
/// Requires g solvable and not abelian.
ShearData abelianize_data(const LieAlgebra& g);

/// shear(abelianize_data(g)); drops the derived length by exactly one.
LieAlgebra abelianize_step(const LieAlgebra& g);

/// Successive abelianisation steps down to an abelian algebra; returns the
/// intermediate results including the final abelian one (derived_length - 1
/// entries).
std::vector<LieAlgebra> abelianize_chain(const LieAlgebra& g);

}  // namespace solvshear
