#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solvshear/exterior.hpp"
#include "solvshear/lie.hpp"
#include "solvshear/shear.hpp"

namespace solvshear {

/// Relative tolerance for numeric closedness residuals (floating point Hodge
/// duals on instantiated algebras).
inline constexpr double kTolConsistency = 1e-9;
/// Tolerance for numeric-versus-exact Hodge comparisons.
inline constexpr double kTolHodge = 1e-12;

// ---------- numeric forms ----------

/// Sparse numeric k-form, keyed by sorted index tuples.
using NumForm = std::map<Idx, double>;
/// Dense numeric matrix (row major).
using NumMat = std::vector<std::vector<double>>;

/// Exact-to-numeric conversion; throws std::invalid_argument when a
/// coefficient is symbolic.
NumForm to_numeric(const KForm& f);
double num_coeff(const NumForm& f, const Idx& sorted);
/// max_I |a_I - b_I|.
double num_max_diff(const NumForm& a, const NumForm& b);
/// max_I |a_I|.
double num_max_abs(const NumForm& a);

/// Hodge star of a numeric k-form on an n-dimensional space for a constant
/// positive definite metric, with volume sqrt(det g) e^{1..n}.
NumForm hodge_numeric(const NumForm& f, int n, int k, const NumMat& metric);

/// Chevalley-Eilenberg differential of a numeric k-form over an algebra with
/// constant structure coefficients.
NumForm d_numeric(const LieAlgebra& g, const NumForm& f, int k);

// ---------- the metric of a 3-form in dimension 7 ----------

/// Symmetric bilinear form B of a 3-form phi on a 7-dimensional space:
/// B_ij = 1/6 * [coefficient of e^{1..7} in (e_i .| phi) ^ (e_j .| phi) ^ phi].
Mat g2_bilinear(const KForm& phi);

struct G2Metric {
  Mat b;                        // exact bilinear form B
  bool exact_identity = false;  // B == id, so the metric is exactly id
  NumMat value;                 // numeric metric det(B)^{-1/9} B
};

/// Metric induced by a positive 3-form. Throws std::domain_error when the
/// form is not positive (in particular when phi == 0), and
/// std::invalid_argument when normalisation would need symbolic roots
/// (B symbolic and not the identity).
G2Metric g2_metric(const KForm& phi);

// ---------- calibration tests ----------

/// d phi == 0, exact (works with symbolic coefficients).
bool is_calibrated(const LieAlgebra& g, const KForm& phi);

/// d(star phi) == 0. Decided exactly whenever the metric of phi is exactly
/// the identity; otherwise computed numerically (this requires constant
/// structure coefficients) with the given tolerance on the residual.
bool is_cocalibrated(const LieAlgebra& g, const KForm& phi, double tol = kTolConsistency);

/// Max coefficient of d(star phi) computed in floating point; used to
/// cross-check the exact path. Requires constant g and phi.
double cocalibration_residual(const LieAlgebra& g, const KForm& phi);

// ---------- codimension-one reduction of a G2 form ----------

/// The U(3)-type data of a G2 form along the axis direction:
///   sigma = X .| phi,  rho = phi - sigma ^ alpha  (so phi = sigma ^ alpha + rho),
///   J on the hyperplane defined by sigma(x, y) = <x, J y>,
///   rho_hat = rho(J., ., .) (independent of the slot J is applied to),
/// with the Hodge identity star phi = 1/2 sigma^2 + rho_hat ^ alpha.
struct SU3Split {
  int axis = 6;  // 0-based index of X
  KForm alpha;   // e^{axis}
  KForm sigma;   // 2-form without axis components
  KForm rho;     // 3-form without axis components
  KForm rho_hat;
  Mat j;         // n x n, axis row and column zero
};

/// Requires the metric of phi to be exactly the identity; verifies that
/// J^2 = -1 on the hyperplane, that rho_hat is slot independent and that the
/// Hodge identity above holds, throwing std::domain_error otherwise.
SU3Split su3_split(const KForm& phi, int axis = 6);

// ---------- type decomposition of 2-forms ----------

/// beta(J., J.).
KForm j_pullback(const KForm& beta, const Mat& j);
bool is_j_invariant(const KForm& beta, const Mat& j);
bool is_j_anti_invariant(const KForm& beta, const Mat& j);

/// beta ^ sigma^{m-1} == 0 for a 2-form beta, where 2m = rank sigma: exactly
/// the forms with no sigma-component (primitive (1,1) plus anti-invariant).
bool is_sigma_trace_free(const KForm& beta, const KForm& sigma, int m);

/// beta = t sigma + primitive (1,1) part + anti-invariant part, for a
/// compatible sigma of rank 2m.
struct TypeSplit {
  Scalar t;
  KForm sigma_part;  // t * sigma
  KForm primitive11;
  KForm anti;
};
TypeSplit type_split(const KForm& beta, const KForm& sigma, const Mat& j, int m);

/// endo.form == 0: membership in the infinitesimal stabiliser of the form
/// (symplectic type for 2-forms, special linear type for 3-forms).
bool preserves_form(const Mat& endo, const KForm& form);
bool commutes(const Mat& a, const Mat& b);

// ---------- almost abelian frames ----------

/// Frame data of an algebra whose first n-1 basis vectors span an abelian
/// ideal u, with distinguished complement X = e_n and f = ad(X)|_u.
struct AAFrame {
  int n = 0;
  int axis = 0;  // 0-based index of X
  Mat f;         // n x n, axis row and column zero
};
/// Throws std::domain_error when u is not an abelian ideal.
AAFrame aa_frame(const LieAlgebra& g);

/// Shear data in the almost abelian frame: the shear subspace is spanned by
/// the given 1-based basis directions inside u, xi is the inclusion, a = id,
/// omega = omega0 + alpha ^ nu, eta = alpha (x) (f + nu)|_a. omega0 is given
/// per shear direction (component q belongs to a_indices[q]) and must be
/// supported on u; nu is an n x n matrix mapping u into the shear subspace
/// with nu(X) = 0.
ShearData aa_build_data(const LieAlgebra& g, const std::vector<int>& a_indices,
                        const VForm& omega0, const Mat& nu);

/// The two contraction conditions under which closedness of psi transfers to
/// the sheared algebra. With psi = tau + chi ^ alpha split along the axis
/// (chi = (-1)^{r-1} X .| psi, r = deg psi) they read
///   kappa(tau ^ omega0) == 0,
///   kappa(chi ^ omega0) + (-1)^{r-1} nu . tau == 0.
/// The directly computed differentials are reported alongside.
struct ClosednessCheck {
  bool first = false;
  bool second = false;
  bool g_closed = false;          // d psi == 0 on the base
  bool h_closed = false;          // d psi == 0 on the shear (direct)
  bool transfer_trivial = false;  // d_h psi == d_g psi (direct)
  [[nodiscard]] bool both() const { return first && second; }
};
ClosednessCheck aa_closedness_check(const ShearData& data, const KForm& psi);

// ---------- shear families preserving a calibration ----------

/// An affine family nu = particular + span(freedom) of shear maps, together
/// with the structural conditions that must hold for the family to consist
/// of calibration-preserving shears.
struct NuFamily {
  ValidationReport conditions;
  std::string case_label;
  Mat nu;                    // particular member (n x n)
  std::vector<Mat> freedom;  // basis of the homogeneous freedom
  [[nodiscard]] bool ok() const { return conditions.ok(); }
  /// candidate == nu + combination of freedom elements, exactly.
  [[nodiscard]] bool contains(const Mat& candidate) const;
};

/// Family of maps nu for which shearing (g, a, omega0) in the almost abelian
/// frame preserves d(star phi) = 0. Cases: "a.i"/"a.ii" (J-invariant omega0,
/// shear subspace of dimension <= 2, image of omega0 of dimension 1 resp. 2)
/// and "b"/"c" (4-dimensional shear subspace with J(im omega0) orthogonal to
/// resp. inside it). Inputs outside these shapes are refused via a failed
/// required condition.
NuFamily cocalibrated_family(const LieAlgebra& g, const KForm& phi,
                             const std::vector<int>& a_indices, const VForm& omega0);

/// Family of maps nu for which shearing preserves d phi = 0. Cases:
/// "a.i"/"a.ii" (shear subspace = ker omega0, J-invariant of dimension 2)
/// and "b"/"c" (dimension 4, J-invariant resp. not).
NuFamily calibrated_family(const LieAlgebra& g, const KForm& phi,
                           const std::vector<int>& a_indices, const VForm& omega0);

// ---------- calibration test for Heisenberg-type codimension-one ideals ----------

/// Structural test for d phi == 0 on a 7-dimensional algebra whose first six
/// basis vectors span a nilpotent ideal isomorphic to the direct sum of the
/// 3-dimensional Heisenberg algebra and a 3-dimensional abelian factor, with
/// X = e_7 orthogonal to it. The two cases depend on whether the centre of
/// the ideal is J-invariant.
struct H3R3Report {
  ValidationReport conditions;
  std::string case_label;
  [[nodiscard]] bool ok() const { return conditions.ok(); }
};
H3R3Report check_calibrated_h3r3(const LieAlgebra& g, const KForm& phi);

// ---------- almost semi-Kahler checks ----------

/// d(sigma^{m-1}) == 0 for an almost abelian algebra of dimension 2m with
/// compatible sigma, together with the equivalent frame condition
/// f(J X) = tr(f) J X; `agree` records that the two tests coincide.
struct SemiKahlerReport {
  bool closed = false;
  bool frame_condition = false;
  bool agree = false;
  Mat j;   // almost complex structure of sigma (full space)
  Vec jx;  // J X
};
/// Throws std::domain_error when g is not in the almost abelian frame or
/// sigma is not compatible (J^2 != -1).
SemiKahlerReport semi_kahler_check(const LieAlgebra& g, const KForm& sigma);

/// Conditions under which a shear of an almost semi-Kahler almost abelian
/// algebra stays almost semi-Kahler, for data whose omega0 = tilde (x) JX
/// has image spanned by JX and kernel equal to the shear subspace:
///   f . tilde = lambda tilde,
///   nu(JX) = -(lambda + tr f) JX,
///   tilde - nu . sigma1 supported away from X, JX with
///   (tilde - nu . sigma1) ^ sigma1 == 0,
/// where sigma = (JX)^flat ^ alpha + sigma1. The report carries the directly
/// computed d(sigma^{m-1}) on the shear and an agreement cross-check against
/// the contraction conditions.
struct SemiKahlerShearReport {
  ValidationReport conditions;
  Scalar lambda;
  bool sheared_closed = false;
  [[nodiscard]] bool ok() const { return conditions.ok(); }
};
SemiKahlerShearReport semi_kahler_shear_conditions(const ShearData& data, const KForm& sigma);

// ---------- standard forms ----------

/// The standard positive 3-form with identity metric used by the calibrated
/// examples, and its Hodge dual.
KForm standard_phi_calibrated();
KForm standard_star_phi_calibrated();
/// The standard positive 3-form used by the cocalibrated examples, and its
/// Hodge dual.
KForm standard_phi_cocalibrated();
KForm standard_star_phi_cocalibrated();
/// The standard almost Hermitian 2-form in dimension 6.
KForm standard_sigma_6d();

}  // namespace solvshear
