#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "solvshear/exterior.hpp"
#include "solvshear/lie.hpp"

namespace solvshear {

/// Malformed input to one of the parse_ functions.
struct NotationError : std::runtime_error {
  explicit NotationError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses a coefficient expression: sums of monomials in parameters with
/// rational factors, e.g. "2a1", "a1*a2/2", "-(a_2+a_3+c/2)", "1/2".
/// Underscores in names are ignored ("a_1" == "a1").
Scalar parse_scalar(const std::string& text);

/// Parses a k-form in index shorthand on an n-dimensional space, e.g.
/// "25-36", "a_1.17", "2a.(36+45)", "1/2.57", "1234+1256". The degree is
/// inferred from the index runs unless `degree` >= 0 forces it (needed for
/// "0" and for coefficient/index disambiguation without a dot).
/// Index tuples need not be sorted ("1425" means e1^e4^e2^e5).
KForm parse_form(const std::string& text, int n, int degree = -1);

/// Parses a vector expression like "(a2+a3-a1)*e1 - e5 + 2a*e6".
Vec parse_vector(const std::string& text, int n);

/// Parses a Lie algebra from the differential shorthand "(de1,...,den)":
/// entry k lists de^k as a 2-form, and de^k = sum c e^{ij} encodes
/// [e_i,e_j] = -sum_k c e_k. Dimensions above 9 are not representable in
/// this shorthand.
LieAlgebra parse_algebra(const std::string& text);

/// Parses a vector-valued 2-form given per value component, e.g.
/// "36-25@1; -12-45@6": "F@k" assigns the 2-form F to the value direction
/// e_k (1-based ambient index). Returns the components keyed by k.
std::map<int, KForm> parse_valued_form(const std::string& text, int n, int degree = 2);

/// Parses an endomorphism given by images "1:-a1*e1; 4:a1*e4" (basis index
/// k maps to the vector expression); unlisted indices map to 0.
std::map<int, Vec> parse_endo(const std::string& text, int n);

/// Canonical compact printing (round-trips through the parsers; terms sorted
/// by index tuple, unit coefficients elided, e.g. "2a1.67+13").
std::string print_scalar(const Scalar& s);
std::string print_form(const KForm& f);
std::string print_vector(const Vec& v);
std::string print_algebra(const LieAlgebra& g);

/// Convenience: parse-and-reprint canonical form of a form/algebra string.
std::string canonical_form_string(const std::string& text, int n, int degree = -1);
std::string canonical_algebra_string(const std::string& text);

/// Exact equality of two algebra strings (parsed comparison).
bool same_algebra(const std::string& a, const std::string& b);
/// Exact equality of two form strings on dimension n.
bool same_form(const std::string& a, const std::string& b, int n, int degree = -1);

}  // namespace solvshear
