#pragma once

#include <string>
#include <vector>

#include "shear.hpp"

namespace solvshear {

/// A worked example frozen into the library: a base algebra together with
/// shear data in the almost abelian frame (or an abelianisation chain) and
/// the expected outcome, all in structure-constant notation.
struct BuiltinExample {
  std::string id;
  std::string kind;  // "cocalibrated", "calibrated", "semi_kahler", "abelianize"
  std::string base;
  std::vector<int> a_indices;      // 1-based shear directions (empty for chains)
  std::string omega0;              // "form@direction;..."
  std::string nu;                  // "direction:vector;..."
  std::string expected;            // sheared algebra (empty for chains)
  std::vector<std::string> chain;  // expected abelianisation chain
};

/// The frozen registry of worked examples.
const std::vector<BuiltinExample>& builtin_examples();

/// Looks up an example by id; nullptr when absent.
const BuiltinExample* find_builtin(const std::string& id);

/// Shear data for an example assembled from its notation fields. Throws
/// std::invalid_argument for abelianisation examples (no frame data).
ShearData builtin_data(const BuiltinExample& ex);

/// Outcome of re-deriving one example; every named step must pass.
struct ReproduceResult {
  std::string id;
  std::string produced;  // printed shear (or chain, ";"-separated)
  ValidationReport steps;
  [[nodiscard]] bool ok() const { return steps.ok(); }
};

/// Re-derives an example end to end: validates the data, shears along both
/// construction paths, compares the result with the expected algebra, checks
/// the structure the example is about (closedness of the Hodge dual, of the
/// defining 3-form, of sigma^2, or the abelianisation chain) and closes the
/// loop through shear inversion.
ReproduceResult reproduce(const BuiltinExample& ex);

/// Runs every registry entry.
std::vector<ReproduceResult> reproduce_all();

}  // namespace solvshear
