#pragma once

#include <span>
#include <vector>

#include "umb/jet.hpp"

namespace umb {

/// Small dense matrix with Jet entries (row-major). Used for metric tensors
/// and Jacobians evaluated as jets; dimensions stay below ~10 throughout.
struct JetMat {
  int rows = 0;
  int cols = 0;
  std::vector<Jet> e;

  JetMat() = default;
  JetMat(int r, int c, const Jet& fill) : rows(r), cols(c), e(static_cast<std::size_t>(r * c), fill) {}

  const Jet& at(int i, int j) const { return e[static_cast<std::size_t>(i * cols + j)]; }
  Jet& at(int i, int j) { return e[static_cast<std::size_t>(i * cols + j)]; }
};

/// Gauss-Jordan inverse with pivoting on jet values. Throws DomainError when
/// the value-level matrix is singular.
JetMat jet_mat_inverse(const JetMat& a);

/// Determinant via LU elimination on jet values.
Jet jet_mat_det(const JetMat& a);

}  // namespace umb
