#include "umb/jetlin.hpp"

#include <cmath>
#include <utility>

namespace umb {

JetMat jet_mat_inverse(const JetMat& a) {
  const int n = a.rows;
  JetMat work = a;
  const Jet zero = Jet::constant_like(a.at(0, 0), 0.0);
  JetMat inv(n, n, zero);
  for (int i = 0; i < n; ++i) inv.at(i, i) = Jet::constant_like(a.at(0, 0), 1.0);

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(work.at(col, col).value());
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(work.at(r, col).value());
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-14) throw DomainError("singular metric matrix");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(work.at(pivot, c), work.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    const Jet diag = work.at(col, col);
    for (int c = 0; c < n; ++c) {
      work.at(col, c) = work.at(col, c) / diag;
      inv.at(col, c) = inv.at(col, c) / diag;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = work.at(r, col);
      for (int c = 0; c < n; ++c) {
        work.at(r, c) = work.at(r, c) - f * work.at(col, c);
        inv.at(r, c) = inv.at(r, c) - f * inv.at(col, c);
      }
    }
  }
  return inv;
}

Jet jet_mat_det(const JetMat& a) {
  const int n = a.rows;
  JetMat work = a;
  Jet det = Jet::constant_like(a.at(0, 0), 1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(work.at(col, col).value());
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(work.at(r, col).value());
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return Jet::constant_like(a.at(0, 0), 0.0);
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(work.at(pivot, c), work.at(col, c));
      det = -det;
    }
    det = det * work.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      const Jet f = work.at(r, col) / work.at(col, col);
      for (int c = col; c < n; ++c) work.at(r, c) = work.at(r, c) - f * work.at(col, c);
    }
  }
  return det;
}

}  // namespace umb
