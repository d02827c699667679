#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace richards {

/// Thomas algorithm with reusable workspace. No pivoting: every system
/// assembled by the solvers here is strictly diagonally dominant.
class TridiagonalSolver {
 public:
  explicit TridiagonalSolver(int n) : cp_(n), dp_(n) {}

  /// sub has n-1 entries (row i couples to i-1 via sub[i-1]), diag n,
  /// sup n-1, rhs n. x may alias rhs.
  void solve(std::span<const double> sub, std::span<const double> diag,
             std::span<const double> sup, std::span<const double> rhs,
             std::span<double> x) {
    const int n = static_cast<int>(diag.size());
    assert(static_cast<int>(cp_.size()) >= n);

    cp_[0] = sup.empty() ? 0.0 : sup[0] / diag[0];
    dp_[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
      const double denom = diag[i] - sub[i - 1] * cp_[i - 1];
      cp_[i] = (i < n - 1) ? sup[i] / denom : 0.0;
      dp_[i] = (rhs[i] - sub[i - 1] * dp_[i - 1]) / denom;
    }
    x[n - 1] = dp_[n - 1];
    for (int i = n - 2; i >= 0; --i) {
      x[i] = dp_[i] - cp_[i] * x[i + 1];
    }
  }

 private:
  std::vector<double> cp_, dp_;
};

}  // namespace richards
