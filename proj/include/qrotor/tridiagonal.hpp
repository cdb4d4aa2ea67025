#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qrotor {

/// Real symmetric tridiagonal matrix: `diag` of size n, `off` of size n-1.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
  /// Number of eigenvalues strictly below x (Sturm sequence).
  std::size_t count_below(double x) const;
};

/// The `count` lowest eigenvalues, ascending, by bisection on the Sturm count.
std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& t, std::size_t count);

/// Unit-norm eigenvector for an (accurate) eigenvalue, by inverse iteration.
std::vector<double> eigenvector(const SymmetricTridiagonal& t, double eigenvalue);

/// Solve (T - shift) x = rhs with partial pivoting; rhs is overwritten with x.
void solve_shifted(const SymmetricTridiagonal& t, double shift, std::span<double> rhs);

/// Bound states of -hbar^2/(2M) d^2/dx^2 + V(x) on (x_min, x_max) with Dirichlet walls.
struct BoundStates1D {
  std::vector<double> energies;        // J, Richardson-extrapolated, ascending
  std::vector<double> raw_fine;        // J, values on the fine grid
  std::vector<double> error_estimate;  // J, |extrapolated - fine|
  std::vector<double> grid;            // fine-grid abscissae (only when vectors requested)
  std::vector<std::vector<double>> states;  // normalized so sum(psi^2) h = 1
  double spacing = 0.0;                // fine-grid step
};

struct FiniteDifferenceOptions {
  int interior_points = 2000;  // coarse grid; the fine grid has 2n+1
  bool want_states = false;
};

BoundStates1D solve_bound_states_1d(const std::function<double(double)>& potential, double mass,
                                    double x_min, double x_max, std::size_t count,
                                    const FiniteDifferenceOptions& options = {});

}  // namespace qrotor
