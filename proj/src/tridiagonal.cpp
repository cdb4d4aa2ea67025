#include "qrotor/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qrotor/errors.hpp"
#include "qrotor/units.hpp"

namespace qrotor {

std::size_t SymmetricTridiagonal::count_below(double x) const {
  const std::size_t n = diag.size();
  std::size_t negatives = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++negatives;
  }
  return negatives;
}

std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& t, std::size_t count) {
  const std::size_t n = t.size();
  if (n == 0 || count > n) throw InvalidInput("lowest_eigenvalues: bad count");
  // Gershgorin bounds.
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double abs_tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;

  std::vector<double> values(count);
  double floor = lo;
  for (std::size_t k = 0; k < count; ++k) {
    double a = floor;
    double b = hi;
    for (int it = 0; it < 400 && b - a > abs_tol; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (t.count_below(mid) > k)
        b = mid;
      else
        a = mid;
    }
    values[k] = 0.5 * (a + b);
    floor = a;
  }
  return values;
}

void solve_shifted(const SymmetricTridiagonal& t, double shift, std::span<double> rhs) {
  // Gaussian elimination with partial pivoting on a tridiagonal system (dgtsv layout).
  const std::size_t n = t.size();
  std::vector<double> dl(t.off), d(t.diag), du(t.off), du2(n, 0.0);
  for (auto& v : d) v -= shift;
  const double tiny = std::numeric_limits<double>::epsilon() *
                      std::max(1.0, std::abs(shift) + std::abs(t.diag.empty() ? 0.0 : t.diag[0]));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      rhs[i + 1] -= f * rhs[i];
      dl[i] = 0.0;
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      const double tmp = d[i + 1];
      d[i + 1] = du[i] - f * tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      du[i] = tmp;
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= f * rhs[i];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  rhs[n - 1] /= d[n - 1];
  if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  for (std::size_t ii = n; ii-- > 2;) {
    const std::size_t i = ii - 2;
    rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
  }
}

std::vector<double> eigenvector(const SymmetricTridiagonal& t, double eigenvalue) {
  const std::size_t n = t.size();
  std::vector<double> x(n);
  // Deterministic, not orthogonal to any low mode.
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i));
  const double nudge = 1e-10 * (std::abs(eigenvalue) + 1e-300);
  for (int it = 0; it < 3; ++it) {
    solve_shifted(t, eigenvalue + nudge, x);
    const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    for (auto& v : x) v /= norm;
  }
  // Sign convention: first significant lobe positive.
  const auto big = std::find_if(x.begin(), x.end(), [](double v) { return std::abs(v) > 1e-6; });
  if (big != x.end() && *big < 0.0)
    for (auto& v : x) v = -v;
  return x;
}

namespace {

struct GridSolve {
  std::vector<double> energies;
  SymmetricTridiagonal matrix;
  double h = 0.0;
  double energy_unit = 0.0;
};

GridSolve solve_on_grid(const std::function<double(double)>& potential, double mass, double x_min,
                        double x_max, std::size_t interior, std::size_t count) {
  GridSolve g;
  g.h = (x_max - x_min) / static_cast<double>(interior + 1);
  const double hbar = PhysicalConstants::hbar;
  // Work in units of the hopping energy hbar^2 / (2 M h^2) so matrix entries are O(1).
  g.energy_unit = hbar * hbar / (2.0 * mass * g.h * g.h);
  g.matrix.diag.resize(interior);
  g.matrix.off.assign(interior - 1, -1.0);
  for (std::size_t i = 0; i < interior; ++i) {
    const double x = x_min + g.h * static_cast<double>(i + 1);
    g.matrix.diag[i] = 2.0 + potential(x) / g.energy_unit;
  }
  g.energies = lowest_eigenvalues(g.matrix, count);
  for (auto& e : g.energies) e *= g.energy_unit;
  return g;
}

}  // namespace

BoundStates1D solve_bound_states_1d(const std::function<double(double)>& potential, double mass,
                                    double x_min, double x_max, std::size_t count,
                                    const FiniteDifferenceOptions& options) {
  if (!(x_max > x_min)) throw InvalidInput("solve_bound_states_1d: empty interval");
  if (!(mass > 0.0)) throw InvalidInput("solve_bound_states_1d: mass must be > 0");
  if (options.interior_points < 16) throw InvalidInput("solve_bound_states_1d: grid too coarse");
  if (count == 0) return {};
  const auto n = static_cast<std::size_t>(options.interior_points);
  if (count > n / 4) throw InvalidInput("solve_bound_states_1d: too many states for the grid");

  const GridSolve coarse = solve_on_grid(potential, mass, x_min, x_max, n, count);
  const GridSolve fine = solve_on_grid(potential, mass, x_min, x_max, 2 * n + 1, count);

  BoundStates1D out;
  out.spacing = fine.h;
  out.raw_fine = fine.energies;
  out.energies.resize(count);
  out.error_estimate.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.energies[k] = (4.0 * fine.energies[k] - coarse.energies[k]) / 3.0;
    out.error_estimate[k] = std::abs(out.energies[k] - fine.energies[k]);
  }

  const double wall = std::min(potential(x_min), potential(x_max));
  if (out.energies.back() >= wall) {
    throw ConvergenceError(
        "bound state above the box-edge potential; enlarge the box",
        "E_max=" + std::to_string(out.energies.back()) + " J, V_edge=" + std::to_string(wall) + " J");
  }

  if (options.want_states) {
    const std::size_t m = fine.matrix.size();
    out.grid.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.grid[i] = x_min + fine.h * static_cast<double>(i + 1);
    out.states.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      auto v = eigenvector(fine.matrix, fine.energies[k] / fine.energy_unit);
      const double norm = 1.0 / std::sqrt(fine.h);
      for (auto& x : v) x *= norm;
      out.states.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace qrotor
