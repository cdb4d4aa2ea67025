#include "qrotor/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "qrotor/errors.hpp"
#include "qrotor/parallel.hpp"

namespace qrotor {

ShiftModel::Kind ShiftModel::parse(const std::string& name) {
  if (name == "none") return Kind::none;
  if (name == "as_printed") return Kind::as_printed;
  if (name == "physical") return Kind::physical;
  if (name == "quadratic") return Kind::quadratic;
  throw InvalidInput("unknown shift model '" + name + "'");
}

std::string ShiftModel::name(Kind kind) {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::as_printed: return "as_printed";
    case Kind::physical: return "physical";
    case Kind::quadratic: return "quadratic";
  }
  return "none";
}

double ring_rotational_frequency(const BeamConfig& beam, const AtomSpecies& species, double z) {
  const double r = beam.ring_radius(z);
  return PhysicalConstants::hbar / (2.0 * species.mass * r * r);
}

std::vector<double> ring_detuning_shifts(const ShiftModel& model, const BeamConfig& beam,
                                         const AtomSpecies& species, int kick_L, int j_max) {
  if (j_max < 0) throw InvalidInput("ring_detuning_shifts: j_max must be >= 0");
  if (model.kind == ShiftModel::Kind::none || model.kind == ShiftModel::Kind::quadratic)
    return ring_detuning_shifts(model, j_max);
  beam.validate();
  species.validate();
  const double k = beam.wavenumber();
  const double four_l2 = 4.0 * kick_L * kick_L;
  const double omega_ref = ring_rotational_frequency(beam, species, beam.phase_z0);
  std::vector<double> shifts;
  shifts.reserve(static_cast<std::size_t>(2 * j_max + 1));
  for (int j = -j_max; j <= j_max; ++j) {
    const double z_j = kPi * j / k + beam.phase_z0;
    double s = four_l2 * (omega_ref - ring_rotational_frequency(beam, species, z_j));
    if (model.kind == ShiftModel::Kind::as_printed) s *= static_cast<double>(j) * j;
    shifts.push_back(s);
  }
  return shifts;
}

std::vector<double> ring_detuning_shifts(const ShiftModel& model, int j_max) {
  if (j_max < 0) throw InvalidInput("ring_detuning_shifts: j_max must be >= 0");
  if (model.kind == ShiftModel::Kind::as_printed || model.kind == ShiftModel::Kind::physical)
    throw InvalidInput("ring_detuning_shifts: this shift model needs the trap beam");
  if (model.scale_s < 0.0) throw InvalidInput("shift model scale_s must be >= 0");
  std::vector<double> shifts;
  shifts.reserve(static_cast<std::size_t>(2 * j_max + 1));
  for (int j = -j_max; j <= j_max; ++j)
    shifts.push_back(model.kind == ShiftModel::Kind::quadratic ? model.scale_s * j * j : 0.0);
  return shifts;
}

double ensemble_probability(const std::vector<double>& shifts, double delta, double Omega_R,
                            double tau) {
  if (shifts.empty()) throw InvalidInput("ensemble_probability: no rings");
  double sum = 0.0;
  for (double s : shifts) sum += transition_probability_closed_form(delta + s, Omega_R, tau);
  return sum / static_cast<double>(shifts.size());
}

Lineshape ensemble_lineshape(const std::vector<double>& shifts, double Omega_R, double tau,
                             const std::vector<double>& delta_grid, unsigned parallelism) {
  if (shifts.size() % 2 != 1) throw InvalidInput("ensemble_lineshape: need 2 j_max + 1 rings");
  for (std::size_t i = 1; i < delta_grid.size(); ++i)
    if (!(delta_grid[i] > delta_grid[i - 1]))
      throw InvalidInput("ensemble_lineshape: delta grid must be strictly increasing");
  Lineshape ls;
  ls.delta_grid = delta_grid;
  ls.probability.assign(delta_grid.size(), 0.0);
  ls.Omega_R = Omega_R;
  ls.tau = tau;
  ls.j_max = static_cast<int>(shifts.size() / 2);
  parallel_for(delta_grid.size(), parallelism, [&](std::size_t i) {
    ls.probability[i] = ensemble_probability(shifts, delta_grid[i], Omega_R, tau);
  });
  return ls;
}

Lineshape ensemble_lineshape(const BeamConfig& beam, const AtomSpecies& species,
                             const RamanConfig& cfg, int j_max, const ShiftModel& model,
                             const std::vector<double>& delta_grid, unsigned parallelism) {
  const RamanCoupling c = effective_coupling(cfg, beam, species);
  const auto shifts = ring_detuning_shifts(model, beam, species, cfg.kick_oam_L, j_max);
  return ensemble_lineshape(shifts, c.Omega_R, cfg.pulse_duration_tau, delta_grid, parallelism);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw InvalidInput("linear_grid: need n >= 2 and hi > lo");
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

Peak locate_peak(const std::vector<double>& shifts, double Omega_R, double tau, double lo,
                 double hi, std::size_t scan_points) {
  const auto grid = linear_grid(lo, hi, scan_points);
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = ensemble_probability(shifts, grid[i], Omega_R, tau);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];
  const auto neg = [&](double d) { return -ensemble_probability(shifts, d, Omega_R, tau); };
  const auto [x, fx] = boost::math::tools::brent_find_minima(neg, a, b, 52);
  if (-fx < best_p) return {grid[best], best_p};
  return {x, -fx};
}

double full_width_half_maximum(const std::function<double(double)>& f, double peak, double step) {
  if (!(step > 0.0)) throw InvalidInput("full_width_half_maximum: step must be > 0");
  const double half = 0.5 * f(peak);
  const auto g = [&](double x) { return f(x) - half; };
  const auto edge = [&](double dir) {
    double inner = peak;
    double outer = peak + dir * step;
    for (int n = 0; g(outer) > 0.0; ++n) {
      if (n > 100000) throw ConvergenceError("full_width_half_maximum: no half-maximum crossing", "");
      inner = outer;
      outer += dir * step;
    }
    std::uintmax_t iters = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto [a, b] = dir > 0 ? boost::math::tools::toms748_solve(g, inner, outer, tol, iters)
                                : boost::math::tools::toms748_solve(g, outer, inner, tol, iters);
    return 0.5 * (a + b);
  };
  return edge(+1.0) - edge(-1.0);
}

QuadraticCalibration calibrate_quadratic_scale(double Omega_R, double tau, int j_max,
                                               double target_delta_max) {
  if (!(Omega_R > 0.0)) throw InvalidInput("calibrate_quadratic_scale: Omega_R must be > 0");
  if (j_max < 1) throw InvalidInput("calibrate_quadratic_scale: j_max must be >= 1");
  const double j2 = static_cast<double>(j_max) * j_max;
  const auto peak_for = [&](double s) {
    const auto shifts = ring_detuning_shifts({ShiftModel::Kind::quadratic, s}, j_max);
    return locate_peak(shifts, Omega_R, tau, -s * j2 - 4.0 * Omega_R, 4.0 * Omega_R, 2001);
  };
  const auto miss = [&](double log_s) { return peak_for(std::exp(log_s)).delta_max - target_delta_max; };

  // Total spread s j_max^2 from 1e-3 to 1e2 Omega_R.
  const double log_lo = std::log(1e-3 * Omega_R / j2);
  const double log_hi = std::log(1e2 * Omega_R / j2);
  const int n = 160;
  std::vector<double> xs(n + 1), ys(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = log_lo + (log_hi - log_lo) * i / n;
    ys[i] = miss(xs[i]);
  }

  QuadraticCalibration out;
  for (int i = 0; i < n; ++i) {
    if ((ys[i] <= 0.0) != (ys[i + 1] <= 0.0)) {
      std::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(
          miss, xs[i], xs[i + 1], ys[i], ys[i + 1], boost::math::tools::eps_tolerance<double>(40), iters);
      out.scale_s = std::exp(0.5 * (a + b));
      out.peak = peak_for(out.scale_s);
      out.exact = std::abs(out.peak.delta_max - target_delta_max) <= 1e-6 * Omega_R;
      if (out.exact) return out;
    }
  }

  // Target out of reach: minimize the miss around the closest scan point.
  const auto best = static_cast<int>(std::min_element(ys.begin(), ys.end(), [](double a, double b) {
                                       return std::abs(a) < std::abs(b);
                                     }) - ys.begin());
  const auto abs_miss = [&](double x) { return std::abs(miss(x)); };
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      abs_miss, xs[std::max(best - 1, 0)], xs[std::min(best + 1, n)], 40);
  (void)fx;
  out.scale_s = std::exp(x);
  out.peak = peak_for(out.scale_s);
  out.exact = std::abs(out.peak.delta_max - target_delta_max) <= 1e-6 * Omega_R;
  return out;
}

namespace {

struct LineshapeResidual : Eigen::DenseFunctor<double> {
  LineshapeResidual(const Lineshape& ls, FitModel model)
      : Eigen::DenseFunctor<double>(3, static_cast<int>(ls.delta_grid.size())), ls_(ls), model_(model) {}

  // x = (A, delta_0, W); f = A R sin^2(theta), R = W^2/q^2, q = sqrt(W^2 + (delta - delta_0)^2).
  int operator()(const InputType& x, ValueType& fvec) const {
    for (Eigen::Index i = 0; i < values(); ++i) {
      const auto t = terms(x, ls_.delta_grid[static_cast<std::size_t>(i)]);
      fvec(i) = x(0) * t.r * t.s2 - ls_.probability[static_cast<std::size_t>(i)];
    }
    return 0;
  }

  int df(const InputType& x, JacobianType& fjac) const {
    const double a = x(0);
    const double w = x(2);
    for (Eigen::Index i = 0; i < values(); ++i) {
      const double d = ls_.delta_grid[static_cast<std::size_t>(i)] - x(1);
      const auto t = terms(x, ls_.delta_grid[static_cast<std::size_t>(i)]);
      const double q2 = t.q * t.q;
      double theta_x, theta_w;
      if (model_ == FitModel::PiPulse) {
        theta_x = kPi * d / (2.0 * w * t.q);
        theta_w = -kPi * d * d / (2.0 * t.q * w * w);
      } else {
        theta_x = ls_.tau * d / (2.0 * t.q);
        theta_w = ls_.tau * w / (2.0 * t.q);
      }
      const double r_x = -2.0 * w * w * d / (q2 * q2);
      const double r_w = 2.0 * w * d * d / (q2 * q2);
      fjac(i, 0) = t.r * t.s2;
      fjac(i, 1) = -a * (r_x * t.s2 + t.r * t.sin2 * theta_x);
      fjac(i, 2) = a * (r_w * t.s2 + t.r * t.sin2 * theta_w);
    }
    return 0;
  }

 private:
  struct Terms {
    double q, r, s2, sin2;
  };
  Terms terms(const InputType& x, double delta) const {
    const double w = x(2);
    const double d = delta - x(1);
    const double q = std::sqrt(w * w + d * d);
    const double theta = model_ == FitModel::PiPulse ? kPi * q / (2.0 * w) : 0.5 * ls_.tau * q;
    const double s = std::sin(theta);
    return {q, w * w / (q * q), s * s, std::sin(2.0 * theta)};
  }

  const Lineshape& ls_;
  FitModel model_;
};

bool converged(Eigen::LevenbergMarquardtSpace::Status status) {
  using S = Eigen::LevenbergMarquardtSpace::Status;
  switch (status) {
    case S::RelativeReductionTooSmall:
    case S::RelativeErrorTooSmall:
    case S::RelativeErrorAndReductionTooSmall:
    case S::CosinusTooSmall:
    case S::FtolTooSmall:
    case S::XtolTooSmall:
    case S::GtolTooSmall:
      return true;
    default:
      return false;
  }
}

}  // namespace

FitResult fit_lineshape(const Lineshape& ls, FitModel model) {
  const std::size_t n = ls.delta_grid.size();
  if (n < 50 || ls.probability.size() != n) throw InvalidInput("fit_lineshape: need >= 50 grid points");
  if (!(ls.Omega_R > 0.0)) throw InvalidInput("fit_lineshape: Omega_R must be > 0");
  if (model == FitModel::FixedDuration && !(ls.tau > 0.0))
    throw InvalidInput("fit_lineshape: FixedDuration needs tau > 0");
  const auto peak_it = std::max_element(ls.probability.begin(), ls.probability.end());
  const double peak_delta = ls.delta_grid[static_cast<std::size_t>(peak_it - ls.probability.begin())];
  if (ls.delta_grid.front() > peak_delta - 4.0 * ls.Omega_R ||
      ls.delta_grid.back() < peak_delta + 4.0 * ls.Omega_R)
    throw InvalidInput("fit_lineshape: grid must span +-4 Omega_R around the peak");

  LineshapeResidual residual(ls, model);
  FitResult best;
  best.rms_residual = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (double start : {1.0, 1.5, 2.0}) {
    Eigen::VectorXd x(3);
    x << *peak_it, peak_delta, start * ls.Omega_R;
    Eigen::LevenbergMarquardt<LineshapeResidual> lm(residual);
    lm.setXtol(1e-14);
    lm.setFtol(1e-14);
    lm.setMaxfev(2000);
    const auto status = lm.minimize(x);
    Eigen::VectorXd f(static_cast<Eigen::Index>(n));
    residual(x, f);
    FitResult r;
    r.amplitude_A = x(0);
    r.delta_0 = x(1);
    r.Omega_R_eff = std::abs(x(2));
    r.rms_residual = std::sqrt(f.squaredNorm() / static_cast<double>(n));
    r.iterations = static_cast<int>(lm.iterations());
    const bool ok = converged(status) && r.amplitude_A > 0.0 && r.Omega_R_eff > 0.0;
    if (ok && (!any_converged || r.rms_residual < best.rms_residual)) {
      best = r;
      any_converged = true;
    } else if (!any_converged && r.rms_residual < best.rms_residual) {
      best = r;
    }
  }
  if (!any_converged) throw FitFailure("fit_lineshape: no start converged", best);
  return best;
}

}  // namespace qrotor
