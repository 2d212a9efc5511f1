#include "reeb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reeb/errors.hpp"

namespace reeb {

namespace {

Dopri5::Rhs reeb_rhs(const HamiltonianModel& m) {
  return [&m](double, const std::vector<double>& y, std::vector<double>& dy) {
    const PhasePoint p{std::vector<double>(y)};
    const TangentVector X = reeb_field(m, p);
    dy = X.components;
  };
}

std::vector<double> default_samples(double t_end) {
  const int count = std::min(1000, std::max(10, static_cast<int>(std::abs(t_end) / 0.1)));
  std::vector<double> ts(count);
  for (int i = 0; i < count; ++i) ts[i] = t_end * (i + 1) / count;
  return ts;
}

}  // namespace

OrbitTrace integrate(const HamiltonianModel& m, const PhasePoint& x0, double t_end,
                     const IntegratorConfig& cfg,
                     const std::vector<double>& sample_times) {
  OrbitTrace trace;
  Dopri5 solver(cfg);
  const auto samples = sample_times.empty() ? default_samples(t_end) : sample_times;
  auto res = solver.integrate(
      reeb_rhs(m), 0.0, x0.coords, t_end, samples,
      [&](double t, const std::vector<double>& y) {
        trace.times.push_back(t);
        trace.states.emplace_back(std::vector<double>(y));
      });
  trace.n_steps = res.n_steps;
  trace.n_rejected = res.n_rejected;
  trace.termination = Termination::Horizon;
  return trace;
}

OrbitTrace integrate_in_box(const HamiltonianModel& m, const PhasePoint& x0,
                            double t_end, const IntegratorConfig& cfg,
                            const EscapeBox& box) {
  OrbitTrace trace;
  Dopri5 solver(cfg);
  auto res = solver.integrate(
      reeb_rhs(m), 0.0, x0.coords, t_end, default_samples(t_end),
      [&](double t, const std::vector<double>& y) {
        trace.times.push_back(t);
        trace.states.emplace_back(std::vector<double>(y));
      },
      [&](double, const std::vector<double>& y) {
        return !box.contains(PhasePoint{std::vector<double>(y)});
      });
  trace.n_steps = res.n_steps;
  trace.n_rejected = res.n_rejected;
  trace.termination = res.stopped_early ? Termination::Escaped : Termination::Horizon;
  return trace;
}

TorusDrift torus_drift(const HamiltonianModel& m, std::vector<double> theta0, double T,
                       const IntegratorConfig& cfg) {
  const int n = m.dim();
  std::vector<double> r(n, 1.0);
  const PhasePoint x0 = PhasePoint::from_polar(r, theta0, 0.0);
  TorusDrift drift;
  if (T == 0.0) return drift;

  Dopri5 solver(cfg);
  std::vector<double> samples;
  for (double t = 0.1; t < T + 1e-12; t += 0.1) samples.push_back(std::min(t, T));
  solver.integrate(reeb_rhs(m), 0.0, x0.coords, T, samples,
                   [&](double, const std::vector<double>& y) {
                     const PhasePoint p{std::vector<double>(y)};
                     for (int j = 0; j < n; ++j)
                       drift.max_r_dev = std::max(drift.max_r_dev, std::abs(p.r(j) - 1.0));
                     drift.max_z = std::max(drift.max_z, std::abs(p.z()));
                   });
  return drift;
}

double distance_to_invariant_set(const PhasePoint& p, const InvariantSetSpec& spec) {
  // A embeds as {r = 1, theta in A, z = 0}; for the full torus the distance
  // has the closed form sqrt(sum (r_j - 1)^2 + z^2).
  const int n = p.dim();
  if (spec.kind == InvariantSetKind::FullTorus) {
    double d2 = p.z() * p.z();
    for (int j = 0; j < n; ++j) d2 += (p.r(j) - 1.0) * (p.r(j) - 1.0);
    return std::sqrt(d2);
  }
  auto samples = spec.sample_points(256);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& th : samples) {
    double d2 = p.z() * p.z();
    for (int j = 0; j < n; ++j) {
      const double dx = p.x(j) - std::cos(th[j]);
      const double dy = p.y(j) - std::sin(th[j]);
      d2 += dx * dx + dy * dy;
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

ZMonotonicityResult z_monotonicity_check(const OrbitTrace& trace,
                                         const HamiltonianModel& m,
                                         const InvariantSetSpec& spec, double eps) {
  if (trace.states.empty()) throw std::invalid_argument("empty orbit trace");
  ZMonotonicityResult res;
  res.worst_rate = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const PhasePoint& p = trace.states[i];
    if (distance_to_invariant_set(p, spec) <= eps) continue;
    const double rate = dz_rate(m, p);
    ++res.checked;
    if (rate <= 0.0)
      throw MonotonicityViolation("dz(X) = " + std::to_string(rate) + " at t = " +
                                  std::to_string(trace.times[i]));
    res.worst_rate = std::min(res.worst_rate, rate);
  }
  if (res.checked == 0) res.worst_rate = 0.0;  // vacuous pass
  return res;
}

Classification classify(const OrbitTrace& trace, const EscapeBox& box) {
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    if (!box.contains(trace.states[i])) return {false, trace.times[i]};
  }
  return {true, 0.0};
}

InitialFamily default_torus_family(int n, std::vector<double> theta0) {
  return [n, theta0 = std::move(theta0)](double s) {
    std::vector<double> r(n, 0.9);
    return PhasePoint::from_polar(r, theta0, s);
  };
}

namespace {

// Side of the stable set a family orbit falls on. Starting below the torus
// level, z rises monotonically; the run stops at the first accepted step
// with z >= 0 (or a box exit). Radii below 1 there undershoot the torus,
// radii above overshoot it. Stayed means z never reached 0 and the orbit
// never left the box over the whole horizon: a trapped candidate.
enum class FamilySide { Low, High, Stayed };

}  // namespace

TrappedOrbitResult search_trapped(const HamiltonianModel& m, const InitialFamily& family,
                                  double s_lo, double s_hi, double T_fwd, double T_bwd,
                                  const EscapeBox& box, const IntegratorConfig& cfg,
                                  double escape_radius, double bisect_tol) {
  TrappedOrbitResult out;
  bool found = false;

  auto side = [&](double s) {
    OrbitTrace trace;
    Dopri5 solver(cfg);
    const PhasePoint x0 = family(s);
    auto res = solver.integrate(
        reeb_rhs(m), 0.0, x0.coords, T_fwd, default_samples(T_fwd),
        [&](double t, const std::vector<double>& y) {
          trace.times.push_back(t);
          trace.states.emplace_back(std::vector<double>(y));
        },
        [&](double, const std::vector<double>& y) {
          const PhasePoint p{std::vector<double>(y)};
          return p.z() >= 0.0 || !box.contains(p);
        });
    trace.n_steps = res.n_steps;
    trace.n_rejected = res.n_rejected;
    if (!res.stopped_early) {
      trace.termination = Termination::Horizon;
      if (!found) {
        found = true;
        out.s_star = s;
        out.forward = std::move(trace);
      }
      return FamilySide::Stayed;
    }
    const PhasePoint stop{std::vector<double>(res.y_end)};
    return stop.min_r() < 1.0 ? FamilySide::Low : FamilySide::High;
  };

  const FamilySide lo_side = side(s_lo);
  const FamilySide hi_side = side(s_hi);
  if (!found) {
    if (lo_side == hi_side)
      throw NoBracket("family endpoints pass the torus on the same side");
    // Close in on the boundary between the two sides; stop as soon as a
    // midpoint survives the whole horizon. Candidates that do are confined
    // to a band around the boundary far narrower than bisect_tol, so the
    // bracket keeps shrinking well past it until one is hit.
    while (!found) {
      const double mid = 0.5 * (s_lo + s_hi);
      if (mid <= s_lo || mid >= s_hi)
        throw SearchExhausted(
            "bisection reached machine precision without a surviving orbit");
      if (side(mid) == lo_side)
        s_lo = mid;
      else if (!found)
        s_hi = mid;
    }
    out.bracket_width = std::max(s_hi - s_lo, 0.0);
    if (out.bracket_width > bisect_tol)
      throw SearchExhausted("surviving orbit found at bracket width " +
                            std::to_string(out.bracket_width) +
                            " > requested tolerance");
  }

  // Backward run until the radius-escape ball is left.
  Dopri5 solver(cfg);
  auto res = solver.integrate(
      reeb_rhs(m), 0.0, family(out.s_star).coords, -T_bwd, default_samples(-T_bwd),
      [&](double t, const std::vector<double>& y) {
        out.backward.times.push_back(t);
        out.backward.states.emplace_back(std::vector<double>(y));
      },
      [&](double t, const std::vector<double>& y) {
        double norm2 = 0.0;
        for (double c : y) norm2 += c * c;
        if (norm2 >= escape_radius * escape_radius) {
          out.backward_escaped = true;
          out.backward_escape_time = std::abs(t);
          return true;
        }
        return false;
      });
  out.backward.n_steps = res.n_steps;
  out.backward.n_rejected = res.n_rejected;
  out.backward.termination =
      out.backward_escaped ? Termination::Escaped : Termination::Horizon;
  return out;
}

}  // namespace reeb
