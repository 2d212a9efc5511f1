#ifndef REEB_ODE_HPP
#define REEB_ODE_HPP

#include <functional>
#include <vector>

namespace reeb {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-10;
  double max_step = 0.5;
  long max_steps = 5'000'000;
};

// Adaptive Dormand-Prince 5(4) with PI step-size control.
// Integrates y' = f(t, y) from t0 to t1 (t1 < t0 runs backward).
// Sample times must be monotone in the direction of integration;
// the integrator lands on each of them exactly by step clamping.
//
// observer(t, y) is called at t0, at every sample time, and at t1.
// If stop_when is provided and returns true at an internal step end,
// integration stops there (observer is still called for that state).
class Dopri5 {
 public:
  using Rhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
  using Observer = std::function<void(double, const std::vector<double>&)>;
  using StopCondition = std::function<bool(double, const std::vector<double>&)>;

  explicit Dopri5(IntegratorConfig cfg) : cfg_(cfg) {}

  struct Result {
    double t_end = 0.0;
    std::vector<double> y_end;
    long n_steps = 0;
    long n_rejected = 0;
    bool stopped_early = false;   // stop_when fired
  };

  Result integrate(const Rhs& f, double t0, std::vector<double> y0, double t1,
                   const std::vector<double>& sample_times = {},
                   const Observer& observer = nullptr,
                   const StopCondition& stop_when = nullptr) const;

 private:
  IntegratorConfig cfg_;
};

}  // namespace reeb

#endif
