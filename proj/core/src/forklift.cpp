#include "reachrisk/forklift.hpp"

#include <cmath>
#include <random>

#include "reachrisk/errors.hpp"

namespace reachrisk {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

int total_degree(const MultiIndex& J) {
  int d = 0;
  for (int e : J) d += e;
  return d;
}

// Exact interval square (the naive product rule would span below zero).
ScalarInterval interval_square(ScalarInterval z) {
  if (z.lo >= 0.0) return {z.lo * z.lo, z.hi * z.hi};
  if (z.hi <= 0.0) return {z.hi * z.hi, z.lo * z.lo};
  const double m = std::max(-z.lo, z.hi);
  return {0.0, m * m};
}

}  // namespace

Eigen::Vector3d forklift_dynamics(const Eigen::Vector3d& x, double steer,
                                  const Eigen::Vector2d& w, const ForkliftParams& p) {
  const double k = p.dt * p.speed;
  Eigen::Vector3d out;
  out[0] = x[0] + k * std::cos(x[2] + steer) + w[0];
  out[1] = x[1] + k * std::sin(x[2] + steer) + w[1];
  out[2] = x[2] + (k / p.length) * std::sin(steer);
  return out;
}

Eigen::Vector2d forklift_sensor(const Eigen::Vector3d& x, const Eigen::Vector2d& v) {
  return Eigen::Vector2d(x[1] + v[0], x[2] + v[1]);
}

double stanley_control(double cross_track_error, double heading_error, const ForkliftParams& p) {
  return heading_error + std::atan(p.gain * cross_track_error / (p.softening + p.speed));
}

namespace {

SmoothMap make_dynamics_map(const ForkliftParams& p) {
  const double k = p.dt * p.speed;
  const double k_heading = k / p.length;

  auto eval = [k, k_heading](const Eigen::VectorXd& xu) -> Eigen::VectorXd {
    Eigen::VectorXd out(3);
    const double s = xu[2] + xu[3];
    out[0] = xu[0] + k * std::cos(s);
    out[1] = xu[1] + k * std::sin(s);
    out[2] = xu[2] + k_heading * std::sin(xu[3]);
    return out;
  };

  auto deriv = [k, k_heading, eval](const MultiIndex& J, const Eigen::VectorXd& xu) -> Eigen::VectorXd {
    const int d = total_degree(J);
    if (d == 0) return eval(xu);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(3);
    const int m = J[2] + J[3];  // derivative order in the angle variables
    const double s = xu[2] + xu[3];
    if (J[0] == 1 && J[1] == 0 && m == 0) out[0] = 1.0;
    if (J[0] == 0 && J[1] == 1 && m == 0) out[1] = 1.0;
    if (J[0] == 0 && J[1] == 0 && m >= 1) {
      out[0] = k * std::cos(s + m * kHalfPi);
      out[1] = k * std::sin(s + m * kHalfPi);
    }
    if (J[0] == 0 && J[1] == 0 && J[2] == 1 && J[3] == 0) out[2] = 1.0;
    if (J[0] == 0 && J[1] == 0 && J[2] == 0 && J[3] >= 1)
      out[2] += k_heading * std::sin(xu[3] + J[3] * kHalfPi);
    return out;
  };

  auto ideriv = [k, k_heading](const MultiIndex& J, const Interval& box) -> Interval {
    const int d = total_degree(J);
    const ScalarInterval s = box.at(2) + box.at(3);
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd hi = Eigen::VectorXd::Zero(3);
    auto set = [&](int i, ScalarInterval v) {
      lo[i] += v.lo;
      hi[i] += v.hi;
    };
    if (d == 0) {
      set(0, box.at(0) + k * interval_cos(s));
      set(1, box.at(1) + k * interval_sin(s));
      set(2, box.at(2) + k_heading * interval_sin(box.at(3)));
      return Interval(lo, hi);
    }
    const int m = J[2] + J[3];
    if (J[0] == 1 && J[1] == 0 && m == 0) set(0, ScalarInterval::point(1.0));
    if (J[0] == 0 && J[1] == 1 && m == 0) set(1, ScalarInterval::point(1.0));
    if (J[0] == 0 && J[1] == 0 && m >= 1) {
      const ScalarInterval shifted{s.lo + m * kHalfPi, s.hi + m * kHalfPi};
      set(0, k * interval_cos(shifted));
      set(1, k * interval_sin(shifted));
    }
    if (J[0] == 0 && J[1] == 0 && J[2] == 1 && J[3] == 0) set(2, ScalarInterval::point(1.0));
    if (J[0] == 0 && J[1] == 0 && J[2] == 0 && J[3] >= 1) {
      const ScalarInterval shifted{box.at(3).lo + J[3] * kHalfPi, box.at(3).hi + J[3] * kHalfPi};
      set(2, k_heading * interval_sin(shifted));
    }
    return Interval(lo, hi);
  };

  return SmoothMap::analytic(4, 3, eval, deriv, ideriv, 1000);
}

SmoothMap make_controller_map(const ForkliftParams& p) {
  const double c = p.gain / (p.softening + p.speed);
  const double y_ref = p.lane_offset;
  const double h_ref = p.heading_ref;

  auto eval = [c, y_ref, h_ref](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return Eigen::VectorXd::Constant(1, (h_ref - x[2]) + std::atan(c * (y_ref - x[1])));
  };

  auto deriv = [c, y_ref, eval](const MultiIndex& J, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const int d = total_degree(J);
    if (d == 0) return eval(x);
    double out = 0.0;
    if (J[0] == 0 && J[1] == 0 && J[2] == 1 && d == 1) out = -1.0;
    if (J[0] == 0 && J[2] == 0 && J[1] >= 1) {
      const double z = c * (y_ref - x[1]);
      const double q = 1.0 + z * z;
      switch (J[1]) {
        case 1: out += -c / q; break;
        case 2: out += -2.0 * c * c * z / (q * q); break;
        case 3: out += 2.0 * c * c * c * (1.0 - 3.0 * z * z) / (q * q * q); break;
        default: throw UnsupportedOrderError("forklift controller: derivative order > 3");
      }
    }
    return Eigen::VectorXd::Constant(1, out);
  };

  auto ideriv = [c, y_ref, h_ref](const MultiIndex& J, const Interval& box) -> Interval {
    const int d = total_degree(J);
    auto wrap = [](ScalarInterval v) { return Interval(Eigen::VectorXd::Constant(1, v.lo),
                                                       Eigen::VectorXd::Constant(1, v.hi)); };
    const ScalarInterval z = c * (ScalarInterval::point(y_ref) - box.at(1));
    if (d == 0)
      return wrap((ScalarInterval::point(h_ref) - box.at(2)) + interval_atan(z));
    ScalarInterval out = ScalarInterval::point(0.0);
    if (J[0] == 0 && J[1] == 0 && J[2] == 1 && d == 1) out = ScalarInterval::point(-1.0);
    if (J[0] == 0 && J[2] == 0 && J[1] >= 1) {
      const ScalarInterval zz = interval_square(z);
      const ScalarInterval q = ScalarInterval::point(1.0) + zz;  // >= 1, never spans 0
      switch (J[1]) {
        case 1: out = out + ScalarInterval::point(-c) / q; break;
        case 2: out = out + (-2.0 * c * c) * (z / (q * q)); break;
        case 3: {
          const ScalarInterval num = ScalarInterval::point(1.0) - 3.0 * zz;
          out = out + (2.0 * c * c * c) * (num / (q * q * q));
          break;
        }
        default: throw UnsupportedOrderError("forklift controller: derivative order > 3");
      }
    }
    return wrap(out);
  };

  return SmoothMap::analytic(3, 1, eval, deriv, ideriv, 3);
}

}  // namespace

SystemModel make_forklift_model(const ForkliftParams& p) {
  Eigen::MatrixXd H(2, 3);
  H << 0, 1, 0, 0, 0, 1;
  Eigen::MatrixXd noise_map(3, 2);
  noise_map << 1, 0, 0, 1, 0, 0;
  return SystemModel{make_dynamics_map(p),
                     SmoothMap::linear(H, Eigen::Vector2d::Zero()),
                     make_controller_map(p),
                     p.process_noise_cov,
                     p.measurement_noise_cov,
                     noise_map};
}

namespace {

/// Steps the attacked closed loop one measurement at a time. The input
/// applied over [t_k, t_k+1] comes from the estimate at k-1, matching the
/// one-step actuation delay of the plant equations.
class ClosedLoopStepper {
public:
  ClosedLoopStepper(const SystemModel& model, const Eigen::VectorXd& x0_hat,
                    const Eigen::MatrixXd& P0, const DetectorConfig& detector,
                    std::uint64_t seed)
      : model_(model),
        detector_(detector),
        weights_(UTWeights::standard(model.n_x())),
        rng_(seed),
        sqrt_w_(psd_sqrt(model.process_noise_cov)),
        sqrt_v_(psd_sqrt(model.measurement_noise_cov)),
        p_w_state_(model.state_noise_cov()) {
    x_ = x0_hat;
    fs_.mean = x0_hat;
    fs_.cov = P0;
    u_apply_ = model.g(x0_hat);
  }

  const Eigen::VectorXd& true_state() const { return x_; }
  const FilterState& filter() const { return fs_; }
  const Eigen::VectorXd& pending_input() const { return u_apply_; }

  struct Pending {
    Eigen::VectorXd u_next;
    Eigen::VectorXd x_next;
    Eigen::VectorXd y_base;  // measurement before any attack
  };

  /// Draws this step's noise and advances the plant; the measurement
  /// update is committed separately so attacks can be screened first.
  Pending prepare() {
    Pending p;
    p.u_next = model_.g(fs_.mean);
    const Eigen::VectorXd w = sqrt_w_ * standard_normals(model_.n_w());
    const Eigen::VectorXd v = sqrt_v_ * standard_normals(model_.n_y());
    p.x_next = model_.f(x_, u_apply_) + model_.noise_map * w;
    p.y_base = model_.h(x_) + v;
    return p;
  }

  UkfStepResult evaluate(const Pending& p, const Eigen::VectorXd& attack) const {
    return ukf_step(fs_, u_apply_, p.y_base + attack, model_.dynamics, model_.sensor,
                    p_w_state_, model_.measurement_noise_cov, weights_, detector_);
  }

  void commit(const Pending& p, const UkfStepResult& res) {
    x_ = p.x_next;
    fs_ = res.state;
    u_apply_ = p.u_next;
  }

  double uniform_pm1() { return uniform_(rng_); }

private:
  Eigen::VectorXd standard_normals(int n) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal_(rng_);
    return z;
  }

  const SystemModel& model_;
  DetectorConfig detector_;
  UTWeights weights_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{-1.0, 1.0};
  Eigen::MatrixXd sqrt_w_;
  Eigen::MatrixXd sqrt_v_;
  Eigen::MatrixXd p_w_state_;
  Eigen::VectorXd x_;
  FilterState fs_;
  Eigen::VectorXd u_apply_;
};

}  // namespace

SimulationResult simulate_closed_loop(const SystemModel& model, const Eigen::VectorXd& x0_hat,
                                      const Eigen::MatrixXd& P0, int steps, std::uint64_t seed,
                                      const DetectorConfig& detector,
                                      const std::optional<Eigen::MatrixXd>& attacks) {
  if (attacks && (attacks->rows() < steps || attacks->cols() != model.n_y()))
    throw std::invalid_argument("simulate_closed_loop: attack matrix shape mismatch");

  ClosedLoopStepper sim(model, x0_hat, P0, detector, seed);
  SimulationResult out;
  out.states.push_back(sim.true_state());
  out.estimates.push_back(sim.filter().mean);
  out.covariances.push_back(sim.filter().cov);

  for (int k = 0; k < steps; ++k) {
    const auto pending = sim.prepare();
    const Eigen::VectorXd a = attacks ? Eigen::VectorXd(attacks->row(k).transpose())
                                      : Eigen::VectorXd(Eigen::VectorXd::Zero(model.n_y()));
    const UkfStepResult res = sim.evaluate(pending, a);
    out.inputs.push_back(sim.pending_input());
    sim.commit(pending, res);
    out.states.push_back(sim.true_state());
    out.estimates.push_back(sim.filter().mean);
    out.covariances.push_back(sim.filter().cov);
    out.nis.push_back(res.nis);
    out.alarms.push_back(res.alarm);
  }
  return out;
}

std::vector<AttackTrace> sample_stealth_attacks(const SystemModel& model,
                                                const Eigen::VectorXd& x0_hat,
                                                const Eigen::MatrixXd& P0, int count, int horizon,
                                                std::uint64_t seed,
                                                const DetectorConfig& detector) {
  if (count < 1) throw std::invalid_argument("sample_stealth_attacks: count must be >= 1");
  constexpr int kMaxRedraws = 1000;
  constexpr int kMaxTraceRetries = 100;

  std::vector<AttackTrace> traces;
  traces.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxTraceRetries && !done; ++attempt) {
      // Attempt 0 runs on the per-trace stream seed + i; the rare restart
      // after an unsalvageable noise draw moves to a shifted stream.
      const std::uint64_t trace_seed = seed + static_cast<std::uint64_t>(i) +
                                       (static_cast<std::uint64_t>(attempt) << 32);
      ClosedLoopStepper sim(model, x0_hat, P0, detector, trace_seed);
      AttackTrace trace;
      trace.attacks = Eigen::MatrixXd::Zero(horizon, model.n_y());
      trace.states.push_back(sim.true_state());
      trace.estimates.push_back(sim.filter().mean);
      bool stealthy = true;

      for (int k = 0; k < horizon; ++k) {
        const auto pending = sim.prepare();
        Eigen::VectorXd a(model.n_y());
        UkfStepResult res;
        bool accepted = false;
        for (int attempt_a = 0; attempt_a < kMaxRedraws; ++attempt_a) {
          for (int j = 0; j < model.n_y(); ++j) a[j] = sim.uniform_pm1();
          res = sim.evaluate(pending, a);
          if (!res.alarm) {
            accepted = true;
            break;
          }
          ++trace.redraws;
        }
        if (!accepted) {
          a.setZero();
          res = sim.evaluate(pending, a);
          if (res.alarm) {
            // The noise alone trips the detector; restart this trace on a
            // fresh stretch of the same stream.
            stealthy = false;
            break;
          }
        }
        trace.attacks.row(k) = a.transpose();
        sim.commit(pending, res);
        trace.states.push_back(sim.true_state());
        trace.estimates.push_back(sim.filter().mean);
        trace.nis.push_back(res.nis);
        trace.alarms.push_back(res.alarm);
      }

      if (stealthy) {
        traces.push_back(std::move(trace));
        done = true;
      }
    }
    if (!done)
      throw NumericalError("sample_stealth_attacks: could not generate a stealthy trace");
  }
  return traces;
}

}  // namespace reachrisk
