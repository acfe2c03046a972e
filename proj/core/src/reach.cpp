#include "reachrisk/reach.hpp"

#include <cmath>

#include "reachrisk/errors.hpp"

namespace reachrisk {

double ReachConfig::detector_threshold(int sensor_dim) const {
  if (detector_threshold_override) return *detector_threshold_override;
  return chi2_quantile(sensor_dim, detector_confidence);
}

double ReachConfig::noise_threshold(int noise_dim) const {
  return chi2_quantile(noise_dim, noise_confidence);
}

namespace {

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& M, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw NumericalError(std::string(what) + ": matrix not SPD");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()));
  return 0.5 * (inv + inv.transpose());
}

/// Residual tolerance region as a zonotope; a zero threshold collapses it
/// to the origin.
Zonotope gamma_zonotope(const Eigen::MatrixXd& innov_cov, double threshold) {
  const Eigen::Index ny = innov_cov.rows();
  if (threshold <= 0.0) return Zonotope::point(Eigen::VectorXd::Zero(ny));
  const Eigen::MatrixXd q = spd_inverse(innov_cov, "tolerance region") / threshold;
  return ellipsoid_to_zonotope(Ellipsoid(Eigen::VectorXd::Zero(ny), q));
}

Eigen::MatrixXd guarded_gain(const Eigen::MatrixXd& innov_cov, const Eigen::MatrixXd& cross_cov,
                             const Eigen::VectorXd& pred_output) {
  const double zero_scale = 1e-14 * (1.0 + pred_output.squaredNorm());
  return cross_cov * psd_pseudo_inverse(innov_cov, zero_scale);
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

/// Canonical order-1 form: box the zonotope down to n kept generators
/// plus an axis-aligned part, then read it back as a Taylor model.
TaylorModel canonical_tm(const Zonotope& z) {
  return zonotope_to_tm(reduce_order(z, 2 * z.dim()));
}

/// Scalar components of (a, b) over the concatenated unit domain, each
/// shifted by -center so they line up with an expansion about `center`.
std::vector<TaylorModel> joint_args(const TaylorModel& a, const TaylorModel& b,
                                    const Eigen::VectorXd& center) {
  const int qa = a.poly.num_vars();
  const int qb = b.poly.num_vars();
  const Interval domain = Interval::concat(a.domain, b.domain);
  std::vector<TaylorModel> args;
  args.reserve(static_cast<size_t>(a.codomain() + b.codomain()));
  for (int j = 0; j < a.codomain(); ++j) {
    Polynomial p = a.poly.component(j).extended(qa + qb, 0);
    p.add_term(std::vector<int>(static_cast<size_t>(qa + qb), 0),
               Eigen::VectorXd::Constant(1, -center[j]));
    args.emplace_back(std::move(p),
                      Interval(Eigen::VectorXd::Constant(1, a.remainder.lower()[j]),
                               Eigen::VectorXd::Constant(1, a.remainder.upper()[j])),
                      domain);
  }
  for (int j = 0; j < b.codomain(); ++j) {
    Polynomial p = b.poly.component(j).extended(qa + qb, qa);
    p.add_term(std::vector<int>(static_cast<size_t>(qa + qb), 0),
               Eigen::VectorXd::Constant(1, -center[a.codomain() + j]));
    args.emplace_back(std::move(p),
                      Interval(Eigen::VectorXd::Constant(1, b.remainder.lower()[j]),
                               Eigen::VectorXd::Constant(1, b.remainder.upper()[j])),
                      domain);
  }
  return args;
}

void check_divergence(const Interval& hull, double cap, int last_valid_step) {
  if (hull.radii().maxCoeff() > cap || !hull.lower().allFinite() || !hull.upper().allFinite())
    throw DivergenceError("reach: set width exceeded the divergence cap", last_valid_step);
}

/// Sigma-point-weighted image of the estimate set under the dynamics
/// (the set form of the unscented mean prediction): each sigma offset
/// shifts the whole set, one Taylor expansion covers all shifted copies.
TaylorModel predict_estimate_set(const TaylorModel& est, const TaylorModel& input,
                                 const Eigen::MatrixXd& P_hat, const SystemModel& model,
                                 const ReachConfig& cfg) {
  const int n = model.n_x();
  const UTWeights weights = UTWeights::standard(n);
  const Eigen::MatrixXd S = psd_sqrt(P_hat);
  const double scale = std::sqrt(static_cast<double>(n) + weights.lambda);

  std::vector<Eigen::VectorXd> offsets;
  offsets.push_back(Eigen::VectorXd::Zero(n));
  for (int i = 0; i < n; ++i) {
    offsets.push_back(scale * S.col(i));
    offsets.push_back(-scale * S.col(i));
  }

  const Interval hull_est = est.range();
  Interval hull_exp = hull_est;
  for (const auto& d : offsets) hull_exp = hull_exp.hull_with(hull_est.shifted(d));
  const Interval hull_u = input.range();

  Eigen::VectorXd center(n + model.n_u());
  center << hull_exp.mid(), hull_u.mid();
  const TaylorModel f_tm = taylor_expand(model.dynamics, center,
                                         Interval::concat(hull_exp, hull_u), cfg.taylor_order);

  const std::vector<TaylorModel> base_args = joint_args(est, input, center);

  // All non-center sigma points share one mean weight.
  auto weight_of = [&](size_t idx) {
    return idx == 0 ? weights.mean_weights[0] : weights.mean_weights[1];
  };

  std::optional<TaylorModel> accum;
  for (size_t i = 0; i < offsets.size(); ++i) {
    const double w = weight_of(i);
    if (w == 0.0) continue;
    std::vector<TaylorModel> args = base_args;
    for (int j = 0; j < n; ++j) {
      if (offsets[i][j] != 0.0)
        args[static_cast<size_t>(j)] = tm_add_constant(
            args[static_cast<size_t>(j)], Eigen::VectorXd::Constant(1, offsets[i][j]));
    }
    TaylorModel term = tm_scale(tm_compose(f_tm.poly, args, cfg.taylor_order), w);
    accum = accum ? tm_add(*accum, term) : term;
  }
  if (!accum) throw NumericalError("predict_estimate_set: all sigma weights are zero");
  return TaylorModel(accum->poly, accum->remainder + f_tm.remainder, accum->domain);
}

}  // namespace

Zonotope noise_region_zonotope(const SystemModel& model, const ReachConfig& cfg) {
  const Eigen::MatrixXd& pw = model.process_noise_cov;
  if (pw.isZero(0.0))
    return Zonotope::point(Eigen::VectorXd::Zero(model.n_x()));
  const double eps_w = cfg.noise_threshold(model.n_w());
  const Eigen::MatrixXd q = spd_inverse(pw, "noise region") / eps_w;
  const Zonotope w_noise = ellipsoid_to_zonotope(Ellipsoid(Eigen::VectorXd::Zero(pw.rows()), q));
  return linear_map(model.noise_map, Eigen::VectorXd::Zero(model.n_x()), w_noise);
}

ReachState initialize(const Eigen::VectorXd& x0_hat, const Eigen::MatrixXd& P0,
                      const SystemModel& model, const ReachConfig& cfg) {
  if (x0_hat.size() != model.n_x()) throw std::invalid_argument("initialize: state size mismatch");
  if (P0.rows() != model.n_x() || P0.cols() != model.n_x())
    throw std::invalid_argument("initialize: covariance size mismatch");
  if (cfg.taylor_order < 1 || cfg.horizon < 1)
    throw std::invalid_argument("initialize: taylor_order and horizon must be positive");
  if (cfg.generator_budget < model.n_x())
    throw std::invalid_argument("initialize: generator budget below state dimension");

  const UTWeights weights = UTWeights::standard(model.n_x());
  const Eigen::VectorXd u0 = model.g(x0_hat);
  const double eps_r = cfg.detector_threshold(model.n_y());

  const UTResult ut = unscented_transform(x0_hat, P0, model.dynamics, u0,
                                          model.state_noise_cov(), model.sensor,
                                          model.measurement_noise_cov, weights);
  const Eigen::MatrixXd gain = guarded_gain(ut.innov_cov, ut.cross_cov, ut.pred_output);

  ReachState st;
  st.step = 1;
  st.filter.mean = ut.pred_mean;
  st.filter.cov = symmetrized(ut.pred_cov - gain * ut.innov_cov * gain.transpose());
  st.filter.gain = gain;
  st.filter.pred_mean = ut.pred_mean;
  st.filter.pred_cov = ut.pred_cov;
  st.filter.innov_cov = ut.innov_cov;
  st.filter.cross_cov = ut.cross_cov;

  const Zonotope kgamma = linear_map(gain, Eigen::VectorXd::Zero(model.n_x()),
                                     gamma_zonotope(ut.innov_cov, eps_r));
  st.est_set = canonical_tm(Zonotope(ut.pred_mean, kgamma.generators()));

  const Zonotope w_state = noise_region_zonotope(model, cfg);
  const Zonotope x1(model.f(x0_hat, u0), w_state.generators());
  st.true_segment = reduce_order(x1, cfg.generator_budget);
  st.true_set = canonical_tm(x1);
  st.input_set = TaylorModel::constant(u0);

  check_divergence(st.true_set.range(), cfg.divergence_cap, 0);
  return st;
}

ReachState ukf_update_step(const ReachState& state, const SystemModel& model,
                           const ReachConfig& cfg) {
  const UTWeights weights = UTWeights::standard(model.n_x());
  const double eps_r = cfg.detector_threshold(model.n_y());

  const Eigen::VectorXd x_c = state.est_set.range().mid();
  const Eigen::VectorXd u_c = state.input_set.range().mid();
  const UTResult ut = unscented_transform(x_c, state.filter.cov, model.dynamics, u_c,
                                          model.state_noise_cov(), model.sensor,
                                          model.measurement_noise_cov, weights);
  const Eigen::MatrixXd gain = guarded_gain(ut.innov_cov, ut.cross_cov, ut.pred_output);

  const TaylorModel pred = predict_estimate_set(state.est_set, state.input_set,
                                                state.filter.cov, model, cfg);
  const Zonotope kgamma = linear_map(gain, Eigen::VectorXd::Zero(model.n_x()),
                                     gamma_zonotope(ut.innov_cov, eps_r));
  const TaylorModel est_full = tm_minkowski_concat(pred, tm_from_zonotope(kgamma));

  ReachState next = state;
  next.est_set = canonical_tm(tm_to_zonotope(est_full));
  next.filter.mean = ut.pred_mean;
  next.filter.cov = symmetrized(ut.pred_cov - gain * ut.innov_cov * gain.transpose());
  next.filter.gain = gain;
  next.filter.pred_mean = ut.pred_mean;
  next.filter.pred_cov = ut.pred_cov;
  next.filter.innov_cov = ut.innov_cov;
  next.filter.cross_cov = ut.cross_cov;

  check_divergence(next.est_set.range(), cfg.divergence_cap, state.step);
  return next;
}

ReachState system_update_step(const ReachState& state, const SystemModel& model,
                              const ReachConfig& cfg) {
  // Next input set: controller image of the current estimate set.
  const Interval hull_est = state.est_set.range();
  const Eigen::VectorXd c_est = hull_est.mid();
  const TaylorModel g_tm = taylor_expand(model.controller, c_est, hull_est, cfg.taylor_order);
  std::vector<TaylorModel> g_args;
  for (int j = 0; j < model.n_x(); ++j) {
    TaylorModel comp = tm_component(state.est_set, j);
    g_args.push_back(tm_add_constant(comp, Eigen::VectorXd::Constant(1, -c_est[j])));
  }
  TaylorModel u_next = tm_compose(g_tm.poly, g_args, cfg.taylor_order);
  u_next = TaylorModel(u_next.poly, u_next.remainder + g_tm.remainder, u_next.domain);
  const Zonotope u_zono = tm_to_zonotope(u_next);

  // Next true set: dynamics image of (true set x current input set) plus
  // the bounded process noise.
  const Interval hull_x = state.true_set.range();
  const Interval hull_u = state.input_set.range();
  Eigen::VectorXd center(model.n_x() + model.n_u());
  center << hull_x.mid(), hull_u.mid();
  const TaylorModel f_tm = taylor_expand(model.dynamics, center,
                                         Interval::concat(hull_x, hull_u), cfg.taylor_order);
  const std::vector<TaylorModel> args = joint_args(state.true_set, state.input_set, center);
  TaylorModel x_next = tm_compose(f_tm.poly, args, cfg.taylor_order);
  x_next = TaylorModel(x_next.poly, x_next.remainder + f_tm.remainder, x_next.domain);
  x_next = tm_minkowski_concat(x_next, tm_from_zonotope(noise_region_zonotope(model, cfg)));

  const Zonotope z_full = tm_to_zonotope(x_next);

  ReachState next = state;
  next.input_set = canonical_tm(reduce_order(u_zono, 2 * u_zono.dim()));
  next.true_segment = reduce_order(z_full, cfg.generator_budget);
  next.true_set = canonical_tm(z_full);
  check_divergence(next.true_set.range(), cfg.divergence_cap, state.step);
  return next;
}

Flowpipe compute_flowpipe(const Eigen::VectorXd& x0_hat, const Eigen::MatrixXd& P0,
                          const SystemModel& model, const ReachConfig& cfg) {
  ReachState state = initialize(x0_hat, P0, model, cfg);
  Flowpipe fp;
  fp.segments.push_back({1, cfg.dt, state.true_segment});

  for (int k = 1; k < cfg.horizon; ++k) {
    const ReachState est_part = ukf_update_step(state, model, cfg);
    const ReachState sys_part = system_update_step(state, model, cfg);
    state.est_set = est_part.est_set;
    state.filter = est_part.filter;
    state.true_set = sys_part.true_set;
    state.true_segment = sys_part.true_segment;
    state.input_set = sys_part.input_set;
    state.step = k + 1;
    fp.segments.push_back({k + 1, (k + 1) * cfg.dt, state.true_segment});
  }
  return fp;
}

}  // namespace reachrisk
