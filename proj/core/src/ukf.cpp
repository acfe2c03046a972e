#include "reachrisk/ukf.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include "reachrisk/errors.hpp"

namespace reachrisk {

UTWeights UTWeights::standard(int state_dim) {
  if (state_dim < 1) throw std::invalid_argument("UTWeights: state_dim must be positive");
  const double a = 1.0;
  const double b = 2.0;
  const double kappa = 0.0;
  const int n = state_dim;
  UTWeights w;
  w.lambda = a * a * (n + kappa) - n;
  w.mean_weights.resize(2 * n + 1);
  w.cov_weights.resize(2 * n + 1);
  w.mean_weights[0] = w.lambda / (n + w.lambda);
  w.cov_weights[0] = w.mean_weights[0] + (1.0 - a * a + b);
  for (int i = 1; i <= 2 * n; ++i) {
    w.mean_weights[i] = 1.0 / (2.0 * (n + w.lambda));
    w.cov_weights[i] = w.mean_weights[i];
  }
  return w;
}

DetectorConfig DetectorConfig::from_confidence(int sensor_dim, double confidence) {
  DetectorConfig cfg;
  cfg.confidence = confidence;
  cfg.sensor_dim = sensor_dim;
  cfg.threshold = chi2_quantile(sensor_dim, confidence);
  return cfg;
}

double chi2_quantile(int dof, double prob) {
  if (dof < 1) throw std::invalid_argument("chi2_quantile: dof must be >= 1");
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("chi2_quantile: prob must be in (0, 1)");
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::quantile(dist, prob);
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& P) {
  if (P.rows() != P.cols()) throw std::invalid_argument("psd_sqrt: square matrix required");
  Eigen::LLT<Eigen::MatrixXd> llt(P);
  if (llt.info() == Eigen::Success) {
    // LLT does not reliably reject semidefinite input; verify the factor.
    const Eigen::MatrixXd L = llt.matrixL();
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    if (L.allFinite() && (L * L.transpose() - P).cwiseAbs().maxCoeff() <= 1e-10 * scale) return L;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  if (es.info() != Eigen::Success) throw NumericalError("psd_sqrt: eigendecomposition failed");
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10 * scale) throw NumericalError("psd_sqrt: matrix is not positive semidefinite");
    if (ev[i] < 0.0) ev[i] = 0.0;
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd psd_pseudo_inverse(const Eigen::MatrixXd& M, double zero_scale) {
  if (M.rows() != M.cols()) throw std::invalid_argument("psd_pseudo_inverse: square matrix required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw NumericalError("psd_pseudo_inverse: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lambda_max = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -1e-8 * std::max(lambda_max, zero_scale))
    throw NumericalError("psd_pseudo_inverse: matrix is not positive semidefinite");
  const double cutoff = std::max(zero_scale, 1e-12 * lambda_max);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                             double lambda) {
  const Eigen::Index n = mean.size();
  if (cov.rows() != n || cov.cols() != n)
    throw std::invalid_argument("sigma_points: covariance size mismatch");
  const Eigen::MatrixXd S = psd_sqrt(cov);
  const double scale = std::sqrt(static_cast<double>(n) + lambda);
  Eigen::MatrixXd sigma(n, 2 * n + 1);
  sigma.col(0) = mean;
  for (Eigen::Index i = 0; i < n; ++i) {
    sigma.col(1 + i) = mean + scale * S.col(i);
    sigma.col(1 + n + i) = mean - scale * S.col(i);
  }
  return sigma;
}

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

UTResult unscented_transform(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                             const SmoothMap& f, const Eigen::VectorXd& u,
                             const Eigen::MatrixXd& P_w_state, const SmoothMap& h,
                             const Eigen::MatrixXd& P_v, const UTWeights& weights) {
  const Eigen::Index n = mean.size();
  const Eigen::MatrixXd sigma = sigma_points(mean, cov, weights.lambda);
  const Eigen::Index count = sigma.cols();

  Eigen::VectorXd joint(n + u.size());
  Eigen::MatrixXd fx(f.codomain(), count);
  Eigen::MatrixXd hy(h.codomain(), count);
  for (Eigen::Index i = 0; i < count; ++i) {
    joint << sigma.col(i), u;
    fx.col(i) = f(joint);
    hy.col(i) = h(sigma.col(i));
  }

  UTResult out;
  out.pred_mean = fx * weights.mean_weights;
  out.pred_output = hy * weights.mean_weights;

  out.pred_cov = P_w_state;
  out.innov_cov = P_v;
  out.cross_cov = Eigen::MatrixXd::Zero(n, h.codomain());
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::VectorXd df = fx.col(i) - out.pred_mean;
    const Eigen::VectorXd dh = hy.col(i) - out.pred_output;
    out.pred_cov += weights.cov_weights[i] * df * df.transpose();
    out.innov_cov += weights.cov_weights[i] * dh * dh.transpose();
    out.cross_cov += weights.cov_weights[i] * (sigma.col(i) - mean) * dh.transpose();
  }
  out.pred_cov = symmetrized(out.pred_cov);
  out.innov_cov = symmetrized(out.innov_cov);
  return out;
}

UkfStepResult ukf_step(const FilterState& prev, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& y, const SmoothMap& f, const SmoothMap& h,
                       const Eigen::MatrixXd& P_w_state, const Eigen::MatrixXd& P_v,
                       const UTWeights& weights, const DetectorConfig& detector) {
  const UTResult ut = unscented_transform(prev.mean, prev.cov, f, u, P_w_state, h, P_v, weights);

  Eigen::VectorXd residual = y - h(prev.mean);
  const double zero_scale = 1e-14 * (1.0 + ut.pred_output.squaredNorm());
  const Eigen::MatrixXd pinv = psd_pseudo_inverse(ut.innov_cov, zero_scale);
  const Eigen::MatrixXd gain = ut.cross_cov * pinv;
  const double nis = residual.dot(pinv * residual);

  UkfStepResult out;
  out.state.mean = ut.pred_mean + gain * (y - ut.pred_output);
  out.state.cov = symmetrized(ut.pred_cov - gain * ut.innov_cov * gain.transpose());
  out.state.gain = gain;
  out.state.pred_mean = ut.pred_mean;
  out.state.pred_cov = ut.pred_cov;
  out.state.innov_cov = ut.innov_cov;
  out.state.cross_cov = ut.cross_cov;
  out.residual = std::move(residual);
  out.nis = nis;
  out.alarm = nis > detector.threshold;
  return out;
}

Ellipsoid tolerance_region(const Eigen::MatrixXd& innov_cov, const DetectorConfig& detector) {
  if (detector.threshold <= 0.0)
    throw std::invalid_argument("tolerance_region: threshold must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(innov_cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("tolerance_region: innovation covariance is singular");
  const Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(innov_cov.rows(), innov_cov.cols()));
  return Ellipsoid(Eigen::VectorXd::Zero(innov_cov.rows()),
                   0.5 * (inv + inv.transpose()) / detector.threshold);
}

}  // namespace reachrisk
