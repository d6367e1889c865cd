#include "hlloco/ppo/network.hpp"

#include <cmath>

#include "hlloco/common/errors.hpp"

namespace hlloco::ppo {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw InvalidConfig("network needs at least one layer");
  Eigen::Index n = 0;
  for (int l = 0; l < layers(); ++l) {
    offsets_.push_back(n);
    n += static_cast<Eigen::Index>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_ = VectorXd::Zero(n);
}

void Mlp::init(std::mt19937_64& rng, double output_scale) {
  for (int l = 0; l < layers(); ++l) {
    const double limit = std::sqrt(6.0 / sizes_[l]);
    std::uniform_real_distribution<double> u(-limit, limit);
    const double scale = l + 1 == layers() ? output_scale : 1.0;
    auto W = weight(l);
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
      for (Eigen::Index j = 0; j < W.cols(); ++j) W(i, j) = scale * u(rng);
    }
    bias(l).setZero();
  }
}

Eigen::Map<const Mlp::RowMajor> Mlp::weight(int l) const {
  return {params_.data() + offsets_[l], sizes_[l + 1], sizes_[l]};
}
Eigen::Map<const VectorXd> Mlp::bias(int l) const {
  return {params_.data() + offsets_[l] +
              static_cast<Eigen::Index>(sizes_[l + 1]) * sizes_[l],
          sizes_[l + 1]};
}
Eigen::Map<Mlp::RowMajor> Mlp::weight(int l) {
  return {params_.data() + offsets_[l], sizes_[l + 1], sizes_[l]};
}
Eigen::Map<VectorXd> Mlp::bias(int l) {
  return {params_.data() + offsets_[l] +
              static_cast<Eigen::Index>(sizes_[l + 1]) * sizes_[l],
          sizes_[l + 1]};
}

MatrixXd Mlp::forward(const MatrixXd& X, Cache* cache) const {
  if (cache) cache->input.assign(1, X);
  MatrixXd a = X;
  for (int l = 0; l < layers(); ++l) {
    MatrixXd z = weight(l) * a;
    z.colwise() += bias(l);
    if (l + 1 < layers()) {
      a = z.cwiseMax(0.0);
      if (cache) cache->input.push_back(a);
    } else {
      a = std::move(z);
    }
  }
  return a;
}

void Mlp::backward(const Cache& cache, const MatrixXd& d_out,
                   VectorXd& grad) const {
  MatrixXd delta = d_out;
  for (int l = layers() - 1; l >= 0; --l) {
    const MatrixXd& in = cache.input[l];
    Eigen::Map<RowMajor> gW(grad.data() + offsets_[l], sizes_[l + 1],
                            sizes_[l]);
    gW.noalias() += delta * in.transpose();
    Eigen::Map<VectorXd> gb(
        grad.data() + offsets_[l] +
            static_cast<Eigen::Index>(sizes_[l + 1]) * sizes_[l],
        sizes_[l + 1]);
    gb += delta.rowwise().sum();
    if (l == 0) break;
    MatrixXd back = weight(l).transpose() * delta;
    // ReLU derivative from the stored post-activation.
    delta = back.cwiseProduct((in.array() > 0.0).cast<double>().matrix());
  }
}

Policy Policy::create(int obs_dim, int act_dim, const std::vector<int>& hidden,
                      double sigma, std::mt19937_64& rng) {
  if (!(sigma > 0.0)) throw InvalidConfig("action std must be positive");
  std::vector<int> a{obs_dim}, c{obs_dim};
  a.insert(a.end(), hidden.begin(), hidden.end());
  c.insert(c.end(), hidden.begin(), hidden.end());
  a.push_back(act_dim);
  c.push_back(1);
  Policy p{Mlp(a), Mlp(c), sigma};
  p.actor.init(rng, 0.01);
  p.critic.init(rng, 1.0);
  return p;
}

MatrixXd Policy::mean(const MatrixXd& obs, Mlp::Cache* cache) const {
  const MatrixXd z = actor.forward(obs, cache);
  return z.unaryExpr([](double v) { return 2.0 / (1.0 + std::exp(-v)) - 1.0; });
}

MatrixXd Policy::value(const MatrixXd& obs, Mlp::Cache* cache) const {
  return critic.forward(obs, cache);
}

double log_prob(const VectorXd& raw, const VectorXd& mean, double sigma) {
  const double k = raw.size();
  return -0.5 * (raw - mean).squaredNorm() / (sigma * sigma) -
         k * (std::log(sigma) + 0.5 * std::log(2.0 * M_PI));
}

ActionSample sample_action(const VectorXd& mean, double sigma,
                           std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ActionSample s;
  s.raw = mean;
  for (Eigen::Index i = 0; i < mean.size(); ++i) s.raw[i] += sigma * n(rng);
  s.action = s.raw.cwiseMax(-1.0).cwiseMin(1.0);
  s.log_prob = log_prob(s.raw, mean, sigma);
  return s;
}

Adam::Adam(Eigen::Index n, double lr)
    : lr_(lr), m_(VectorXd::Zero(n)), v_(VectorXd::Zero(n)) {}

void Adam::step(VectorXd& params, const VectorXd& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -=
      lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace hlloco::ppo
