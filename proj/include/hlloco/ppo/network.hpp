#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

namespace hlloco::ppo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Fully connected network with ReLU hidden layers and a linear output.
/// Parameters live in one flat vector: for each layer the weight matrix
/// (out x in, row-major) followed by the bias.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes);

  /// He-uniform weights, zero biases; the last layer is scaled by
  /// `output_scale`.
  void init(std::mt19937_64& rng, double output_scale);

  const std::vector<int>& sizes() const { return sizes_; }
  int layers() const { return static_cast<int>(sizes_.size()) - 1; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  Eigen::Index num_params() const { return params_.size(); }
  VectorXd& params() { return params_; }
  const VectorXd& params() const { return params_; }

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>;
  Eigen::Map<const RowMajor> weight(int layer) const;
  Eigen::Map<const VectorXd> bias(int layer) const;
  Eigen::Map<RowMajor> weight(int layer);
  Eigen::Map<VectorXd> bias(int layer);

  /// Layer inputs kept for backward.
  struct Cache {
    std::vector<MatrixXd> input;
  };

  /// X is (input_dim x batch); returns (output_dim x batch).
  MatrixXd forward(const MatrixXd& X, Cache* cache = nullptr) const;

  /// Adds dL/dparams to `grad` given dL/doutput (output_dim x batch).
  void backward(const Cache& cache, const MatrixXd& d_out,
                VectorXd& grad) const;

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::Index> offsets_;  ///< start of each layer's weights
  VectorXd params_;
};

/// Gaussian policy with a state-independent fixed std in normalized action
/// units, plus a separate value network.
struct Policy {
  Mlp actor;   ///< obs -> pre-sigmoid action
  Mlp critic;  ///< obs -> value
  double sigma = 0.15;

  static Policy create(int obs_dim, int act_dim, const std::vector<int>& hidden,
                       double sigma, std::mt19937_64& rng);

  int obs_dim() const { return actor.input_dim(); }
  int act_dim() const { return actor.output_dim(); }

  /// Action mean 2 sigmoid(z) - 1, inside [-1, 1]. obs is (obs_dim x batch).
  MatrixXd mean(const MatrixXd& obs, Mlp::Cache* cache = nullptr) const;
  /// (1 x batch)
  MatrixXd value(const MatrixXd& obs, Mlp::Cache* cache = nullptr) const;
};

/// log N(raw; mean, sigma^2 I).
double log_prob(const VectorXd& raw, const VectorXd& mean, double sigma);

struct ActionSample {
  VectorXd raw;     ///< unclipped Gaussian draw
  VectorXd action;  ///< raw clipped to [-1, 1]
  double log_prob = 0.0;  ///< of raw
};

ActionSample sample_action(const VectorXd& mean, double sigma,
                           std::mt19937_64& rng);

/// Adam on a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index n, double lr);

  void step(VectorXd& params, const VectorXd& grad);
  double lr() const { return lr_; }
  long steps() const { return t_; }

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  VectorXd m_, v_;
};

}  // namespace hlloco::ppo
