#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stc/ae/autoencoder.hpp"
#include "stc/common/error.hpp"
#include "stc/common/matrix.hpp"
#include "stc/corpus/labels.hpp"
#include "stc/nn/loss.hpp"

namespace stc::sca {

/// Student-t kernel with one degree of freedom:
/// q_ij = (1 + |z_i - u_j|^2)^-1 / sum_j' (1 + |z_i - u_j'|^2)^-1.
template <typename T>
Matrix<T> soft_assign(const Matrix<T>& z, const Matrix<T>& centers) {
  require(centers.rows() >= 2, ErrorKind::invalid_argument, "need at least two cluster centers");
  require(z.cols() == centers.cols(), ErrorKind::shape_mismatch, "latent and center dimensions differ");
  Matrix<T> q(z.rows(), centers.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < centers.rows(); ++j)
      q(i, j) = T(1) / (T(1) + (z.row(i) - centers.row(j)).squaredNorm());
    q.row(i) /= q.row(i).sum();
  }
  return q;
}

/// p_ij = (q_ij^2 / f_j) / sum_j' (q_ij'^2 / f_j') with f_j = sum_i q_ij.
template <typename T>
Matrix<T> target_distribution(const Matrix<T>& q) {
  require(q.rows() >= 1 && q.cols() >= 1, ErrorKind::empty_input, "empty assignment matrix");
  const RowVector<T> frequency = q.colwise().sum();
  Matrix<T> p(q.rows(), q.cols());
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    p.row(i) = q.row(i).array().square() / frequency.array();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

/// KL(P || Q) = sum_ij p_ij ln(p_ij / q_ij). P is a constant target;
/// grad is dL/dq_ij = -p_ij / q_ij.
template <typename T>
nn::LossAndGradient<T> kl_loss(const Matrix<T>& p, const Matrix<T>& q) {
  require(p.rows() == q.rows() && p.cols() == q.cols(), ErrorKind::shape_mismatch,
          "P and Q differ in shape");
  nn::LossAndGradient<T> out{T(0), Matrix<T>(q.rows(), q.cols())};
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const T pij = p(i, j);
      const T qij = q(i, j);
      if (pij > T(0)) out.loss += pij * std::log(pij / qij);
      out.grad(i, j) = -pij / qij;
    }
  return out;
}

template <typename T>
struct SoftAssignGradients {
  Matrix<T> z;
  Matrix<T> centers;
};

/// Chain rule through soft_assign for an arbitrary upstream dL/dQ.
template <typename T>
SoftAssignGradients<T> soft_assign_backward(const Matrix<T>& z, const Matrix<T>& centers,
                                            const Matrix<T>& q, const Matrix<T>& dq) {
  SoftAssignGradients<T> g{Matrix<T>::Zero(z.rows(), z.cols()), Matrix<T>::Zero(centers.rows(), centers.cols())};
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const T mean_grad = q.row(i).dot(dq.row(i));
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      const RowVector<T> diff = z.row(i) - centers.row(j);
      const T kernel = T(1) / (T(1) + diff.squaredNorm());
      // dL/d|z_i - u_j|^2 = -kernel * q_ij * (dq_ij - sum_j' q_ij' dq_ij')
      const T dd = -kernel * q(i, j) * (dq(i, j) - mean_grad);
      g.z.row(i) += (T(2) * dd) * diff;
      g.centers.row(j) -= (T(2) * dd) * diff;
    }
  }
  return g;
}

std::vector<std::size_t> argmax_rows(const MatrixD& q);

struct FinetuneConfig {
  std::size_t k = 2;
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 64;
  int max_epochs = 100;
  double tol = 0.001;  // stop when fewer than this fraction of labels change
  int kmeans_restarts = 10;
  std::uint64_t seed = 0;
};

struct EpochLog {
  int epoch = 0;
  double kl_loss = 0.0;  // mean over samples of KL(p_i || q_i) at epoch start
  double label_change_fraction = 0.0;
  std::optional<double> acc;
  std::optional<double> nmi;
};

struct FinetuneResult {
  ae::AutoencoderModel model;  // encoder fine-tuned, decoder untouched
  std::vector<std::size_t> labels;
  MatrixF latent;
  MatrixF centers;
  std::vector<EpochLog> history;
  bool converged = false;
  /// Epoch checks at which some soft cluster frequency f_j fell below 1.
  std::size_t empty_cluster_warnings = 0;
};

/// Centers start from k-means on the pretrained latent. Each epoch
/// recomputes Q and P on the full data, checks the label-change stopping
/// rule (from the second check on), then runs minibatch SGD with momentum
/// on the batch-mean KL loss, updating encoder weights and centers.
FinetuneResult finetune_sca(ae::AutoencoderModel model, const MatrixF& x, const FinetuneConfig& config,
                            const corpus::LabelVector* truth = nullptr);

}  // namespace stc::sca
