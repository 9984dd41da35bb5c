#include "isac_fbl/crb.hpp"

#include <Eigen/Eigenvalues>
#include <numeric>
#include <string>

#include "isac_fbl/gram_geometry.hpp"

namespace isac_fbl {

namespace {

// relative eigenvalue cutoff below which the FIM counts as singular
constexpr double kFimTolerance = 1e-12;

void check_shapes(const JacobianMatrix& jacobian,
                  const Eigen::MatrixXcd& gram) {
  const int k = jacobian.users();
  if (k < 1) throw InvalidSpec("fisher_information: empty Jacobian");
  if (jacobian.antennas < 1)
    throw InvalidSpec("fisher_information: antennas must be >= 1");
  if (gram.rows() != k || gram.cols() != k)
    throw InvalidSpec("fisher_information: Gram matrix must be k x k (k = " +
                      std::to_string(k) + ")");
  for (const auto& block : jacobian.blocks) {
    if (block.rows() != jacobian.antennas)
      throw InvalidSpec("fisher_information: block row count != antennas");
    if (block.cols() < 1)
      throw InvalidSpec("fisher_information: empty parameter block");
  }
}

}  // namespace

int JacobianMatrix::total_params() const {
  return std::accumulate(blocks.begin(), blocks.end(), 0,
                         [](int acc, const Eigen::MatrixXcd& b) {
                           return acc + static_cast<int>(b.cols());
                         });
}

std::vector<int> JacobianMatrix::offsets() const {
  std::vector<int> off(blocks.size(), 0);
  int acc = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    off[i] = acc;
    acc += static_cast<int>(blocks[i].cols());
  }
  return off;
}

Eigen::MatrixXcd JacobianMatrix::dense() const {
  const int k = users();
  const int q = total_params();
  const std::vector<int> off = offsets();
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(antennas) * k, q);
  for (int i = 0; i < k; ++i)
    j.block(static_cast<Eigen::Index>(i) * antennas, off[i], antennas,
            blocks[i].cols()) = blocks[i];
  return j;
}

Eigen::MatrixXd fisher_information(const JacobianMatrix& jacobian,
                                   const Eigen::MatrixXcd& gram,
                                   double sigma_n2) {
  if (!(sigma_n2 > 0.0))
    throw InvalidSpec("fisher_information: sigma_n2 must be > 0");
  check_shapes(jacobian, gram);

  const int k = jacobian.users();
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                       Eigen::EigenvaluesOnly);
    const double ev_min = es.eigenvalues()(0);
    const double ev_max = es.eigenvalues()(k - 1);
    if (!(ev_min > 0.0) || !(ev_min > kRankTolerance * ev_max))
      throw SingularGram(
          "fisher_information: Gram matrix is not positive definite");
  }

  const int q = jacobian.total_params();
  const std::vector<int> off = jacobian.offsets();
  const double scale = 2.0 / sigma_n2;

  Eigen::MatrixXd fim(q, q);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const Eigen::MatrixXcd cross =
          std::conj(gram(a, b)) * (jacobian.blocks[a].adjoint() *
                                   jacobian.blocks[b]);
      fim.block(off[a], off[b], cross.rows(), cross.cols()) =
          scale * cross.real();
    }
  }
  // exact symmetry is lost to rounding when the (a,b) and (b,a) products are
  // accumulated separately; restore it explicitly
  fim = 0.5 * (fim + fim.transpose()).eval();
  return fim;
}

CrbResult crb_trace(const JacobianMatrix& jacobian,
                    const Eigen::MatrixXcd& gram, double sigma_n2,
                    bool pseudo_inverse) {
  CrbResult result;
  result.fim = fisher_information(jacobian, gram, sigma_n2);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(result.fim);
  const Eigen::VectorXd& values = es.eigenvalues();  // ascending
  const int q = static_cast<int>(values.size());
  const double ev_max = values(q - 1);
  if (!(ev_max > 0.0))
    throw SingularFim("crb_trace: Fisher information is zero");
  const double cutoff = kFimTolerance * ev_max;
  if (!pseudo_inverse && !(values(0) > cutoff))
    throw SingularFim(
        "crb_trace: Fisher information numerically singular (eigenvalue "
        "ratio " +
        std::to_string(values(0) / ev_max) + ")");

  // diag(F^{-1}) = sum_j v_ij^2 / lambda_j over retained eigenpairs
  result.per_parameter = Eigen::VectorXd::Zero(q);
  for (int j = 0; j < q; ++j) {
    if (values(j) <= cutoff) continue;  // only reachable in pseudo mode
    result.per_parameter +=
        es.eigenvectors().col(j).cwiseAbs2() / values(j);
  }
  result.crb_trace = result.per_parameter.sum();
  return result;
}

}  // namespace isac_fbl
