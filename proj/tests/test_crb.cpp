#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "isac_fbl/channel_3gpp.hpp"
#include "isac_fbl/crb.hpp"
#include "isac_fbl/rng.hpp"
#include "test_helpers.hpp"

using namespace isac_fbl;
using test_helpers::fim_dense_oracle;
using test_helpers::identity_signal;

namespace {

JacobianMatrix random_jacobian(int m, int k, int q_each, std::uint64_t seed) {
  GaussianStream stream(seed);
  JacobianMatrix jac;
  jac.antennas = m;
  for (int i = 0; i < k; ++i) {
    Eigen::MatrixXcd block(m, q_each);
    for (int c = 0; c < q_each; ++c)
      for (int r = 0; r < m; ++r) block(r, c) = stream.complex_normal(1.0);
    jac.blocks.push_back(std::move(block));
  }
  return jac;
}

Eigen::MatrixXcd random_gram(int n, int k, double p_bar, std::uint64_t seed) {
  const ActiveSignal sig = sample_active_codewords(
      {n, 6.0, k, p_bar}, seed);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(k, k);
  g.selfadjointView<Eigen::Lower>().rankUpdate(sig.matrix);
  g = g.selfadjointView<Eigen::Lower>();
  return g;
}

RadioConfig ref_radio(int n, int m, double fc = 28e9) {
  RadioConfig r;
  r.fc = fc;
  r.Ts = 4e-6;
  r.n = n;
  r.m = m;
  return r;
}

}  // namespace

TEST_CASE("jacobian container bookkeeping") {
  const JacobianMatrix jac = random_jacobian(4, 3, 2, 1);
  CHECK(jac.users() == 3);
  CHECK(jac.total_params() == 6);
  const std::vector<int> off = jac.offsets();
  REQUIRE(off.size() == 3);
  CHECK(off[0] == 0);
  CHECK(off[1] == 2);
  CHECK(off[2] == 4);

  const Eigen::MatrixXcd dense = jac.dense();
  REQUIRE(dense.rows() == 12);
  REQUIRE(dense.cols() == 6);
  // user i occupies rows [4i, 4i+4) and columns [2i, 2i+2); elsewhere zero
  for (int i = 0; i < 3; ++i) {
    CHECK((dense.block(4 * i, 2 * i, 4, 2) - jac.blocks[i]).squaredNorm() ==
          0.0);
    for (int j = 0; j < 3; ++j)
      if (i != j)
        CHECK(dense.block(4 * i, 2 * j, 4, 2).squaredNorm() == 0.0);
  }
}

TEST_CASE("blockwise Fisher information equals the dense Kronecker oracle") {
  for (const std::uint64_t seed : {2ull, 3ull}) {
    const JacobianMatrix jac = random_jacobian(4, 3, 2, seed);
    const Eigen::MatrixXcd gram = random_gram(32, 3, 1.0, seed + 100);
    const Eigen::MatrixXd fim = fisher_information(jac, gram, 0.7);
    const Eigen::MatrixXd oracle = fim_dense_oracle(jac, gram, 0.7);
    CHECK((fim - oracle).norm() / oracle.norm() < 1e-10);
  }
}

TEST_CASE("Fisher information is symmetric PSD") {
  const JacobianMatrix jac = random_jacobian(5, 4, 3, 9);
  const Eigen::MatrixXcd gram = random_gram(64, 4, 2.0, 10);
  const Eigen::MatrixXd fim = fisher_information(jac, gram, 1.0);
  CHECK((fim - fim.transpose()).norm() == 0.0);  // symmetrized exactly
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fim,
                                                    Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) > -1e-10 * es.eigenvalues()(11));
}

TEST_CASE("noise and Gram scaling laws") {
  const JacobianMatrix jac = random_jacobian(4, 2, 1, 21);
  const Eigen::MatrixXcd gram = random_gram(32, 2, 1.0, 22);

  const CrbResult base = crb_trace(jac, gram, 1.0);
  // doubling the noise doubles every CRB
  const CrbResult noisy = crb_trace(jac, gram, 2.0);
  CHECK(noisy.crb_trace ==
        doctest::Approx(2.0 * base.crb_trace).epsilon(1e-12).scale(0.0));
  // doubling the signal energy (Gram) halves it: CRB is 1/SNR
  const CrbResult strong = crb_trace(jac, (2.0 * gram).eval(), 1.0);
  CHECK(strong.crb_trace ==
        doctest::Approx(0.5 * base.crb_trace).epsilon(1e-12).scale(0.0));
}

TEST_CASE("frozen single-user range CRB at the reference point") {
  // orthogonal signal, n = 1000, p_bar = 10, m = 10 antennas, 28 GHz:
  // F = (2 / sigma) n p_bar m (4 pi / lambda)^2
  const Eigen::MatrixXcd gram = [] {
    const ActiveSignal sig = identity_signal(1000, 1, 10.0);
    Eigen::MatrixXcd g(1, 1);
    g(0, 0) = sig.matrix.row(0).squaredNorm();
    return g;
  }();
  const std::vector<UserState> user{UserState{0.3, 50.0, 10.0}};
  const JacobianMatrix jac =
      build_jacobian(user, ref_radio(1000, 10), SensingParameter::range);
  const CrbResult res = crb_trace(jac, gram, 1.0);
  CHECK(res.fim(0, 0) ==
        doctest::Approx(275120705793.922).epsilon(1e-9));
  CHECK(res.crb_trace ==
        doctest::Approx(3.6347682269652427e-12).epsilon(1e-9).scale(0.0));
  REQUIRE(res.per_parameter.size() == 1);
  CHECK(res.per_parameter(0) == res.crb_trace);
}

TEST_CASE("per-parameter CRB matches a dense inverse oracle") {
  const JacobianMatrix jac = random_jacobian(6, 3, 2, 33);
  const Eigen::MatrixXcd gram = random_gram(48, 3, 1.5, 34);
  const CrbResult res = crb_trace(jac, gram, 0.9);

  const Eigen::MatrixXd inv = res.fim.inverse();
  CHECK(std::abs(res.crb_trace - inv.trace()) <
        1e-9 * std::abs(inv.trace()));
  for (int i = 0; i < 6; ++i)
    CHECK(res.per_parameter(i) ==
          doctest::Approx(inv(i, i)).epsilon(1e-9).scale(0.0));
  CHECK(res.per_parameter.sum() ==
        doctest::Approx(res.crb_trace).epsilon(1e-12).scale(0.0));
}

TEST_CASE("singular Gram is rejected") {
  const JacobianMatrix jac = random_jacobian(4, 2, 1, 40);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Constant(2, 2, 1.0);  // rank 1
  CHECK_THROWS_AS(fisher_information(jac, gram, 1.0), SingularGram);
}

TEST_CASE("joint range-velocity estimation is singular by construction") {
  // range and velocity enter through a common phase, so their sensitivity
  // columns are colinear and the joint FIM loses rank
  const std::vector<UserState> users{UserState{0.2, 60.0, 5.0},
                                     UserState{-0.4, 140.0, -12.0}};
  const RadioConfig radio = ref_radio(800, 6);
  const JacobianMatrix full = build_jacobian(users, radio);
  JacobianMatrix rv;
  rv.antennas = full.antennas;
  for (const auto& block : full.blocks) rv.blocks.push_back(block.rightCols(2));
  const Eigen::MatrixXcd gram = random_gram(800, 2, 1.0, 50);

  CHECK_THROWS_AS(crb_trace(rv, gram, 1.0), SingularFim);

  // the pseudo-inverse escape hatch stays finite and keeps only the
  // informative directions
  const CrbResult pseudo = crb_trace(rv, gram, 1.0, true);
  CHECK(std::isfinite(pseudo.crb_trace));
  CHECK(pseudo.crb_trace > 0.0);
}

TEST_CASE("zero jacobian: zero FIM, singular CRB") {
  JacobianMatrix jac;
  jac.antennas = 3;
  jac.blocks.assign(2, Eigen::MatrixXcd::Zero(3, 1));
  const Eigen::MatrixXcd gram = random_gram(16, 2, 1.0, 60);
  const Eigen::MatrixXd fim = fisher_information(jac, gram, 1.0);
  CHECK(fim.norm() == 0.0);
  CHECK_THROWS_AS(crb_trace(jac, gram, 1.0), SingularFim);
  CHECK_THROWS_AS(crb_trace(jac, gram, 1.0, true), SingularFim);
}

TEST_CASE("input validation") {
  const JacobianMatrix jac = random_jacobian(4, 2, 1, 70);
  const Eigen::MatrixXcd gram = random_gram(16, 2, 1.0, 71);
  CHECK_THROWS_AS(fisher_information(jac, gram, 0.0), InvalidSpec);
  CHECK_THROWS_AS(fisher_information(jac, Eigen::MatrixXcd::Identity(3, 3), 1.0),
                  InvalidSpec);
  JacobianMatrix empty;
  empty.antennas = 4;
  CHECK_THROWS_AS(fisher_information(empty, gram, 1.0), InvalidSpec);
}

TEST_CASE("more antennas never hurt: AoA CRB decreases with m") {
  const std::vector<UserState> user{UserState{0.35, 90.0, 4.0}};
  double previous = std::numeric_limits<double>::infinity();
  for (const int m : {8, 64, 128}) {
    const JacobianMatrix jac =
        build_jacobian(user, ref_radio(1000, m), SensingParameter::aoa);
    Eigen::MatrixXcd gram(1, 1);
    gram(0, 0) = 1000.0 * 10.0;  // orthogonal unit-user Gram at p_bar = 10
    const double crb = crb_trace(jac, gram, 1.0).crb_trace;
    CHECK(crb < previous);
    previous = crb;
  }
}

TEST_CASE("range CRB scales exactly as 1/m under an orthogonal Gram") {
  const std::vector<UserState> user{UserState{0.1, 70.0, -3.0}};
  Eigen::MatrixXcd gram(1, 1);
  gram(0, 0) = 1000.0 * 10.0;
  const double crb8 =
      crb_trace(build_jacobian(user, ref_radio(1000, 8), SensingParameter::range),
                gram, 1.0)
          .crb_trace;
  const double crb64 =
      crb_trace(build_jacobian(user, ref_radio(1000, 64), SensingParameter::range),
                gram, 1.0)
          .crb_trace;
  CHECK(crb64 / crb8 == doctest::Approx(1.0 / 8.0).epsilon(1e-9));
}
