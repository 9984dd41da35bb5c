#include "isac_fbl/channel_3gpp.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace isac_fbl {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void validate_users(const std::vector<UserState>& users) {
  if (users.empty()) throw InvalidSpec("channel: no users");
  for (std::size_t i = 0; i < users.size(); ++i) {
    const UserState& u = users[i];
    if (!std::isfinite(u.theta) || std::abs(u.theta) >= kHalfPi)
      throw InvalidSpec("channel: user " + std::to_string(i) +
                        " theta must satisfy |theta| < pi/2");
    if (!std::isfinite(u.range) || u.range <= 0.0)
      throw InvalidSpec("channel: user " + std::to_string(i) +
                        " range must be > 0");
    if (!std::isfinite(u.velocity))
      throw InvalidSpec("channel: user " + std::to_string(i) +
                        " velocity must be finite");
  }
}

}  // namespace

void RadioConfig::validate() const {
  if (!(fc > 0.0)) throw InvalidSpec("radio: fc must be > 0");
  if (!(c > 0.0)) throw InvalidSpec("radio: c must be > 0");
  if (!(Ts > 0.0)) throw InvalidSpec("radio: Ts must be > 0");
  if (n < 1) throw InvalidSpec("radio: n must be >= 1");
  if (m < 1) throw InvalidSpec("radio: m must be >= 1");
  if (d_a && !(*d_a > 0.0)) throw InvalidSpec("radio: d_a must be > 0");
}

Eigen::MatrixXcd build_channel(const std::vector<UserState>& users,
                               const RadioConfig& radio) {
  radio.validate();
  validate_users(users);
  const int m = radio.m;
  const int k = static_cast<int>(users.size());
  const double lambda = radio.wavelength();
  const double da = radio.spacing();
  const double t_obs = radio.t_obs();
  const std::complex<double> jimag(0.0, 1.0);

  Eigen::MatrixXcd h(m, k);
  for (int i = 0; i < k; ++i) {
    const UserState& u = users[i];
    // range and Doppler phases are antenna-independent
    const double phase = -4.0 * std::numbers::pi * radio.fc * u.range / radio.c +
                         4.0 * std::numbers::pi * radio.fc * u.velocity * t_obs /
                             radio.c;
    const std::complex<double> common = u.beta * std::exp(jimag * phase);
    const double aoa_step =
        -2.0 * std::numbers::pi / lambda * da * std::sin(u.theta);
    for (int j = 0; j < m; ++j)
      h(j, i) = common * std::exp(jimag * (aoa_step * static_cast<double>(j)));
  }
  return h;
}

JacobianMatrix build_jacobian(const std::vector<UserState>& users,
                              const RadioConfig& radio) {
  const Eigen::MatrixXcd h = build_channel(users, radio);
  const int m = radio.m;
  const double lambda = radio.wavelength();
  const double da = radio.spacing();
  const double t_obs = radio.t_obs();
  const std::complex<double> jimag(0.0, 1.0);

  JacobianMatrix jac;
  jac.antennas = m;
  jac.blocks.reserve(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const UserState& u = users[i];
    // phase derivatives of the channel entries: range and velocity scale all
    // antennas uniformly, angle picks up the per-antenna array factor
    const std::complex<double> d_range = -jimag * 4.0 * std::numbers::pi / lambda;
    const std::complex<double> d_velocity =
        jimag * 4.0 * std::numbers::pi * radio.fc * t_obs / radio.c;
    const double aoa_scale =
        -2.0 * std::numbers::pi / lambda * da * std::cos(u.theta);

    Eigen::MatrixXcd block(m, 3);
    for (int j = 0; j < m; ++j) {
      const std::complex<double> entry = h(j, static_cast<int>(i));
      block(j, 0) = entry * jimag * (aoa_scale * static_cast<double>(j));
      block(j, 1) = entry * d_range;
      block(j, 2) = entry * d_velocity;
    }
    jac.blocks.push_back(std::move(block));
  }
  return jac;
}

JacobianMatrix build_jacobian(const std::vector<UserState>& users,
                              const RadioConfig& radio,
                              SensingParameter parameter) {
  JacobianMatrix full = build_jacobian(users, radio);
  const int col = static_cast<int>(parameter);
  JacobianMatrix out;
  out.antennas = full.antennas;
  out.blocks.reserve(full.blocks.size());
  for (const auto& block : full.blocks) out.blocks.push_back(block.col(col));
  return out;
}

JacobianMatrix finite_difference_jacobian(const std::vector<UserState>& users,
                                          const RadioConfig& radio,
                                          const FiniteDiffSteps& steps) {
  radio.validate();
  validate_users(users);
  if (!(steps.theta > 0.0) || !(steps.range > 0.0) || !(steps.velocity > 0.0))
    throw InvalidSpec("finite_difference_jacobian: steps must be > 0");

  const int m = radio.m;
  JacobianMatrix jac;
  jac.antennas = m;
  jac.blocks.assign(users.size(), Eigen::MatrixXcd::Zero(m, 3));

  // each user's parameters only move that user's column, so one pair of
  // channel evaluations per (user, parameter) suffices
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      double step = 0.0;
      std::vector<UserState> lo = users;
      std::vector<UserState> hi = users;
      switch (c) {
        case 0:
          step = steps.theta;
          lo[i].theta -= step;
          hi[i].theta += step;
          break;
        case 1:
          step = steps.range;
          lo[i].range -= step;
          hi[i].range += step;
          break;
        default:
          step = steps.velocity;
          lo[i].velocity -= step;
          hi[i].velocity += step;
          break;
      }
      const Eigen::MatrixXcd h_lo = build_channel(lo, radio);
      const Eigen::MatrixXcd h_hi = build_channel(hi, radio);
      jac.blocks[i].col(c) = (h_hi.col(static_cast<int>(i)) -
                              h_lo.col(static_cast<int>(i))) /
                             (2.0 * step);
    }
  }
  return jac;
}

}  // namespace isac_fbl
