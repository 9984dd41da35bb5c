#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "isac_fbl/crb.hpp"
#include "isac_fbl/errors.hpp"

namespace isac_fbl {

// Kinematic state of one sensed user: angle of arrival theta (radians,
// |theta| < pi/2), range r (meters, > 0), radial velocity v (m/s), complex
// gain beta.
struct UserState {
  double theta = 0.0;
  double range = 0.0;
  double velocity = 0.0;
  std::complex<double> beta{1.0, 0.0};
};

// Carrier and array parameters of the line-of-sight link. d_a is the antenna
// spacing in meters; when unset it defaults to half the carrier wavelength,
// which keeps the electrical aperture fixed across carrier-frequency sweeps.
struct RadioConfig {
  double fc = 0.0;          // carrier frequency, Hz
  double c = 3e8;           // propagation speed, m/s
  double Ts = 0.0;          // symbol period, s
  int n = 0;                // blocklength, sets the observation window
  int m = 0;                // receive antennas (uniform linear array)
  std::optional<double> d_a;

  double wavelength() const { return c / fc; }
  double spacing() const { return d_a ? *d_a : 0.5 * wavelength(); }
  double t_obs() const { return static_cast<double>(n) * Ts; }

  void validate() const;  // throws InvalidSpec
};

// Line-of-sight channel matrix, one column per user:
//   H(j, i) = beta_i exp(-j2pi/lambda d_a (j-1) sin theta_i)
//             exp(-j4pi fc r_i / c) exp(+j4pi fc v_i t_obs / c)
// with 1-based antenna index j and t_obs = n Ts. Throws InvalidSpec on
// out-of-range user states.
Eigen::MatrixXcd build_channel(const std::vector<UserState>& users,
                               const RadioConfig& radio);

// Parameter ordering of the 3-column per-user Jacobian blocks.
enum class SensingParameter { aoa = 0, range = 1, velocity = 2 };

// Analytic Jacobian with respect to (theta_i, r_i, v_i) per user. Each entry
// is the channel entry scaled by the phase derivative:
//   d/dtheta: -j (2pi/lambda) d_a (j-1) cos theta_i
//   d/dr:     -j 4pi fc / c
//   d/dv:     +j 4pi fc t_obs / c.
JacobianMatrix build_jacobian(const std::vector<UserState>& users,
                              const RadioConfig& radio);

// The single column of build_jacobian for one parameter class, as m x 1
// blocks. Used when ranges and velocities are estimated separately; their
// joint FIM is singular because both enter the channel through a common
// phase.
JacobianMatrix build_jacobian(const std::vector<UserState>& users,
                              const RadioConfig& radio,
                              SensingParameter parameter);

// Central-difference step sizes per parameter class, pre-scaled to the very
// different sensitivities of angle, range, and velocity. The velocity step is
// the largest because its phase increment per step is the smallest and would
// otherwise drown in the rounding of the accumulated carrier phase (tens of
// thousands of radians at typical fc and range).
struct FiniteDiffSteps {
  double theta = 1e-6;
  double range = 1e-7;
  double velocity = 1e-5;
};

// Central-difference Jacobian through build_channel, for validating the
// analytic phase derivatives. Throws InvalidSpec when a perturbed state
// leaves its valid range.
JacobianMatrix finite_difference_jacobian(const std::vector<UserState>& users,
                                          const RadioConfig& radio,
                                          const FiniteDiffSteps& steps = {});

}  // namespace isac_fbl
