#include "isac_fbl/codebook.hpp"

#include <cmath>
#include <string>

#include "isac_fbl/rng.hpp"

namespace isac_fbl {

void CodebookSpec::validate(bool materialize) const {
  if (n < 1) throw InvalidSpec("codebook: n must be >= 1");
  if (k < 1) throw InvalidSpec("codebook: k must be >= 1");
  if (!(p_bar > 0.0)) throw InvalidSpec("codebook: p_bar must be > 0");
  if (!std::isfinite(b) || b < 0.0)
    throw InvalidSpec("codebook: b must be finite and >= 0");
  if (materialize) {
    if (!(b > 0.0)) throw InvalidSpec("codebook: b must be > 0 to materialize");
    // need k distinct codewords: k <= 2^floor(b)
    const double whole_bits = std::floor(b);
    if (whole_bits < 63.0 &&
        static_cast<double>(k) > std::exp2(whole_bits)) {
      throw InvalidSpec("codebook: k exceeds 2^floor(b) codewords (k = " +
                        std::to_string(k) + ", b = " + std::to_string(b) +
                        ")");
    }
  }
}

ActiveSignal sample_active_codewords(const CodebookSpec& spec,
                                     std::uint64_t rng_seed) {
  spec.validate(true);
  Eigen::MatrixXcd x(spec.k, spec.n);
  for (int i = 0; i < spec.k; ++i) {
    GaussianStream stream(substream_seed(rng_seed, static_cast<std::uint64_t>(i)));
    for (int t = 0; t < spec.n; ++t) x(i, t) = stream.complex_normal(spec.p_bar);
  }
  return ActiveSignal{std::move(x)};
}

double rho_max_closed(double b, int n, double gamma) {
  if (n < 1) throw InvalidSpec("rho_max_closed: n must be >= 1");
  if (!std::isfinite(b) || b <= 0.0)
    throw InvalidSpec("rho_max_closed: b must be finite and > 0");
  // ln t for t = 2^b (2^b - 1) / 2; the direct product overflows long before
  // the logarithm does, so switch to the expanded form for large b
  double log_t = 0.0;
  if (b < 512.0) {
    const double t = std::exp2(b) * (std::exp2(b) - 1.0) / 2.0;
    if (t <= 1.0)
      throw DegenerateCodebook(
          "rho_max_closed: fewer than two codeword pairs (b <= 1)");
    log_t = std::log(t);
  } else {
    log_t = (2.0 * b - 1.0) * std::numbers::ln2 + std::log1p(-std::exp2(-b));
  }
  return std::sqrt(log_t / n) + gamma / (2.0 * std::sqrt(n * log_t));
}

double rho_max_approx(double b, int n) {
  if (n < 1) throw InvalidSpec("rho_max_approx: n must be >= 1");
  if (!std::isfinite(b) || b <= 0.0)
    throw InvalidSpec("rho_max_approx: b must be finite and > 0");
  return std::sqrt(2.0 * b * std::numbers::ln2 / n);
}

double bits_from_rho(double rho, int n) {
  if (n < 1) throw InvalidSpec("bits_from_rho: n must be >= 1");
  if (!std::isfinite(rho) || rho <= 0.0)
    throw InvalidSpec("bits_from_rho: rho must be finite and > 0");
  return n * rho * rho / (2.0 * std::numbers::ln2);
}

CorrelationReport empirical_correlation(const ActiveSignal& signal,
                                        double p_bar) {
  if (!(p_bar > 0.0))
    throw InvalidSpec("empirical_correlation: p_bar must be > 0");
  const int k = signal.users();
  const int n = signal.uses();
  if (k < 1 || n < 1)
    throw InvalidSpec("empirical_correlation: empty signal");

  CorrelationReport report;
  report.delta = Eigen::MatrixXcd::Zero(k, k);
  report.rho_max_empirical = 0.0;
  if (k == 1) return report;  // no pairs: degenerate zero report

  const double scale = 1.0 / (static_cast<double>(n) * p_bar);
  // fill the upper triangle and mirror conjugates so delta is Hermitian
  // bit-for-bit, not just up to rounding
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const std::complex<double> d =
          scale * signal.matrix.row(i).dot(signal.matrix.row(j));
      report.delta(i, j) = std::conj(d);
      report.delta(j, i) = d;
      report.rho_max_empirical =
          std::max(report.rho_max_empirical, std::abs(d));
    }
  }
  return report;
}

}  // namespace isac_fbl
