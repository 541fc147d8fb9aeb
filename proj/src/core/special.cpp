#include <array>
#include <cmath>

#include "ptwind/core.hpp"

namespace ptwind {

cd hermite_complex(unsigned n, cd z) {
  cd prev = 1.0;
  if (n == 0) return prev;
  cd cur = 2.0 * z;
  for (unsigned k = 1; k < n; ++k) {
    cd next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {
// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(cd z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}
}  // namespace

cd log_gamma(cd z) {
  if (is_nonpositive_integer(z)) throw Error(ErrorKind::InvalidArgument, "log_gamma at a pole");
  if (z.real() < 0.5) {
    // Reflection; the branch of log(sin) is irrelevant for exp() callers.
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  cd w = z - 1.0;
  cd acc = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (w + static_cast<double>(k));
  cd t = w + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (w + 0.5) * std::log(t) - t + std::log(acc);
}

cd rgamma(cd z) {
  if (is_nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) return std::sin(kPi * z) / kPi * std::exp(log_gamma(1.0 - z));
  return std::exp(-log_gamma(z));
}

cd bessel_j(cd nu, cd z, std::optional<cd> log_half_z) {
  if (!std::isfinite(std::abs(z)) || std::abs(z) > kBesselArgumentCap)
    throw Error(ErrorKind::SeriesDivergence, "Bessel series argument beyond cap");
  if (z == cd(0.0) && !log_half_z) {
    if (nu == cd(0.0)) return 1.0;
    if (nu.real() > 0.0) return 0.0;
    throw Error(ErrorKind::InvalidArgument, "J_nu(0) undefined for Re nu <= 0, nu != 0");
  }
  const cd L = log_half_z ? *log_half_z : std::log(z / 2.0);
  const cd q = -z * z / 4.0;
  // power = q^j / j!, kept separately so that rgamma handles integer poles.
  cd power = 1.0;
  cd sum = 0.0;
  const double qabs = std::abs(q);
  for (int j = 0; j < 600; ++j) {
    if (j > 0) power *= q / static_cast<double>(j);
    cd term = power * rgamma(nu + static_cast<double>(j) + 1.0);
    sum += term;
    if (j > qabs + std::abs(nu) && std::abs(term) <= 1e-16 * std::abs(sum)) break;
    if (std::abs(power) == 0.0) break;
  }
  return std::exp(nu * L) * sum;
}

}  // namespace ptwind
