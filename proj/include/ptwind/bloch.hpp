#pragma once

#include <string>
#include <vector>

#include "ptwind/spectral.hpp"

namespace ptwind {

// One band of V(x) = 4 cos^2 x + 4 i eps sin 2x (period pi) at wavenumber k.
struct BandPoint {
  double k = 0.0;
  std::size_t band_index = 0;  // 1-based, by (Re E, Im E)
  cd energy;
  // Periodic part u over [0, pi], unit L2 norm over the period, largest
  // sample real and positive.
  ComplexSamples u;
  // Winding of psi = u e^{ikx} over one period; NaN when psi has a node.
  double winding = 0.0;
  // Winding of u alone (a multiple of 2 pi); NaN on a node.
  double winding_u = 0.0;
  // Plane-wave coefficients of u on e^{2imx}, m = first_wave .. first_wave + size - 1.
  std::vector<cd> coefficients;
  int first_wave = 0;
};

struct BlochOptions {
  // Samples of u over [0, pi], both ends included.
  std::size_t samples = 1025;
  // Coefficients at the truncation edge above this (relative to the largest)
  // mean the basis is too small.
  double tail_tol = 1e-10;
};

// Plane-wave Bloch solve. k lies in the closed zone [-1, 1]; both edges are
// accepted so the band-edge points can be sampled directly. The n_waves
// wavenumbers k + 2m are centred on zero.
std::vector<BandPoint> bloch_bands(double epsilon, double k, std::size_t n_modes,
                                   std::size_t n_waves, const BlochOptions& opts = {});

// Eigenvalues only, sorted; no truncation check.
std::vector<cd> bloch_energies(double epsilon, double k, std::size_t n_waves);

// Smallest eps in [eps_lo, eps_hi] at which a band at k_edge leaves the real
// axis (|Im E| > im_tol * max |E| over the lowest n_modes bands). The scan
// uses n_scan evenly spaced points and is then bisected to 1e-9. Throws
// NoneFound when every scanned spectrum is real.
double band_edge_breaking(double eps_lo, double eps_hi, std::size_t n_scan, double k_edge = 1.0,
                          std::size_t n_modes = 6, std::size_t n_waves = 41,
                          double im_tol = 1e-6);

// J_k(i sqrt(eps/2) e^{ix}) on the grid, with (z/2)^k taken on the branch
// continuous in x: log(z/2) = log(sqrt(eps/2)/2) + i(pi/2 + x).
ComplexSamples bessel_mode(double k, double epsilon, const Grid1D& grid);

// J_nu(sqrt(2) e^{ix}): an exact Bloch solution (wavenumber nu, E = nu^2 + 2)
// of the periodic potential at eps = 0.5, where V = 2 + 2 e^{2ix}.
ComplexSamples band_edge_exact_mode(double nu, const Grid1D& grid);

// "k,band,re_e,im_e,winding" rows with 17 significant digits.
std::string band_csv(const std::vector<BandPoint>& bands);

}  // namespace ptwind
