#pragma once

#include <vector>

namespace decoy {

// Mean photon number of a phase-randomized coherent source. Zero is a literal
// vacuum source, not a limit.
class Intensity {
 public:
  constexpr Intensity() = default;
  // Throws DecoyError(kInvalidArgument) unless value is finite and >= 0.
  explicit Intensity(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr bool is_vacuum() const noexcept { return value_ == 0.0; }

 private:
  double value_ = 0.0;
};

/// Vacuum / single-photon / multi-photon weights of rho_mu.
struct SourceDecomposition {
  double p0 = 1.0;
  double p1 = 0.0;
  double c = 0.0;
};

/// rho_mu' written over the rho_c of the weaker source plus a residual rho_d.
struct ResidualDecomposition {
  double p0p = 0.0;
  double p1p = 0.0;
  double c_coeff = 0.0;
  double d = 0.0;
};

/// Largest relative deviation of each photon-number class weight when the
/// intensity is off by at most a fraction beta.
struct EpsilonBounds {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double eps_c = 0.0;
};

// Cut-off on the Poisson tail mass used by every photon-number sum.
inline constexpr double kPoissonTailCutoff = 1e-15;

double poisson_pmf(Intensity mu, int n);

// Multi-photon weight c(mu) = 1 - e^-mu - mu e^-mu, computed without
// cancellation for small mu.
double multi_photon_weight(Intensity mu);

SourceDecomposition decompose(Intensity mu);

// Requires validate_pair(mu, mup); throws DecoyError(kInvalidPair) otherwise.
ResidualDecomposition residual_decompose(Intensity mu, Intensity mup);

// True iff mu' > mu > 0 and mu' e^-mu' > mu e^-mu.
bool validate_pair(Intensity mu, Intensity mup);

EpsilonBounds epsilon_bounds(Intensity mu, double beta);

// Smallest n_max whose Poisson tail mass beyond n_max is below
// kPoissonTailCutoff.
int truncation_photon_number(Intensity mu);

// Photon-number law of a pulse whose intensity is drawn uniformly from
// [mu(1-beta), mu(1+beta)], for n = 0..n_max. The last entry absorbs the
// tail so the vector sums to 1.
std::vector<double> averaged_photon_distribution(Intensity mu, double beta, int n_max);

}  // namespace decoy
