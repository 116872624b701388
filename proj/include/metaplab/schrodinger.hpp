#pragma once

#include <optional>
#include <vector>

#include "metaplab/quantize.hpp"

namespace metaplab {

// H = Op_w(quadratic) + Op_w(perturbation); the perturbation is sampled on (x grid, dual grid).
struct Hamiltonian {
  QuadraticHamiltonian quad;
  std::optional<Field> perturbation;
};

// Dense matrix of H on g: the quadratic part uses the spectral (R = 1) realization.
CMat hamiltonian_matrix(const Hamiltonian& H, const Grid& g, double tol = 1e-8);

// e^{itH} through one Hermitian eigendecomposition.
class Propagator {
 public:
  Propagator(const Hamiltonian& H, const Grid& g);
  CMat matrix(double t) const;
  Signal operator()(double t, const Signal& u0) const;
  const CMat& hamiltonian() const { return H_; }
  const Grid& grid() const { return g_; }

 private:
  Grid g_;
  CMat H_, V_;
  Vec lambda_;
};

Signal propagate_quadratic(const QuadraticHamiltonian& h, double t, const Signal& u0);
Signal propagate_perturbed(const Hamiltonian& H, double t, const Signal& u0);
// Quadratic path when there is no perturbation, dense exponential otherwise.
Signal propagate(const Hamiltonian& H, double t, const Signal& u0);

// e^{-4 pi^2 i t xi^2} on the dual grid.
Signal free_multiplier_propagate(double t, const Signal& u0);

struct PerturbationSymbol {
  Field b;                // phase-normalized so that its grid mean is real and positive
  double residual = 0;    // || mu(chi_t) Op_w(b) - e^{itH} || / ||e^{itH}|| up to phase
  double deviation = 0;   // max |b - 1|
};
PerturbationSymbol perturbation_symbol(const Hamiltonian& H, double t, const Grid& g);

// Relative L2 residual of W_A(mu(chi_t) u0)(z) = W_{A_t} u0(chi_t^{-1} z); the tau form
// evaluates the left side with tau_wigner.
double evolved_wigner_check(const QuadraticHamiltonian& h, double tau, double t, const Signal& u0);
double evolved_wigner_check(const QuadraticHamiltonian& h, const CovariantForm& cov, double t, const Signal& u0);

struct KernelProbeConfig {
  int field_N = 48;          // phase-space grid per axis (at most 48)
  double field_L = 4.5;      // phase-space box half-width
  double center_step = 1.0;  // coherent-state probe lattice
  double center_range = 1.0;
  double growth_factor = 1e3;
};

struct KernelReport {
  std::vector<double> weighted_norms;  // N = 0, 1, 2
  std::vector<double> growth;          // weighted_norms[N] / weighted_norms[0]
  bool bounded_growth = false;         // every growth ratio within the configured factor
  double off_diagonal = 0;             // share of |k|^2 mass with |w - chi_t^{-1} z| > 1
  double composition_residual = 0;    // max over probes of the Lemma-type composition residual
  int probes = 0;
};
KernelReport wigner_kernel_check(const Hamiltonian& H, const CovariantForm& cov, double t, const Grid& g,
                                 const KernelProbeConfig& cfg = {});

enum class WaveRep { wigner, wigner_A, stft_global };

struct WaveFrontConfig {
  int bins = 64;
  double r0 = 2.0;
  int nmax = 4;
  double threshold = 0.65;   // singular when slope > threshold * log<r_max>^2
  double mass_floor = 1e-4;  // cones with I(0) below this share of the total mass stay regular
  double min_decades = 2.0;  // peak-to-rim dynamic range required for a verdict
  double wigner_extent = 0.5; // Wigner-type fields are read on |x| <= extent L, |xi| <= extent Xi
};

struct ConeReport {
  double angle = 0;          // bin center, radians in [-pi, pi)
  std::vector<double> I;     // I(N), N = 0..nmax
  double slope = 0;
  double r_max = 0;
  bool singular = false;
};

struct WaveFrontReport {
  std::vector<ConeReport> cones;
  double decades = 0;  // smaller of the field and signal peak-to-rim ranges, in decades of squared modulus
  bool inconclusive = false;
  std::vector<int> singular_bins() const;
};

WaveFrontReport wavefront(const Signal& f, WaveRep rep, const WaveFrontConfig& cfg = {},
                          const std::optional<CovariantForm>& cov = std::nullopt);

struct PropagationReport {
  WaveFrontReport initial, evolved;
  std::vector<int> mapped;  // chi_t applied to the singular bins of the initial report
  double distance_bins = 0; // angular Hausdorff distance; infinite when exactly one side is empty
  bool inconclusive = false;
};
PropagationReport wavefront_propagation_check(const Hamiltonian& H, double t, const Signal& u0,
                                              const WaveFrontConfig& cfg = {});

// Relative residual of |V_g f|^2 = (I W_A g * tau_A) * W_A f, checked through Fourier multipliers.
double stft_wigner_identity_residual(const Signal& f, const Signal& g,
                                     const std::optional<CovariantForm>& cov = std::nullopt);

}  // namespace metaplab
