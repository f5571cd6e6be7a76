#pragma once

#include "nclab/hochschild.hpp"
#include "nclab/regulators.hpp"
#include "nclab/singular_trace.hpp"

#include <string>
#include <vector>

namespace nclab {

// Degree constant weighting the character cochains: Gamma(n/2 + 1) with sign
// (-1)^{n(n-1)/2}, and for odd n an extra principal sqrt(2i) = 1 + i.
Complex chern_constant(int n);

// Conditional trace tr(F(FT + TF))/2 against a symmetry F.  For a traceable
// T this is plain tr(T); the symmetrised form stays finite on the wider class
// where only FT + TF is traceable.  Requires max_abs(F^2 - 1) <= 1e-8.
Complex conditional_trace(const ModeOperator& f, const ModeOperator& t);

// Character pairing sum_terms coeff * lambda_p * tr'(G a0 [F,a1]...[F,ap])
// in the doubled representation, F the unitary sign of the gapped Dirac and
// G its grading (identity for odd triples).  The chain degree must equal the
// summability exponent.
Complex chern_pair(const DoubledTriple& dt, const HochschildChain& c);

// Net spectral weight a shift word transports across the Fermi level of the
// base Dirac: the interior trace of P - w P w*, P the non-negative-frequency
// projection.  The character pairing against the matching winding cycle is
// predicted to land on twice this integer times the degree constant.
double transport_index(const SpectralTripleModel& base, const std::string& word);

// Finite-scale character: -lambda_p tr(G a0 [F,a1]...[F,a_{p-1}] F
// [f_p(t|D|), ap]) with the smooth cutoff f_p at scale t.  As t -> 0 the
// cutoff commutator sharpens into [F, ap] and cycle sums recover the
// character pairing.
Complex psi_t(const DoubledTriple& dt, const Regulator& reg,
              const std::vector<ModeOperator>& args, double t);
Complex psi_pair(const DoubledTriple& dt, const Regulator& reg,
                 const HochschildChain& c, double t);

// Cycle pairing of psi_t over a log grid of scales inside the plateau window
// (cutoff deep below the spectral edge, yet far from the infrared), with the
// t -> 0 value recovered by a quadratic fit in t.
struct PsiLimit {
  std::vector<double> t;
  std::vector<Complex> values;
  Complex window_mean;
  Complex value;  // fitted t -> 0 intercept
  double drift = 0.0;  // worst |values_i - value| relative to |value|
};
PsiLimit psi_limit(const DoubledTriple& dt, const HochschildChain& c);

// Singular-trace cochains zeta_k(a0..ap) = p lambda_p
// tau_om(G a0 [F,a1]...[F,a_{k-1}] D^{-1} [|D|,a_k] [F,a_{k+1}]...[F,a_p]),
// 1 <= k <= p, on the doubled triple.  Only the lattice-diagonal part of the
// argument carries singular-trace mass (conjugating by mode rotations fixes
// tau_om and scales every other band by a phase), so the estimator runs on
// that part.
DixmierEstimate zeta_k(const DoubledTriple& dt, int k,
                       const std::vector<ModeOperator>& args);
DixmierEstimate zeta_pair(const DoubledTriple& dt, int k,
                          const HochschildChain& c);

// The map a -> [F, delta(a)] fails to be a derivation by exactly
// [F,a]delta(b) + delta(a)[F,b]; that defect is what links consecutive
// zeta_k.  eta_defect reports the operator-level residual of this identity
// (exact zero) together with the estimator-level gap between the coboundary
// of the linking cochain eta_k and zeta_k - zeta_{k-1}, for 2 <= k <= p.
struct EtaDefect {
  double exact_residual = 0.0;
  double estimator_residual = 0.0;
};
EtaDefect eta_defect(const DoubledTriple& dt, int k,
                     const std::vector<ModeOperator>& args);

// Local-index cochain lambda_p tau_om(G a0 [D,a1]...[D,ap] (1+D^2)^{-p/2})
// on the plain triple, via the direct singular-trace estimator or the
// heat-kernel route (the latter reports the real part).
DixmierEstimate phi_omega(const SpectralTripleModel& model,
                          const std::vector<ModeOperator>& args);
DixmierEstimate phi_omega_pair(const SpectralTripleModel& model,
                               const HochschildChain& c);
DixmierEstimate phi_omega_heat(const SpectralTripleModel& model,
                               const std::vector<ModeOperator>& args);

// Interleaved variant lambda_p tau_om(G a0 prod_i([D,a_i] |D|^{-1})) on the
// doubled triple; differs from phi_omega by traceable terms only.
DixmierEstimate phi_tilde(const DoubledTriple& dt,
                          const std::vector<ModeOperator>& args);

// Mass-weighted variant lambda_p tau_om(G a0 [D,a1]...[D,ap] |D|^{-p}) on
// the doubled triple.
DixmierEstimate phi_mass(const DoubledTriple& dt,
                         const std::vector<ModeOperator>& args);

// Exact block identity for doubled words: with c_i = (-m^2)^i / i!,
//   a0 [D,a1]...[D,an]  =  [[ X, Y ], [ 0, 0 ]],
//   X = a0 d(a1)...d(an) + sum_i c_i S^i(a0..an),
//   Y = -m (a0 d(a1)...d(a_{n-1}) + sum_i c_i S^i(a0..a_{n-1})) an,
// where S^i are the argument-contraction operators and d the base
// derivation.  Returns the worst entry gap over the four fiber blocks.
double doubling_identity_residual(const SpectralTripleModel& base, double mass,
                                  const std::vector<std::string>& words);

// Removing the doubling mass: the mass-weighted pairing equals the plain one
// plus the contraction corrections sum_i c_i (S^i applied to the lower-degree
// weighted cochains).  residual is the gap relative to the larger side.
struct MassCorrectionCheck {
  Complex massive;
  Complex massless;
  Complex correction;
  double residual = 0.0;
};
MassCorrectionCheck mass_correction_check(const SpectralTripleModel& base,
                                          double mass,
                                          const std::vector<std::string>& words);

// Log-log slope of the leading doubling-correction block against the mass;
// the identity opens at order mass^2.
double mass_correction_exponent(const SpectralTripleModel& base,
                                const std::vector<double>& masses,
                                const std::vector<std::string>& words);

// Four independent routes to the pairing at one truncation size, with the
// worst pairwise gap relative to the common scale.
struct PairingRow {
  int size = 0;
  Complex chern;
  Complex psi;
  Complex zeta;
  Complex phi;
  double spread = 0.0;       // worst pairwise gap between the four routes
  double zeta_spread = 0.0;  // profile spread of the singular trace route
  double phi_spread = 0.0;   // profile spread of the derivation route
};

struct PairingReport {
  std::string model;
  std::string cycle;
  int degree = 0;
  double mass = 0.0;
  std::vector<PairingRow> rows;
  double worst_spread = 0.0;  // worst row spread
  double drift = 0.0;         // movement of the character route across sizes
  bool has_index = false;
  double index = 0.0;      // transport integer of index_word, when given
  double index_gap = 0.0;  // |chern/lambda_p - 2*index| at the largest size
};

// Builds the base model at every size in the sweep, doubles it with the
// given mass, and evaluates the character, finite-scale, singular-trace and
// local-index routes on the cycle.  The chain must be a cycle on each base.
PairingReport pairing_report(const std::string& model_name,
                             const std::vector<int>& sizes, double mass,
                             const std::string& cycle_name,
                             const HochschildChain& cycle,
                             const std::string& index_word = "");

}  // namespace nclab
