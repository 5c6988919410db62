#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tdho/classical.hpp"
#include "tdho/ermakov_pinney.hpp"
#include "tdho/models.hpp"
#include "tdho/transitions.hpp"

namespace tdho {

enum class FamilyKind { minkowski, gowdy_t3, gowdy_s, tachyonic };

// Decoupled mode family. Families over Z \ {0} have identical modes +-l and carry weight 2
// in mode sums; the 3-sphere family runs over l = 0, 1, ... (l = 0 is skipped in the
// asymptotic sums since the standard representation needs l != 0).
struct ModeFamily {
  FamilyKind kind = FamilyKind::minkowski;
  // Optional explicit finite list of modes; empty means the full index set.
  std::vector<int> modes;

  std::string name() const;
  double weight(int ell) const;
  ModelSpec mode_model(int ell) const;
  FrequencyProfile mode_profile(int ell) const { return mode_model(ell).profile(); }
  Interval interval() const;
  // Modes 1..lmax (or the explicit list, cut at lmax).
  std::vector<int> modes_up_to(int lmax) const;
};

FamilyKind parse_family_kind(const std::string& s);

enum class PairSource { ode, closed_form };

// (alpha_l, beta_l) with alpha conj(beta) - beta conj(alpha) = i. The standard choice is
// alpha = 1/sqrt(2|l|), beta = -i sqrt(|l|/2); `phase` multiplies both by exp(i phase(l)).
struct Representation {
  std::function<double(int)> phase;
  std::complex<double> alpha(int ell) const;
  std::complex<double> beta(int ell) const;
};

FundamentalPair mode_pair(const ModeFamily& fam, int ell, double t0, double t,
                          PairSource source = PairSource::ode, double tol = default_tol);
Bogoliubov mode_bogoliubov(const FundamentalPair& p, std::complex<double> alpha,
                           std::complex<double> beta);

enum class Verdict { convergent, divergent, inconclusive };
const char* verdict_name(Verdict v);

// Power-law fit |x_l| ~ C l^{-p} from means over geometric blocks.
struct TailFit {
  bool identically_zero = false;
  bool non_finite = false;
  double exponent = 0.0;  // p
  double ci_low = 0.0;    // 95% interval
  double ci_high = 0.0;
  double log_c = 0.0;     // log C
  double slope = 0.0;     // -p
  int blocks = 0;
  Verdict verdict = Verdict::inconclusive;
};
// Terms at or below this level (|B_l| <= 1e-10) are treated as exact zeros.
inline constexpr double zero_term_threshold = 1e-20;
TailFit fit_tail(const std::vector<double>& terms);  // terms[l-1], weights included

struct TruncationReport {
  std::string family;
  double t0 = 0.0;
  double t = 0.0;
  std::vector<int> ells;
  std::vector<double> terms;  // weighted |B_l|^2
  std::vector<int> schedule;
  std::vector<double> partial_sums;  // at each schedule entry
  TailFit fit;
  double tail_bound = 0.0;  // estimate of sum beyond the last mode
  double vacuum_magnitude = 0.0;  // prod |A_l|^{-1/2} over computed modes
  double vacuum_lower = 0.0;      // including the tail bound
  int first_non_finite = 0;       // 0 when all terms finite
  // max ||A|^2 - |B|^2 - 1| / max(1, |A|^2) over finite modes
  double max_hyperbolic_error = 0.0;
};

struct VacuumAmplitude {
  double value = 0.0;  // prod |A_l|^{-1/2} over the computed modes
  double lower = 0.0;  // with the fitted tail
};
// Throws DomainError unless the report's verdict is convergent.
VacuumAmplitude vacuum_amplitude_magnitude(const TruncationReport& report);

struct FieldOptions {
  PairSource source = PairSource::ode;
  double tol = default_tol;
  unsigned workers = 1;
};

TruncationReport unitarity_test(const ModeFamily& fam, const Representation& rep, double t0,
                                double t, const std::vector<int>& schedule,
                                const FieldOptions& opt = {});

// Per-mode kernel in the measure representation, shifted by int theta_l.
KernelValue field_kernel_factor(const ModeFamily& fam, const Representation& rep, int ell,
                                double t0, double t, double theta_integral,
                                const FieldOptions& opt = {});

// Ermakov-Pinney solution per mode: the canonical closed forms for Minkowski and Gowdy
// families, and rho^2 = c^2/|l| + |l| s^2 anchored at t0 for tachyonic modes.
EPSolution mode_ep(const ModeFamily& fam, int ell, double t0);

struct ObstructionReport {
  std::string family;
  std::vector<int> ells;
  std::vector<double> uni_t;  // |alpha beta (rho - 1/rho) - alpha^2 rho_dot|^2 at t
  std::vector<double> uni_r;  // |(alpha^2 + beta^2) sin Phi|^2
  std::vector<double> uni_t_partial;
  std::vector<double> uni_r_partial;
  double max_uni_t = 0.0;
  double max_uni_r = 0.0;
  TailFit fit_t;
  TailFit fit_r;
  std::vector<double> rho_t;  // rho_l(t)
  double rho_sqrt_ell_at_max = 0.0;  // rho_L sqrt(L) at t
};
ObstructionReport factorization_obstruction(const ModeFamily& fam, const Representation& rep,
                                            double t0, double t, int lmax,
                                            const FieldOptions& opt = {});

// 2x2 Bogoliubov matrix [[A, B], [conj B, conj A]] of X^{-1} (a, a*) X.
struct BogoliubovMatrix {
  std::complex<double> a11, a12, a21, a22;
  BogoliubovMatrix operator*(const BogoliubovMatrix& o) const;
  BogoliubovMatrix inverse() const;
  static BogoliubovMatrix from(const Bogoliubov& b);
};

// U = T^{-1}(t) R T(t0), and U = D S R with D = D^{-1}(t) D(t0) (shear),
// S = D^{-1}(t0) S^{-1}(t) T(t0) (squeeze) and R = T^{-1}(t0) R T(t0) (rotation).
struct FactorBlocks {
  BogoliubovMatrix t_at_t0, t_at_t, r;
  BogoliubovMatrix d_block, r_block, s_block;
};
FactorBlocks factor_blocks(std::complex<double> alpha, std::complex<double> beta,
                           const RhoValue& r0, const RhoValue& r, double phi);
// Blocks for mode l with the canonical rho_l of mode_ep.
FactorBlocks appendix_factors(const ModeFamily& fam, const Representation& rep, int ell,
                              double t0, double t);
// Largest deviation of both compositions from the direct (A_l, B_l), relative to max(1, |A_l|).
double composition_error(const FactorBlocks& fb, const Bogoliubov& direct);

struct CoherentVariances {
  double dq = 0.0;
  double dp = 0.0;
};
CoherentVariances field_coherent_variances(const Bogoliubov& b, std::complex<double> alpha,
                                           std::complex<double> beta);

// |sum_l l |z_l|^2|.
double t3_constraint(const std::map<int, std::complex<double>>& labels);

}  // namespace tdho
