#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kdvlab/cnoidal.hpp"
#include "kdvlab/grid.hpp"
#include "kdvlab/schrodinger.hpp"

namespace kdv {

enum class FlowKind { kdv, kdv_with_potential, hk, hk_tilde };
enum class StepperKind { rk4_multiplier_exact, etd_rk4 };

// Time-dependent background V(t) for kdv_with_potential and hk_tilde.
// Exact translating rule: V(t,x) = V0(x + speed*t) via spectral phase shift.
// Sampled rule: precomputed table with linear interpolation in t.
class BackgroundRule {
 public:
  static BackgroundRule none();
  static BackgroundRule translating(Field V0, double speed);
  static BackgroundRule sampled(std::vector<double> times, std::vector<Field> table);

  bool empty() const { return kind_ == Kind::none; }
  Field at(double t) const;
  double speed() const { return speed_; }
  const Field& initial() const;

 private:
  enum class Kind { none, translating, sampled };
  Kind kind_ = Kind::none;
  std::optional<Field> V0_;
  double speed_ = 0.0;
  std::vector<double> times_;
  std::vector<Field> table_;
};

struct FlowSpec {
  FlowKind kind = FlowKind::kdv;
  double kappa = 0.0;  // hk / hk_tilde energy parameter
  BackgroundRule background = BackgroundRule::none();
  double dt = 1e-5;
  double t_final = 0.0;
  StepperKind stepper = StepperKind::rk4_multiplier_exact;
  int ledger_stride = 0;                // 0: ledger only at t=0 and t_final
  int state_stride = 0;                 // 0: keep only first and last state
  std::vector<double> probe_kappas;     // energies for the alpha ledger column
};

struct LedgerRow {
  double t = 0.0;
  double P = 0.0;      // momentum (1/2) integral q^2
  double H_kdv = 0.0;  // integral of (q')^2/2 + q^3
  std::vector<double> alphas;
};
struct ConservedLedger {
  std::vector<double> probe_kappas;
  std::vector<LedgerRow> rows;
};

struct Trajectory {
  std::vector<double> times;   // times of stored states
  std::vector<Field> states;
  ConservedLedger ledger;
  FlowSpec spec;
};

// Right-hand sides (the paper-form vector fields).
Field rhs_kdv(const Field& u);                                   // -u''' + 3 (u^2)'
Field rhs_kdv_potential(const Field& q, const Field& V);         // ... + 6 (V q)'
Field rhs_hk(const Field& q, double kappa);                      // 16 k^5 g' + 4 k^2 q'
Field rhs_hk_tilde(const Field& q, double kappa, const Field& Vk);

double momentum(const Field& q);
double kdv_energy(const Field& q);

// Fixed-step integration with the stiff linear symbol handled exactly:
// m(xi) = i xi^3 for kdv kinds, 4 i kappa^2 xi^3/(xi^2+4kappa^2) for hk kinds.
// Deterministic for fixed (spec, q0); dt < 0 integrates backward.
// Throws errc::blow_up when the state exceeds 1e6 in sup norm or — for
// states above the roundoff floor — when the top decade of modes carries
// more than 1% of the spectral energy.
Trajectory evolve(const FlowSpec& spec, const Field& q0);

// || Phi_kappa(t) Phi_vkappa(s) q0 - Phi_vkappa(s) Phi_kappa(t) q0 || in the
// H^-1 norm (weight (xi^2+1)^-1); both compositions use step size dt.
double commute_check(double kappa, double vkappa, const Field& q0, double t,
                     double s, double dt);

struct SweepRow {
  double kappa = 0.0;
  bool is_reference = false;
  bool failed = false;
  std::string note;
  double sup_h1m_distance = 0.0;   // sup_t ||q_kappa(t) - q_ref(t)||_{H^-1}
  double background_l2_half = 0.0; // (1/2) integral (V_kappa - V)^2 at t_final
  double ledger_P_drift = 0.0;
  double ledger_H_drift = 0.0;
};
// Reference: kdv_with_potential against the true KdV background; rows:
// hk_tilde at each kappa against the nu(kappa)-translating background.
std::vector<SweepRow> convergence_sweep(const std::vector<double>& kappas,
                                        const Field& q0,
                                        const Lattice& background_lat,
                                        double t_final, double dt,
                                        std::vector<Trajectory>* out_trajs = nullptr);

// Numerical Gronwall ratio max_t |log alpha(vkappa, q(t)) - log alpha(vkappa, q(0))| / t
// over the ledger of an hk_tilde trajectory; undefined when alpha(0) = 0.
struct AlphaGrowth {
  bool defined = false;
  double max_ratio = 0.0;
};
AlphaGrowth alpha_growth_monitor(const Trajectory& traj, double vkappa);

}  // namespace kdv
