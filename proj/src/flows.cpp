#include "kdvlab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kdvlab/spectral.hpp"

namespace kdv {

BackgroundRule BackgroundRule::none() { return BackgroundRule{}; }

BackgroundRule BackgroundRule::translating(Field V0, double speed) {
  BackgroundRule r;
  r.kind_ = Kind::translating;
  r.V0_ = std::move(V0);
  r.speed_ = speed;
  return r;
}

BackgroundRule BackgroundRule::sampled(std::vector<double> times, std::vector<Field> table) {
  if (times.empty() || times.size() != table.size())
    fail(errc::parameter, "sampled background needs matching nonempty times and fields");
  for (size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      fail(errc::parameter, "sampled background times must increase");
    if (table[i].grid() != table[0].grid())
      fail(errc::parameter, "sampled background fields must share one grid");
  }
  BackgroundRule r;
  r.kind_ = Kind::sampled;
  r.times_ = std::move(times);
  r.table_ = std::move(table);
  return r;
}

Field BackgroundRule::at(double t) const {
  switch (kind_) {
    case Kind::none:
      fail(errc::precondition, "flow kind requires a background rule");
    case Kind::translating: {
      const double a = speed_ * t;
      return apply_multiplier(*V0_, [a](double xi) {
        return std::exp(cplx(0.0, xi * a));
      });
    }
    case Kind::sampled: {
      if (table_.size() == 1) return table_[0];
      const double lo = times_.front(), hi = times_.back();
      const double span = hi - lo;
      if (t < lo - 1e-9 * span || t > hi + 1e-9 * span)
        fail(errc::parameter, "background queried outside the sampled range");
      const double tc = std::clamp(t, lo, hi);
      size_t i = 1;
      while (i + 1 < times_.size() && times_[i] < tc) ++i;
      const double w = (tc - times_[i - 1]) / (times_[i] - times_[i - 1]);
      std::vector<double> mix(static_cast<size_t>(table_[0].grid().n));
      for (int j = 0; j < table_[0].grid().n; ++j)
        mix[static_cast<size_t>(j)] = (1.0 - w) * table_[i - 1].value(j) + w * table_[i].value(j);
      return Field::from_samples(table_[0].grid(), std::move(mix));
    }
  }
  fail(errc::consistency, "unreachable background kind");
}

const Field& BackgroundRule::initial() const {
  if (kind_ == Kind::translating) return *V0_;
  if (kind_ == Kind::sampled) return table_.front();
  fail(errc::precondition, "flow kind requires a background rule");
}

Field rhs_kdv(const Field& u) {
  Field u2 = multiply_dealiased(u, u);
  Field lin = derivative(u, 3);
  Field nl = derivative(u2, 1);
  std::vector<double> out(static_cast<size_t>(u.grid().n));
  for (int j = 0; j < u.grid().n; ++j)
    out[static_cast<size_t>(j)] = -lin.value(j) + 3.0 * nl.value(j);
  return Field::from_samples(u.grid(), std::move(out));
}

Field rhs_kdv_potential(const Field& q, const Field& V) {
  if (q.grid() != V.grid()) fail(errc::invalid_input, "grid mismatch");
  Field base = rhs_kdv(q);
  Field vq = multiply_dealiased(V, q);
  Field vqp = derivative(vq, 1);
  std::vector<double> out(static_cast<size_t>(q.grid().n));
  for (int j = 0; j < q.grid().n; ++j)
    out[static_cast<size_t>(j)] = base.value(j) + 6.0 * vqp.value(j);
  return Field::from_samples(q.grid(), std::move(out));
}

Field rhs_hk(const Field& q, double kappa) {
  GreenDiag gd = diagonal_green(q, kappa);
  Field gp = derivative(gd.g, 1);
  Field qp = derivative(q, 1);
  const double k5 = 16.0 * std::pow(kappa, 5);
  const double k2 = 4.0 * kappa * kappa;
  std::vector<double> out(static_cast<size_t>(q.grid().n));
  for (int j = 0; j < q.grid().n; ++j)
    out[static_cast<size_t>(j)] = k5 * gp.value(j) + k2 * qp.value(j);
  return Field::from_samples(q.grid(), std::move(out));
}

Field rhs_hk_tilde(const Field& q, double kappa, const Field& Vk) {
  if (q.grid() != Vk.grid()) fail(errc::invalid_input, "grid mismatch");
  std::vector<double> sum(static_cast<size_t>(q.grid().n));
  for (int j = 0; j < q.grid().n; ++j) sum[static_cast<size_t>(j)] = q.value(j) + Vk.value(j);
  GreenDiag g_full = diagonal_green(Field::from_samples(q.grid(), std::move(sum)), kappa);
  GreenDiag g_bg = diagonal_green(Vk, kappa);
  Field gp_full = derivative(g_full.g, 1);
  Field gp_bg = derivative(g_bg.g, 1);
  Field qp = derivative(q, 1);
  const double k5 = 16.0 * std::pow(kappa, 5);
  const double k2 = 4.0 * kappa * kappa;
  std::vector<double> out(static_cast<size_t>(q.grid().n));
  for (int j = 0; j < q.grid().n; ++j)
    out[static_cast<size_t>(j)] =
        k5 * (gp_full.value(j) - gp_bg.value(j)) + k2 * qp.value(j);
  return Field::from_samples(q.grid(), std::move(out));
}

double momentum(const Field& q) {
  double s = 0.0;
  for (int j = 0; j < q.grid().n; ++j) s += q.value(j) * q.value(j);
  return 0.5 * q.grid().period * s / q.grid().n;
}

double kdv_energy(const Field& q) {
  Field qp = derivative(q, 1);
  double s = 0.0;
  for (int j = 0; j < q.grid().n; ++j) {
    const double v = q.value(j);
    s += 0.5 * qp.value(j) * qp.value(j) + v * v * v;
  }
  return q.grid().period * s / q.grid().n;
}

namespace {

// Bin-wise coefficient table of a Hermitian symbol, with the unpaired bins
// forced real (same convention as apply_multiplier).
std::vector<cplx> symbol_table(const PeriodicGrid& g, const std::function<cplx(double)>& sym) {
  std::vector<cplx> t(static_cast<size_t>(g.n));
  for (int k = 0; k <= g.n / 2; ++k) {
    cplx v = sym(g.xi(k));
    if (k == 0 || k == g.n / 2) {
      t[static_cast<size_t>(k)] = v.real();
    } else {
      t[static_cast<size_t>(k)] = v;
      t[static_cast<size_t>(g.n - k)] = std::conj(v);
    }
  }
  return t;
}

cplx phi1(cplx z) {
  if (std::abs(z) < 0.5) {
    cplx acc(0.0, 0.0), p(1.0, 0.0);
    double fact = 1.0;
    for (int j = 0; j < 14; ++j) {
      fact *= (j + 1);
      acc += p / fact;
      p *= z;
    }
    return acc;
  }
  return (std::exp(z) - 1.0) / z;
}

cplx phi2(cplx z) {
  if (std::abs(z) < 0.5) {
    cplx acc(0.0, 0.0), p(1.0, 0.0);
    double fact = 2.0;
    for (int j = 0; j < 14; ++j) {
      acc += p / fact;
      p *= z;
      fact *= (j + 3);
    }
    return acc;
  }
  return (std::exp(z) - 1.0 - z) / (z * z);
}

cplx phi3(cplx z) {
  if (std::abs(z) < 0.5) {
    cplx acc(0.0, 0.0), p(1.0, 0.0);
    double fact = 6.0;  // 3!
    for (int j = 0; j < 14; ++j) {
      acc += p / fact;
      p *= z;
      fact *= (j + 4);
    }
    return acc;
  }
  return (std::exp(z) - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

struct StepperTables {
  // shared
  std::vector<cplx> E, E2;  // exp(dt m), exp(dt m / 2)
  // etd_rk4 only
  std::vector<cplx> Q, f1, f2, f3;
};

StepperTables make_tables(const PeriodicGrid& g, const std::function<cplx(double)>& m,
                          double dt, StepperKind kind) {
  StepperTables t;
  t.E = symbol_table(g, [&](double xi) { return std::exp(dt * m(xi)); });
  t.E2 = symbol_table(g, [&](double xi) { return std::exp(0.5 * dt * m(xi)); });
  if (kind == StepperKind::etd_rk4) {
    t.Q = symbol_table(g, [&](double xi) { return 0.5 * dt * phi1(0.5 * dt * m(xi)); });
    t.f1 = symbol_table(g, [&](double xi) {
      cplx z = dt * m(xi);
      return dt * (phi1(z) - 3.0 * phi2(z) + 4.0 * phi3(z));
    });
    t.f2 = symbol_table(g, [&](double xi) {
      cplx z = dt * m(xi);
      return dt * (2.0 * phi2(z) - 4.0 * phi3(z));
    });
    t.f3 = symbol_table(g, [&](double xi) {
      cplx z = dt * m(xi);
      return dt * (4.0 * phi3(z) - phi2(z));
    });
  }
  return t;
}

using Spec = std::vector<cplx>;

Spec mul(const Spec& a, const Spec& b) {
  Spec o(a.size());
  for (size_t i = 0; i < a.size(); ++i) o[i] = a[i] * b[i];
  return o;
}

Spec axpy(const Spec& x, double c, const Spec& y) {  // x + c*y
  Spec o(x.size());
  for (size_t i = 0; i < x.size(); ++i) o[i] = x[i] + c * y[i];
  return o;
}

}  // namespace

Trajectory evolve(const FlowSpec& spec, const Field& q0) {
  const PeriodicGrid& g = q0.grid();
  const bool needs_bg =
      spec.kind == FlowKind::kdv_with_potential || spec.kind == FlowKind::hk_tilde;
  const bool needs_kappa = spec.kind == FlowKind::hk || spec.kind == FlowKind::hk_tilde;
  if (needs_bg && spec.background.empty())
    fail(errc::parameter, "flow kind requires a background rule");
  if (!needs_bg && !spec.background.empty())
    fail(errc::parameter, "flow kind does not take a background rule");
  if (needs_bg && spec.background.initial().grid() != g)
    fail(errc::parameter, "background grid does not match the state grid");
  if (needs_kappa && !(spec.kappa > 0.0)) fail(errc::parameter, "flow requires kappa > 0");
  if (!(spec.dt != 0.0) || !std::isfinite(spec.dt)) fail(errc::parameter, "dt must be nonzero");
  const double ratio = spec.t_final / spec.dt;
  if (ratio < -1e-9) fail(errc::parameter, "t_final and dt disagree in direction");
  const long long steps = std::llround(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, std::abs(ratio)))
    fail(errc::parameter, "t_final must be an integer number of steps");

  // Energy must stay below the spectrum along the whole flow; check now so a
  // bad kappa fails at construction, not mid-integration.
  if (spec.kind == FlowKind::hk) (void)diagonal_green(q0, spec.kappa);
  if (spec.kind == FlowKind::hk_tilde) {
    Field Vk0 = spec.background.at(0.0);
    std::vector<double> sum(static_cast<size_t>(g.n));
    for (int j = 0; j < g.n; ++j) sum[static_cast<size_t>(j)] = q0.value(j) + Vk0.value(j);
    (void)diagonal_green(Field::from_samples(g, std::move(sum)), spec.kappa);
    (void)diagonal_green(Vk0, spec.kappa);
  }

  const double kap = spec.kappa;
  std::function<cplx(double)> msym;
  if (spec.kind == FlowKind::kdv || spec.kind == FlowKind::kdv_with_potential) {
    msym = [](double xi) { return cplx(0.0, xi * xi * xi); };
  } else {
    msym = [kap](double xi) {
      return cplx(0.0, 4.0 * kap * kap * xi * xi * xi / (xi * xi + 4.0 * kap * kap));
    };
  }

  auto nonlinear = [&](double t, const Field& q) -> Spec {
    Field full = [&]() {
      switch (spec.kind) {
        case FlowKind::kdv:
          return rhs_kdv(q);
        case FlowKind::kdv_with_potential:
          return rhs_kdv_potential(q, spec.background.at(t));
        case FlowKind::hk:
          return rhs_hk(q, kap);
        case FlowKind::hk_tilde:
          return rhs_hk_tilde(q, kap, spec.background.at(t));
      }
      fail(errc::consistency, "unreachable flow kind");
    }();
    Spec out(full.spectrum());
    for (int k = 0; k < g.n; ++k) {
      cplx mv = msym(g.xi(k));
      if (k == 0 || k == g.n / 2) mv = mv.real();
      if (k > g.n / 2) mv = std::conj(msym(g.xi(g.n - k)));
      out[static_cast<size_t>(k)] -= mv * q.spectrum()[static_cast<size_t>(k)];
    }
    return out;
  };

  StepperTables tab = make_tables(g, msym, spec.dt, spec.stepper);
  const double dt = spec.dt;

  Trajectory traj;
  traj.spec = spec;
  traj.ledger.probe_kappas = spec.probe_kappas;

  auto record_ledger = [&](double t, const Field& q) {
    LedgerRow row;
    row.t = t;
    row.P = momentum(q);
    row.H_kdv = kdv_energy(q);
    for (double pk : spec.probe_kappas) row.alphas.push_back(alpha(q, pk).value);
    traj.ledger.rows.push_back(std::move(row));
  };
  auto record_state = [&](double t, const Field& q) {
    traj.times.push_back(t);
    traj.states.push_back(q);
  };

  Field q = q0;
  record_state(0.0, q);
  record_ledger(0.0, q);

  const int top_start = static_cast<int>(std::ceil(0.9 * (g.n / 2)));
  // Pile-up in the top decade signals an aliasing cascade only when the state
  // itself is significant; a numerically-zero orbit is pure roundoff with a
  // flat spectrum and must not trip the detector.
  const double noise_sup = 1e-7 * std::max(1.0, q0.sup_norm());
  auto check_blowup = [&](const Field& f) {
    if (!f.finite() || f.sup_norm() > 1e6)
      fail(errc::blow_up, "state exceeded the amplitude bound");
    if (f.sup_norm() <= noise_sup) return;
    double total = 0.0, top = 0.0;
    for (int k = 0; k < g.n; ++k) {
      const double e = std::norm(f.spectrum()[static_cast<size_t>(k)]);
      total += e;
      if (std::abs(g.mode(k)) >= top_start) top += e;
    }
    if (total > 0.0 && top > 1e-2 * total)
      fail(errc::blow_up, "spectral energy piled up at the highest modes");
  };

  for (long long s = 0; s < steps; ++s) {
    const double t = s * dt;
    Spec cur = q.spectrum();
    Spec next;
    if (spec.stepper == StepperKind::rk4_multiplier_exact) {
      Spec a = nonlinear(t, q);
      Spec bstage = axpy(cur, 0.5 * dt, a);
      Spec b = nonlinear(t + 0.5 * dt, Field::from_spectrum(g, mul(tab.E2, bstage)));
      Spec cstage = axpy(mul(tab.E2, cur), 0.5 * dt, b);
      Spec c = nonlinear(t + 0.5 * dt, Field::from_spectrum(g, cstage));
      Spec dstage = axpy(mul(tab.E, cur), dt, mul(tab.E2, c));
      Spec d = nonlinear(t + dt, Field::from_spectrum(g, dstage));
      next.resize(cur.size());
      for (size_t i = 0; i < cur.size(); ++i)
        next[i] = tab.E[i] * cur[i] +
                  dt / 6.0 * (tab.E[i] * a[i] + 2.0 * tab.E2[i] * (b[i] + c[i]) + d[i]);
    } else {
      Spec Nu = nonlinear(t, q);
      Spec astage(cur.size());
      for (size_t i = 0; i < cur.size(); ++i) astage[i] = tab.E2[i] * cur[i] + tab.Q[i] * Nu[i];
      Spec Na = nonlinear(t + 0.5 * dt, Field::from_spectrum(g, astage));
      Spec bstage(cur.size());
      for (size_t i = 0; i < cur.size(); ++i) bstage[i] = tab.E2[i] * cur[i] + tab.Q[i] * Na[i];
      Spec Nb = nonlinear(t + 0.5 * dt, Field::from_spectrum(g, bstage));
      Spec cstage(cur.size());
      for (size_t i = 0; i < cur.size(); ++i)
        cstage[i] = tab.E2[i] * astage[i] + tab.Q[i] * (2.0 * Nb[i] - Nu[i]);
      Spec Nc = nonlinear(t + dt, Field::from_spectrum(g, cstage));
      next.resize(cur.size());
      for (size_t i = 0; i < cur.size(); ++i)
        next[i] = tab.E[i] * cur[i] + tab.f1[i] * Nu[i] + tab.f2[i] * (Na[i] + Nb[i]) +
                  tab.f3[i] * Nc[i];
    }
    q = Field::from_spectrum(g, std::move(next));
    check_blowup(q);
    const double tn = (s + 1) * dt;
    const bool last = s + 1 == steps;
    if ((spec.state_stride > 0 && (s + 1) % spec.state_stride == 0) || last)
      record_state(tn, q);
    if ((spec.ledger_stride > 0 && (s + 1) % spec.ledger_stride == 0) || last)
      record_ledger(tn, q);
  }
  return traj;
}

double commute_check(double kappa, double vkappa, const Field& q0, double t,
                     double s, double dt) {
  auto flow = [&](double kap, double horizon, const Field& start) {
    FlowSpec fs;
    fs.kind = FlowKind::hk;
    fs.kappa = kap;
    fs.dt = dt;
    fs.t_final = horizon;
    Trajectory tr = evolve(fs, start);
    return tr.states.back();
  };
  Field ab = flow(kappa, t, flow(vkappa, s, q0));
  Field ba = flow(vkappa, s, flow(kappa, t, q0));
  std::vector<double> diff(static_cast<size_t>(q0.grid().n));
  for (int j = 0; j < q0.grid().n; ++j)
    diff[static_cast<size_t>(j)] = ab.value(j) - ba.value(j);
  return hs_kappa_norm(Field::from_samples(q0.grid(), std::move(diff)),
                       SobolevIndex{-1.0, 0.5});
}

std::vector<SweepRow> convergence_sweep(const std::vector<double>& kappas,
                                        const Field& q0,
                                        const Lattice& background_lat,
                                        double t_final, double dt,
                                        std::vector<Trajectory>* out_trajs) {
  const PeriodicGrid& g = q0.grid();
  Field V0 = cnoidal_field(background_lat, 0.0, g);
  const double kdv_speed = 6.0 * background_lat.e1;
  const long long steps = std::llround(t_final / dt);
  const int stride = static_cast<int>(std::max<long long>(1, steps / 16));

  FlowSpec ref_spec;
  ref_spec.kind = FlowKind::kdv_with_potential;
  ref_spec.background = BackgroundRule::translating(V0, kdv_speed);
  ref_spec.dt = dt;
  ref_spec.t_final = t_final;
  ref_spec.state_stride = stride;
  Trajectory ref = evolve(ref_spec, q0);

  std::vector<SweepRow> rows;
  SweepRow ref_row;
  ref_row.is_reference = true;
  ref_row.ledger_P_drift =
      std::abs(ref.ledger.rows.back().P - ref.ledger.rows.front().P);
  ref_row.ledger_H_drift =
      std::abs(ref.ledger.rows.back().H_kdv - ref.ledger.rows.front().H_kdv);
  rows.push_back(ref_row);
  if (out_trajs) out_trajs->push_back(ref);

  const SobolevIndex h1m{-1.0, 0.5};
  for (double kap : kappas) {
    SweepRow row;
    row.kappa = kap;
    try {
      HkTravelingWave tw = hk_traveling_wave(background_lat, kap);
      FlowSpec fs;
      fs.kind = FlowKind::hk_tilde;
      fs.kappa = kap;
      fs.background = BackgroundRule::translating(V0, tw.nu);
      fs.dt = dt;
      fs.t_final = t_final;
      fs.state_stride = stride;
      Trajectory tr = evolve(fs, q0);
      if (tr.states.size() != ref.states.size())
        fail(errc::consistency, "state sampling misaligned with the reference");
      double sup = 0.0;
      for (size_t i = 0; i < tr.states.size(); ++i) {
        std::vector<double> diff(static_cast<size_t>(g.n));
        for (int j = 0; j < g.n; ++j)
          diff[static_cast<size_t>(j)] = tr.states[i].value(j) - ref.states[i].value(j);
        sup = std::max(sup, hs_kappa_norm(Field::from_samples(g, std::move(diff)), h1m));
      }
      row.sup_h1m_distance = sup;
      Field Vk_end = fs.background.at(t_final);
      Field V_end = ref_spec.background.at(t_final);
      double acc = 0.0;
      for (int j = 0; j < g.n; ++j) {
        const double d = Vk_end.value(j) - V_end.value(j);
        acc += d * d;
      }
      row.background_l2_half = 0.5 * g.period * acc / g.n;
      row.ledger_P_drift = std::abs(tr.ledger.rows.back().P - tr.ledger.rows.front().P);
      row.ledger_H_drift =
          std::abs(tr.ledger.rows.back().H_kdv - tr.ledger.rows.front().H_kdv);
      if (out_trajs) out_trajs->push_back(std::move(tr));
    } catch (const error& e) {
      row.failed = true;
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

AlphaGrowth alpha_growth_monitor(const Trajectory& traj, double vkappa) {
  const auto& pks = traj.ledger.probe_kappas;
  size_t idx = pks.size();
  for (size_t i = 0; i < pks.size(); ++i)
    if (std::abs(pks[i] - vkappa) <= 1e-12 * std::max(1.0, std::abs(vkappa))) idx = i;
  if (idx == pks.size())
    fail(errc::parameter, "vkappa is not among the trajectory's probe energies");
  if (traj.ledger.rows.empty()) fail(errc::parameter, "empty ledger");
  AlphaGrowth out;
  const double a0 = traj.ledger.rows.front().alphas[idx];
  if (!(a0 > 0.0)) return out;  // alpha vanishes only for the zero state
  for (const LedgerRow& row : traj.ledger.rows) {
    if (row.t <= 0.0) continue;
    const double at = row.alphas[idx];
    if (!(at > 0.0)) return AlphaGrowth{};
    out.defined = true;
    out.max_ratio = std::max(out.max_ratio, std::abs(std::log(at) - std::log(a0)) / row.t);
  }
  return out;
}

}  // namespace kdv
