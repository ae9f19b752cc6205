// Command-line laboratory: named, reproducible experiments over the library,
// with CSV outputs carrying config hash + seed headers.
//
// Exit codes: 0 success / verify pass, 1 verify failure or generic error,
// 2 energy inside the spectral band, 3 blow-up, 64 usage.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kdvlab/cnoidal.hpp"
#include "kdvlab/config.hpp"
#include "kdvlab/csv.hpp"
#include "kdvlab/elliptic.hpp"
#include "kdvlab/errors.hpp"
#include "kdvlab/flows.hpp"
#include "kdvlab/grid.hpp"
#include "kdvlab/schrodinger.hpp"
#include "kdvlab/spectral.hpp"
#include "kdvlab/verify.hpp"

namespace {

using namespace kdv;

struct Globals {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

Config load_config(const Globals& g) {
  Config cfg = g.config_path.empty() ? Config::parse_text("")
                                     : Config::parse_file(g.config_path);
  return cfg;
}

std::string out_path(const Globals& g, const std::string& name) {
  std::filesystem::create_directories(g.out_dir);
  return (std::filesystem::path(g.out_dir) / name).string();
}

CsvHeader header_of(const Config& cfg, std::uint64_t seed) {
  return CsvHeader{cfg.hash(), seed, kVersionString};
}

// Deterministic band-limited state used by sweep-kappa when no file is given;
// mirrors the generator of the verify suite.
Field preset_bump(const PeriodicGrid& g, std::uint64_t seed, double amp) {
  std::mt19937_64 eng(seed);
  auto uni = [&eng]() { return std::ldexp(static_cast<double>(eng() >> 11), -53); };
  std::vector<cplx> spec(static_cast<size_t>(g.n), cplx(0.0, 0.0));
  for (int m = 1; m <= 8; ++m) {
    const double w = 1.0 / (1.0 + m * m);
    const cplx c(w * (2.0 * uni() - 1.0), w * (2.0 * uni() - 1.0));
    spec[static_cast<size_t>(g.bin_of_mode(m))] = c;
    spec[static_cast<size_t>(g.bin_of_mode(-m))] = std::conj(c);
  }
  Field f = Field::from_spectrum(g, std::move(spec));
  const double s = f.sup_norm();
  std::vector<double> v(static_cast<size_t>(g.n));
  for (int j = 0; j < g.n; ++j)
    v[static_cast<size_t>(j)] = s > 0.0 ? f.value(j) * amp / s : 0.0;
  return Field::from_samples(g, std::move(v));
}

int cmd_verify(const Globals& g, const std::vector<std::string>& only) {
  Config cfg = load_config(g);
  VerifyReport rep = run_verify(cfg, g.seed, only);
  for (const CheckResult& c : rep.checks) {
    if (c.skipped) continue;
    std::printf("%-28s %s  residual %.3e  tol %.1e%s%s\n", c.name.c_str(),
                c.pass ? "pass" : "FAIL", c.residual, c.tolerance,
                c.note.empty() ? "" : "  ", c.note.c_str());
  }
  std::printf("verify: %d pass, %d fail, %d skipped\n", rep.n_pass, rep.n_fail,
              rep.n_skip);
  write_report_csv(out_path(g, "verify_report.csv"), rep, cfg, g.seed);
  return rep.all_pass() ? 0 : 1;
}

struct EvolveArgs {
  std::string flow = "kdv";
  double kappa = 0.0;
  double t_final = 0.0;
  double dt = 1e-5;
  int n = 256;
  std::string init = "preset:cnoidal";
  std::string stepper = "ifrk4";
  std::vector<double> probe_kappas;
  double omega1 = 1.0, omega3 = 1.0;
  int ledger_stride = 0, state_stride = 0;
  std::string traj_name = "traj.csv", ledger_name = "ledger.csv";
};

int cmd_evolve(const Globals& g, const EvolveArgs& a) {
  Config cfg = load_config(g);
  Lattice lat = Lattice::rectangular(a.omega1, a.omega3);

  Field q0 = [&]() {
    if (a.init == "preset:cnoidal")
      return cnoidal_field(lat, 0.0, PeriodicGrid(a.n, 2.0 * lat.omega1));
    if (a.init.rfind("file:", 0) == 0) return read_field_csv(a.init.substr(5));
    fail(errc::usage, "init must be preset:cnoidal or file:PATH");
  }();

  FlowSpec fs;
  if (a.flow == "kdv") fs.kind = FlowKind::kdv;
  else if (a.flow == "hk") fs.kind = FlowKind::hk;
  else if (a.flow == "hk-tilde") fs.kind = FlowKind::hk_tilde;
  else if (a.flow == "kdv-potential") fs.kind = FlowKind::kdv_with_potential;
  else fail(errc::usage, "unknown flow: " + a.flow);
  fs.kappa = a.kappa;
  fs.dt = a.dt;
  fs.t_final = a.t_final;
  fs.probe_kappas = a.probe_kappas;
  fs.ledger_stride = a.ledger_stride;
  fs.state_stride = a.state_stride;
  if (a.stepper == "ifrk4") fs.stepper = StepperKind::rk4_multiplier_exact;
  else if (a.stepper == "etdrk4") fs.stepper = StepperKind::etd_rk4;
  else fail(errc::usage, "unknown stepper: " + a.stepper);

  // Perturbation flows ride on the translating cnoidal background with the
  // matching speed: 6 e1 for the KdV form, nu(kappa) for the kappa-flow form.
  if (fs.kind == FlowKind::kdv_with_potential || fs.kind == FlowKind::hk_tilde) {
    Field V0 = cnoidal_field(lat, 0.0, q0.grid());
    const double speed = fs.kind == FlowKind::kdv_with_potential
                             ? 6.0 * lat.e1
                             : hk_traveling_wave(lat, fs.kappa).nu;
    fs.background = BackgroundRule::translating(std::move(V0), speed);
  }

  Trajectory traj = evolve(fs, q0);
  CsvHeader hdr = header_of(cfg, g.seed);
  write_trajectory_csv(out_path(g, a.traj_name), traj, hdr);
  write_ledger_csv(out_path(g, a.ledger_name), traj.ledger, hdr);
  std::printf("evolve: %zu stored states, %zu ledger rows\n", traj.states.size(),
              traj.ledger.rows.size());
  return 0;
}

int cmd_sweep(const Globals& g, std::vector<double> kappas, double t_final,
              double dt, int n, double omega1, double omega3, double amp) {
  if (kappas.empty()) fail(errc::usage, "sweep-kappa needs a nonempty kappa list");
  Config cfg = load_config(g);
  Lattice lat = Lattice::rectangular(omega1, omega3);
  PeriodicGrid grid(n, 2.0 * lat.omega1);
  Field q0 = preset_bump(grid, g.seed, amp);

  std::vector<SweepRow> rows = convergence_sweep(kappas, q0, lat, t_final, dt);

  const std::string path = out_path(g, "sweep.csv");
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot open " + path);
  CsvHeader hdr = header_of(cfg, g.seed);
  out << "# version=" << hdr.version << " config_hash=" << hdr.config_hash
      << " seed=" << hdr.seed << "\n";
  out << "kappa,is_reference,failed,sup_h1m_distance,background_l2_half,"
         "P_drift,H_drift,note\n";
  for (const SweepRow& r : rows) {
    std::string note = r.note;
    for (char& ch : note)
      if (ch == ',' || ch == '\n') ch = ';';
    out << format_g17(r.kappa) << ',' << (r.is_reference ? 1 : 0) << ','
        << (r.failed ? 1 : 0) << ',' << format_g17(r.sup_h1m_distance) << ','
        << format_g17(r.background_l2_half) << ',' << format_g17(r.ledger_P_drift)
        << ',' << format_g17(r.ledger_H_drift) << ',' << note << '\n';
    std::printf("kappa %8.3f%s sup_h1m %.6e bg %.6e%s%s\n", r.kappa,
                r.is_reference ? " (ref)" : "", r.sup_h1m_distance,
                r.background_l2_half, r.failed ? " FAILED: " : "",
                r.failed ? r.note.c_str() : "");
  }
  if (!out) fail(errc::io, "write failed: " + path);
  return 0;
}

int cmd_cnoidal_profile(const Globals& g, double omega1, double omega3, double t,
                        int n, const std::string& name) {
  Config cfg = load_config(g);
  Lattice lat = Lattice::rectangular(omega1, omega3);
  Field V = cnoidal_field(lat, t, PeriodicGrid(n, 2.0 * lat.omega1));
  write_field_csv(out_path(g, name), V, header_of(cfg, g.seed));
  std::printf("cnoidal profile: n=%d period=%.17g mean=%.17g\n", n,
              2.0 * lat.omega1, [&] {
                double m = 0.0;
                for (int j = 0; j < n; ++j) m += V.value(j);
                return m / n;
              }());
  return 0;
}

int cmd_cnoidal_speed(const Globals&, double omega1, double omega3,
                      std::vector<double> kappas) {
  if (kappas.empty()) fail(errc::usage, "hk-speed needs at least one kappa");
  Lattice lat = Lattice::rectangular(omega1, omega3);
  std::printf("kappa,b,nu,c1,c2\n");
  for (double kap : kappas) {
    HkTravelingWave tw = hk_traveling_wave(lat, kap);
    std::printf("%s,%s,%s,%s,%s\n", format_g17(kap).c_str(),
                format_g17(tw.bp.b).c_str(), format_g17(tw.nu).c_str(),
                format_g17(tw.c1).c_str(), format_g17(tw.c2).c_str());
  }
  return 0;
}

// Deviation of each traveling-wave constant from its leading large-kappa
// form; the decay order is printed from consecutive ratios, not asserted.
int cmd_cnoidal_asymptotics(const Globals& g, double omega1, double omega3,
                            std::vector<double> kappas,
                            const std::string& name) {
  if (kappas.empty()) fail(errc::usage, "asymptotics needs at least one kappa");
  Config cfg = load_config(g);
  Lattice lat = Lattice::rectangular(omega1, omega3);
  const double speed = 6.0 * lat.e1;
  struct Row {
    double kappa, db, dc1, dc2, dnu;
  };
  std::vector<Row> rows;
  for (double kap : kappas) {
    HkTravelingWave tw = hk_traveling_wave(lat, kap);
    rows.push_back({kap, tw.bp.b - 1.0 / kap, tw.c1 - 0.5 / kap,
                    tw.c2 + 0.25 / (kap * kap * kap), tw.nu - speed});
  }
  std::ofstream out(out_path(g, name));
  const CsvHeader hdr = header_of(cfg, g.seed);
  out << "# version=" << hdr.version << " config_hash=" << hdr.config_hash
      << " seed=" << hdr.seed << "\n";
  out << "# db=b-1/kappa dc1=c1-1/(2 kappa) dc2=c2+1/(4 kappa^3) "
         "dnu=nu-6 wp(omega1)\n";
  out << "kappa,db,dc1,dc2,dnu\n";
  std::printf("kappa,db,dc1,dc2,dnu\n");
  for (const Row& r : rows) {
    const std::string line = format_g17(r.kappa) + "," + format_g17(r.db) +
                             "," + format_g17(r.dc1) + "," + format_g17(r.dc2) +
                             "," + format_g17(r.dnu);
    out << line << "\n";
    std::printf("%s\n", line.c_str());
  }
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i + 1].kappa <= rows[i].kappa) return 0;
    const double lr = std::log(rows[i + 1].kappa / rows[i].kappa);
    std::printf(
        "observed order over [%g,%g]: b %.2f c1 %.2f c2 %.2f nu %.2f\n",
        rows[i].kappa, rows[i + 1].kappa,
        std::log(std::abs(rows[i].db / rows[i + 1].db)) / lr,
        std::log(std::abs(rows[i].dc1 / rows[i + 1].dc1)) / lr,
        std::log(std::abs(rows[i].dc2 / rows[i + 1].dc2)) / lr,
        std::log(std::abs(rows[i].dnu / rows[i + 1].dnu)) / lr);
  }
  return 0;
}

int cmd_green(const Globals& g, const std::string& input, double kappa,
              const std::string& method, const std::string& name) {
  Config cfg = load_config(g);
  Field q = read_field_csv(input);
  if (method != "floquet" && method != "nullspace")
    fail(errc::usage, "method must be floquet or nullspace");
  GreenDiag gd = method == "floquet" ? diagonal_green(q, kappa)
                                     : diagonal_green_nullspace(q, kappa);
  write_field_csv(out_path(g, name), gd.g, header_of(cfg, g.seed));
  std::printf("green: kappa=%.17g method=%s sup=%.17g\n", kappa, method.c_str(),
              gd.g.sup_norm());
  return 0;
}

int cmd_elliptic_eval(const Globals&, double omega1, double omega3, double zre,
                      double zim) {
  Lattice lat = Lattice::rectangular(omega1, omega3);
  WeierstrassBundle b = weierstrass_bundle(cplx(zre, zim), lat);
  std::printf("quantity,re,im\n");
  auto row = [](const char* name, cplx v) {
    std::printf("%s,%s,%s\n", name, format_g17(v.real()).c_str(),
                format_g17(v.imag()).c_str());
  };
  row("wp", b.wp);
  row("wp_prime", b.wp_prime);
  row("zeta", b.zeta);
  row("sigma", b.sigma);
  std::printf("e1,%s,0\n", format_g17(lat.e1).c_str());
  std::printf("eta1,%s,0\n", format_g17(lat.eta1).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for commuting KdV flows on the circle"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config_path, "key=value config file");
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.add_option("--out", g.out_dir, "output directory");

  // verify
  auto* sv = app.add_subcommand("verify", "run the named invariant checks");
  std::vector<std::string> only;
  sv->add_option("--only", only, "run only these checks")->delimiter(',');

  // evolve
  auto* se = app.add_subcommand("evolve", "integrate one flow");
  EvolveArgs ea;
  se->add_option("--flow", ea.flow, "kdv|hk|hk-tilde|kdv-potential");
  se->add_option("--kappa", ea.kappa, "flow energy parameter");
  se->add_option("--t-final", ea.t_final, "final time")->required();
  se->add_option("--dt", ea.dt, "step size");
  se->add_option("--n", ea.n, "grid nodes (preset init)");
  se->add_option("--init", ea.init, "preset:cnoidal or file:q.csv");
  se->add_option("--stepper", ea.stepper, "ifrk4|etdrk4");
  se->add_option("--probe-kappas", ea.probe_kappas, "alpha ledger energies")
      ->delimiter(',');
  se->add_option("--omega1", ea.omega1, "lattice half period");
  se->add_option("--omega3", ea.omega3, "lattice imaginary half period");
  se->add_option("--ledger-stride", ea.ledger_stride, "steps between ledger rows");
  se->add_option("--state-stride", ea.state_stride, "steps between stored states");
  se->add_option("--out", ea.traj_name, "trajectory CSV name");
  se->add_option("--ledger", ea.ledger_name, "ledger CSV name");

  // sweep-kappa
  auto* ss = app.add_subcommand("sweep-kappa",
                                "compare the kappa-flows against the KdV limit");
  std::vector<double> sk_kappas;
  double sk_t = 0.02, sk_dt = 2e-4, sk_amp = 0.05;
  double sk_o1 = 1.0, sk_o3 = 1.0;
  int sk_n = 256;
  ss->add_option("--kappas", sk_kappas, "energy list")->delimiter(',')->required();
  ss->add_option("--t-final", sk_t, "horizon");
  ss->add_option("--dt", sk_dt, "step size");
  ss->add_option("--n", sk_n, "grid nodes");
  ss->add_option("--omega1", sk_o1, "lattice half period");
  ss->add_option("--omega3", sk_o3, "lattice imaginary half period");
  ss->add_option("--amp", sk_amp, "initial perturbation amplitude");

  // cnoidal
  auto* sc = app.add_subcommand("cnoidal", "cnoidal wave tables");
  sc->require_subcommand(1);
  auto* scp = sc->add_subcommand("profile", "sample one period");
  double cp_o1 = 1.0, cp_o3 = 1.0, cp_t = 0.0;
  int cp_n = 256;
  std::string cp_out = "profile.csv";
  scp->add_option("--omega1", cp_o1, "lattice half period");
  scp->add_option("--omega3", cp_o3, "lattice imaginary half period");
  scp->add_option("--t", cp_t, "time");
  scp->add_option("--n", cp_n, "nodes");
  scp->add_option("--file", cp_out, "output CSV name");
  auto* scs = sc->add_subcommand("hk-speed", "traveling-wave constants");
  double cs_o1 = 1.0, cs_o3 = 1.0;
  std::vector<double> cs_kappas;
  scs->add_option("--omega1", cs_o1, "lattice half period");
  scs->add_option("--omega3", cs_o3, "lattice imaginary half period");
  scs->add_option("--kappa", cs_kappas, "energy list")->delimiter(',')->required();
  auto* sca = sc->add_subcommand(
      "asymptotics", "large-energy deviation table of the traveling-wave constants");
  double ca_o1 = 1.0, ca_o3 = 1.0;
  std::vector<double> ca_kappas{8.0, 16.0, 32.0, 64.0};
  std::string ca_out = "asymptotics.csv";
  sca->add_option("--omega1", ca_o1, "lattice half period");
  sca->add_option("--omega3", ca_o3, "lattice imaginary half period");
  sca->add_option("--kappa", ca_kappas, "energy list")->delimiter(',');
  sca->add_option("--file", ca_out, "output CSV name");

  // schrodinger
  auto* sg = app.add_subcommand("schrodinger", "resolvent diagnostics");
  sg->require_subcommand(1);
  auto* sgg = sg->add_subcommand("green", "diagonal Green's function of a field");
  std::string gr_in, gr_method = "floquet", gr_out = "g.csv";
  double gr_kappa = 0.0;
  sgg->add_option("--input", gr_in, "potential CSV")->required();
  sgg->add_option("--kappa", gr_kappa, "energy parameter")->required();
  sgg->add_option("--method", gr_method, "floquet|nullspace");
  sgg->add_option("--file", gr_out, "output CSV name");

  // elliptic
  auto* sl = app.add_subcommand("elliptic", "lattice function evaluation");
  sl->require_subcommand(1);
  auto* sle = sl->add_subcommand("eval", "evaluate the function bundle");
  double el_o1 = 1.0, el_o3 = 1.0;
  std::vector<double> el_z;
  sle->add_option("--omega1", el_o1, "lattice half period");
  sle->add_option("--omega3", el_o3, "lattice imaginary half period");
  sle->add_option("--z", el_z, "evaluation point: re [im]")
      ->expected(1, 2)
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (sv->parsed()) return cmd_verify(g, only);
    if (se->parsed()) return cmd_evolve(g, ea);
    if (ss->parsed())
      return cmd_sweep(g, sk_kappas, sk_t, sk_dt, sk_n, sk_o1, sk_o3, sk_amp);
    if (scp->parsed()) return cmd_cnoidal_profile(g, cp_o1, cp_o3, cp_t, cp_n, cp_out);
    if (scs->parsed()) return cmd_cnoidal_speed(g, cs_o1, cs_o3, cs_kappas);
    if (sca->parsed())
      return cmd_cnoidal_asymptotics(g, ca_o1, ca_o3, ca_kappas, ca_out);
    if (sgg->parsed()) return cmd_green(g, gr_in, gr_kappa, gr_method, gr_out);
    if (sle->parsed())
      return cmd_elliptic_eval(g, el_o1, el_o3, el_z[0],
                               el_z.size() > 1 ? el_z[1] : 0.0);
    std::fprintf(stderr, "no subcommand\n");
    return 64;
  } catch (const kdv::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.kind()) {
      case kdv::errc::spectral_band: return 2;
      case kdv::errc::blow_up: return 3;
      case kdv::errc::usage: return 64;
      default: return 1;
    }
  }
}
