#include "kdvlab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kdvlab/errors.hpp"

namespace kdv {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot open for writing: " + path);
  return out;
}

void write_header(std::ofstream& out, const CsvHeader& hdr) {
  out << "# version=" << hdr.version << " config_hash=" << hdr.config_hash
      << " seed=" << hdr.seed << '\n';
}

}  // namespace

void write_field_csv(const std::string& path, const Field& f, const CsvHeader& hdr) {
  std::ofstream out = open_out(path);
  write_header(out, hdr);
  out << "x,value\n";
  for (int j = 0; j < f.grid().n; ++j)
    out << format_g17(f.grid().node(j)) << ',' << format_g17(f.value(j)) << '\n';
  if (!out) fail(errc::io, "write failed: " + path);
}

void write_spectrum_csv(const std::string& path, const Field& f, const CsvHeader& hdr) {
  std::ofstream out = open_out(path);
  write_header(out, hdr);
  out << "xi,re,im\n";
  const PeriodicGrid& g = f.grid();
  for (int m = -g.n / 2 + 1; m <= g.n / 2; ++m) {
    cplx c = f.coeff_of_mode(m);
    out << format_g17(2.0 * PeriodicGrid::pi() * m / g.period) << ','
        << format_g17(c.real()) << ',' << format_g17(c.imag()) << '\n';
  }
  if (!out) fail(errc::io, "write failed: " + path);
}

void write_ledger_csv(const std::string& path, const ConservedLedger& ledger,
                      const CsvHeader& hdr) {
  std::ofstream out = open_out(path);
  write_header(out, hdr);
  out << "t,P,HKdV";
  for (double pk : ledger.probe_kappas) out << ",alpha_" << format_g17(pk);
  out << '\n';
  for (const LedgerRow& r : ledger.rows) {
    out << format_g17(r.t) << ',' << format_g17(r.P) << ',' << format_g17(r.H_kdv);
    for (double a : r.alphas) out << ',' << format_g17(a);
    out << '\n';
  }
  if (!out) fail(errc::io, "write failed: " + path);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const CsvHeader& hdr) {
  std::ofstream out = open_out(path);
  write_header(out, hdr);
  out << "t,x,value\n";
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const Field& f = traj.states[i];
    for (int j = 0; j < f.grid().n; ++j)
      out << format_g17(traj.times[i]) << ',' << format_g17(f.grid().node(j)) << ','
          << format_g17(f.value(j)) << '\n';
  }
  if (!out) fail(errc::io, "write failed: " + path);
}

Field read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open for reading: " + path);
  std::vector<double> xs, vs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("x,", 0) == 0) continue;  // column header
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      fail(errc::invalid_input, "malformed row in " + path + ": " + line);
    try {
      xs.push_back(std::stod(a));
      vs.push_back(std::stod(b));
    } catch (const std::exception&) {
      fail(errc::invalid_input, "non-numeric row in " + path + ": " + line);
    }
  }
  const int n = static_cast<int>(vs.size());
  if (n < 8) fail(errc::invalid_input, "too few rows in " + path);
  const double dx = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
  if (!(dx > 0.0)) fail(errc::invalid_input, "grid spacing not positive in " + path);
  for (int j = 1; j < n; ++j)
    if (std::abs(xs[static_cast<size_t>(j)] - j * dx) > 1e-9 * n * dx)
      fail(errc::invalid_input, "grid is not uniform in " + path);
  return Field::from_samples(PeriodicGrid(n, dx * n), std::move(vs));
}

}  // namespace kdv
