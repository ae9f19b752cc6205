#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kdvlab/flows.hpp"
#include "kdvlab/grid.hpp"

namespace kdv {

inline constexpr char kVersionString[] = "0.1.0";

// Deterministic CSV output: every file starts with a comment header carrying
// the config hash, seed, and version, then a column header, then %.17g rows.
struct CsvHeader {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version;
};

std::string format_g17(double v);
std::uint64_t fnv1a_hash(const std::string& text);

void write_field_csv(const std::string& path, const Field& f, const CsvHeader& hdr);
void write_spectrum_csv(const std::string& path, const Field& f, const CsvHeader& hdr);
void write_ledger_csv(const std::string& path, const ConservedLedger& ledger,
                      const CsvHeader& hdr);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const CsvHeader& hdr);

// Reads a field CSV written by write_field_csv (columns x,value); the grid is
// reconstructed from the row count and spacing.  Throws errc::io / errc::invalid_input.
Field read_field_csv(const std::string& path);

}  // namespace kdv
