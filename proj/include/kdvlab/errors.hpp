#pragma once

#include <stdexcept>
#include <string>

namespace kdv {

// Error taxonomy shared by every module.  The CLI maps kinds to process
// exit codes (spectral_band -> 2, blow_up -> 3, usage -> 64, rest -> 1).
enum class errc {
  invalid_input,      // non-finite or malformed data
  parameter,          // argument outside its documented range
  symmetry,           // operation would produce a complex field from real input
  precondition,       // caller violated a documented precondition (e.g. band limit)
  truncation,         // window/decay requirement not met
  pole_proximity,     // elliptic evaluation too close to a lattice point
  no_solution,        // root solve has no admissible solution
  spectral_band,      // -kappa^2 not below the Schrodinger spectrum
  consistency,        // internal cross-check failed (signals a deeper problem)
  degenerate_kernel,  // nullspace extraction found kernel dimension != 1
  blow_up,            // time integration diverged
  usage,              // CLI/config misuse
  io,                 // file read/write failure
};

inline const char* errc_name(errc kind) noexcept {
  switch (kind) {
    case errc::invalid_input: return "invalid_input";
    case errc::parameter: return "parameter";
    case errc::symmetry: return "symmetry";
    case errc::precondition: return "precondition";
    case errc::truncation: return "truncation";
    case errc::pole_proximity: return "pole_proximity";
    case errc::no_solution: return "no_solution";
    case errc::spectral_band: return "spectral_band";
    case errc::consistency: return "consistency";
    case errc::degenerate_kernel: return "degenerate_kernel";
    case errc::blow_up: return "blow_up";
    case errc::usage: return "usage";
    case errc::io: return "io";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& what)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + what), kind_(kind) {}
  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) {
  throw error(kind, what);
}

}  // namespace kdv
