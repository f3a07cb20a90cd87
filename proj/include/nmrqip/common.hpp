#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nmrqip {

using Complex = std::complex<double>;

/// Kernel execution policy. `parallel` uses OpenMP when available; `serial`
/// is the reference implementation kept for testing and benchmarking.
enum class Exec { serial, parallel };

/// Bad input data (configs, files, system definitions). CLI exit code 1.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Level-diagram reconstruction could not complete. CLI exit code 2.
class ReconstructionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Protocol/gate execution failure (bad target, no pulse path). CLI exit code 2.
class ProtocolError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Format with 9 significant digits (the fixed precision of all emitted numbers).
std::string format_g9(double v);

/// Quantize to the value that format_g9 round-trips to.
double round_g9(double v);

void warn(const std::string& msg);

}  // namespace nmrqip
