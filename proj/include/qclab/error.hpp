#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace qclab {

using cplx = std::complex<double>;

enum class Errc {
  invalid_argument,
  sampling,
  unsupported_homogeneity,
  invalid_domain,
  empty_cover,
  no_chain,
  undefined_norm,
  singular_system,
  not_contractive,
  insufficient_data,
  accuracy,
  degenerate_probe,
  overflow,
  io,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

// Warnings go through a process-wide sink; the default writes to stderr.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& msg);

// Installs a sink that drops warnings for the lifetime of the guard.
class QuietWarnings {
 public:
  QuietWarnings();
  ~QuietWarnings();
  QuietWarnings(const QuietWarnings&) = delete;
  QuietWarnings& operator=(const QuietWarnings&) = delete;

 private:
  WarningSink previous_;
};

}  // namespace qclab
