#include "qclab/error.hpp"

#include <iostream>
#include <mutex>

namespace qclab {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink() {
  static WarningSink s = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return s;
}

}  // namespace

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::sampling: return "sampling";
    case Errc::unsupported_homogeneity: return "unsupported-homogeneity";
    case Errc::invalid_domain: return "invalid-domain";
    case Errc::empty_cover: return "empty-cover";
    case Errc::no_chain: return "no-chain";
    case Errc::undefined_norm: return "undefined-norm";
    case Errc::singular_system: return "singular-system";
    case Errc::not_contractive: return "not-contractive";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::accuracy: return "accuracy";
    case Errc::degenerate_probe: return "degenerate-probe";
    case Errc::overflow: return "overflow";
    case Errc::io: return "io";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

void set_warning_sink(WarningSink s) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  sink() = std::move(s);
}

void warn(const std::string& msg) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  if (sink()) sink()(msg);
}

QuietWarnings::QuietWarnings() {
  std::lock_guard<std::mutex> lock(sink_mutex());
  previous_ = sink();
  sink() = [](const std::string&) {};
}

QuietWarnings::~QuietWarnings() {
  std::lock_guard<std::mutex> lock(sink_mutex());
  sink() = std::move(previous_);
}

}  // namespace qclab
