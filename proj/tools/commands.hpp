#pragma once

#include <cstdint>
#include <string>

#include "qclab/error.hpp"

namespace qclab::cli {

struct Options {
  std::string manifest;  // empty: command default
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

// 0 pass, 1 verification failure, 2 usage error, 3 mathematical precondition violation.
int exit_code(Errc c);

int cmd_solve(const Options& o);
int cmd_verify(const Options& o);
int cmd_whitney(const Options& o);
int cmd_norms(const Options& o);
int cmd_report(const Options& o);

}  // namespace qclab::cli
