#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qclab {

// Named random stream: the sequence depends only on (seed, name), never on
// which other streams were drawn or in what order.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view name);

  double uniform();                       // [0, 1)
  double uniform(double a, double b);
  double normal();
  int uniform_int(int lo, int hi);        // inclusive
  Rng child(std::string_view name) const;

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

std::uint64_t hash_name(std::string_view s);

}  // namespace qclab
