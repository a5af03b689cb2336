#include "qclab/rng.hpp"

namespace qclab {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash_name(std::string_view s) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed, std::string_view name)
    : key_(splitmix(splitmix(seed) ^ hash_name(name))), engine_(key_) {}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

int Rng::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

Rng Rng::child(std::string_view name) const { return Rng(key_, name); }

}  // namespace qclab
