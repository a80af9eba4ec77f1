#include "vhetcs/rng.hpp"

namespace vhetcs {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

Rng::Rng(std::uint64_t master, StreamTag tag, std::initializer_list<std::uint64_t> ids)
    : engine_(0) {
  std::uint64_t h = derive_seed(master, {static_cast<std::uint64_t>(tag)});
  for (std::uint64_t id : ids) h = derive_seed(h, {id});
  engine_.seed(h);
}

int Rng::uniform_int(int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(engine_);
}

double Rng::standard_normal() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

}  // namespace vhetcs
