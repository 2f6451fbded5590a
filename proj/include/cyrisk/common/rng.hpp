#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace cyrisk::rng {

// All randomness flows through mt19937_64 plus the hand-rolled transforms
// below. The engine's output sequence is fixed by the C++ standard, and the
// transforms avoid std::*_distribution, whose algorithms vary across standard
// libraries. Result: identical streams on any conforming platform.
using Engine = std::mt19937_64;

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic child-seed derivation: FNV-1a over (master, label, index),
// then a splitmix64 finalize. Labels keep independent substreams (geometry,
// fading, claim arrivals, ...) from colliding; the index fans out per trial.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  constexpr std::uint64_t prime = 0x100000001b3ULL;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffULL;
      h *= prime;
    }
  };
  eat64(master);
  for (unsigned char c : label) {
    h ^= c;
    h *= prime;
  }
  eat64(index);
  return mix64(h);
}

// Uniform on [0,1), 53-bit mantissa.
inline double uniform01(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1); safe to pass through log().
inline double uniform_pos(Engine& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

// Exp(1) by inversion.
inline double exponential(Engine& g) { return -std::log(uniform_pos(g)); }

// Standard circularly-symmetric complex Gaussian: E|z|^2 = 1.
// |z|^2 ~ Exp(1), phase uniform.
inline std::complex<double> complex_gaussian(Engine& g) {
  double r = std::sqrt(exponential(g));
  double th = 2.0 * M_PI * uniform01(g);
  return {r * std::cos(th), r * std::sin(th)};
}

// Poisson(mean) by counting Exp(1) spacings until they pass `mean`.
// O(mean) draws; immune to the e^{-mean} underflow of product inversion.
inline std::uint64_t poisson(Engine& g, double mean) {
  if (!(mean >= 0.0)) return 0;
  std::uint64_t n = 0;
  double s = exponential(g);
  while (s <= mean) {
    ++n;
    s += exponential(g);
  }
  return n;
}

}  // namespace cyrisk::rng
