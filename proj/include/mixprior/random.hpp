#ifndef MIXPRIOR_RANDOM_HPP_
#define MIXPRIOR_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace mixprior {

// SplitMix64 step; used for seeding and for deriving independent streams.
std::uint64_t splitmix64(std::uint64_t &state);

// xoshiro256** engine satisfying UniformRandomBitGenerator.  A generator is
// identified by (seed, stream): distinct stream ids give statistically
// independent sequences, so parallel chains and simulation batches never share
// state.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Gamma(shape, 1).
  double gamma(double shape);
  double beta(double a, double b);
  // Index drawn with probability proportional to `weights` (nonnegative,
  // not necessarily normalized).
  std::size_t categorical(std::span<const double> weights);
  // Fills `out` with a Dirichlet(concentration) draw.
  void dirichlet(std::span<const double> concentration, std::span<double> out);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace mixprior

#endif  // MIXPRIOR_RANDOM_HPP_
