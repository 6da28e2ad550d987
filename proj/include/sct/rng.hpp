#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sct {

// Splitmix64-style avalanche, used for seed folding and stream derivation.
std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v);
std::uint64_t mix_seed(std::uint64_t h, std::string_view v);

// Seeded random stream. The same seed and call sequence reproduces the same
// values bit for bit. A stream is single-owner; concurrent work must derive
// child streams with distinct salts instead of sharing one.
class RngState {
  public:
    explicit RngState(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    double uniform();                    // [0, 1)
    double normal(double stddev = 1.0);  // mean 0
    double gamma(double shape);          // unit scale, shape > 0
    std::int64_t below(std::int64_t n);  // integer in [0, n)

    // Child stream keyed by salt; does not advance this stream.
    RngState derive(std::uint64_t salt) const;
    // Child stream keyed by an internal counter; each call yields a fresh one.
    RngState split();

  private:
    std::uint64_t seed_;
    std::uint64_t streams_ = 0;
    std::mt19937_64 engine_;
};

}  // namespace sct
