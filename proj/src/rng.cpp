#include "sct/rng.hpp"

#include <string>

#include "sct/errors.hpp"

namespace sct {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ splitmix64(v));
}

std::uint64_t mix_seed(std::uint64_t h, std::string_view v) {
    std::uint64_t acc = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : v) {
        acc ^= c;
        acc *= 0x100000001b3ULL;
    }
    return mix_seed(h, acc);
}

RngState::RngState(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

double RngState::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngState::normal(double stddev) {
    return std::normal_distribution<double>(0.0, stddev)(engine_);
}

double RngState::gamma(double shape) {
    if (!(shape > 0.0)) {
        throw ValidationError("gamma shape must be positive, got " + std::to_string(shape));
    }
    return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

std::int64_t RngState::below(std::int64_t n) {
    if (n <= 0) throw ValidationError("below() needs a positive bound");
    return std::uniform_int_distribution<std::int64_t>(0, n - 1)(engine_);
}

RngState RngState::derive(std::uint64_t salt) const {
    return RngState(mix_seed(seed_, salt));
}

RngState RngState::split() {
    return RngState(mix_seed(seed_, ++streams_));
}

}  // namespace sct
