#pragma once

// Seeded noise injection.  Monte Carlo runs derive per-task streams by
// splitting: stream k uses seed ^ golden-ratio mix of k, so seeds never
// collide across tasks and a fixed scenario seed reproduces every stream.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tmsim {

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the stream index, xored into the base seed
    std::uint64_t z = stream + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return seed ^ (z ^ (z >> 31));
}

class NoiseGen {
  public:
    explicit NoiseGen(std::uint64_t seed) : eng_(seed) {}

    double gaussian(double sigma) { return sigma > 0 ? normal_(eng_) * sigma : 0.0; }

    // y += sigma * N(0,1)
    void add_gaussian(std::vector<double>& y, double sigma) {
        for (double& v : y) v += gaussian(sigma);
    }
    // y *= exp(sigma * N(0,1))
    void mul_lognormal(std::vector<double>& y, double sigma) {
        for (double& v : y) v *= std::exp(gaussian(sigma));
    }

  private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_;
};

}  // namespace tmsim
