#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace ldp {

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream. Substreams are derived from a master seed by
// the splitting rule in `substream`, so trial i always sees the same stream
// no matter which thread runs it or in which order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Substream rule: seed_i = splitmix64(master ^ splitmix64(index + 1)).
  static RngStream substream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // N(0, 1), Box-Muller

  Eigen::VectorXd gaussian_vector(int dim);
  Eigen::VectorXd gaussian_vector(int dim, double stddev);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ldp
