#include "ldp/rng.hpp"

#include <cmath>

namespace ldp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : engine_(seed) {}

RngStream RngStream::substream(std::uint64_t master_seed, std::uint64_t index) {
  return RngStream(splitmix64(master_seed ^ splitmix64(index + 1)));
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd RngStream::gaussian_vector(int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gaussian();
  return v;
}

Eigen::VectorXd RngStream::gaussian_vector(int dim, double stddev) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = stddev * gaussian();
  return v;
}

}  // namespace ldp
