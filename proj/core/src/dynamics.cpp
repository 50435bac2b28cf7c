#include "ldp/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ldp {

InitialDistribution InitialDistribution::gaussian_scaled() {
  InitialDistribution d;
  d.kind = Kind::GaussianScaled;
  return d;
}

InitialDistribution InitialDistribution::standard_gaussian() {
  InitialDistribution d;
  d.kind = Kind::StandardGaussian;
  return d;
}

InitialDistribution InitialDistribution::point_mass(Vector x0) {
  InitialDistribution d;
  d.kind = Kind::Point;
  d.point = std::move(x0);
  return d;
}

InitialDistribution InitialDistribution::gaussian_with_velocity(double pos_var,
                                                                double vel_var) {
  if (pos_var <= 0.0 || vel_var <= 0.0)
    throw std::invalid_argument("gaussian_with_velocity: covariances must be positive definite");
  InitialDistribution d;
  d.kind = Kind::GaussianWithVelocity;
  d.position_var = pos_var;
  d.velocity_var = vel_var;
  return d;
}

Vector overdamped_drift(const Potential& p, double eta, const Vector& x) {
  return x - eta * p.gradient(x);
}

ChainState overdamped_step(const ChainState& s, const Potential& p, double eta,
                           std::optional<double> radius_guard, RngStream& rng) {
  if (s.bottom) throw std::invalid_argument("overdamped_step: state is bottom");
  if (eta <= 0.0) throw std::invalid_argument("overdamped_step: eta must be positive");
  const Vector g = p.gradient(s.x);
  if (!g.allFinite()) throw std::runtime_error("overdamped_step: non-finite gradient");

  ChainState out;
  out.x = s.x - eta * g + rng.gaussian_vector(p.dim, std::sqrt(2.0 * eta));
  out.t = s.t + eta;
  out.bottom = radius_guard && (out.x - s.x).norm() > *radius_guard;
  return out;
}

ChainState underdamped_step(const ChainState& s, const Potential& p, double eta,
                            double gamma, double mu, std::optional<double> radius_guard,
                            RngStream& rng) {
  if (s.bottom) throw std::invalid_argument("underdamped_step: state is bottom");
  if (!s.v) throw std::invalid_argument("underdamped_step: state has no velocity");
  if (eta <= 0.0 || gamma <= 0.0 || mu <= 0.0)
    throw std::invalid_argument("underdamped_step: eta, gamma, mu must be positive");
  if (gamma * eta >= 1.0)
    throw std::invalid_argument("underdamped_step: gamma * eta must be below 1");
  const Vector g = p.gradient(s.x);
  if (!g.allFinite()) throw std::runtime_error("underdamped_step: non-finite gradient");

  ChainState out;
  out.v = (1.0 - gamma * eta) * (*s.v) - mu * eta * g
          + rng.gaussian_vector(p.dim, std::sqrt(2.0 * gamma * mu * eta));
  out.x = s.x + eta * (*out.v);
  out.t = s.t + eta;
  out.bottom = radius_guard && (out.x - s.x).norm() > *radius_guard;
  return out;
}

ChainState sample_initial(const InitialDistribution& init, const Potential& p,
                          bool with_velocity, RngStream& rng) {
  ChainState s;
  s.t = 0.0;
  switch (init.kind) {
    case InitialDistribution::Kind::GaussianScaled:
      if (p.smoothness <= 0.0)
        throw std::invalid_argument("sample_initial: gaussian_scaled needs L > 0");
      s.x = rng.gaussian_vector(p.dim, std::sqrt(1.0 / p.smoothness));
      break;
    case InitialDistribution::Kind::StandardGaussian:
      s.x = rng.gaussian_vector(p.dim);
      break;
    case InitialDistribution::Kind::Point:
      if (init.point.size() != p.dim)
        throw std::invalid_argument("sample_initial: point dimension mismatch");
      s.x = init.point;
      break;
    case InitialDistribution::Kind::GaussianWithVelocity:
      s.x = rng.gaussian_vector(p.dim, std::sqrt(init.position_var));
      s.v = rng.gaussian_vector(p.dim, std::sqrt(init.velocity_var));
      break;
  }
  if (with_velocity && !s.v) s.v = Vector::Zero(p.dim);
  return s;
}

namespace {

ChainState advance(const Potential& p, const DynamicsConfig& cfg, const ChainState& s,
                   RngStream& rng) {
  if (cfg.process == ProcessKind::Overdamped)
    return overdamped_step(s, p, cfg.eta, cfg.radius_guard, rng);
  return underdamped_step(s, p, cfg.eta, cfg.gamma, cfg.mu, cfg.radius_guard, rng);
}

ChainState absorbed(const ChainState& s, double eta) {
  ChainState out = s;
  out.t = s.t + eta;
  out.bottom = true;
  return out;
}

}  // namespace

Trajectory run_chain(const Potential& p, const DynamicsConfig& cfg,
                     const InitialDistribution& init, RngStream& rng) {
  Trajectory traj;
  traj.eta = cfg.eta;
  traj.states.reserve(static_cast<size_t>(cfg.steps) + 1);
  ChainState s = sample_initial(init, p, cfg.process == ProcessKind::Underdamped, rng);
  traj.states.push_back(s);
  for (std::int64_t i = 0; i < cfg.steps; ++i) {
    s = s.bottom ? absorbed(s, cfg.eta) : advance(p, cfg, s, rng);
    s.t = static_cast<double>(i + 1) * cfg.eta;
    traj.states.push_back(s);
  }
  traj.hit_bottom = !traj.states.empty() && traj.states.back().bottom;
  return traj;
}

ChainState run_chain_final(const Potential& p, const DynamicsConfig& cfg,
                           const InitialDistribution& init, RngStream& rng) {
  ChainState s = sample_initial(init, p, cfg.process == ProcessKind::Underdamped, rng);
  for (std::int64_t i = 0; i < cfg.steps; ++i) {
    s = s.bottom ? absorbed(s, cfg.eta) : advance(p, cfg, s, rng);
    s.t = static_cast<double>(i + 1) * cfg.eta;
  }
  return s;
}

CoupledOutcome coupled_refinement_run(const Potential& p, double eta, int k,
                                      std::int64_t T, std::optional<double> radius_guard,
                                      const InitialDistribution& init, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("coupled_refinement_run: k must be >= 1");
  const double sub_eta = eta / static_cast<double>(k);
  const double noise_sd = std::sqrt(2.0 * sub_eta);

  ChainState start = sample_initial(init, p, false, rng);
  Vector coarse = start.x;        // chain with gradient frozen at step boundaries
  Vector fine = start.x;          // chain refreshing the gradient every substep
  Vector coarse_anchor = coarse;  // position at the last multiple of eta
  Vector fine_anchor = fine;
  Vector coarse_frozen_grad = p.gradient(coarse_anchor);

  CoupledOutcome out;
  for (std::int64_t step = 0; step < T; ++step) {
    for (int j = 0; j < k; ++j) {
      const Vector xi = rng.gaussian_vector(p.dim, noise_sd);
      if (!out.coarse_bottom) {
        const double gap = (p.gradient(coarse) - coarse_frozen_grad).norm();
        out.max_gradient_gap_coarse = std::max(out.max_gradient_gap_coarse, gap);
        coarse += -sub_eta * coarse_frozen_grad + xi;
        const double disp = (coarse - coarse_anchor).norm();
        out.coarse_max_step_displacement = std::max(out.coarse_max_step_displacement, disp);
        if (radius_guard && disp > *radius_guard) out.coarse_bottom = true;
      }
      if (!out.fine_bottom) {
        const Vector grad_here = p.gradient(fine);
        const double gap = (grad_here - p.gradient(fine_anchor)).norm();
        out.max_gradient_gap_fine = std::max(out.max_gradient_gap_fine, gap);
        fine += -sub_eta * grad_here + xi;
        const double disp = (fine - fine_anchor).norm();
        out.fine_max_step_displacement = std::max(out.fine_max_step_displacement, disp);
        if (radius_guard && disp > *radius_guard) out.fine_bottom = true;
      }
    }
    coarse_anchor = coarse;
    fine_anchor = fine;
    if (!out.coarse_bottom) coarse_frozen_grad = p.gradient(coarse_anchor);
  }
  out.coarse_end = coarse;
  out.fine_end = fine;
  return out;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out;
  const bool has_v = !traj.states.empty() && traj.states.front().v.has_value();
  const int dim = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().x.size());
  out += "step,t";
  for (int i = 1; i <= dim; ++i) out += ",x" + std::to_string(i);
  if (has_v)
    for (int i = 1; i <= dim; ++i) out += ",v" + std::to_string(i);
  out += ",bottom\n";

  char buf[64];
  for (size_t s = 0; s < traj.states.size(); ++s) {
    const auto& st = traj.states[s];
    out += std::to_string(s);
    std::snprintf(buf, sizeof buf, ",%.17g", st.t);
    out += buf;
    for (int i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", st.x(i));
      out += buf;
    }
    if (has_v)
      for (int i = 0; i < dim; ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", (*st.v)(i));
        out += buf;
      }
    out += st.bottom ? ",1\n" : ",0\n";
  }
  return out;
}

namespace {
constexpr char kTrajMagic[8] = {'L', 'D', 'P', 'T', 'R', 'J', '0', '1'};
}

void write_trajectory_binary(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_trajectory_binary: cannot open " + path);
  out.write(kTrajMagic, sizeof kTrajMagic);
  const std::int64_t count = static_cast<std::int64_t>(traj.states.size());
  const std::int64_t dim = traj.states.empty() ? 0 : traj.states.front().x.size();
  const std::int64_t has_v =
      (!traj.states.empty() && traj.states.front().v.has_value()) ? 1 : 0;
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&has_v), sizeof has_v);
  out.write(reinterpret_cast<const char*>(&traj.eta), sizeof traj.eta);
  for (const auto& st : traj.states) {
    out.write(reinterpret_cast<const char*>(&st.t), sizeof st.t);
    out.write(reinterpret_cast<const char*>(st.x.data()),
              static_cast<std::streamsize>(sizeof(double) * dim));
    if (has_v)
      out.write(reinterpret_cast<const char*>(st.v->data()),
                static_cast<std::streamsize>(sizeof(double) * dim));
    const char b = st.bottom ? 1 : 0;
    out.write(&b, 1);
  }
}

Trajectory read_trajectory_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_trajectory_binary: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kTrajMagic, sizeof magic) != 0)
    throw std::runtime_error("read_trajectory_binary: bad magic in " + path);
  std::int64_t count = 0, dim = 0, has_v = 0;
  Trajectory traj;
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&has_v), sizeof has_v);
  in.read(reinterpret_cast<char*>(&traj.eta), sizeof traj.eta);
  traj.states.resize(static_cast<size_t>(count));
  for (auto& st : traj.states) {
    st.x.resize(dim);
    in.read(reinterpret_cast<char*>(&st.t), sizeof st.t);
    in.read(reinterpret_cast<char*>(st.x.data()),
            static_cast<std::streamsize>(sizeof(double) * dim));
    if (has_v) {
      st.v = Vector(dim);
      in.read(reinterpret_cast<char*>(st.v->data()),
              static_cast<std::streamsize>(sizeof(double) * dim));
    }
    char b = 0;
    in.read(&b, 1);
    st.bottom = b != 0;
  }
  if (!in) throw std::runtime_error("read_trajectory_binary: truncated file " + path);
  traj.hit_bottom = !traj.states.empty() && traj.states.back().bottom;
  return traj;
}

}  // namespace ldp
