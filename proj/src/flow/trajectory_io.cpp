#include "mjsc/flow.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace mjsc {

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "t,x1,x2,xi1,xi2,H\n";
  char buf[256];
  for (std::size_t i = 0; i < t.size(); ++i) {
    const PhasePoint& p = t.points[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t.times[i], p.x[0],
                  p.x[1], p.xi[0], p.xi[1], t.energies[i]);
    os << buf;
  }
}

std::string TrajectoryKey::file_name() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "_%llu_%a_%a.traj", static_cast<unsigned long long>(seed), dt, t_end);
  return model_hash + buf;
}

namespace {

constexpr std::uint32_t kMagic = 0x4d4a5452;  // "MJTR"

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
  return bool(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

void save_trajectory_cache(const std::filesystem::path& dir, const TrajectoryKey& key,
                           const Trajectory& t) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / key.file_name(), std::ios::binary);
  if (!os) throw Error(Errc::NumericalFailure, "cannot write trajectory cache");
  put(os, kMagic);
  const std::uint64_t n = t.size();
  const std::int32_t d = t.empty() ? 2 : t.points.front().d;
  const std::uint32_t mask = t.empty() ? 3u : t.points.front().angle_mask;
  put(os, n);
  put(os, d);
  put(os, mask);
  put(os, t.energy_drift);
  put(os, t.dt);
  put(os, std::int32_t(t.stride));
  for (std::size_t i = 0; i < n; ++i) {
    const PhasePoint& p = t.points[i];
    put(os, t.times[i]);
    put(os, p.x);
    put(os, p.xi);
    put(os, t.energies[i]);
  }
}

std::optional<Trajectory> load_trajectory_cache(const std::filesystem::path& dir,
                                                const TrajectoryKey& key) {
  std::ifstream is(dir / key.file_name(), std::ios::binary);
  if (!is) return std::nullopt;
  std::uint32_t magic = 0, mask = 0;
  std::uint64_t n = 0;
  std::int32_t d = 0, stride = 0;
  Trajectory t;
  if (!get(is, magic) || magic != kMagic || !get(is, n) || !get(is, d) || !get(is, mask) ||
      !get(is, t.energy_drift) || !get(is, t.dt) || !get(is, stride))
    return std::nullopt;
  t.method = "gbs8";
  t.stride = stride;
  for (std::uint64_t i = 0; i < n; ++i) {
    double time = 0.0, e = 0.0;
    std::array<double, 2> x{}, xi{};
    if (!get(is, time) || !get(is, x) || !get(is, xi) || !get(is, e)) return std::nullopt;
    t.times.push_back(time);
    t.points.emplace_back(d, x, xi, mask);
    t.energies.push_back(e);
  }
  return t;
}

}  // namespace mjsc
