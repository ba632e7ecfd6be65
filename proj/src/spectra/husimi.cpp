#include "mjsc/spectra.hpp"

#include <algorithm>

namespace mjsc {

int RegionPartition::locate(std::span<const double> xi) const {
  for (std::size_t r = 0; r < contains.size(); ++r)
    if (contains[r](xi)) return int(r);
  return -1;
}

namespace {

// Angle of xi measured from theta0, in [0, 2 pi).
double rel_angle(std::span<const double> xi, double theta0) {
  return wrap_angle(std::atan2(xi.size() > 1 ? xi[1] : 0.0, xi[0]) - theta0);
}

}  // namespace

RegionPartition angular_sectors(int n, double theta0) {
  if (n < 1) throw Error(Errc::InvalidArgument, "need at least one sector");
  RegionPartition p;
  for (int i = 0; i < n; ++i) {
    p.names.push_back("S" + std::to_string(i + 1));
    const double a = kTwoPi * i / n, b = kTwoPi * (i + 1) / n;
    p.contains.push_back([=](std::span<const double> xi) {
      const double t = rel_angle(xi, theta0);
      return t >= a && t < b;
    });
  }
  return p;
}

RegionPartition torus_partition(double theta1, double theta3) {
  const double span13 = wrap_angle(theta3 - theta1);
  if (!(span13 > 0.0 && span13 < kPi))
    throw Error(Errc::InvalidArgument, "torus directions need theta1 < theta3 < theta1 + pi");
  RegionPartition p;
  p.names = {"S1", "S2", "S3", "S4"};
  const std::array<std::pair<double, double>, 4> arcs{
      std::pair{0.0, span13}, std::pair{kPi, kPi + span13}, std::pair{span13, kPi}, std::pair{kPi + span13, kTwoPi}};
  for (const auto& [a, b] : arcs)
    p.contains.push_back([=](std::span<const double> xi) {
      const double t = rel_angle(xi, theta1);
      return t >= a && t < b;
    });
  return p;
}

template <class Scalar>
HusimiReport husimi_masses(const SpectralWindow<Scalar>& win, const RegionPartition& part, const HusimiGrid& grid) {
  if (grid.centers_per_cell < 2.0)
    throw Error(Errc::GridTooCoarse, "Husimi grid needs at least 2 centers per sqrt(h) cell");
  const ModeLattice& lat = win.lattice;
  const int d = lat.dim;
  const double h = win.h;
  const double step = std::sqrt(h) / grid.centers_per_cell;
  const int half = int(std::ceil(grid.xi_extent / step));
  const int g2 = d == 2 ? half : 0;

  // Grid centers with their region labels.
  std::vector<std::array<double, 2>> centers;
  std::vector<int> label;
  for (int a = -half; a <= half; ++a)
    for (int b = -g2; b <= g2; ++b) {
      const std::array<double, 2> xi{a * step, b * step};
      const int r = part.locate(std::span<const double>(xi.data(), d));
      if (r < 0) continue;
      centers.push_back(xi);
      label.push_back(r);
    }

  // Region weights per lattice mode.
  const std::size_t R = part.size();
  const double norm = std::pow(step, d) / std::pow(kPi * h, 0.5 * d);
  const double reach = 8.0 * std::sqrt(h);
  Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(lat.size(), Eigen::Index(R));
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const auto n = lat.mode(i);
    const double p0 = h * n[0], p1 = h * n[1];
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double dx = p0 - centers[c][0], dy = d == 2 ? p1 - centers[c][1] : 0.0;
      if (std::abs(dx) > reach || std::abs(dy) > reach) continue;
      weight(i, label[c]) += norm * std::exp(-(dx * dx + dy * dy) / h);
    }
  }

  HusimiReport rep;
  rep.regions = part.names;
  rep.grid_step = step;
  const Eigen::MatrixXd mass = (win.eigenvectors.cwiseAbs2().transpose() * weight).eval();
  for (Eigen::Index j = 0; j < win.J_size(); ++j) {
    std::vector<double> row(R);
    for (std::size_t r = 0; r < R; ++r) row[r] = mass(j, Eigen::Index(r));
    rep.totals.push_back(mass.row(j).sum());
    rep.dominant.push_back(int(std::max_element(row.begin(), row.end()) - row.begin()));
    rep.masses.push_back(std::move(row));
  }
  return rep;
}

template <class Scalar>
double husimi_density(const ModeLattice& lat, double h, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u,
                      std::span<const double> x0, std::span<const double> xi0) {
  const int d = lat.dim;
  std::complex<double> acc = 0.0;
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const auto n = lat.mode(i);
    double r2 = 0.0, phase = 0.0;
    for (int j = 0; j < d; ++j) {
      const double dj = h * n[j] - xi0[j];
      r2 += dj * dj;
      phase += n[j] * x0[j];
    }
    if (r2 > 80.0 * h) continue;
    acc += std::exp(-r2 / (2.0 * h)) * std::polar(1.0, phase) * std::complex<double>(u[i]);
  }
  return std::norm(acc) / (std::pow(kTwoPi, d) * std::pow(kPi * h, 0.5 * d));
}

template HusimiReport husimi_masses(const SpectralWindow<double>&, const RegionPartition&, const HusimiGrid&);
template HusimiReport husimi_masses(const SpectralWindow<std::complex<double>>&, const RegionPartition&,
                                    const HusimiGrid&);
template double husimi_density(const ModeLattice&, double, const Eigen::VectorXd&, std::span<const double>,
                               std::span<const double>);
template double husimi_density(const ModeLattice&, double, const Eigen::VectorXcd&, std::span<const double>,
                               std::span<const double>);

}  // namespace mjsc
