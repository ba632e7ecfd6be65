#include "mjsc/models.hpp"

namespace mjsc {

KatokModel katok_hamiltonian(double alpha, double band) {
  if (!(std::abs(alpha) < 1.0))
    throw Error(Errc::FluxOutOfRange, "|alpha| must be < 1, got " + std::to_string(alpha));
  if (!(band > 0.0 && band < kPi / 2)) throw Error(Errc::InvalidArgument, "Katok band must lie in (0, pi/2)");
  KatokModel m;
  m.alpha = alpha;
  m.band = band;

  auto base = [band](SymbolField& s, std::string name) {
    s.dim = 2;
    s.name = std::move(name);
    s.angle_mask = 0b01;  // q1 is an angle, q2 a latitude chart coordinate
    s.x_lo = {0.0, -band};
    s.x_hi = {kTwoPi, band};
  };

  base(m.lambda, "katok_lambda");
  m.lambda.time_reversal = true;
  m.lambda.value = [](const PhasePoint& p) {
    const double c = std::cos(p.x[1]);
    return std::sqrt(p.xi[0] * p.xi[0] / (c * c) + p.xi[1] * p.xi[1]);
  };
  m.lambda.analytic_grad = [](const PhasePoint& p) {
    const double c = std::cos(p.x[1]);
    const double s = std::sin(p.x[1]);
    const double l = std::sqrt(p.xi[0] * p.xi[0] / (c * c) + p.xi[1] * p.xi[1]);
    State g(4);
    g << 0.0, p.xi[0] * p.xi[0] * s / (c * c * c * l), p.xi[0] / (c * c * l), p.xi[1] / l;
    return g;
  };

  base(m.eta, "katok_eta");
  m.eta.time_reversal = alpha == 0.0;
  m.eta.value = [alpha](const PhasePoint& p) { return alpha * p.xi[0]; };
  m.eta.analytic_grad = [alpha](const PhasePoint&) {
    State g(4);
    g << 0.0, 0.0, alpha, 0.0;
    return g;
  };

  m.H = sum(m.lambda, m.eta, "katok_H");
  base(m.H, "katok_H");
  m.H.time_reversal = alpha == 0.0;
  return m;
}

}  // namespace mjsc
