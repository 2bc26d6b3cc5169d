#include <doctest.h>

#include <cmath>

#include "predswarm/metrics.hpp"
#include "predswarm/school.hpp"

using namespace predswarm;

namespace {

SimParams quiet_params() {
  SimParams p;
  p.sigma_prey = 0.0;
  p.sigma_pred = 0.0;
  return p;
}

double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Advances by `steps` noise-free steps.
SwarmState integrate(SwarmState s, const SimParams& p, long steps) {
  NoiseSource src(0);
  for (long t = 0; t < steps; ++t) advance_school(s, p, src);
  return s;
}

}  // namespace

TEST_CASE("pair_interaction position term vanishes at separation r") {
  SimParams p;
  p.r_crit = 1.0;
  const std::vector<double> xi{0.0, 0.0}, xj{1.0, 0.0}, v{0.3, -0.2};
  const PairForce f = pair_interaction(xi, xj, v, v, p);
  CHECK(f.position[0] == 0.0);
  CHECK(f.position[1] == 0.0);
  CHECK(f.velocity[0] == 0.0);
}

TEST_CASE("pair_interaction worked example") {
  SimParams p;
  p.alpha = 1;
  p.r_crit = 1;
  p.p_exp = 2;
  p.q_exp = 4;
  const std::vector<double> xi{0, 0}, xj{2, 0}, v{1, 1};
  const PairForce f = pair_interaction(xi, xj, v, v, p);
  CHECK(f.position[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
  CHECK(f.position[1] == 0.0);
  CHECK(f.velocity[0] == 0.0);
  CHECK(f.velocity[1] == 0.0);
}

TEST_CASE("pair_interaction repels inside r and attracts outside") {
  SimParams p;
  p.p_exp = 2;
  p.q_exp = 4;
  const std::vector<double> xi{0, 0}, near{0.5, 0}, far{1.5, 0}, v{0, 0};
  CHECK(pair_interaction(xi, near, v, v, p).position[0] < 0.0);
  CHECK(pair_interaction(xi, far, v, v, p).position[0] > 0.0);
}

TEST_CASE("pair_interaction is antisymmetric") {
  SimParams p;
  NoiseSource src(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xi(2), xj(2), vi(2), vj(2);
    for (int k = 0; k < 2; ++k) {
      xi[k] = 4 * src.uniform() - 2;
      xj[k] = 4 * src.uniform() - 2;
      vi[k] = src.normal();
      vj[k] = src.normal();
    }
    const PairForce a = pair_interaction(xi, xj, vi, vj, p);
    const PairForce b = pair_interaction(xj, xi, vj, vi, p);
    for (int k = 0; k < 2; ++k) {
      CHECK(a.position[k] == -b.position[k]);
      CHECK(a.velocity[k] == -b.velocity[k]);
    }
  }
}

TEST_CASE("pair_interaction matches the closed form for non-integer exponents") {
  SimParams p;
  p.alpha = 1.7;
  p.beta = 0.3;
  p.p_exp = 2.5;
  p.q_exp = 3.25;
  p.r_crit = 0.8;
  const std::vector<double> xi{0.1, -0.4, 0.2}, xj{0.9, 0.3, -0.5}, vi{1, 0, 2}, vj{0, -1, 0.5};
  double d2 = 0;
  for (int k = 0; k < 3; ++k) d2 += (xi[k] - xj[k]) * (xi[k] - xj[k]);
  const double ratio = p.r_crit / std::sqrt(d2);
  const double a = std::pow(ratio, p.p_exp), b = std::pow(ratio, p.q_exp);
  const PairForce f = pair_interaction(xi, xj, vi, vj, p);
  for (int k = 0; k < 3; ++k) {
    CHECK(rel_err(f.position[k], -p.alpha * (a - b) * (xi[k] - xj[k])) < 1e-12);
    CHECK(rel_err(f.velocity[k], -p.beta * (a + b) * (vi[k] - vj[k])) < 1e-12);
  }
}

TEST_CASE("pair_interaction is translation invariant and rotation equivariant") {
  SimParams p;
  const double c = std::cos(0.7), s = std::sin(0.7);
  auto rot = [&](std::vector<double> v) { return std::vector<double>{c * v[0] - s * v[1], s * v[0] + c * v[1]}; };
  const std::vector<double> xi{0.2, 0.1}, xj{1.1, -0.6}, vi{0.5, 0.2}, vj{-0.1, 0.4};
  const PairForce f = pair_interaction(xi, xj, vi, vj, p);

  const std::vector<double> shift{10.0, -3.0};
  const std::vector<double> xi2{xi[0] + shift[0], xi[1] + shift[1]}, xj2{xj[0] + shift[0], xj[1] + shift[1]};
  const PairForce g = pair_interaction(xi2, xj2, vi, vj, p);
  for (int k = 0; k < 2; ++k) CHECK(g.position[k] == doctest::Approx(f.position[k]).epsilon(1e-12));

  const auto rxi = rot(xi), rxj = rot(xj), rvi = rot(vi), rvj = rot(vj);
  const PairForce h = pair_interaction(rxi, rxj, rvi, rvj, p);
  const auto fp = rot(f.position), fv = rot(f.velocity);
  for (int k = 0; k < 2; ++k) {
    CHECK(h.position[k] == doctest::Approx(fp[k]).epsilon(1e-12));
    CHECK(h.velocity[k] == doctest::Approx(fv[k]).epsilon(1e-12));
  }
}

TEST_CASE("school_step leaves an equilibrium pair at rest") {
  SimParams p = quiet_params();
  SwarmState s(2, 2);
  s.positions(1, 0) = p.r_crit;
  NoiseSource src(1);
  const SwarmState next = school_step(s, p, src);
  CHECK(next == s);
}

TEST_CASE("school_step keeps an equilateral triangle at rest") {
  SimParams p = quiet_params();
  SwarmState s(3, 2);
  s.positions(1, 0) = 1.0;
  s.positions(2, 0) = 0.5;
  s.positions(2, 1) = std::sqrt(3.0) / 2.0;
  NoiseSource src(1);
  const SwarmState next = school_step(s, p, src);
  CHECK(next.positions == s.positions);
  for (double v : next.velocities.values()) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("school_step caps speed at v_max") {
  SimParams p = quiet_params();
  p.n_prey = 1;
  p.v_max = 1.0;
  SwarmState s(1, 2);
  s.velocities(0, 0) = 10.0;
  NoiseSource src(1);
  const SwarmState next = school_step(s, p, src);
  CHECK(std::hypot(next.velocities(0, 0), next.velocities(0, 1)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("school_step two-prey step matches a scalar re-derivation") {
  SimParams p = quiet_params();
  p.alpha = 2.0;
  p.beta = 0.7;
  p.p_exp = 2.0;
  p.q_exp = 4.0;
  p.r_crit = 1.0;
  p.k_friction = 0.5;
  p.dt = 0.01;
  p.v_max = 100.0;
  SwarmState s(2, 2);
  s.positions(0, 0) = 0.0;
  s.positions(0, 1) = 0.0;
  s.positions(1, 0) = 1.5;
  s.positions(1, 1) = 0.5;
  s.velocities(0, 0) = 0.2;
  s.velocities(0, 1) = -0.1;
  s.velocities(1, 0) = -0.3;
  s.velocities(1, 1) = 0.4;

  // x' = x + v dt; then v' = v + dt (F(x', v) - k v)
  double x0 = 0.0 + 0.2 * 0.01, y0 = 0.0 - 0.1 * 0.01;
  double x1 = 1.5 - 0.3 * 0.01, y1 = 0.5 + 0.4 * 0.01;
  const double dx = x0 - x1, dy = y0 - y1;
  const double dist = std::sqrt(dx * dx + dy * dy);
  const double a = std::pow(1.0 / dist, 2.0), b = std::pow(1.0 / dist, 4.0);
  const double cx = -2.0 * (a - b), cv = -0.7 * (a + b);
  const double dvx = 0.2 - -0.3, dvy = -0.1 - 0.4;
  const double u0 = 0.2 + 0.01 * (cx * dx + cv * dvx - 0.5 * 0.2);
  const double w0 = -0.1 + 0.01 * (cx * dy + cv * dvy - 0.5 * -0.1);
  const double u1 = -0.3 + 0.01 * (-cx * dx - cv * dvx - 0.5 * -0.3);
  const double w1 = 0.4 + 0.01 * (-cx * dy - cv * dvy - 0.5 * 0.4);

  NoiseSource src(1);
  const SwarmState n = school_step(s, p, src);
  CHECK(rel_err(n.positions(0, 0), x0) < 1e-12);
  CHECK(rel_err(n.positions(0, 1), y0) < 1e-12);
  CHECK(rel_err(n.positions(1, 0), x1) < 1e-12);
  CHECK(rel_err(n.positions(1, 1), y1) < 1e-12);
  CHECK(rel_err(n.velocities(0, 0), u0) < 1e-12);
  CHECK(rel_err(n.velocities(0, 1), w0) < 1e-12);
  CHECK(rel_err(n.velocities(1, 0), u1) < 1e-12);
  CHECK(rel_err(n.velocities(1, 1), w1) < 1e-12);
}

TEST_CASE("pairwise coupling conserves momentum without friction") {
  SimParams p = quiet_params();
  p.k_friction = 0.0;
  p.v_max = 1e6;
  NoiseSource src(31);
  SwarmState s(12, 3);
  s.positions = uniform_positions(src, 12, 3, 2.0);
  for (double& v : s.velocities.values()) v = src.normal();
  auto momentum = [](const SwarmState& st) {
    std::vector<double> m(3, 0.0);
    for (std::size_t i = 0; i < st.size(); ++i)
      for (int k = 0; k < 3; ++k) m[k] += st.velocities(i, k);
    return m;
  };
  const auto before = momentum(s);
  const auto after = momentum(integrate(s, p, 20));
  for (int k = 0; k < 3; ++k) CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-10));
}

TEST_CASE("eaten rows are inert and do not influence the others") {
  SimParams p;
  NoiseSource init(8);
  SwarmState s(6, 2);
  s.positions = uniform_positions(init, 6, 2, 1.5);
  for (double& v : s.velocities.values()) v = 0.1 * init.normal();
  s.alive[2] = 0;
  s.alive[4] = 0;

  NoiseSource a(77), b(77);
  const SwarmState full = school_step(s, p, a);
  const SwarmState compact = school_step(s.survivors(), p, b);
  CHECK(full.survivors() == compact);
  CHECK(full.positions.row(2)[0] == s.positions.row(2)[0]);
  CHECK(full.velocities.row(4)[1] == s.velocities.row(4)[1]);
}

TEST_CASE("noise-free schooling is first order in dt") {
  SimParams p = quiet_params();
  p.v_max = 1e6;
  NoiseSource init(5);
  SwarmState s(5, 2);
  s.positions = uniform_positions(init, 5, 2, 1.5);
  for (double& v : s.velocities.values()) v = 0.3 * init.normal();

  const double horizon = 1.0;
  auto endpoint = [&](double dt) {
    SimParams q = p;
    q.dt = dt;
    return integrate(s, q, std::lround(horizon / dt));
  };
  const double dt = 0.02;
  const SwarmState ref = endpoint(dt / 16);
  auto error = [&](const SwarmState& x) {
    double e = 0.0;
    for (std::size_t i = 0; i < x.positions.values().size(); ++i)
      e = std::max(e, std::abs(x.positions.values()[i] - ref.positions.values()[i]));
    return e;
  };
  const double ratio = error(endpoint(dt)) / error(endpoint(dt / 2));
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.5);
}

TEST_CASE("generate_school with one prey ends at the origin") {
  SimParams p;
  p.n_prey = 1;
  NoiseSource src(4);
  const SwarmState s = generate_school(p, src);
  CHECK(s.positions(0, 0) == 0.0);
  CHECK(s.positions(0, 1) == 0.0);
}

TEST_CASE("generate_school settles thirty prey into a compact school") {
  SimParams p;
  p.n_prey = 30;
  p.sigma_prey = 0.01;
  NoiseSource src(4);
  const SwarmState s = generate_school(p, src);
  const double diam = school_diameter(s);
  CHECK(diam >= 0.5 * p.r_crit);
  CHECK(diam <= 5.0 * p.r_crit);
  CHECK(count_subgroups(s, p.resolved_link_dist()) == 1);
  const auto [xc, vc] = school_center(s);
  CHECK(std::abs(xc[0]) < 1e-12);
  CHECK(std::abs(xc[1]) < 1e-12);
}

TEST_CASE("generate_school is deterministic for a seed") {
  SimParams p;
  p.n_prey = 10;
  p.t_max_school = 200;
  NoiseSource a(99), b(99);
  CHECK(generate_school(p, a) == generate_school(p, b));
}

TEST_CASE("school diverging to non-finite values raises DivergenceError") {
  SimParams p = quiet_params();
  SwarmState s(2, 2);
  s.velocities(0, 0) = std::numeric_limits<double>::infinity();
  NoiseSource src(1);
  CHECK_THROWS_AS(advance_school(s, p, src, 5), DivergenceError);
}
