#pragma once

// Inner loops shared by the schooling and predation integrators. Templated on
// the spatial dimension so the per-pair arithmetic unrolls.

#include <algorithm>
#include <cmath>
#include <span>

#include "predswarm/core.hpp"

namespace predswarm::detail {

inline double ipow(double base, int exp) {
  double result = 1.0;
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

/// Prey-prey coupling constants with the distance powers precomputed.
struct Coupling {
  double alpha;
  double beta;
  double r2;
  double eps2;
  double p;
  double q;
  int half_p = 0;  // p / 2 when p is an even integer, else 0
  int half_q = 0;

  explicit Coupling(const SimParams& params)
      : alpha(params.alpha),
        beta(params.beta),
        r2(params.r_crit * params.r_crit),
        eps2(params.eps_dist * params.eps_dist),
        p(params.p_exp),
        q(params.q_exp) {
    auto even_half = [](double e) {
      const double h = e / 2.0;
      return (h == std::floor(h) && h >= 1.0 && h <= 32.0) ? static_cast<int>(h) : 0;
    };
    half_p = even_half(p);
    half_q = even_half(q);
  }

  /// (r/d)^p and (r/d)^q for squared separation d2, with d floored at eps.
  void powers(double d2, double& rp, double& rq) const {
    const double ratio2 = r2 / std::max(d2, eps2);
    if (half_p && half_q) {
      rp = ipow(ratio2, half_p);
      rq = ipow(ratio2, half_q);
    } else {
      const double ratio = std::sqrt(ratio2);
      rp = std::pow(ratio, p);
      rq = std::pow(ratio, q);
    }
  }
};

/// Adds the pairwise position and velocity coupling over the listed rows into
/// `acc`. Each pair is evaluated once and applied with opposite signs; the
/// contributions to any row still arrive in ascending partner order.
template <int D>
void accumulate_pairs(const double* x, const double* v, std::span<const std::size_t> rows,
                      const Coupling& c, double* acc) {
  const std::size_t m = rows.size();
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = rows[a];
    const double* xi = x + i * D;
    const double* vi = v + i * D;
    double* ai = acc + i * D;
    for (std::size_t b = a + 1; b < m; ++b) {
      const std::size_t j = rows[b];
      const double* xj = x + j * D;
      const double* vj = v + j * D;
      double dx[D];
      double dv[D];
      double d2 = 0.0;
      for (int k = 0; k < D; ++k) {
        dx[k] = xi[k] - xj[k];
        dv[k] = vi[k] - vj[k];
        d2 += dx[k] * dx[k];
      }
      double rp, rq;
      c.powers(d2, rp, rq);
      const double fx = -c.alpha * (rp - rq);
      const double fv = -c.beta * (rp + rq);
      double* aj = acc + j * D;
      for (int k = 0; k < D; ++k) {
        const double f = fx * dx[k] + fv * dv[k];
        ai[k] += f;
        aj[k] -= f;
      }
    }
  }
}

inline void accumulate_pairs(int dims, const double* x, const double* v,
                             std::span<const std::size_t> rows, const Coupling& c, double* acc) {
  if (dims == 2)
    accumulate_pairs<2>(x, v, rows, c, acc);
  else
    accumulate_pairs<3>(x, v, rows, c, acc);
}

/// delta (R1/|x - y|)^theta1 (x - y), added into `out`.
inline void add_flight(const double* x, const double* y, int dims, const SimParams& params,
                       double* out) {
  double diff[3];
  double d2 = 0.0;
  for (int k = 0; k < dims; ++k) {
    diff[k] = x[k] - y[k];
    d2 += diff[k] * diff[k];
  }
  const double dist = std::max(std::sqrt(d2), params.eps_dist);
  const double w = params.delta * std::pow(params.r1_flee / dist, params.theta1);
  for (int k = 0; k < dims; ++k) out[k] += w * diff[k];
}

/// Rescales every listed row of `v` whose norm exceeds v_max onto the cap.
inline void cap_speeds(double* v, int dims, std::span<const std::size_t> rows, double v_max) {
  for (std::size_t i : rows) {
    double* vi = v + i * dims;
    double n2 = 0.0;
    for (int k = 0; k < dims; ++k) n2 += vi[k] * vi[k];
    if (n2 > v_max * v_max) {
      const double scale = v_max / std::sqrt(n2);
      for (int k = 0; k < dims; ++k) vi[k] *= scale;
    }
  }
}

inline bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace predswarm::detail
