// Copyright 2026 The irsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRSEST_VALIDATION_HPP
#define IRSEST_VALIDATION_HPP

// Self-check report: every closed form in the library against an adaptive
// quadrature of its defining integral, plus the recurrence and ordering
// identities. Drives `irsest validate`.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "irsest/estimator.hpp"
#include "irsest/quadrature.hpp"
#include "irsest/specfun.hpp"
#include "irsest/stats.hpp"

namespace irsest {

struct ValidationCheck {
  std::string name;
  double achieved = 0.0;   // worst error over the check's grid
  double tolerance = 0.0;
  std::size_t cases = 0;
  bool passed = false;
  std::string note;
};

namespace oracle {

inline const QuadratureSpec kTight{1e-12, 1e-300, 20000};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
inline double bessel_k_integral(double nu, double x) {
  return integrate_half_line(
             [&](double t) {
               const double e = -x * std::cosh(t);
               return 0.5 * (std::exp(e + nu * t) + std::exp(e - nu * t));
             },
             1.0, kTight)
      .value;
}

// Gamma(a, z) = e^-z int_0^inf (z + s)^(a-1) e^-s ds.
inline double upper_gamma_integral(double a, double z) {
  const double scaled = integrate_half_line(
                            [&](double s) {
                              return std::exp((a - 1.0) * std::log(z + s) - s);
                            },
                            std::min(1.0, z), kTight)
                            .value;
  return scaled * std::exp(-z);
}

// int_0^inf a^2 / (a^2 + z) p_A(a) da.
inline double prior_weight_integral(int m1, double z) {
  return integrate_half_line(
             [&](double a) {
               const double a2 = a * a;
               return a2 / (a2 + z) * std::exp(log_pdf_scale(m1, a));
             },
             std::sqrt(static_cast<double>(m1)), kTight)
      .value;
}

}  // namespace oracle

inline std::vector<ValidationCheck> run_validation(bool fast) {
  std::vector<ValidationCheck> checks;
  auto add = [&](std::string name, double tol, auto&& body) {
    ValidationCheck c;
    c.name = std::move(name);
    c.tolerance = tol;
    try {
      body(c);
      c.passed = c.achieved <= tol;
    } catch (const std::exception& e) {
      c.passed = false;
      c.note = e.what();
    }
    checks.push_back(std::move(c));
  };
  auto worst = [](ValidationCheck& c, double err) {
    c.achieved = std::max(c.achieved, err);
    ++c.cases;
  };

  add("bessel_k anchors vs integral", 1e-8, [&](ValidationCheck& c) {
    worst(c, oracle::rel_err(bessel_k(0.0, 1.0),
                             oracle::bessel_k_integral(0.0, 1.0)));
    worst(c, oracle::rel_err(bessel_k(0.5, 1.0),
                             std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0)));
    worst(c, oracle::rel_err(bessel_k(-3.0, 2.0), bessel_k(3.0, 2.0)));
  });

  add("upper gamma anchors vs integral", 1e-8, [&](ValidationCheck& c) {
    worst(c, oracle::rel_err(upper_incomplete_gamma(0.0, 1.0),
                             oracle::upper_gamma_integral(0.0, 1.0)));
    worst(c, oracle::rel_err(upper_incomplete_gamma(-1.0, 1.0),
                             oracle::upper_gamma_integral(-1.0, 1.0)));
    worst(c, oracle::rel_err(upper_incomplete_gamma(1.0, 2.0), std::exp(-2.0)));
  });

  add("gamma recurrence (scaled form)", 1e-12, [&](ValidationCheck& c) {
    const double step = fast ? 2.5 : 0.25;
    for (double a = -30.0; a <= 5.0 + 1e-9; a += step)
      for (double z : {0.1, 1.0, 10.0, 100.0}) {
        // z R(a+1) = a R(a) + 1 with R = z^-a e^z Gamma(a, z).
        const double lhs = z * std::exp(log_scaled_upper_gamma(a + 1.0, z));
        const double rhs = a * std::exp(log_scaled_upper_gamma(a, z)) + 1.0;
        worst(c, std::abs(lhs - rhs) / std::abs(lhs));
      }
  });

  add("bessel recurrence", 1e-10, [&](ValidationCheck& c) {
    for (int nu = 1; nu <= 20; ++nu)
      for (double x : {0.5, 1.0, 5.0, 20.0}) {
        const double next = bessel_k(nu + 1, x);
        const double rec = bessel_k(nu - 1, x) + 2.0 * nu / x * bessel_k(nu, x);
        worst(c, oracle::rel_err(rec, next));
      }
  });

  add("bessel_k vs integral grid", 1e-8, [&](ValidationCheck& c) {
    const std::vector<double> orders =
        fast ? std::vector<double>{0.0, 1.0, 3.5}
             : std::vector<double>{0.0, 0.3, 0.5, 1.0, 2.5, 3.0, 5.0, 8.0, 12.0};
    for (double nu : orders)
      for (double x : {0.3, 1.0, 2.0, 4.0, 10.0, 25.0})
        worst(c, oracle::rel_err(bessel_k(nu, x), oracle::bessel_k_integral(nu, x)));
  });

  add("upper gamma vs integral grid", 1e-8, [&](ValidationCheck& c) {
    const std::vector<double> as =
        fast ? std::vector<double>{-5.0, 0.0, 2.5}
             : std::vector<double>{-10.0, -5.0, -2.5, -1.0, 0.0, 0.5, 1.0, 2.5, 5.0};
    for (double a : as)
      for (double z : {0.1, 0.5, 1.0, 3.0, 10.0, 30.0})
        worst(c, oracle::rel_err(upper_incomplete_gamma(a, z),
                                 oracle::upper_gamma_integral(a, z)));
  });

  add("entry density normalization", 1e-6, [&](ValidationCheck& c) {
    for (int m1 : {1, 2, 5})
      for (double scale : {0.25, 1.0, 4.0}) {
        const BesselKChannelDist d{m1, scale, 1};
        const double mass = integrate_half_line(
            [&](double r) { return entry_norm_density(d, r); },
            std::sqrt(m1 * scale), oracle::kTight).value;
        worst(c, std::abs(mass - 1.0));
      }
  });

  add("row density normalization", 1e-6, [&](ValidationCheck& c) {
    for (auto [m1, m] : {std::pair{2, 1}, std::pair{4, 2}, std::pair{2, 4}}) {
      const BesselKChannelDist d{m1, 1.0, m};
      const double mass = integrate_half_line(
          [&](double r) { return row_norm_density(d, r); },
          std::sqrt(static_cast<double>(m1 * m)), oracle::kTight).value;
      worst(c, std::abs(mass - 1.0));
    }
  });

  add("scale prior normalization", 1e-10, [&](ValidationCheck& c) {
    for (int m1 : {1, 5, 20}) {
      const double mass = integrate_half_line(
          [&](double a) { return std::exp(log_pdf_scale(m1, a)); },
          std::sqrt(static_cast<double>(m1)), oracle::kTight).value;
      worst(c, std::abs(mass - 1.0));
    }
  });

  add("scale prior second moment = M1", 1e-8, [&](ValidationCheck& c) {
    for (int m1 : {1, 5, 20}) {
      const double m2 = integrate_half_line(
          [&](double a) { return a * a * std::exp(log_pdf_scale(m1, a)); },
          std::sqrt(static_cast<double>(m1)), oracle::kTight).value;
      worst(c, oracle::rel_err(m2, m1));
    }
  });

  add("mmse weight vs prior integral", 1e-8, [&](ValidationCheck& c) {
    std::vector<int> m1s;
    if (fast)
      m1s = {1, 5, 10, 20};
    else
      for (int m = 1; m <= 20; ++m) m1s.push_back(m);
    for (int m1 : m1s)
      for (double z : {1e-3, 0.1, 1.0, 10.0, 1e3, 1e6})
        worst(c, oracle::rel_err(mmse_weight(m1, 1.0, z),
                                 oracle::prior_weight_integral(m1, z)));
  });

  add("lower bound below upper bound", 0.0, [&](ValidationCheck& c) {
    for (int m1 = 1; m1 <= 20; ++m1)
      for (double z : {1e-3, 0.1, 1.0, 10.0, 1e3, 1e6}) {
        const double w = mmse_weight(m1, 1.0, z);
        const double cap = asymptotic_weight(m1, 1.0, z);
        worst(c, w < cap ? 0.0 : w - cap + 1e-300);
      }
  });

  // The gap is about 1/(4 M1) at z = M1, so 2% is reached from M1 = 13.
  add("weight ratio to asymptotic in [0.98, 1] for M1 >= 13", 0.02,
      [&](ValidationCheck& c) {
        for (int m1 = 13; m1 <= 64; ++m1)
          for (double ratio : {0.1, 1.0, 10.0}) {
            const double z = ratio * m1;
            const double r =
                mmse_weight(m1, 1.0, z) / asymptotic_weight(m1, 1.0, z);
            worst(c, r > 1.0 ? 1.0 : 1.0 - r);
          }
      });

  add("charfun is the Fourier transform of the entry density", 1e-4,
      [&](ValidationCheck& c) {
        for (int m1 : {1, 3}) {
          const BesselKChannelDist d{m1, 1.0, 1};
          for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const double ft = integrate_half_line(
                [&](double r) {
                  return entry_norm_density(d, r) * std::cyl_bessel_j(0.0, t * r);
                },
                1.0, {1e-10, 1e-14, 20000}).value;
            worst(c, oracle::rel_err(ft, charfun(d, t, 0.0)));
          }
        }
      });

  return checks;
}

}  // namespace irsest

#endif  // IRSEST_VALIDATION_HPP
