#pragma once

// Independent reference implementations used as test oracles. They are
// written from the model definitions in extended precision and share no code
// with the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using real = long double;

struct State {
    real P, T, Q, f;
};

struct Env {
    real fep, pae, tli;
};

struct Coefs {
    real mu, rho, gamma, omega, t_lit;
};

inline real growth_rate(const State& s, const Env& e, const Coefs& c)
{
    const real n = s.f * e.pae;
    const real si = (1 - s.Q) * std::sqrt(s.T) + s.Q * n * s.T * e.tli;
    return c.mu * (e.fep - c.gamma * std::sqrt(s.T) * s.P) * (1 - c.omega * s.T) * si -
           c.rho * s.P * std::exp(-s.T / c.t_lit);
}

/// Central difference of growth_rate along one trait.
enum class Axis { T, Q, f };

inline real central_difference(State s, const Env& e, const Coefs& c, Axis axis, real h)
{
    State lo = s;
    State hi = s;
    real* a = axis == Axis::T ? &lo.T : axis == Axis::Q ? &lo.Q : &lo.f;
    real* b = axis == Axis::T ? &hi.T : axis == Axis::Q ? &hi.Q : &hi.f;
    *a -= h;
    *b += h;
    return (growth_rate(hi, e, c) - growth_rate(lo, e, c)) / (2 * h);
}

struct Line {
    real slope, intercept, r2;
};

/// Two-pass least squares: means first, then centred sums.
inline Line two_pass_ols(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto n = static_cast<real>(x.size());
    real mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    real sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    const real slope = sxy / sxx;
    return {slope, my - slope * mx, sxy * sxy / (sxx * syy)};
}

inline real miami(real t, real p)
{
    const real by_p = (1 - std::exp(-0.664L * p)) * 1460;
    const real by_t = 1460 / (1 + 3.7248L * std::exp(-0.119L * t));
    return by_p < by_t ? by_p : by_t;
}

}  // namespace oracle
