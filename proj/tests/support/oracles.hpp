#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature or reparametrization code.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// splitmix64 stream; tests draw every random sample from here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t bits() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
        return lo + static_cast<std::size_t>(bits() % (hi - lo + 1));
    }
    double sign() { return (bits() & 1) ? 1.0 : -1.0; }

private:
    std::uint64_t state_;
};

// Adaptive Simpson with Richardson correction (a different rule from the
// library's Gauss-Legendre).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 50) {
    struct Rec {
        const std::function<double(double)>& f;
        double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    } rec{f};
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return rec.run(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

// Integral of L(t, y(t), y'(t)) for a piecewise-linear y given by nodes and
// values, cell by cell with adaptive Simpson.
inline double piecewise_linear_energy(const std::function<double(double, double, double)>& L,
                                      const std::vector<double>& t, const std::vector<double>& y, double tol) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double d = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
        auto f = [&](double s) { return L(s, y[i] + d * (s - t[i]), d); };
        sum += adaptive_simpson(f, t[i], t[i + 1], tol);
    }
    return sum;
}

// Closed forms used as test oracles.

// Mania on the chord of t^{1/3} over [0, h]: substitute t = h s,
// (h s^3 - h s)^2 h^{-4} h ds integrates to (1/7 - 2/5 + 1/3) / h.
inline double mania_first_chord_energy(double h) { return 8.0 / (105.0 * h); }

// Sawtooth with slopes +-1 and n teeth on [0, 1]: (y'^2-1)^2 vanishes and the
// y^2 term integrates tooth by tooth to 1/(12 n^2).
inline double sawtooth_square_energy(double n) { return 1.0 / (12.0 * n * n); }

// sqrt_chain on t sqrt(n) over [0, 1/n]: integral of (2tn - 1)^2 dt = 1/(3n).
inline double ramp_segment_energy(double n) { return 1.0 / (3.0 * n); }

// Lower bound for the half-inverse Lagrangian over [c, b].
inline double halfinverse_bound(double yc, double yb, double c, double b, double C) {
    const double lc = std::log(std::abs(yc));
    const double lb = std::log(std::abs(yb));
    return -lb + lc + (lb - lc) * (lb - lc) / (4.0 * C * C * (b - c));
}

// Tangent intercept of v -> ell(v) at w from a central difference of ell.
inline double tangent_intercept_fd(const std::function<double(double)>& ell, double w) {
    const double h = 1e-5 * std::max(1.0, std::abs(w));
    return ell(w) - w * (ell(w + h) - ell(w - h)) / (2.0 * h);
}

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace oracle
