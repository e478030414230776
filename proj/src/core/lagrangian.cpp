#include "lavlab/lagrangian.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lavlab/errors.hpp"

namespace lavlab {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr std::string_view ids[] = {
    "surface_of_revolution", "sqrt_chain", "brachistochrone", "quartic",
    "quartic_plus_square",   "mania",      "half_inverse",
};

std::string point_text(double t, double y, double v) {
    std::ostringstream out;
    out.precision(17);
    out << "(t=" << t << ", y=" << y << ", v=" << v << ")";
    return out.str();
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double int_power(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

Lagrangian surface_of_revolution() {
    return {"surface_of_revolution",
            [](double, double y, double v) { return two_pi * std::abs(y) * std::sqrt(1.0 + v * v); },
            [](double, double y, double v) {
                const double root = std::sqrt(1.0 + v * v);
                return Partials{0.0, two_pi * sign(y) * root, two_pi * std::abs(y) * v / root};
            },
            {.autonomous = true, .convex_in_v = true, .extended = false}};
}

Lagrangian sqrt_chain() {
    return {"sqrt_chain",
            [](double, double y, double v) {
                const double r = 2.0 * y * v - 1.0;
                return r * r;
            },
            [](double, double y, double v) {
                const double r = 2.0 * y * v - 1.0;
                return Partials{0.0, 4.0 * r * v, 4.0 * r * y};
            },
            {.autonomous = true, .convex_in_v = true, .extended = false}};
}

Lagrangian brachistochrone(double height) {
    return {"brachistochrone",
            [height](double, double y, double v) {
                if (!(y < height)) return inf;
                return std::sqrt(1.0 + v * v) / std::sqrt(height - y);
            },
            [height](double, double y, double v) {
                const double root = std::sqrt(1.0 + v * v);
                const double drop = height - y;
                return Partials{0.0, 0.5 * root / (drop * std::sqrt(drop)),
                                v / (root * std::sqrt(drop))};
            },
            {.autonomous = true, .convex_in_v = true, .extended = true}};
}

Lagrangian quartic() {
    return {"quartic",
            [](double, double, double v) {
                const double w = v * v - 1.0;
                return w * w;
            },
            [](double, double, double v) { return Partials{0.0, 0.0, 4.0 * v * (v * v - 1.0)}; },
            {.autonomous = true, .convex_in_v = false, .extended = false}};
}

Lagrangian quartic_plus_square() {
    return {"quartic_plus_square",
            [](double, double y, double v) {
                const double w = v * v - 1.0;
                return w * w + y * y;
            },
            [](double, double y, double v) {
                return Partials{0.0, 2.0 * y, 4.0 * v * (v * v - 1.0)};
            },
            {.autonomous = true, .convex_in_v = false, .extended = false}};
}

Lagrangian mania() {
    return {"mania",
            [](double t, double y, double v) {
                const double r = y * y * y - t;
                const double v2 = v * v;
                return r * r * v2 * v2 * v2;
            },
            [](double t, double y, double v) {
                const double r = y * y * y - t;
                const double v5 = v * v * v * v * v;
                const double v6 = v5 * v;
                return Partials{-2.0 * r * v6, 6.0 * r * y * y * v6, 6.0 * r * r * v5};
            },
            {.autonomous = false, .convex_in_v = true, .extended = false}};
}

Lagrangian half_inverse() {
    return {"half_inverse",
            [](double, double y, double v) {
                if (y == 0.0) return inf;
                const double r = v - 0.5 / y;
                return r * r;
            },
            [](double, double y, double v) {
                const double r = v - 0.5 / y;
                return Partials{0.0, r / (y * y), 2.0 * r};
            },
            {.autonomous = true, .convex_in_v = true, .extended = true}};
}

void check_finite_partials(const Partials& p, double t, double y, double v) {
    if (!std::isfinite(p.t) || !std::isfinite(p.y) || !std::isfinite(p.v)) {
        throw Error(ErrorKind::singular_point, "partial derivatives are singular at " + point_text(t, y, v));
    }
}

int json_exponent(const nlohmann::json& term, const char* key) {
    if (!term.contains(key)) return 0;
    const auto& e = term.at(key);
    if (!e.is_number_integer() || e.get<int>() < 0 || e.get<int>() > 32) {
        throw Error(ErrorKind::parse, std::string("monomial exponent '") + key +
                                          "' must be an integer in [0, 32]");
    }
    return e.get<int>();
}

Rational json_rational(const nlohmann::json& value) {
    if (value.is_number_integer()) return {value.get<std::int64_t>(), 1};
    if (value.is_string()) return parse_rational(value.get<std::string>());
    throw Error(ErrorKind::parse, "rational coefficients are integers or strings \"p/q\"");
}

}  // namespace

Lagrangian::Lagrangian(std::string id, Evaluator eval, std::optional<PartialsEvaluator> partials,
                       LagrangianFlags flags)
    : id_(std::move(id)), eval_(std::move(eval)), partials_(std::move(partials)), flags_(flags) {
    if (!eval_) throw Error(ErrorKind::argument, "Lagrangian needs an evaluator");
}

Partials Lagrangian::partials(double t, double y, double v) const {
    if (!std::isfinite(eval_(t, y, v))) {
        throw Error(ErrorKind::singular_point, "Lagrangian " + id_ + " is infinite at " + point_text(t, y, v));
    }
    if (!partials_) return finite_difference_partials(t, y, v);
    const Partials p = (*partials_)(t, y, v);
    check_finite_partials(p, t, y, v);
    return p;
}

Partials Lagrangian::finite_difference_partials(double t, double y, double v) const {
    static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    auto central = [&](int axis, double x) {
        const double h = base * std::max(1.0, std::abs(x));
        double plus[3] = {t, y, v};
        double minus[3] = {t, y, v};
        plus[axis] += h;
        minus[axis] -= h;
        const double fp = eval_(plus[0], plus[1], plus[2]);
        const double fm = eval_(minus[0], minus[1], minus[2]);
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw Error(ErrorKind::singular_point,
                        "finite-difference stencil of " + id_ + " hits +inf near " + point_text(t, y, v));
        }
        return (fp - fm) / (plus[axis] - minus[axis]);
    };
    return {central(0, t), central(1, y), central(2, v)};
}

std::span<const std::string_view> catalog_ids() { return ids; }

Lagrangian catalog(std::string_view id, const CatalogParams& params) {
    if (id == "surface_of_revolution") return surface_of_revolution();
    if (id == "sqrt_chain") return sqrt_chain();
    if (id == "brachistochrone") return brachistochrone(params.brachistochrone_height);
    if (id == "quartic") return quartic();
    if (id == "quartic_plus_square") return quartic_plus_square();
    if (id == "mania") return mania();
    if (id == "half_inverse") return half_inverse();
    std::string valid;
    for (const auto known : ids) {
        if (!valid.empty()) valid += ", ";
        valid += known;
    }
    throw Error(ErrorKind::lookup, "unknown lagrangian '" + std::string(id) + "'; valid ids: " + valid);
}

Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view part) {
        std::int64_t value = 0;
        const char* first = part.data();
        const char* last = part.data() + part.size();
        if (!part.empty() && part.front() == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || first == last) {
            throw Error(ErrorKind::parse, "bad rational '" + std::string(text) + "'");
        }
        return value;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return {parse_int(text), 1};
    const Rational r{parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
    if (r.denominator <= 0) {
        throw Error(ErrorKind::parse, "rational '" + std::string(text) + "' needs a positive denominator");
    }
    return r;
}

Lagrangian polynomial_lagrangian(std::string id, std::vector<Monomial> terms, bool convex_in_v) {
    bool autonomous = true;
    for (const auto& m : terms) {
        if (m.t_power < 0 || m.y_power < 0 || m.v_power < 0) {
            throw Error(ErrorKind::argument, "monomial exponents must be non-negative");
        }
        if (m.t_power > 0 && m.coefficient.numerator != 0) autonomous = false;
    }
    auto eval = [terms](double t, double y, double v) {
        double sum = 0.0;
        for (const auto& m : terms) {
            sum += m.coefficient.value() * int_power(t, m.t_power) * int_power(y, m.y_power) *
                   int_power(v, m.v_power);
        }
        return sum;
    };
    auto partials = [terms](double t, double y, double v) {
        Partials p;
        for (const auto& m : terms) {
            const double c = m.coefficient.value();
            const double tp = int_power(t, m.t_power);
            const double yp = int_power(y, m.y_power);
            const double vp = int_power(v, m.v_power);
            if (m.t_power > 0) p.t += c * m.t_power * int_power(t, m.t_power - 1) * yp * vp;
            if (m.y_power > 0) p.y += c * m.y_power * tp * int_power(y, m.y_power - 1) * vp;
            if (m.v_power > 0) p.v += c * m.v_power * tp * yp * int_power(v, m.v_power - 1);
        }
        return p;
    };
    Lagrangian result(std::move(id), eval, partials,
                      {.autonomous = autonomous, .convex_in_v = convex_in_v, .extended = false});

    // Probe a fixed box for the non-negativity and declared-convexity contracts.
    std::vector<double> v_grid;
    for (int i = -12; i <= 12; ++i) v_grid.push_back(0.25 * i);
    for (double t : {0.0, 0.5, 1.0}) {
        for (double y : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
            for (double v : v_grid) {
                if (result(t, y, v) < -1e-12) {
                    throw Error(ErrorKind::argument, "polynomial Lagrangian " + result.id() +
                                                         " is negative at " + point_text(t, y, v));
                }
            }
            if (convex_in_v && !convexity_probe(result, y, v_grid, t)) {
                throw Error(ErrorKind::argument, "polynomial Lagrangian " + result.id() +
                                                     " is declared convex in v but fails the probe at " +
                                                     point_text(t, y, 0.0));
            }
        }
    }
    return result;
}

Lagrangian lagrangian_from_json(const nlohmann::json& description) {
    if (description.is_string()) return catalog(description.get<std::string>());
    if (!description.is_object()) {
        throw Error(ErrorKind::parse, "a Lagrangian is a catalog id string or an object");
    }
    if (description.contains("id")) {
        CatalogParams params;
        if (description.contains("A")) params.brachistochrone_height = description.at("A").get<double>();
        return catalog(description.at("id").get<std::string>(), params);
    }

    const std::string name = description.value("name", std::string("custom"));
    std::vector<Monomial> terms;
    if (description.contains("polynomial")) {
        for (const auto& term : description.at("polynomial")) {
            if (!term.contains("coef")) throw Error(ErrorKind::parse, "monomial needs a 'coef'");
            terms.push_back({json_rational(term.at("coef")), json_exponent(term, "t"),
                             json_exponent(term, "y"), json_exponent(term, "v")});
        }
    }
    struct Scaled {
        Lagrangian lagrangian;
        double scale;
    };
    std::vector<Scaled> parts;
    if (description.contains("catalog")) {
        for (const auto& entry : description.at("catalog")) {
            CatalogParams params;
            if (entry.contains("A")) params.brachistochrone_height = entry.at("A").get<double>();
            const double scale = entry.contains("scale") ? json_rational(entry.at("scale")).value() : 1.0;
            if (!(scale > 0.0)) throw Error(ErrorKind::parse, "catalog scale must be positive");
            parts.push_back({catalog(entry.at("id").get<std::string>(), params), scale});
        }
    }
    const bool declared_convex = description.value("convex_in_v", false);
    if (parts.empty()) {
        if (terms.empty()) throw Error(ErrorKind::parse, "custom Lagrangian has no terms");
        return polynomial_lagrangian(name, std::move(terms), declared_convex);
    }

    std::optional<Lagrangian> poly;
    if (!terms.empty()) poly = polynomial_lagrangian(name, std::move(terms), false);
    LagrangianFlags flags{.autonomous = !poly || poly->autonomous(), .convex_in_v = true, .extended = false};
    bool all_exact = true;
    for (const auto& part : parts) {
        flags.autonomous = flags.autonomous && part.lagrangian.autonomous();
        flags.convex_in_v = flags.convex_in_v && part.lagrangian.convex_in_v();
        flags.extended = flags.extended || part.lagrangian.extended();
        all_exact = all_exact && part.lagrangian.has_exact_partials();
    }
    // A polynomial summand is only convex when declared (and then probed below).
    flags.convex_in_v = flags.convex_in_v && (!poly || declared_convex);

    auto eval = [poly, parts](double t, double y, double v) {
        double sum = poly ? (*poly)(t, y, v) : 0.0;
        for (const auto& part : parts) {
            const double value = part.lagrangian(t, y, v);
            if (!std::isfinite(value)) return inf;
            sum += part.scale * value;
        }
        return sum;
    };
    std::optional<Lagrangian::PartialsEvaluator> partials;
    if (all_exact) {
        partials = [poly, parts](double t, double y, double v) {
            Partials p = poly ? poly->partials(t, y, v) : Partials{};
            for (const auto& part : parts) {
                const Partials q = part.lagrangian.partials(t, y, v);
                p.t += part.scale * q.t;
                p.y += part.scale * q.y;
                p.v += part.scale * q.v;
            }
            return p;
        };
    }
    Lagrangian combined(name, eval, partials, flags);
    if (declared_convex && !combined.convex_in_v()) {
        throw Error(ErrorKind::argument, "custom Lagrangian " + name +
                                             " is declared convex in v but has a non-convex catalog summand");
    }
    return combined;
}

bool convexity_probe(const Lagrangian& lagrangian, double y, std::span<const double> v_grid, double t) {
    std::vector<double> grid(v_grid.begin(), v_grid.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() < 2) return true;

    std::vector<double> refined;
    refined.reserve(2 * grid.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        refined.push_back(grid[i]);
        refined.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    refined.push_back(grid.back());

    std::vector<double> f(refined.size());
    double scale = 1.0;
    for (std::size_t i = 0; i < refined.size(); ++i) {
        f[i] = lagrangian(t, y, refined[i]);
        if (std::isfinite(f[i])) scale = std::max(scale, std::abs(f[i]));
    }
    const double tol = 1e-12 * scale;
    for (std::size_t i = 1; i + 1 < refined.size(); ++i) {
        const double f0 = f[i - 1];
        const double f1 = f[i];
        const double f2 = f[i + 1];
        if (!std::isfinite(f0) || !std::isfinite(f2)) continue;
        if (!std::isfinite(f1)) return false;
        const double theta = (refined[i] - refined[i - 1]) / (refined[i + 1] - refined[i - 1]);
        const double secant = f0 + theta * (f2 - f0);
        if (f1 > secant + tol) return false;
    }
    return true;
}

}  // namespace lavlab
