#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "vzcfo/cfo/decision_space.hpp"
#include "vzcfo/error.hpp"

// Test functions in maximisation form (negated costs where the source is a
// minimisation problem).
namespace vz::objectives {

inline double sphere(const std::vector<double>& x) {
    double z = 0.0;
    for (double xi : x) z += xi * xi;
    return -z;
}

inline double goldstein_price(const std::vector<double>& x) {
    const double x1 = x[0], x2 = x[1];
    const double t1 = 1.0 + (x1 + x2 + 1.0) * (x1 + x2 + 1.0) *
                                (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2);
    const double t2 = 30.0 + (2.0 * x1 - 3.0 * x2) * (2.0 * x1 - 3.0 * x2) *
                                 (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2);
    return -(t1 * t2);
}

// Offsets (75, 35) apply only to the 2-D case.
inline double step(const std::vector<double>& x) {
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double offset = 0.0;
        if (x.size() == 2) offset = i == 0 ? 75.0 : 35.0;
        const double v = std::floor((x[i] - offset) + 0.5);
        z += v * v;
    }
    return -z;
}

inline double schwefel_226(const std::vector<double>& x) {
    double z = 0.0;
    for (double xi : x) z += xi * std::sin(std::sqrt(std::abs(xi)));
    return z;
}

inline double griewank(const std::vector<double>& x) {
    constexpr double offset = 75.123;
    double sum = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i] - offset;
        sum += xi * xi;
        prod *= std::cos(xi / std::sqrt(static_cast<double>(i + 1)));
    }
    return -(sum / 4000.0 - prod + 1.0);
}

inline double himmelblau(const std::vector<double>& x) {
    const double x1 = x[0], x2 = x[1];
    const double a = x1 * x1 + x2 - 11.0, b = x1 + x2 * x2 - 7.0;
    return 200.0 - a * a - b * b;
}

inline double rosenbrock(const std::vector<double>& x) {
    double z = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i], b = x[i] - 1.0;
        z += 100.0 * a * a + b * b;
    }
    return -z;
}

inline double tripod(const std::vector<double>& x) {
    auto sign = [](double v) { return v <= 0.0 ? -1.0 : 1.0; };
    const double x1 = x[0], x2 = x[1];
    const double s1 = sign(x1), s2 = sign(x2);
    const double t1 = (1.0 - s2) * (std::abs(x1) + std::abs(x2 + 50.0));
    const double t2 = 0.5 * (1.0 + s2) * (1.0 - s1) * (1.0 + std::abs(x1 + 50.0) + std::abs(x2 - 50.0));
    const double t3 = (1.0 + s1) * (2.0 + std::abs(x1 - 50.0) + std::abs(x2 - 50.0));
    return -0.5 * (t1 + t2 + t3);
}

inline double f6_step(const std::vector<double>& x) {
    double z = 0.0;
    for (double xi : x) {
        const double v = std::floor(xi + 0.5);
        z += v * v;
    }
    return -z;
}

// Rastrigin with each term squared, as transcribed.
inline double f9_rastrigin_squared(const std::vector<double>& x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double z = 0.0;
    for (double xi : x) {
        const double t = xi * xi - 10.0 * std::cos(two_pi * xi) + 10.0;
        z += t * t;
    }
    return -z;
}

inline double f10_ackley(const std::vector<double>& x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double s1 = 0.0, s2 = 0.0;
    for (double xi : x) {
        s1 += xi * xi;
        s2 += std::cos(two_pi * xi);
    }
    const double n = static_cast<double>(x.size());
    return -(-20.0 * std::exp(-0.2 * std::sqrt(s1 / n)) - std::exp(s2 / n) + 20.0 + std::numbers::e);
}

namespace detail {
struct ShekelRow {
    std::array<double, 4> a;
    double c;
};
inline constexpr std::array<ShekelRow, 10> shekel_rows{{
    {{4, 4, 4, 4}, 0.1},
    {{1, 1, 1, 1}, 0.2},
    {{8, 8, 8, 8}, 0.2},
    {{6, 6, 6, 6}, 0.4},
    {{3, 7, 3, 7}, 0.4},
    {{2, 9, 2, 9}, 0.6},
    {{5, 5, 3, 3}, 0.3},
    {{8, 1, 8, 1}, 0.7},
    {{6, 2, 6, 2}, 0.5},
    {{7, 3.6, 7, 3.6}, 0.5},
}};
}  // namespace detail

inline double shekel(const std::vector<double>& x, std::size_t m) {
    double z = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const double d = x[i] - detail::shekel_rows[r].a[i];
            sum += d * d;
        }
        z += 1.0 / (sum + detail::shekel_rows[r].c);
    }
    return z;
}

struct BenchmarkSpec {
    std::string name;
    std::size_t dims = 0;
    std::vector<double> lower, upper;
    double known_best_fitness = 0.0;
    std::optional<std::vector<double>> known_best_point;
    std::function<double(const std::vector<double>&)> fn;

    cfo::DecisionSpace space() const { return {lower, upper}; }
};

namespace detail {
inline BenchmarkSpec make(std::string name, std::size_t nd, double lo, double hi, double best,
                          std::optional<std::vector<double>> at,
                          std::function<double(const std::vector<double>&)> fn) {
    return {std::move(name), nd, std::vector<double>(nd, lo), std::vector<double>(nd, hi), best,
            std::move(at), std::move(fn)};
}
}  // namespace detail

inline const std::map<std::string, BenchmarkSpec>& registry() {
    static const std::map<std::string, BenchmarkSpec> reg = [] {
        using detail::make;
        using V = std::vector<double>;
        std::map<std::string, BenchmarkSpec> r;
        auto add = [&r](BenchmarkSpec s) { r.emplace(s.name, std::move(s)); };
        add(make("sphere", 2, -100, 100, 0.0, V{0, 0}, sphere));
        add(make("goldstein-price", 2, -100, 100, -3.0, V{0, -1}, goldstein_price));
        add(make("step", 2, -100, 100, 0.0, V{75, 35}, step));
        add(make("schwefel-2.26", 30, -500, 500, 12569.5, V(30, 420.8687), schwefel_226));
        add(make("griewank", 2, -600, 600, 0.0, V{75.123, 75.123}, griewank));
        add(make("himmelblau", 2, -6, 6, 200.0, V{3, 2}, himmelblau));
        add(make("rosenbrock", 2, -2, 2, 0.0, V{1, 1}, rosenbrock));
        add(make("tripod", 2, -100, 100, 0.0, V{0, -50}, tripod));
        add(make("f6", 30, -100, 100, 0.0, V(30, 0.0), f6_step));
        add(make("f9", 30, -5.12, 5.12, 0.0, V(30, 0.0), f9_rastrigin_squared));
        add(make("f10", 30, -32, 32, 0.0, V(30, 0.0), f10_ackley));
        add(make("shekel-5", 4, 0, 10, 10.1532, std::nullopt, [](const V& x) { return shekel(x, 5); }));
        add(make("shekel-7", 4, 0, 10, 10.4029, std::nullopt, [](const V& x) { return shekel(x, 7); }));
        add(make("shekel-10", 4, 0, 10, 10.5364, std::nullopt, [](const V& x) { return shekel(x, 10); }));
        return r;
    }();
    return reg;
}

// Short aliases accepted by lookup().
inline std::string canonical_name(const std::string& name) {
    static const std::map<std::string, std::string> alias{
        {"gp", "goldstein-price"}, {"schwefel", "schwefel-2.26"}, {"schwefel226", "schwefel-2.26"},
        {"ackley", "f10"}, {"f21", "shekel-5"}, {"f22", "shekel-7"}, {"f23", "shekel-10"},
        {"rastrigin-squared", "f9"}};
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = alias.find(lower);
    return it == alias.end() ? lower : it->second;
}

inline const BenchmarkSpec& lookup(const std::string& name) {
    auto it = registry().find(canonical_name(name));
    if (it == registry().end()) throw ConfigError("unknown objective '" + name + "'");
    return it->second;
}

inline std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

inline double evaluate_benchmark(const std::string& name, const std::vector<double>& x) {
    const BenchmarkSpec& s = lookup(name);
    if (x.size() != s.dims)
        throw ConfigError(s.name + " expects " + std::to_string(s.dims) + " dimensions, got " +
                          std::to_string(x.size()));
    return s.fn(x);
}

}  // namespace vz::objectives
