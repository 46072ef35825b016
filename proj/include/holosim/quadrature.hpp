// quadrature.hpp — adaptive Gauss–Kronrod (15,7) panels on a finite interval.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace holosim {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> gk_nodes = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr std::array<double, 8> gk_wk = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
inline constexpr std::array<double, 4> gk_wg = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

template <typename F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double resk = gk_wk[0] * f0;
    double resg = gk_wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double x = h * gk_nodes[i];
        const double fsum = f(c - x) + f(c + x);
        resk += gk_wk[i] * fsum;
        if (i % 2 == 0) resg += gk_wg[i / 2] * fsum;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

} // namespace detail

struct QuadratureResult {
    double value;
    double error;
    int panels;
};

// Adaptive bisection on [a, b]; tolerance is max(abs_tol, rel_tol * |I|).
template <typename F>
QuadratureResult adaptive_integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                                    double rel_tol = 1e-10, int max_panels = 4000) {
    struct Panel {
        double a, b, value, error;
    };
    std::vector<Panel> panels;
    double v, e;
    detail::gk15(f, a, b, v, e);
    panels.push_back({a, b, v, e});
    double total = v, total_err = e;
    int splits = 0;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (++splits > max_panels)
            throw QuadratureError("adaptive_integrate: no convergence after " +
                                  std::to_string(max_panels) + " panels (err " +
                                  std::to_string(total_err) + ")");
        // split the worst panel
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error) worst = i;
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        Panel left, right;
        left.a = p.a;
        left.b = mid;
        right.a = mid;
        right.b = p.b;
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - p.value;
        total_err += left.error + right.error - p.error;
        panels[worst] = left;
        panels.push_back(right);
    }
    return {total, total_err, static_cast<int>(panels.size())};
}

} // namespace holosim
