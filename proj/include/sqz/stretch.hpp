#ifndef SQZ_STRETCH_HPP
#define SQZ_STRETCH_HPP

// The taffy stretch profile: a C^2 ramp g on [0, 1/L] close to the trapezoid
// g0 (rise, plateau at 1/4L, fall), the constant C with
// integral_0^{1/L} 1/(1 - C g) = 1 + 1/L, and the stretch function
// f(x) = integral_0^x 1/(1 - C g(y)) dy evaluated from a cached node table.

#include "sqz/bigrat.hpp"
#include "sqz/dd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>
#include <vector>

namespace sqz {

namespace quad {

// 12-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric)
inline constexpr double gl12_x[6] = {
    0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
    0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
inline constexpr double gl12_w[6] = {
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

template <class T, class F>
T gauss12(const F& fn, const T& a, const T& b) {
    T mid = (a + b) * 0.5, half = (b - a) * 0.5;
    T sum = T(0.0);
    for (int k = 0; k < 6; ++k) {
        sum += gl12_w[k] * (fn(mid + half * gl12_x[k]) + fn(mid - half * gl12_x[k]));
    }
    return sum * half;
}

// Classic adaptive Simpson with the Lyness 1/15 error criterion.
template <class F>
double simpson_segment(const F& fn, double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(const F& fn, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = fn(lm), frm = fn(rm);
    double left = simpson_segment(fn, a, m, fa, flm, fm);
    double right = simpson_segment(fn, m, b, fm, frm, fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& fn, double a, double b, double tol, int depth = 48) {
    double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    double whole = simpson_segment(fn, a, b, fa, fm, fb);
    return adaptive_simpson_rec(fn, a, b, fa, fm, fb, whole, tol, depth);
}

} // namespace quad

struct StretchProfile {
    double L = 0;       // Lipschitz budget (>= 2)
    double h = 0;       // gap width 1/L
    double margin = 0;  // g == 0 on [0, margin] and [h - margin, h]
    double ramp = 0;    // corner-rounding width
    double P = 0;       // sup g
    double C = 0;       // solved so that f(h) = 1 + h
    double quadrature_tol = 1e-13;

    // knots of the half profile: rise is [u0, u0+ramp] up, slope 1, [u2, u2+ramp] down
    double u0 = 0, u2 = 0;

    // f node cache: nodes[0] = 0 .. nodes.back() = h, cumulative integrals
    std::vector<double> nodes;
    std::vector<dd> fnode;

    // --- g and derivatives (piecewise polynomial, symmetric about h/2) ---

    template <class T>
    T g(const T& u_) const {
        double ud = to_double(u_);
        if (ud < 0 || ud > h) return T(0.0);
        T u = ud <= 0.5 * h ? u_ : T(h) - u_;
        ud = to_double(u);
        if (ud <= u0) return T(0.0);
        if (ud <= u0 + ramp) {
            T t = (u - u0) / ramp;
            T t3 = t * t * t;
            return ramp * (t3 - 0.5 * t3 * t); // integral of the cubic smoothstep
        }
        if (ud <= u2) return T(0.5 * ramp) + (u - (u0 + ramp));
        if (ud <= u2 + ramp) {
            T t = (u - u2) / ramp;
            T t3 = t * t * t;
            return T(P - 0.5 * ramp) + ramp * (t - t3 + 0.5 * t3 * t);
        }
        return T(P);
    }

    template <class T>
    T g1(const T& u_) const {
        double ud = to_double(u_);
        if (ud < 0 || ud > h) return T(0.0);
        bool mirrored = ud > 0.5 * h;
        T u = mirrored ? T(h) - u_ : u_;
        ud = to_double(u);
        T val(0.0);
        if (ud <= u0) {
            val = T(0.0);
        } else if (ud <= u0 + ramp) {
            T t = (u - u0) / ramp;
            val = t * t * (3.0 - 2.0 * t);
        } else if (ud <= u2) {
            val = T(1.0);
        } else if (ud <= u2 + ramp) {
            T t = (u - u2) / ramp;
            val = T(1.0) - t * t * (3.0 - 2.0 * t);
        }
        return mirrored ? -val : val;
    }

    template <class T>
    T g2(const T& u_) const {
        double ud = to_double(u_);
        if (ud < 0 || ud > h) return T(0.0);
        T u = ud <= 0.5 * h ? u_ : T(h) - u_;
        ud = to_double(u);
        if (ud > u0 && ud <= u0 + ramp) {
            T t = (u - u0) / ramp;
            return (6.0 * t - 6.0 * t * t) / ramp;
        }
        if (ud > u2 && ud <= u2 + ramp) {
            T t = (u - u2) / ramp;
            return -(6.0 * t - 6.0 * t * t) / ramp;
        }
        return T(0.0);
    }

    // f' = 1/(1 - C g); outside [0, h] the profile continues as identity slope
    template <class T>
    T fprime(const T& u) const {
        return T(1.0) / (T(1.0) - C * g(u));
    }

    template <class T>
    T fsecond_over_fprime2(const T& u) const { // f''/f'^2 = C g'
        return C * g1(u);
    }

    double sup_fprime() const { return 1.0 / (1.0 - C * P); }

    // f by cached cumulative table plus a short Gauss tail; linear outside [0, h]
    template <class T>
    T f(const T& u) const {
        double ud = to_double(u);
        if (ud <= 0) return u;
        if (ud >= h) return (u - h) + to_double_or_pass<T>(fnode.back());
        size_t k = std::upper_bound(nodes.begin(), nodes.end(), ud) - nodes.begin() - 1;
        auto integrand = [this](const T& x) { return fprime(x); };
        return to_double_or_pass<T>(fnode[k]) + quad::gauss12(integrand, T(nodes[k]), u);
    }

    template <class T>
    static T to_double_or_pass(const dd& v) {
        if constexpr (std::is_same_v<T, dd>) return v;
        else return to_double(v);
    }
};

namespace detail {

// Adaptive interval refinement: split until two half-interval Gauss rules
// reproduce the parent to `tol` (absolute, integrand scale ~ O(L)).
inline void refine_intervals(const std::function<dd(dd)>& fn, double a, double b, double tol,
                             std::vector<double>& cuts, int depth = 40) {
    dd whole = quad::gauss12<dd>(fn, dd(a), dd(b));
    double m = 0.5 * (a + b);
    dd split = quad::gauss12<dd>(fn, dd(a), dd(m)) + quad::gauss12<dd>(fn, dd(m), dd(b));
    if (depth <= 0 || to_double(abs(whole - split)) <= tol) {
        cuts.push_back(b);
        return;
    }
    refine_intervals(fn, a, m, tol, cuts, depth - 1);
    refine_intervals(fn, m, b, tol, cuts, depth - 1);
}

} // namespace detail

// Builds the C^2 corner-rounded trapezoid ramp for the taffy stretch.
inline StretchProfile build_g(double L) {
    if (!(L >= 2)) throw domain_error("build_g: requires L >= 2");
    StretchProfile p;
    p.L = L;
    p.h = 1.0 / L;
    p.margin = p.h / 16.0;
    p.ramp = p.h / 128.0;
    // plateau height theta/(4L); theta trades the size of C against sup f'.
    // Up to L ~ 10 the narrow setting keeps sup f' under 2(L+1); past that the
    // mandatory zero margins force sup f' ~ 2.4 L whatever theta, so favor C.
    double theta = L <= 10.0 ? 0.85 : 0.93;
    p.P = theta * p.h / 4.0;
    p.u0 = p.margin;
    p.u2 = p.u0 + p.P;
    if (p.u2 + p.ramp > 0.5 * p.h) throw internal_error("build_g: profile does not fit the gap");
    return p;
}

// Bisects for the unique C in (0, 1/sup g) with I(C) = 1 + 1/L, where I is
// evaluated by adaptive Simpson at tolerance 1e-13.
inline double solve_C(StretchProfile& p, double rel_tol = 1e-12, int max_iter = 200) {
    double target = 1.0 + p.h;
    auto I = [&p](double c) {
        auto integrand = [&p, c](double u) { return 1.0 / (1.0 - c * p.g(u)); };
        // integrate piecewise between profile knots so Simpson sees smooth pieces
        double knots_half[5] = {0.0, p.u0, p.u0 + p.ramp, p.u2, p.u2 + p.ramp};
        std::vector<double> ks(knots_half, knots_half + 5);
        for (int i = 4; i >= 0; --i) ks.push_back(p.h - knots_half[i]);
        double sum = 0;
        for (size_t i = 0; i + 1 < ks.size(); ++i)
            if (ks[i + 1] > ks[i])
                sum += quad::adaptive_simpson(integrand, ks[i], ks[i + 1], 1e-13 / 10);
        return sum;
    };
    double lo = 0.0, hi = (1.0 - 1e-12) / p.P;
    if (I(lo) >= target) throw numeric_error("solve_C: I(0) >= 1 + 1/L");
    double c = 0;
    for (int it = 0; it < max_iter; ++it) {
        c = 0.5 * (lo + hi);
        double val = I(c);
        if (std::abs(val - target) <= rel_tol * target) {
            p.C = c;
            return c;
        }
        (val < target ? lo : hi) = c;
    }
    throw numeric_error("solve_C: bisection did not converge");
}

// Builds the cumulative f table after C is known.
inline void build_f_cache(StretchProfile& p) {
    auto fp = [&p](dd u) { return p.fprime(u); };
    std::vector<double> cuts{0.0};
    double knots_half[5] = {0.0, p.u0, p.u0 + p.ramp, p.u2, p.u2 + p.ramp};
    std::vector<double> ks(knots_half, knots_half + 5);
    for (int i = 4; i >= 0; --i) ks.push_back(p.h - knots_half[i]);
    for (size_t i = 0; i + 1 < ks.size(); ++i)
        if (ks[i + 1] > ks[i]) detail::refine_intervals(fp, ks[i], ks[i + 1], 1e-26, cuts);
    p.nodes = cuts;
    p.fnode.assign(cuts.size(), dd(0.0));
    for (size_t k = 1; k < cuts.size(); ++k)
        p.fnode[k] = p.fnode[k - 1] + quad::gauss12<dd>(fp, dd(cuts[k - 1]), dd(cuts[k]));
}

inline StretchProfile build_stretch(double L) {
    StretchProfile p = build_g(L);
    solve_C(p);
    build_f_cache(p);
    return p;
}

} // namespace sqz

#endif
