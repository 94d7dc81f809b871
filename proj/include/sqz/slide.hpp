#ifndef SQZ_SLIDE_HPP
#define SQZ_SLIDE_HPP

// The sliding Hamiltonian step profile: rho == 2i on [2i, 2i+1] for
// 0 <= i < num_cells, quintic C^2 transitions on the unit gaps between
// plateaus, constant outside.  ||rho'|| <= 4, ||rho''|| <= 16.

#include "sqz/dd.hpp"

#include <cmath>

namespace sqz {

struct SlideProfile {
    int num_cells = 0;

    explicit SlideProfile(int cells = 1) : num_cells(cells) {}

    double top() const { return 2.0 * (num_cells - 1); }

    template <class T>
    T rho(const T& x) const {
        double xd = to_double(x);
        if (xd <= 1.0) return T(0.0);
        if (xd >= top()) return T(top());
        double i = std::floor(0.5 * xd);
        T frac = x - 2.0 * i;
        if (to_double(frac) <= 1.0) return T(2.0 * i);
        T t = frac - 1.0;
        T t3 = t * t * t;
        return 2.0 * i + 2.0 * (t3 * (6.0 * t * t - 15.0 * t + 10.0));
    }

    template <class T>
    T rho1(const T& x) const {
        double xd = to_double(x);
        if (xd <= 1.0 || xd >= top()) return T(0.0);
        double i = std::floor(0.5 * xd);
        T frac = x - 2.0 * i;
        if (to_double(frac) <= 1.0) return T(0.0);
        T t = frac - 1.0;
        T t2 = t * t;
        return 2.0 * (t2 * (30.0 * t2 - 60.0 * t + 30.0));
    }

    template <class T>
    T rho2(const T& x) const {
        double xd = to_double(x);
        if (xd <= 1.0 || xd >= top()) return T(0.0);
        double i = std::floor(0.5 * xd);
        T frac = x - 2.0 * i;
        if (to_double(frac) <= 1.0) return T(0.0);
        T t = frac - 1.0;
        return 2.0 * (t * (120.0 * t * t - 180.0 * t + 60.0));
    }

    static constexpr double rho1_bound = 4.0;  // quintic attains 3.75
    static constexpr double rho2_bound = 16.0; // quintic attains 20/sqrt(3)
};

} // namespace sqz

#endif
