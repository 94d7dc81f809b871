#ifndef SQZ_DD_HPP
#define SQZ_DD_HPP

// Double-double arithmetic (Dekker/Knuth, FMA-based products).  Used as the
// measurement scalar when verifying Jacobian identities whose conditioning
// exceeds plain double: the folding Jacobians carry entries of size
// O(L * R^2), so residuals of exact identities sit near eps * |J|^2.

#include <cmath>

namespace sqz {

struct dd {
    double hi = 0.0, lo = 0.0;

    dd() = default;
    dd(double x) : hi(x), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi; }
};

namespace ddops {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) { // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace ddops

inline dd operator+(const dd& a, const dd& b) {
    using namespace ddops;
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(const dd& a) { return {-a.hi, -a.lo}; }
inline dd operator-(const dd& a, const dd& b) { return a + (-b); }

inline dd operator*(const dd& a, const dd& b) {
    using namespace ddops;
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd operator/(const dd& a, const dd& b) {
    using namespace ddops;
    double q1 = a.hi / b.hi;
    dd r = a - dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - dd(q2) * b;
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, const dd& b) { return a = a + b; }
inline dd& operator-=(dd& a, const dd& b) { return a = a - b; }
inline dd& operator*=(dd& a, const dd& b) { return a = a * b; }
inline dd& operator/=(dd& a, const dd& b) { return a = a / b; }

inline dd operator+(const dd& a, double b) { return a + dd(b); }
inline dd operator+(double a, const dd& b) { return dd(a) + b; }
inline dd operator-(const dd& a, double b) { return a - dd(b); }
inline dd operator-(double a, const dd& b) { return dd(a) - b; }
inline dd operator*(const dd& a, double b) { return a * dd(b); }
inline dd operator*(double a, const dd& b) { return dd(a) * b; }
inline dd operator/(const dd& a, double b) { return a / dd(b); }
inline dd operator/(double a, const dd& b) { return dd(a) / b; }

inline bool operator<(const dd& a, const dd& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const dd& a, const dd& b) { return b < a; }
inline bool operator<=(const dd& a, const dd& b) { return !(b < a); }
inline bool operator>=(const dd& a, const dd& b) { return !(a < b); }

inline double to_double(const dd& a) { return a.hi; }
inline double to_double(double a) { return a; }

inline dd abs(const dd& a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? -a : a; }

} // namespace sqz

#endif
