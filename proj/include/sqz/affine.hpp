#ifndef SQZ_AFFINE_HPP
#define SQZ_AFFINE_HPP

// Integral affine geometry over exact rationals: Aff(2;Z) maps, primitive
// vectors, affine length and affine distance.

#include "sqz/bigrat.hpp"

#include <array>
#include <optional>

namespace sqz {

struct Vec2q {
    Rat x, y;
    Vec2q() : x(0), y(0) {}
    Vec2q(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {}

    friend Vec2q operator+(const Vec2q& a, const Vec2q& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2q operator-(const Vec2q& a, const Vec2q& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2q operator*(const Rat& s, const Vec2q& v) { return {s * v.x, s * v.y}; }
    friend bool operator==(const Vec2q& a, const Vec2q& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Vec2q& a, const Vec2q& b) { return !(a == b); }
};

inline Rat det2(const Vec2q& a, const Vec2q& b) { return a.x * b.y - a.y * b.x; }

struct Vec2z {
    Int x, y;
    friend bool operator==(const Vec2z& a, const Vec2z& b) { return a.x == b.x && a.y == b.y; }
};

// Primitive integer vector parallel to a nonzero rational vector, preserving direction.
inline Vec2z primitive_vector(const Vec2q& v) {
    if (v.x == 0 && v.y == 0) throw domain_error("primitive vector of zero vector");
    // clear denominators, then divide by gcd
    Int den = v.x.get_den() * v.y.get_den() / gcd(v.x.get_den(), v.y.get_den());
    Int ix = v.x.get_num() * (den / v.x.get_den());
    Int iy = v.y.get_num() * (den / v.y.get_den());
    Int g = gcd(abs(ix), abs(iy));
    return {ix / g, iy / g};
}

// Affine length: the gamma > 0 with q - p = gamma * (primitive vector).
inline Rat affine_length(const Vec2q& p, const Vec2q& q) {
    Vec2q w = q - p;
    Vec2z v = primitive_vector(w);
    if (v.x != 0) return w.x / Rat(v.x);
    return w.y / Rat(v.y);
}

// Affine distance |det(v, u)| from p to the rational line through `base` with
// direction `dir`; v is the primitive vector of dir, u any vector from p to the line.
inline Rat affine_distance(const Vec2q& p, const Vec2q& base, const Vec2q& dir) {
    Vec2z v = primitive_vector(dir);
    Vec2q u = base - p;
    Rat d = Rat(v.x) * u.y - Rat(v.y) * u.x;
    return abs(d);
}

// 2x2 integer matrix
struct Mat2z {
    Int a, b, c, d; // row-major [[a,b],[c,d]]

    Int det() const { return a * d - b * c; }

    friend Mat2z operator*(const Mat2z& m, const Mat2z& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    Vec2q apply(const Vec2q& v) const {
        return {Rat(a) * v.x + Rat(b) * v.y, Rat(c) * v.x + Rat(d) * v.y};
    }
    Vec2z apply(const Vec2z& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    friend bool operator==(const Mat2z& m, const Mat2z& n) {
        return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
    }
};

inline Mat2z mat2_identity() { return {1, 0, 0, 1}; }

// Element of Aff(2;Z): x -> A x + t with det A = +-1 and rational translation.
struct IntAffineMap2 {
    Mat2z A;
    Vec2q t;

    IntAffineMap2() : A(mat2_identity()), t() {}
    IntAffineMap2(Mat2z A_, Vec2q t_) : A(std::move(A_)), t(std::move(t_)) {
        Int d = A.det();
        if (d != 1 && d != -1) throw domain_error("IntAffineMap2: matrix not unimodular");
    }

    Vec2q operator()(const Vec2q& v) const { return A.apply(v) + t; }

    IntAffineMap2 inverse() const {
        Int d = A.det(); // +-1
        Mat2z inv{A.d * d, -A.b * d, -A.c * d, A.a * d};
        Vec2q it = inv.apply(Vec2q(-t.x, -t.y));
        return {inv, it};
    }

    // composition: (this after other)(x) = this(other(x))
    friend IntAffineMap2 operator*(const IntAffineMap2& f, const IntAffineMap2& g) {
        return {f.A * g.A, f.A.apply(g.t) + f.t};
    }
    friend bool operator==(const IntAffineMap2& f, const IntAffineMap2& g) {
        return f.A == g.A && f.t == g.t;
    }
};

// Completes a primitive vector v to a unimodular basis: returns M with
// det M = 1 and M * v = (1,0).  Uses the extended Euclidean algorithm.
inline Mat2z unimodular_to_e1(const Vec2z& v) {
    Int g, s, u;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), v.x.get_mpz_t(), v.y.get_mpz_t());
    if (g != 1) throw internal_error("unimodular_to_e1: vector not primitive");
    // s*x + u*y = 1, so [[s,u],[-y,x]] has det s*x + u*y = 1 and maps (x,y) to (1,0)
    return {s, u, -v.y, v.x};
}

} // namespace sqz

#endif
