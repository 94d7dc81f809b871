#ifndef SQZ_TRIANGLE_HPP
#define SQZ_TRIANGLE_HPP

// Markov triangles, vertex charts into the weighted-projective plane polytope,
// Aff(2;Z) normal forms, and the half-strip fitting decision.

#include "sqz/affine.hpp"
#include "sqz/markov.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace sqz {

struct RationalTriangle {
    std::array<Vec2q, 3> v;

    RationalTriangle(Vec2q v1, Vec2q v2, Vec2q v3)
        : v{std::move(v1), std::move(v2), std::move(v3)} {
        if (det2(v[1] - v[0], v[2] - v[0]) == 0)
            throw domain_error("degenerate triangle");
    }

    // edge i is opposite vertex i, running from v[(i+1)%3] to v[(i+2)%3]
    const Vec2q& edge_start(int i) const { return v[(i + 1) % 3]; }
    const Vec2q& edge_end(int i) const { return v[(i + 2) % 3]; }
    Vec2q edge_vec(int i) const { return edge_end(i) - edge_start(i); }

    Rat edge_affine_length(int i) const { return affine_length(edge_start(i), edge_end(i)); }
    Rat affine_perimeter() const {
        return edge_affine_length(0) + edge_affine_length(1) + edge_affine_length(2);
    }
    Rat height_over_edge(int i) const {
        return affine_distance(v[i], edge_start(i), edge_vec(i));
    }
    Rat area() const { return abs(det2(v[1] - v[0], v[2] - v[0])) / 2; }

    RationalTriangle transformed(const IntAffineMap2& m) const {
        return {m(v[0]), m(v[1]), m(v[2])};
    }
    RationalTriangle scaled(const Rat& s) const {
        return {s * v[0], s * v[1], s * v[2]};
    }
    friend bool operator==(const RationalTriangle& s, const RationalTriangle& t) {
        return s.v[0] == t.v[0] && s.v[1] == t.v[1] && s.v[2] == t.v[2];
    }
};

// Integral affine embedding R^2 -> R^3, x -> A x + t, with A(Z^2) = A(R^2) n Z^3.
struct ChartEmbedding3 {
    std::array<std::array<Int, 2>, 3> A;
    std::array<Rat, 3> t;

    std::array<Rat, 3> apply(const Vec2q& x) const {
        std::array<Rat, 3> y;
        for (int r = 0; r < 3; ++r) y[r] = Rat(A[r][0]) * x.x + Rat(A[r][1]) * x.y + t[r];
        return y;
    }

    // 2x2 minors, rows (1,2), (0,2), (0,1)
    std::array<Int, 3> minors() const {
        return {A[1][0] * A[2][1] - A[1][1] * A[2][0],
                A[0][0] * A[2][1] - A[0][1] * A[2][0],
                A[0][0] * A[1][1] - A[0][1] * A[1][0]};
    }

    // lattice saturation <=> gcd of the maximal minors is 1
    bool is_saturated() const {
        auto m = minors();
        return gcd(gcd(abs(m[0]), abs(m[1])), abs(m[2])) == 1;
    }

    // unique solution x of A x + t = y; throws if y is off the image plane
    Vec2q preimage(const std::array<Rat, 3>& y) const {
        // pick two rows with nonzero determinant
        for (int r1 = 0; r1 < 3; ++r1)
            for (int r2 = r1 + 1; r2 < 3; ++r2) {
                Rat det = Rat(A[r1][0] * A[r2][1] - A[r1][1] * A[r2][0]);
                if (det == 0) continue;
                Rat b1 = y[r1] - t[r1], b2 = y[r2] - t[r2];
                Vec2q x{(b1 * Rat(A[r2][1]) - b2 * Rat(A[r1][1])) / det,
                        (Rat(A[r1][0]) * b2 - Rat(A[r2][0]) * b1) / det};
                auto back = apply(x);
                for (int r = 0; r < 3; ++r)
                    if (back[r] != y[r]) throw internal_error("chart preimage: point off the image plane");
                return x;
            }
        throw internal_error("chart embedding is rank deficient");
    }
};

// Chart of the vertex carrying weight v[vertex]^2 of the Markov triple.
// The remaining two weights take the roles (beta, gamma) in ascending order,
// and q is the smallest positive residue with beta q = 3 gamma (mod alpha).
inline ChartEmbedding3 chart_embedding(const MarkovTriple& tr, int vertex) {
    if (vertex < 0 || vertex > 2) throw domain_error("chart_embedding: vertex must be 0, 1 or 2");
    int i = (vertex + 1) % 3, j = (vertex + 2) % 3;
    if (i > j) std::swap(i, j);
    const Int& al = tr.v[vertex];
    const Int& be = tr.v[i];
    const Int& ga = tr.v[j];

    Int q = 1;
    if (al > 1) {
        Int inv;
        if (mpz_invert(inv.get_mpz_t(), be.get_mpz_t(), al.get_mpz_t()) == 0)
            throw internal_error("chart_embedding: no residue solution (weights not coprime)");
        q = (3 * ga * inv) % al;
        if (q <= 0) q += al;
    }

    Int k = (be * q - 3 * ga) / al; // exact by choice of q
    std::array<Int, 2> row_alpha{-be * be, 1 + be * k};
    std::array<Int, 2> row_beta{al * al, 1 - al * q};
    std::array<Int, 2> row_gamma{0, 1};

    ChartEmbedding3 c;
    c.A[vertex] = row_alpha;
    c.A[i] = row_beta;
    c.A[j] = row_gamma;
    c.t = {Rat(0), Rat(0), Rat(0)};
    c.t[vertex] = Rat(be * be * ga * ga);

    if (!c.is_saturated()) throw internal_error("chart_embedding: not lattice-saturating");
    return c;
}

// Markov triangle Delta_{a,b,c}(alpha); vertex k of the realization carries
// weight v[k]^2 and the opposite edge k has affine length (alpha/abc) v[k]^2.
struct MarkovTriangle {
    MarkovTriple triple;
    Rat alpha;
    RationalTriangle realization;
    Int q_chart;
    int chart_vertex;

    Rat lambda() const { return alpha / Rat(triple.a() * triple.b() * triple.c()); }

    void validate() const {
        Rat lam = lambda();
        if (realization.area() != alpha * alpha / 2)
            throw internal_error("MarkovTriangle: area != alpha^2/2");
        if (realization.affine_perimeter() != 3 * alpha)
            throw internal_error("MarkovTriangle: affine perimeter != 3 alpha");
        for (int k = 0; k < 3; ++k) {
            if (realization.edge_affine_length(k) != lam * Rat(triple.v[k] * triple.v[k]))
                throw internal_error("MarkovTriangle: edge affine lengths off");
            // area identity through every edge
            if (realization.edge_affine_length(k) * realization.height_over_edge(k) !=
                alpha * alpha)
                throw internal_error("MarkovTriangle: area identity fails");
        }
    }
};

// Pulls the vertices of the polytope {a^2 y1 + b^2 y2 + c^2 y3 = a^2 b^2 c^2}
// n R^3_{>=0} back through a vertex chart and rescales by alpha/(abc).
inline MarkovTriangle build_triangle(const MarkovTriple& tr, const Rat& alpha, int vertex = 0) {
    if (alpha <= 0) throw domain_error("build_triangle: alpha must be positive");
    ChartEmbedding3 chart = chart_embedding(tr, vertex);

    std::array<Vec2q, 3> pre;
    for (int k = 0; k < 3; ++k) {
        std::array<Rat, 3> w{Rat(0), Rat(0), Rat(0)};
        Int other = tr.v[(k + 1) % 3] * tr.v[(k + 2) % 3];
        w[k] = Rat(other * other);
        pre[k] = chart.preimage(w);
    }
    Rat scale = alpha / Rat(tr.a() * tr.b() * tr.c());
    RationalTriangle real{scale * pre[0], scale * pre[1], scale * pre[2]};

    Int q = 1;
    {
        // recover the q used (recompute, cheap)
        int i = (vertex + 1) % 3, j = (vertex + 2) % 3;
        if (i > j) std::swap(i, j);
        if (tr.v[vertex] > 1) {
            Int inv;
            mpz_invert(inv.get_mpz_t(), tr.v[i].get_mpz_t(), tr.v[vertex].get_mpz_t());
            q = (3 * tr.v[j] * inv) % tr.v[vertex];
            if (q <= 0) q += tr.v[vertex];
        }
    }
    MarkovTriangle mt{tr, alpha, real, q, vertex};
    mt.validate();
    return mt;
}

namespace detail {

// Positions a chosen oriented edge on the positive x-axis starting at the
// origin, apex in the upper half-plane with x reduced into [0, apex.y).
inline IntAffineMap2 base_edge_normalizer(const Vec2q& u, const Vec2q& w, const Vec2q& apex) {
    Mat2z m0 = unimodular_to_e1(primitive_vector(w - u));
    Vec2q a0 = m0.apply(apex) - m0.apply(u);
    if (a0.y < 0) {
        m0 = Mat2z{1, 0, 0, -1} * m0;
        a0 = m0.apply(apex) - m0.apply(u);
    }
    Int k = rat_floor(a0.x / a0.y);
    Mat2z shear{1, -k, 0, 1};
    Mat2z m = shear * m0;
    Vec2q t = m.apply(u);
    return IntAffineMap2(m, Vec2q(-t.x, -t.y));
}

} // namespace detail

// Normal form under Aff(2;Z): longest-affine-length edge along (1,0) from the
// origin, apex in the upper half-plane with x in [0, apex.y), ties broken by
// the smaller apex x.  Returns the representative and the map achieving it.
inline std::pair<RationalTriangle, IntAffineMap2> canonical_form(const RationalTriangle& tri) {
    Rat lmax = tri.edge_affine_length(0);
    for (int e = 1; e < 3; ++e) lmax = std::max(lmax, tri.edge_affine_length(e));

    std::optional<RationalTriangle> best;
    IntAffineMap2 best_map;
    for (int e = 0; e < 3; ++e) {
        if (tri.edge_affine_length(e) != lmax) continue;
        for (int orient = 0; orient < 2; ++orient) {
            Vec2q u = orient ? tri.edge_end(e) : tri.edge_start(e);
            Vec2q w = orient ? tri.edge_start(e) : tri.edge_end(e);
            IntAffineMap2 m = detail::base_edge_normalizer(u, w, tri.v[e]);
            RationalTriangle cand{m(u), m(w), m(tri.v[e])};
            if (!best || cand.v[2].x < best->v[2].x) {
                best = cand;
                best_map = m;
            }
        }
    }
    return {*best, best_map};
}

inline std::optional<IntAffineMap2> is_aff_equivalent(const RationalTriangle& t1,
                                                      const RationalTriangle& t2) {
    auto [c1, m1] = canonical_form(t1);
    auto [c2, m2] = canonical_form(t2);
    if (!(c1 == c2)) return std::nullopt;
    return m2.inverse() * m1;
}

// A triangle placed inside the half-strip S = R_{>=0} x [0,1).
struct HalfStripFit {
    IntAffineMap2 map;
    RationalTriangle image;
    Rat height;
    int base_edge_index;

    void validate() const {
        if (!(height < 1)) throw internal_error("HalfStripFit: height not < 1");
        for (const auto& p : image.v) {
            if (p.x < 0 || p.y < 0 || p.y >= 1)
                throw internal_error("HalfStripFit: image not in the half-strip");
        }
    }
};

// Tries each edge as the strip base (in index order): primitive direction to
// (1,0), reflect into the upper half-plane, shear the apex x into [0, apex.y),
// translate the base start to the origin; accept iff the apex height is < 1.
inline std::optional<HalfStripFit> fit_in_strip(const RationalTriangle& tri) {
    for (int e = 0; e < 3; ++e) {
        IntAffineMap2 m = detail::base_edge_normalizer(tri.edge_start(e), tri.edge_end(e), tri.v[e]);
        RationalTriangle img = tri.transformed(m);
        Rat h = tri.height_over_edge(e);
        bool ok = h < 1;
        for (const auto& p : img.v) ok = ok && p.x >= 0 && p.y >= 0;
        if (ok) {
            HalfStripFit fit{m, img, h, e};
            fit.validate();
            return fit;
        }
    }
    return std::nullopt;
}

// Exact certificate that no Markov triangle of perimeter 3*alpha can have
// height < 1 over any edge: l_aff(E) < 3 alpha forces d_aff = alpha^2 / l > alpha/3 >= 1.
struct NoFitCertificate {
    Rat alpha;
    Rat height_lower_bound; // alpha / 3, exact
};

struct FitResult {
    std::optional<MarkovTriple> triple;
    std::optional<HalfStripFit> fit;
    std::optional<NoFitCertificate> certificate;
    // branch walk: (triple, exact height over the longest edge) per step tried
    std::vector<std::pair<MarkovTriple, Rat>> trail;

    bool found() const { return fit.has_value(); }
};

// Walks the branch (m_{n+2}, m_{n+1}, m_n) of the Markov tree until the
// triangle fits in the half-strip; alpha >= 3 returns the analytic certificate.
inline FitResult find_fitting_triple(const Rat& alpha, int iteration_cap = 64) {
    if (alpha <= 0) throw domain_error("find_fitting_triple: alpha must be positive");
    FitResult res;
    if (alpha >= 3) {
        res.certificate = NoFitCertificate{alpha, alpha / 3};
        return res;
    }
    std::vector<Int> m = branch_sequence(2);
    for (int n = 0; n < iteration_cap; ++n) {
        while ((int)m.size() < n + 3) {
            int k = (int)m.size() - 2;
            m.push_back(3 * m[k + 1] * m[k] - m[k - 1]);
        }
        MarkovTriple tr(m[n], m[n + 1], m[n + 2]);
        Rat height = alpha * Rat(m[n + 1] * m[n]) / Rat(m[n + 2]);
        res.trail.emplace_back(tr, height);
        MarkovTriangle mt = build_triangle(tr, alpha);
        if (auto fit = fit_in_strip(mt.realization)) {
            res.triple = tr;
            res.fit = std::move(fit);
            return res;
        }
    }
    throw internal_error("find_fitting_triple: iteration cap exceeded (alpha < 3 should terminate)");
}

} // namespace sqz

#endif
