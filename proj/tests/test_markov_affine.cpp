#include <catch2/catch_amalgamated.hpp>

#include "sqz/markov_io.hpp"
#include "sqz/triangle.hpp"

#include <random>

using namespace sqz;

namespace {

Rat R(long n, long d = 1) { return make_rat(n, d); }

// Brute-force Markov solutions with c <= cap: solve the equation as a
// quadratic in c and keep integer roots.  Independent of the mutation engine.
std::vector<std::array<long, 3>> markov_by_search(long cap) {
    std::vector<std::array<long, 3>> out;
    for (long a = 1; a <= cap; ++a)
        for (long b = a; b <= cap; ++b) {
            // c^2 - 3ab c + (a^2+b^2) = 0
            Int disc = Int(3 * a * b) * Int(3 * a * b) - 4 * (Int(a) * a + Int(b) * b);
            if (disc < 0) continue;
            Int s = sqrt(disc);
            if (s * s != disc) continue;
            for (int sign : {-1, 1}) {
                Int num = Int(3 * a * b) + sign * s;
                if (num <= 0 || num % 2 != 0) continue;
                Int c = num / 2;
                if (c < b || c > cap) continue;
                out.push_back({a, b, c.get_si()});
            }
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Smith normal form of a 3x2 integer matrix (oracle for lattice saturation).
std::array<Int, 2> smith_invariants(std::array<std::array<Int, 2>, 3> m) {
    auto nonzero_exists = [&](int r0, int c0) {
        for (int r = r0; r < 3; ++r)
            for (int c = c0; c < 2; ++c)
                if (m[r][c] != 0) return true;
        return false;
    };
    std::array<Int, 2> inv{0, 0};
    for (int k = 0; k < 2; ++k) {
        if (!nonzero_exists(k, k)) break;
        bool reduced = false;
        while (!reduced) {
            // move the smallest nonzero |entry| to the pivot
            int br = -1, bc = -1;
            for (int r = k; r < 3; ++r)
                for (int c = k; c < 2; ++c)
                    if (m[r][c] != 0 && (br < 0 || abs(m[r][c]) < abs(m[br][bc]))) { br = r; bc = c; }
            std::swap(m[k], m[br]);
            for (int r = 0; r < 3; ++r) std::swap(m[r][k], m[r][bc]);
            reduced = true;
            for (int r = k + 1; r < 3; ++r)
                if (m[r][k] != 0) {
                    Int f = m[r][k] / m[k][k];
                    for (int c = k; c < 2; ++c) m[r][c] -= f * m[k][c];
                    if (m[r][k] != 0) reduced = false;
                }
            for (int c = k + 1; c < 2; ++c)
                if (m[k][c] != 0) {
                    Int f = m[k][c] / m[k][k];
                    for (int r = k; r < 3; ++r) m[r][c] -= f * m[r][k];
                    if (m[k][c] != 0) reduced = false;
                }
        }
        inv[k] = abs(m[k][k]);
    }
    return inv;
}

std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240517ull);
    return gen;
}

IntAffineMap2 random_unimodular() {
    std::uniform_int_distribution<int> entry(-5, 5);
    std::uniform_int_distribution<int> tnum(-12, 12);
    while (true) {
        Mat2z m{entry(rng()), entry(rng()), entry(rng()), entry(rng())};
        Int d = m.det();
        if (d == 1 || d == -1)
            return IntAffineMap2(m, Vec2q(R(tnum(rng()), 3), R(tnum(rng()), 5)));
    }
}

Vec2q random_point() {
    std::uniform_int_distribution<int> num(-30, 30);
    std::uniform_int_distribution<int> den(1, 7);
    return {R(num(rng()), den(rng())), R(num(rng()), den(rng()))};
}

bool same_vertex_set(const RationalTriangle& s, const RationalTriangle& t) {
    std::array<int, 3> perm{0, 1, 2};
    std::sort(perm.begin(), perm.end());
    do {
        if (s.v[0] == t.v[perm[0]] && s.v[1] == t.v[perm[1]] && s.v[2] == t.v[perm[2]])
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace

TEST_CASE("is_markov matches the equation") {
    CHECK(is_markov(1, 1, 1));
    CHECK(is_markov(2, 5, 29));
    CHECK_FALSE(is_markov(1, 2, 3));
    CHECK_THROWS_AS(is_markov(0, 1, 1), domain_error);
}

TEST_CASE("mutate steps along the tree and inverts") {
    MarkovTriple t125(1, 2, 5);
    CHECK(mutate(t125, 2) == MarkovTriple(1, 1, 2));
    MarkovTriple ones(1, 1, 1);
    CHECK(mutate(ones, 2) == MarkovTriple(1, 1, 2));

    // involution up to re-sorting: mutating the freshly produced entry undoes the step
    auto mutate_back_works = [](const MarkovTriple& t, int slot) {
        MarkovTriple m = mutate(t, slot);
        Int fresh = 3 * t.v[(slot + 1) % 3] * t.v[(slot + 2) % 3] - t.v[slot];
        for (int j = 0; j < 3; ++j)
            if (m.v[j] == fresh && mutate(m, j) == t) return true;
        return false;
    };
    for (const auto& t : enumerate_tree(1000))
        for (int slot = 0; slot < 3; ++slot) CHECK(mutate_back_works(t, slot));
}

TEST_CASE("non-root triples descend through exactly one mutation") {
    for (const auto& t : enumerate_tree(10000)) {
        if (t == MarkovTriple(1, 1, 1)) continue;
        int descents = 0;
        for (int slot = 0; slot < 3; ++slot)
            if (mutate(t, slot).c() < t.c()) ++descents;
        CHECK(descents == 1);
    }
}

TEST_CASE("enumerate_tree matches brute-force search") {
    auto tree = enumerate_tree(5);
    REQUIRE(tree.size() == 3);
    CHECK(tree[0] == MarkovTriple(1, 1, 1));
    CHECK(tree[1] == MarkovTriple(1, 1, 2));
    CHECK(tree[2] == MarkovTriple(1, 2, 5));

    CHECK(enumerate_tree(1).size() == 1);

    auto big = enumerate_tree(500);
    CHECK(std::count(big.begin(), big.end(), MarkovTriple(5, 29, 433)) == 1);

    auto oracle = markov_by_search(500);
    REQUIRE(big.size() == oracle.size());
    for (size_t i = 0; i < big.size(); ++i) {
        CHECK(big[i].a() == oracle[i][0]);
        CHECK(big[i].b() == oracle[i][1]);
        CHECK(big[i].c() == oracle[i][2]);
    }
}

TEST_CASE("branch sequence follows the recursion") {
    auto m = branch_sequence(6);
    std::vector<Int> expect{1, 1, 1, 2, 5, 29, 433};
    CHECK(m == expect);
    CHECK(branch_sequence(2) == std::vector<Int>{1, 1, 1});

    auto m12 = branch_sequence(14);
    for (int n = 0; n + 2 <= 14; ++n) CHECK(is_markov(m12[n], m12[n + 1], m12[n + 2]));
}

TEST_CASE("affine length") {
    CHECK(affine_length({R(0), R(0)}, {R(6), R(4)}) == R(2));
    CHECK(affine_length({R(0), R(0)}, {R(1), R(0)}) == R(1));
    CHECK(affine_length({R(0), R(0)}, {R(1, 2), R(1, 2)}) == R(1, 2));
    CHECK_THROWS_AS(affine_length({R(1), R(1)}, {R(1), R(1)}), domain_error);

    // scale covariance with rational s > 0
    for (int i = 0; i < 50; ++i) {
        Vec2q p = random_point(), q = random_point();
        if (p == q) continue;
        Rat s = R(3, 7);
        CHECK(affine_length(s * p, s * q) == s * affine_length(p, q));
    }
}

TEST_CASE("affine distance") {
    CHECK(affine_distance({R(0), R(1)}, {R(0), R(0)}, {R(1), R(0)}) == R(1));
    // distance from origin to the hypotenuse of Delta_{1,1,1}(alpha)
    Rat alpha = R(7, 3);
    CHECK(affine_distance({R(0), R(0)}, {alpha, R(0)}, {R(0) - alpha, alpha}) == alpha);
    CHECK_THROWS_AS(affine_distance({R(0), R(0)}, {R(1), R(1)}, {R(0), R(0)}), domain_error);

    // independent of the chosen point on the line
    Vec2q base{R(2), R(3)}, dir{R(4), R(-6)}, p{R(-1), R(5)};
    Vec2q base2 = base + R(5, 3) * dir;
    CHECK(affine_distance(p, base, dir) == affine_distance(p, base2, dir));
}

TEST_CASE("affine length and distance are Aff(2,Z) invariants") {
    for (int i = 0; i < 100; ++i) {
        IntAffineMap2 m = random_unimodular();
        Vec2q p = random_point(), q = random_point(), b = random_point(), d = random_point();
        if (!(p == q)) CHECK(affine_length(m(p), m(q)) == affine_length(p, q));
        if (!(d.x == 0 && d.y == 0)) {
            Vec2q dir_img = m.A.apply(d);
            CHECK(affine_distance(m(p), m(b), dir_img) == affine_distance(p, b, d));
        }
    }
}

TEST_CASE("IntAffineMap2 composes and inverts in the group") {
    for (int i = 0; i < 50; ++i) {
        IntAffineMap2 f = random_unimodular(), g = random_unimodular();
        IntAffineMap2 fg = f * g, inv = fg.inverse();
        Vec2q p = random_point();
        CHECK(fg(p) == f(g(p)));
        CHECK(inv(fg(p)) == p);
        Int d = fg.A.det();
        CHECK((d == 1 || d == -1));
    }
}

TEST_CASE("chart embeddings are integral and lattice-saturating") {
    for (const auto& t : enumerate_tree(500)) {
        for (int vertex = 0; vertex < 3; ++vertex) {
            ChartEmbedding3 c = chart_embedding(t, vertex);
            CHECK(c.is_saturated());
            auto inv = smith_invariants(c.A);
            CHECK(inv[0] == 1);
            CHECK(inv[1] == 1);
            // image plane is a^2 y1 + b^2 y2 + c^2 y3 = (abc)^2
            std::array<Int, 3> w{t.a() * t.a(), t.b() * t.b(), t.c() * t.c()};
            for (int col = 0; col < 2; ++col)
                CHECK(w[0] * c.A[0][col] + w[1] * c.A[1][col] + w[2] * c.A[2][col] == 0);
            Rat rhs = Rat(w[0]) * c.t[0] + Rat(w[1]) * c.t[1] + Rat(w[2]) * c.t[2];
            Int abc = t.a() * t.b() * t.c();
            CHECK(rhs == Rat(abc * abc));
        }
    }
}

TEST_CASE("build_triangle: the standard simplex and exact identities") {
    MarkovTriangle unit = build_triangle(MarkovTriple(1, 1, 1), R(5, 2));
    auto eq = is_aff_equivalent(
        unit.realization,
        RationalTriangle({R(0), R(0)}, {R(5, 2), R(0)}, {R(0), R(5, 2)}));
    CHECK(eq.has_value());

    MarkovTriangle t = build_triangle(MarkovTriple(1, 2, 5), R(10));
    CHECK(t.realization.edge_affine_length(0) == R(1));
    CHECK(t.realization.edge_affine_length(1) == R(4));
    CHECK(t.realization.edge_affine_length(2) == R(25));
    CHECK(t.realization.area() == R(50));

    for (const auto& tr : enumerate_tree(100))
        for (const Rat& alpha : {R(1, 2), R(1), R(29, 10)}) {
            MarkovTriangle mt = build_triangle(tr, alpha);
            CHECK(mt.realization.area() == alpha * alpha / 2);
            CHECK(mt.realization.affine_perimeter() == 3 * alpha);
        }
    CHECK_THROWS_AS(build_triangle(MarkovTriple(1, 1, 1), R(0)), domain_error);
}

TEST_CASE("(1,2,5) chart with a=1 has q=1 and integer matrix") {
    MarkovTriangle t = build_triangle(MarkovTriple(1, 2, 5), R(10), 0);
    CHECK(t.q_chart == 1);
    ChartEmbedding3 c = chart_embedding(MarkovTriple(1, 2, 5), 0);
    CHECK(c.A[0][1] == 1 + 2 * (2 * 1 - 3 * 5) / 1);
}

TEST_CASE("all three vertex charts give equivalent triangles") {
    for (const auto& tr : {MarkovTriple(2, 5, 29), MarkovTriple(1, 5, 13), MarkovTriple(5, 29, 433)}) {
        MarkovTriangle t0 = build_triangle(tr, R(7, 2), 0);
        MarkovTriangle t1 = build_triangle(tr, R(7, 2), 1);
        MarkovTriangle t2 = build_triangle(tr, R(7, 2), 2);
        auto m01 = is_aff_equivalent(t0.realization, t1.realization);
        auto m02 = is_aff_equivalent(t0.realization, t2.realization);
        REQUIRE(m01.has_value());
        REQUIRE(m02.has_value());
        // the recovered map really carries one realization onto the other
        auto c1 = canonical_form(t0.realization.transformed(*m01)).first;
        auto c2 = canonical_form(t1.realization).first;
        CHECK(c1 == c2);
    }
}

TEST_CASE("canonical form is idempotent and group-invariant") {
    RationalTriangle tri({R(0), R(0)}, {R(2), R(0)}, {R(0), R(2)});
    auto [canon, m] = canonical_form(tri);
    CHECK(canonical_form(canon).first == canon);
    CHECK(same_vertex_set(canon, tri.transformed(m)));

    IntAffineMap2 shear(Mat2z{1, 1, 0, 1}, Vec2q(R(0), R(0)));
    CHECK(canonical_form(tri.transformed(shear)).first == canon);

    for (int i = 0; i < 60; ++i) {
        RationalTriangle t(random_point(), random_point(), random_point());
        if (det2(t.v[1] - t.v[0], t.v[2] - t.v[0]) == 0) continue;
        auto c0 = canonical_form(t).first;
        CHECK(canonical_form(c0).first == c0);
        IntAffineMap2 g = random_unimodular();
        CHECK(canonical_form(t.transformed(g)).first == c0);
    }
}

TEST_CASE("is_aff_equivalent finds explicit maps") {
    RationalTriangle t(random_point(), random_point(), {R(17, 3), R(31, 5)});
    auto self = is_aff_equivalent(t, t);
    REQUIRE(self.has_value());

    IntAffineMap2 shift(mat2_identity(), Vec2q(R(1, 3), R(0)));
    auto m = is_aff_equivalent(t, t.transformed(shift));
    REQUIRE(m.has_value());
    RationalTriangle lhs = t.transformed(*m), rhs = t.transformed(shift);
    CHECK(canonical_form(lhs).first == canonical_form(rhs).first);

    RationalTriangle other({R(0), R(0)}, {R(1), R(0)}, {R(0), R(7)});
    RationalTriangle thin({R(0), R(0)}, {R(1), R(0)}, {R(0), R(5)});
    CHECK_FALSE(is_aff_equivalent(other, thin).has_value());
}

TEST_CASE("fit_in_strip on the worked triangles") {
    MarkovTriangle small = build_triangle(MarkovTriple(1, 1, 1), R(1, 2));
    auto f1 = fit_in_strip(small.realization);
    REQUIRE(f1.has_value());
    CHECK(f1->height == R(1, 2));

    MarkovTriangle mid = build_triangle(MarkovTriple(1, 2, 5), R(2));
    auto f2 = fit_in_strip(mid.realization);
    REQUIRE(f2.has_value());
    CHECK(f2->height == R(4, 5));

    MarkovTriangle big = build_triangle(MarkovTriple(2, 5, 29), R(29, 10));
    CHECK_FALSE(fit_in_strip(big.realization).has_value());
}

TEST_CASE("fit_in_strip success is an Aff(2,Z)-invariant predicate") {
    for (const Rat& alpha : {R(1, 2), R(2), R(29, 10)}) {
        for (const auto& tr : {MarkovTriple(1, 1, 1), MarkovTriple(1, 2, 5), MarkovTriple(2, 5, 29)}) {
            RationalTriangle t = build_triangle(tr, alpha).realization;
            bool plain = fit_in_strip(t).has_value();
            for (int i = 0; i < 10; ++i)
                CHECK(fit_in_strip(t.transformed(random_unimodular())).has_value() == plain);
        }
    }
}

TEST_CASE("find_fitting_triple walks the branch") {
    FitResult r1 = find_fitting_triple(R(1, 2));
    REQUIRE(r1.found());
    CHECK(*r1.triple == MarkovTriple(1, 1, 1));
    CHECK(r1.fit->height == R(1, 2));

    FitResult r2 = find_fitting_triple(R(2));
    REQUIRE(r2.found());
    CHECK(*r2.triple == MarkovTriple(1, 2, 5));
    CHECK(r2.fit->height == R(4, 5));

    FitResult r3 = find_fitting_triple(R(29, 10));
    REQUIRE(r3.found());
    CHECK(*r3.triple == MarkovTriple(5, 29, 433));
    CHECK(r3.fit->height == R(841, 866));

    // heights along the walk follow alpha * m_{n+1} m_n / m_{n+2} and decrease
    auto m = branch_sequence((int)r3.trail.size() + 2);
    for (size_t n = 0; n < r3.trail.size(); ++n) {
        CHECK(r3.trail[n].second == R(29, 10) * Rat(m[n + 1] * m[n]) / Rat(m[n + 2]));
        if (n > 0) CHECK(r3.trail[n].second < r3.trail[n - 1].second);
    }

    FitResult none = find_fitting_triple(R(3));
    CHECK_FALSE(none.found());
    REQUIRE(none.certificate.has_value());
    CHECK(none.certificate->height_lower_bound == R(1));

    CHECK_FALSE(find_fitting_triple(R(4)).found());
    CHECK_THROWS_AS(find_fitting_triple(R(0)), domain_error);
}

TEST_CASE("fit heights match the exact affine distance") {
    MarkovTriangle t = build_triangle(MarkovTriple(1, 2, 5), R(2));
    auto fit = fit_in_strip(t.realization);
    REQUIRE(fit.has_value());
    int e = fit->base_edge_index;
    CHECK(fit->height == t.realization.height_over_edge(e));
    CHECK(fit->image == t.realization.transformed(fit->map));
}

TEST_CASE("markov JSON uses decimal strings") {
    FitResult r = find_fitting_triple(R(29, 10));
    json j = to_json(r);
    CHECK(j["found"] == true);
    CHECK(j["triple"] == json::array({"5", "29", "433"}));
    CHECK(j["height"] == "841/866");
}
