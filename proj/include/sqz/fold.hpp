#ifndef SQZ_FOLD_HPP
#define SQZ_FOLD_HPP

// The folding embedding of the cube K(R) = [-R,R]^4 into R^4: cube-to-prism,
// a taffy stretch per symplectic factor, two Hamiltonian slides, and a final
// translation.  Every primitive carries a closed-form Jacobian; the composed
// map sends each cell block into the unit cylinder {x1^2 + y1^2 < 1}.

#include "sqz/slide.hpp"
#include "sqz/stretch.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace sqz {

template <class T>
using Vec4 = std::array<T, 4>;
template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;

template <class T>
Mat4<T> mat4_identity() {
    Mat4<T> m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = T(i == j ? 1.0 : 0.0);
    return m;
}

template <class T>
Mat4<T> mat4_mul(const Mat4<T>& a, const Mat4<T>& b) {
    Mat4<T> c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            T s(0.0);
            for (int k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

// standard symplectic pairing of (x1,y1),(x2,y2) in coordinate order x1,y1,x2,y2
inline constexpr double omega4[4][4] = {
    {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};

template <class T>
Mat4<T> symplectic_residual_matrix(const Mat4<T>& j) {
    // J^T Omega J - Omega
    Mat4<T> oj{};
    for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 4; ++c) {
            T s(0.0);
            for (int k = 0; k < 4; ++k)
                if (omega4[i][k] != 0) s += omega4[i][k] * j[k][c];
            oj[i][c] = s;
        }
    Mat4<T> r{};
    for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 4; ++c) {
            T s(0.0);
            for (int k = 0; k < 4; ++k) s += j[k][i] * oj[k][c];
            r[i][c] = s - omega4[i][c];
        }
    return r;
}

struct PrimitiveMap {
    enum class Kind { LinearSymplectic, Translation, TaffyFactor, Slide1, Slide2 };

    Kind kind;
    // LinearSymplectic: y = D x with diagonal D (per-factor (a, 1/a)); Translation: y = x + t
    std::array<double, 4> diag{1, 1, 1, 1};
    std::array<double, 4> shift{0, 0, 0, 0};
    int factor = 0; // TaffyFactor: 0 acts on (x1,y1), 1 on (x2,y2)
    std::shared_ptr<const StretchProfile> stretch;
    std::shared_ptr<const SlideProfile> slide;

    static PrimitiveMap linear(std::array<double, 4> d, std::array<double, 4> t) {
        PrimitiveMap p;
        p.kind = Kind::LinearSymplectic;
        p.diag = d;
        p.shift = t;
        return p;
    }
    static PrimitiveMap translation(std::array<double, 4> t) {
        PrimitiveMap p;
        p.kind = Kind::Translation;
        p.shift = t;
        return p;
    }
    static PrimitiveMap taffy(int factor, std::shared_ptr<const StretchProfile> s) {
        PrimitiveMap p;
        p.kind = Kind::TaffyFactor;
        p.factor = factor;
        p.stretch = std::move(s);
        return p;
    }
    static PrimitiveMap slide1(std::shared_ptr<const SlideProfile> s) {
        PrimitiveMap p;
        p.kind = Kind::Slide1;
        p.slide = std::move(s);
        return p;
    }
    static PrimitiveMap slide2(std::shared_ptr<const SlideProfile> s) {
        PrimitiveMap p;
        p.kind = Kind::Slide2;
        p.slide = std::move(s);
        return p;
    }

    // taffy on one planar factor: cells translate, gaps stretch
    template <class T>
    static void taffy_eval(const StretchProfile& sp, const T& x, const T& y, T& X, T& Y,
                           T* j00, T* j10, T* j11) {
        double L = sp.L, xd = to_double(x);
        double i = std::floor(xd);
        double frac = xd - i;
        if (frac < 1.0 - 1.0 / L) {
            X = x + i;
            Y = y;
            if (j00) { *j00 = T(1.0); *j10 = T(0.0); *j11 = T(1.0); }
        } else {
            T u = x - (i + 1.0 - 1.0 / L);
            X = (2.0 * i + 1.0 - 1.0 / L) + sp.f(u);
            T fp = sp.fprime(u);
            Y = 0.5 + (y - 0.5) / fp;
            if (j00) {
                *j00 = fp;
                *j10 = -(y - 0.5) * sp.fsecond_over_fprime2(u);
                *j11 = T(1.0) / fp;
            }
        }
    }

    template <class T>
    Vec4<T> eval(const Vec4<T>& p, Mat4<T>* jac = nullptr) const {
        Vec4<T> q{};
        if (jac) *jac = mat4_identity<T>();
        switch (kind) {
        case Kind::LinearSymplectic:
            for (int k = 0; k < 4; ++k) {
                q[k] = diag[k] * p[k] + shift[k];
                if (jac) (*jac)[k][k] = T(diag[k]);
            }
            break;
        case Kind::Translation:
            for (int k = 0; k < 4; ++k) q[k] = p[k] + shift[k];
            break;
        case Kind::TaffyFactor: {
            q = p;
            int ix = factor == 0 ? 0 : 2, iy = ix + 1;
            T j00, j10, j11;
            taffy_eval(*stretch, p[ix], p[iy], q[ix], q[iy],
                       jac ? &j00 : nullptr, jac ? &j10 : nullptr, jac ? &j11 : nullptr);
            if (jac) {
                (*jac)[ix][ix] = j00;
                (*jac)[iy][ix] = j10;
                (*jac)[iy][iy] = j11;
            }
            break;
        }
        case Kind::Slide1: {
            // time-1 flow of H = -rho(x1) x2
            T r = slide->rho(p[0]), r1 = slide->rho1(p[0]);
            q[0] = p[0];
            q[1] = p[1] + r1 * p[2];
            q[2] = p[2];
            q[3] = p[3] + r;
            if (jac) {
                T r2 = slide->rho2(p[0]);
                (*jac)[1][0] = r2 * p[2];
                (*jac)[1][2] = r1;
                (*jac)[3][0] = r1;
            }
            break;
        }
        case Kind::Slide2: {
            // time-1 flow of H = -rho(y2) y1
            T r = slide->rho(p[3]), r1 = slide->rho1(p[3]);
            q[0] = p[0] - r;
            q[1] = p[1];
            q[2] = p[2] - r1 * p[1];
            q[3] = p[3];
            if (jac) {
                T r2 = slide->rho2(p[3]);
                (*jac)[0][3] = -r1;
                (*jac)[2][1] = -r1;
                (*jac)[2][3] = -r2 * p[1];
            }
            break;
        }
        }
        return q;
    }
};

struct FoldingPlan {
    double R = 0;
    double L = 0;
    int M = 0; // cells per factor
    std::shared_ptr<const StretchProfile> stretch;
    std::shared_ptr<const SlideProfile> slide;
    std::vector<PrimitiveMap> stack;

    template <class T>
    Vec4<T> eval(const Vec4<T>& p, bool check_domain = true) const {
        if (check_domain) check_in_cube(p);
        Vec4<T> q = p;
        for (const auto& m : stack) q = m.eval(q);
        return q;
    }

    template <class T>
    Vec4<T> eval_with_jacobian(const Vec4<T>& p, Mat4<T>& jac, bool check_domain = true) const {
        if (check_domain) check_in_cube(p);
        Vec4<T> q = p;
        jac = mat4_identity<T>();
        for (const auto& m : stack) {
            Mat4<T> step;
            q = m.eval(q, &step);
            jac = mat4_mul(step, jac);
        }
        return q;
    }

    template <class T>
    void check_in_cube(const Vec4<T>& p) const {
        for (int k = 0; k < 4; ++k) {
            double v = to_double(p[k]);
            if (v < -R - 1e-12 || v > R + 1e-12)
                throw domain_error("eval_plan: point outside K(R)");
        }
    }

    // prism coordinates of the two planar factors, before any folding
    std::array<double, 4> to_prism(const std::array<double, 4>& p) const {
        return {2 * R * (p[0] + R), (p[1] + R) / (2 * R),
                2 * R * (p[2] + R), (p[3] + R) / (2 * R)};
    }
    std::array<double, 4> from_prism(const std::array<double, 4>& q) const {
        return {q[0] / (2 * R) - R, 2 * R * q[1] - R, q[2] / (2 * R) - R, 2 * R * q[3] - R};
    }

    // cell index of a prism coordinate, or -1 inside a gap (cells half-open)
    int block_index(double prism_x) const {
        double i = std::floor(prism_x);
        if (prism_x - i < 1.0 - 1.0 / L && i >= 0 && i < M) return (int)i;
        return -1;
    }
};

inline PrimitiveMap cube_to_prism(double R) {
    if (!(R > 0)) throw domain_error("cube_to_prism: R must be positive");
    return PrimitiveMap::linear({2 * R, 1 / (2 * R), 2 * R, 1 / (2 * R)},
                                {2 * R * R, 0.5, 2 * R * R, 0.5});
}

inline FoldingPlan compose_plan(double R, double L) {
    if (!(R > 0)) throw domain_error("compose_plan: R must be positive");
    if (!(L >= 2)) throw domain_error("compose_plan: L must be >= 2");
    FoldingPlan plan;
    plan.R = R;
    plan.L = L;
    plan.M = (int)std::ceil(4 * R * R);
    plan.stretch = std::make_shared<StretchProfile>(build_stretch(L));
    plan.slide = std::make_shared<SlideProfile>(plan.M);
    plan.stack = {cube_to_prism(R),
                  PrimitiveMap::taffy(0, plan.stretch),
                  PrimitiveMap::taffy(1, plan.stretch),
                  PrimitiveMap::slide1(plan.slide),
                  PrimitiveMap::slide2(plan.slide),
                  PrimitiveMap::translation({-0.5, -0.5, 0, 0})};
    return plan;
}

// Exact prism-volume of the complement of the union of cell blocks in the
// M x M cell layout: M^2 (2/L - 1/L^2).  Upper bound for the defect volume.
inline double wall_volume_closed_form(double R, double L) {
    if (!(R > 0)) throw domain_error("wall_volume_closed_form: R must be positive");
    if (!(L >= 2)) throw domain_error("wall_volume_closed_form: L must be >= 2");
    double M = std::ceil(4 * R * R);
    return M * M * (2.0 / L - 1.0 / (L * L));
}

inline nlohmann::json to_json(const FoldingPlan& plan) {
    const auto& s = *plan.stretch;
    return nlohmann::json{
        {"R", plan.R},
        {"L", plan.L},
        {"M", plan.M},
        {"stretch",
         {{"h", s.h}, {"margin", s.margin}, {"ramp", s.ramp},
          {"sup_g", s.P}, {"C", s.C}, {"sup_fprime", s.sup_fprime()},
          {"quadrature_tol", s.quadrature_tol}, {"f_cache_nodes", s.nodes.size()}}},
        {"slide", {{"num_cells", plan.slide->num_cells},
                   {"rho1_bound", SlideProfile::rho1_bound},
                   {"rho2_bound", SlideProfile::rho2_bound}}},
        {"stack", {"cube_to_prism", "taffy_x1", "taffy_x2", "slide_y2", "slide_x1",
                   "translate_half"}}};
}

// CSV point batches: rows "x1,y1,x2,y2" -> "X1,Y1,X2,Y2"
inline void map_csv(const FoldingPlan& plan, std::istream& in, std::ostream& out) {
    out << "X1,Y1,X2,Y2\n";
    std::string line;
    bool first = true;
    char buf[160];
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.find_first_of("xyXY") != std::string::npos) {
            first = false;
            continue; // header row
        }
        first = false;
        std::istringstream ss(line);
        Vec4<double> p;
        char comma;
        if (!(ss >> p[0] >> comma >> p[1] >> comma >> p[2] >> comma >> p[3]))
            throw domain_error("map_csv: malformed row: " + line);
        Vec4<double> q = plan.eval(p);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", q[0], q[1], q[2], q[3]);
        out << buf;
    }
}

} // namespace sqz

#endif
