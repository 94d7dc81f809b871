#ifndef SQZ_MARKOV_IO_HPP
#define SQZ_MARKOV_IO_HPP

// JSON serialization (schema v1) for the exact engine.  All integers and
// rationals cross the boundary as decimal strings, rationals as "p/q".

#include "sqz/triangle.hpp"

#include <json.hpp>

namespace sqz {

using json = nlohmann::json;

inline json to_json(const Vec2q& v) { return json::array({to_string(v.x), to_string(v.y)}); }

inline json to_json(const MarkovTriple& t) {
    return json::array({to_string(t.a()), to_string(t.b()), to_string(t.c())});
}

inline json to_json(const RationalTriangle& t) {
    return json::array({to_json(t.v[0]), to_json(t.v[1]), to_json(t.v[2])});
}

inline json to_json(const IntAffineMap2& m) {
    return json{{"matrix", json::array({json::array({to_string(m.A.a), to_string(m.A.b)}),
                                        json::array({to_string(m.A.c), to_string(m.A.d)})})},
                {"translation", to_json(m.t)}};
}

inline json to_json(const ChartEmbedding3& c) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r)
        rows.push_back(json::array({to_string(c.A[r][0]), to_string(c.A[r][1])}));
    return json{{"matrix", rows},
                {"translation", json::array({to_string(c.t[0]), to_string(c.t[1]), to_string(c.t[2])})}};
}

inline json to_json(const MarkovTriangle& t) {
    return json{{"triple", to_json(t.triple)},
                {"alpha", to_string(t.alpha)},
                {"vertices", to_json(t.realization)},
                {"q", to_string(t.q_chart)},
                {"chart_vertex", t.chart_vertex},
                {"edge_affine_lengths",
                 json::array({to_string(t.realization.edge_affine_length(0)),
                              to_string(t.realization.edge_affine_length(1)),
                              to_string(t.realization.edge_affine_length(2))})}};
}

inline json to_json(const HalfStripFit& f) {
    return json{{"map", to_json(f.map)},
                {"image", to_json(f.image)},
                {"height", to_string(f.height)},
                {"base_edge_index", f.base_edge_index}};
}

inline json to_json(const FitResult& r) {
    json j;
    j["found"] = r.found();
    if (r.triple) j["triple"] = to_json(*r.triple);
    if (r.fit) {
        j["fit"] = to_json(*r.fit);
        j["height"] = to_string(r.fit->height);
    }
    if (r.certificate) {
        j["certificate"] = json{
            {"alpha", to_string(r.certificate->alpha)},
            {"height_lower_bound", to_string(r.certificate->height_lower_bound)},
            {"statement",
             "every Markov triangle of affine perimeter 3*alpha has edge lengths < 3*alpha, "
             "so its height alpha^2/l_aff exceeds alpha/3 >= 1"}};
    }
    json trail = json::array();
    for (const auto& [tr, h] : r.trail)
        trail.push_back(json{{"triple", to_json(tr)}, {"height", to_string(h)}});
    j["trail"] = trail;
    return j;
}

} // namespace sqz

#endif
