#include "enrlat/model.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace enrlat {

ModelReport validate_model(const SurfaceModel& m) {
    ModelReport r;
    const Mat64& g = m.lattice->gram();
    r.curve_count = m.curves.size();
    r.halffiber_count = m.halffibers.size();
    r.isometry_count = m.isometries.size();

    r.lattice_is_marked_l10 = m.lattice->rank() == 10 && !m.lattice->degenerate() &&
                              abs(m.lattice->det()) == 1 &&
                              m.lattice->signature() == std::pair<int, int>(1, 9);

    for (std::size_t i = 0; i < m.curves.size(); ++i)
        if (norm_of(g, m.curves[i]) != -2) r.curves_bad_norm.push_back(static_cast<int>(i));

    for (std::size_t i = 0; i < m.halffibers.size(); ++i) {
        const Vec& f = m.halffibers[i];
        if (norm_of(g, f) != 0) r.halffibers_bad_norm.push_back(static_cast<int>(i));
        if (gcd_of(f) != 1) r.halffibers_imprimitive.push_back(static_cast<int>(i));
        for (std::size_t j = 0; j < m.curves.size(); ++j)
            if (dot(g, f, m.curves[j]) < 0)
                r.nefness_failures.push_back({static_cast<int>(i), static_cast<int>(j)});
    }

    std::set<Vec> curve_set(m.curves.begin(), m.curves.end());
    for (std::size_t k = 0; k < m.isometries.size(); ++k) {
        const Mat64& h = m.isometries[k];
        if (h.rows() != g.rows() || h.cols() != g.rows()) {
            r.isometries_bad_gram.push_back(static_cast<int>(k));
            continue;
        }
        IMat hh = widen(h);
        if (!(mat_mul(mat_mul(hh.transposed(), widen(g)), hh) == widen(g))) {
            r.isometries_bad_gram.push_back(static_cast<int>(k));
            continue;
        }
        bool closed = true;
        for (const auto& c : m.curves) {
            Vec img(c.size(), 0);
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = 0; j < c.size(); ++j) img[i] += h(i, j) * c[j];
            if (!curve_set.count(img)) {
                closed = false;
                break;
            }
        }
        if (!closed) r.isometries_curveset_open.push_back(static_cast<int>(k));
    }
    return r;
}

OrbitResult isometry_orbit(const SurfaceModel& m, const std::vector<Vec>& seed, std::size_t cap) {
    if (cap < seed.size()) fail(ErrorCode::BadArgument, "orbit cap smaller than the seed");
    const int n = m.lattice->rank();

    std::vector<Mat64> action;
    for (const auto& h : m.isometries) {
        action.push_back(h);
        IMat inv_big = [&] {
            auto inv = unimodular_inverse(widen(h));
            if (!inv) fail(ErrorCode::BadArgument, "isometry generator is not invertible over Z");
            return *inv;
        }();
        action.push_back(narrow(inv_big));
    }

    std::set<Vec> visited;
    std::deque<Vec> frontier;
    for (const auto& s : seed) {
        if (static_cast<int>(s.size()) != n) fail(ErrorCode::LatticeMismatch, "seed length mismatch");
        if (visited.insert(s).second) frontier.push_back(s);
    }
    OrbitResult out;
    while (!frontier.empty()) {
        Vec v = frontier.front();
        frontier.pop_front();
        for (const auto& a : action) {
            Vec img(n, 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) img[i] += a(i, j) * v[j];
            if (visited.count(img)) continue;
            if (visited.size() >= cap) {
                out.truncated = true;
                continue;
            }
            visited.insert(img);
            frontier.push_back(img);
        }
    }
    out.vectors.assign(visited.begin(), visited.end());
    std::sort(out.vectors.begin(), out.vectors.end(),
              [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
    return out;
}

} // namespace enrlat
