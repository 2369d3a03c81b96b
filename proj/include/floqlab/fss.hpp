#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "floqlab/rng.hpp"

// Finite-size-scaling collapse. Points (p, L, y, sigma) are mapped to
// x = (p - p_c) L^{1/nu} with the value rescaled per ansatz, and the quality
// of a parameter choice is the reduced chi-square of local quadratic fits in
// equal x-windows spanning the region where the sizes overlap. Windows mixing
// at least two sizes are the only ones that constrain the collapse, so
// non-overlapping transformed ranges surface as an undefined quality.

namespace floqlab::fss {

enum class Ansatz { Plain, Power, OnePlusPower };

struct ScalingPoint {
    double p = 0.0;
    int L = 0;
    double y = 0.0;
    double sigma = 0.0;
};

struct ScalingDataset {
    std::vector<ScalingPoint> points;
    Ansatz ansatz = Ansatz::Plain;
};

struct CollapseResult {
    double p_c = 0.0, nu = 0.0, eps = 0.0;
    double p_c_err = 0.0, nu_err = 0.0, eps_err = 0.0;
    double quality = 0.0;
};

namespace detail {

inline void validate(const ScalingDataset& ds) {
    if (ds.points.empty()) throw std::invalid_argument("empty scaling dataset");
    std::set<int> sizes;
    for (const auto& pt : ds.points) {
        if (pt.L < 2) throw std::invalid_argument("scaling point with invalid size");
        if (!(pt.sigma > 0.0)) throw std::invalid_argument("scaling point needs positive stderr");
        sizes.insert(pt.L);
    }
    if (sizes.size() < 2) throw std::invalid_argument("collapse needs at least two distinct sizes");
}

struct Mapped {
    double x, y, w;
    int L;
};

inline constexpr int kWindows = 8;

inline double quality_impl(const ScalingDataset& ds, double p_c, double nu, double eps) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!(nu > 0.05) || nu > 20.0) return inf;

    static thread_local std::vector<Mapped> pts;
    pts.clear();
    double lo = inf, hi = -inf;
    {
        // Overlap of per-size transformed ranges.
        std::vector<std::array<double, 3>> range;  // L, min, max
        for (const auto& pt : ds.points) {
            const double scale = std::pow(static_cast<double>(pt.L), 1.0 / nu);
            const double x = (pt.p - p_c) * scale;
            double ry = pt.y, rs = pt.sigma;
            if (ds.ansatz != Ansatz::Plain) {
                const double amp = std::pow(static_cast<double>(pt.L), eps);
                ry = (ds.ansatz == Ansatz::Power ? pt.y : pt.y - 1.0) / amp;
                rs = pt.sigma / amp;
            }
            pts.push_back({x, ry, 1.0 / (rs * rs), pt.L});
            auto it = std::find_if(range.begin(), range.end(),
                                   [&](const auto& r) { return static_cast<int>(r[0]) == pt.L; });
            if (it == range.end()) range.push_back({static_cast<double>(pt.L), x, x});
            else {
                (*it)[1] = std::min((*it)[1], x);
                (*it)[2] = std::max((*it)[2], x);
            }
        }
        lo = -inf;
        hi = inf;
        for (const auto& r : range) {
            lo = std::max(lo, r[1]);
            hi = std::min(hi, r[2]);
        }
        if (!(hi > lo)) return inf;
    }

    const double dw = (hi - lo) / kWindows;
    double chi2 = 0.0;
    int dof = 0;
    for (int w = 0; w < kWindows; ++w) {
        const double wl = lo + w * dw, wr = wl + dw;
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, sxxx = 0, sxxy = 0, sxxxx = 0;
        int n = 0;
        int first_size = 0;
        bool mixed = false;
        double x0 = 0.5 * (wl + wr);
        for (const auto& pt : pts) {
            if (pt.x < wl || pt.x >= wr) continue;
            const double u = pt.x - x0;
            sw += pt.w;
            sx += pt.w * u;
            sy += pt.w * pt.y;
            sxx += pt.w * u * u;
            sxy += pt.w * u * pt.y;
            sxxx += pt.w * u * u * u;
            sxxy += pt.w * u * u * pt.y;
            sxxxx += pt.w * u * u * u * u;
            if (n == 0) first_size = pt.L;
            else if (pt.L != first_size) mixed = true;
            ++n;
        }
        if (n < 4 || !mixed) continue;
        // Weighted quadratic through the window via its normal equations.
        double m[3][4] = {{sw, sx, sxx, sy},
                          {sx, sxx, sxxx, sxy},
                          {sxx, sxxx, sxxxx, sxxy}};
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            if (std::abs(m[piv][col]) < 1e-300) return inf;
            std::swap(m[col], m[piv]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double f = m[r][col] / m[col][col];
                for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
            }
        }
        const double a = m[0][3] / m[0][0], b = m[1][3] / m[1][1], c = m[2][3] / m[2][2];
        for (const auto& pt : pts) {
            if (pt.x < wl || pt.x >= wr) continue;
            const double u = pt.x - x0;
            const double r = pt.y - (a + b * u + c * u * u);
            chi2 += pt.w * r * r;
        }
        dof += n - 3;
    }
    if (dof < 1) return inf;
    return chi2 / dof;
}

// Nelder-Mead over d parameters; f returns +inf outside the domain.
template <typename F>
inline std::vector<double> nelder_mead(F&& f, std::vector<double> start,
                                       const std::vector<double>& step, int iters) {
    const std::size_t d = start.size();
    std::vector<std::vector<double>> v(d + 1, start);
    std::vector<double> fv(d + 1);
    for (std::size_t k = 0; k < d; ++k) v[k + 1][k] += step[k];
    for (std::size_t k = 0; k <= d; ++k) fv[k] = f(v[k]);

    auto order = [&]() {
        for (std::size_t a = 0; a <= d; ++a)
            for (std::size_t b = a + 1; b <= d; ++b)
                if (fv[b] < fv[a]) {
                    std::swap(fv[a], fv[b]);
                    std::swap(v[a], v[b]);
                }
    };
    std::vector<double> cen(d), xr(d), xe(d), xc(d);
    for (int it = 0; it < iters; ++it) {
        order();
        for (std::size_t k = 0; k < d; ++k) {
            cen[k] = 0.0;
            for (std::size_t a = 0; a < d; ++a) cen[k] += v[a][k];
            cen[k] /= static_cast<double>(d);
        }
        for (std::size_t k = 0; k < d; ++k) xr[k] = cen[k] + (cen[k] - v[d][k]);
        const double fr = f(xr);
        if (fr < fv[0]) {
            for (std::size_t k = 0; k < d; ++k) xe[k] = cen[k] + 2.0 * (cen[k] - v[d][k]);
            const double fe = f(xe);
            if (fe < fr) { v[d] = xe; fv[d] = fe; }
            else { v[d] = xr; fv[d] = fr; }
        } else if (fr < fv[d - 1]) {
            v[d] = xr;
            fv[d] = fr;
        } else {
            for (std::size_t k = 0; k < d; ++k) xc[k] = cen[k] + 0.5 * (v[d][k] - cen[k]);
            const double fc = f(xc);
            if (fc < fv[d]) { v[d] = xc; fv[d] = fc; }
            else {
                for (std::size_t a = 1; a <= d; ++a) {
                    for (std::size_t k = 0; k < d; ++k)
                        v[a][k] = v[0][k] + 0.5 * (v[a][k] - v[0][k]);
                    fv[a] = f(v[a]);
                }
            }
        }
    }
    order();
    return v[0];
}

inline std::optional<std::array<double, 4>> fit_once(const ScalingDataset& ds,
                                                     const double* warm) {
    const bool with_eps = ds.ansatz != Ansatz::Plain;
    auto q = [&](const std::vector<double>& t) {
        return quality_impl(ds, t[0], t[1], with_eps ? t[2] : 0.0);
    };

    std::vector<double> start;
    if (warm) {
        start.assign(warm, warm + (with_eps ? 3 : 2));
    } else {
        double p_lo = ds.points.front().p, p_hi = p_lo;
        for (const auto& pt : ds.points) {
            p_lo = std::min(p_lo, pt.p);
            p_hi = std::max(p_hi, pt.p);
        }
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a <= 20; ++a)
            for (int b = 0; b <= 25; ++b) {
                const double pc = p_lo + (p_hi - p_lo) * a / 20.0;
                const double nu = 0.5 + 2.5 * b / 25.0;
                if (!with_eps) {
                    const double val = quality_impl(ds, pc, nu, 0.0);
                    if (val < best) { best = val; start = {pc, nu}; }
                    continue;
                }
                for (int c = 0; c <= 16; ++c) {
                    const double eps = -2.0 + 4.0 * c / 16.0;
                    const double val = quality_impl(ds, pc, nu, eps);
                    if (val < best) { best = val; start = {pc, nu, eps}; }
                }
            }
        if (start.empty()) return std::nullopt;
    }

    std::vector<double> step = {0.02, 0.1};
    if (with_eps) step.push_back(0.1);
    auto t = detail::nelder_mead(q, start, step, 250);
    const double qv = q(t);
    if (!std::isfinite(qv)) return std::nullopt;
    return std::array<double, 4>{t[0], t[1], with_eps ? t[2] : 0.0, qv};
}

}  // namespace detail

inline double quality(const ScalingDataset& ds, double p_c, double nu, double eps = 0.0) {
    detail::validate(ds);
    return detail::quality_impl(ds, p_c, nu, eps);
}

inline std::optional<CollapseResult> collapse(const ScalingDataset& ds, Rng& rng,
                                              int bootstrap = 200) {
    detail::validate(ds);
    auto point = detail::fit_once(ds, nullptr);
    if (!point) return std::nullopt;

    CollapseResult res;
    res.p_c = (*point)[0];
    res.nu = (*point)[1];
    res.eps = (*point)[2];
    res.quality = (*point)[3];

    // Bootstrap resamples within each size so every draw keeps the size mix.
    std::vector<std::vector<std::size_t>> by_size;
    for (std::size_t k = 0; k < ds.points.size(); ++k) {
        auto it = std::find_if(by_size.begin(), by_size.end(), [&](const auto& g) {
            return ds.points[g.front()].L == ds.points[k].L;
        });
        if (it == by_size.end()) by_size.push_back({k});
        else it->push_back(k);
    }
    const double warm[3] = {res.p_c, res.nu, res.eps};
    ScalingDataset draw;
    draw.ansatz = ds.ansatz;
    double s1[3] = {0, 0, 0}, s2[3] = {0, 0, 0};
    int good = 0;
    for (int b = 0; b < bootstrap; ++b) {
        draw.points.clear();
        for (const auto& g : by_size)
            for (std::size_t k = 0; k < g.size(); ++k)
                draw.points.push_back(ds.points[g[rng.below(g.size())]]);
        auto fit = detail::fit_once(draw, warm);
        if (!fit) continue;
        for (int k = 0; k < 3; ++k) {
            s1[k] += (*fit)[static_cast<std::size_t>(k)];
            s2[k] += (*fit)[static_cast<std::size_t>(k)] * (*fit)[static_cast<std::size_t>(k)];
        }
        ++good;
    }
    if (good >= 2) {
        double* err[3] = {&res.p_c_err, &res.nu_err, &res.eps_err};
        for (int k = 0; k < 3; ++k) {
            const double mean = s1[k] / good;
            const double var = std::max(0.0, s2[k] / good - mean * mean);
            *err[k] = std::sqrt(var * good / (good - 1.0));
        }
    }
    return res;
}

}  // namespace floqlab::fss
