#ifndef BELL3_BOUNDS_HPP
#define BELL3_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bell3/correlation_tensor.hpp"

namespace bell3 {

constexpr std::uint64_t kDefaultSeed = 0x5eedULL;

/// Per-observer measurement grid a^l = (l-1) pi / n_settings. Every observer
/// uses the same angles; the default three-setting grid is (0, pi/3, 2pi/3).
struct SettingGrid {
    int n_parties = 0;
    std::vector<double> angles;

    int n_settings() const { return int(angles.size()); }

    static SettingGrid uniform(int n_parties, int n_settings = 3) {
        if (n_parties < 2)
            throw std::invalid_argument("n_parties must be >= 2");
        if (n_settings < 2)
            throw std::invalid_argument("n_settings must be >= 2");
        SettingGrid g;
        g.n_parties = n_parties;
        g.angles.resize(n_settings);
        for (int l = 0; l < n_settings; ++l)
            g.angles[l] = double(l) * std::numbers::pi / double(n_settings);
        return g;
    }
};

/// Visibility range where a two-setting local realistic model exists but no
/// three-setting one does: 2(2/3)^N < V <= 1/sqrt(2^{N-1}).
struct ViolationWindow {
    int n_parties = 0;
    double lower = 0.0;   // exclusive
    double upper = 0.0;   // inclusive
    bool nonempty = false;
};

inline ViolationWindow violation_window(int n_parties) {
    if (n_parties < 2)
        throw std::invalid_argument("n_parties must be >= 2");
    ViolationWindow w;
    w.n_parties = n_parties;
    w.lower = 2.0 * std::pow(2.0 / 3.0, n_parties);
    w.upper = std::pow(2.0, -0.5 * (n_parties - 1));
    w.nonempty = w.lower < w.upper;
    return w;
}

struct EEResult {
    double value = 0.0;
    bool direct = false;  // false: closed form only (grid too large)
};

/// Largest grid size we still sum term by term (3^16 ~ 4.3e7).
constexpr double kMaxDirectGridTerms = 1e8;

namespace detail {

inline void ee_direct_rec(const std::vector<double>& cur, int depth,
                          const std::vector<double>& cs,
                          const std::vector<double>& sn, double& acc) {
    if (cur.size() == 1) {
        acc += cur[0] * cur[0];
        return;
    }
    for (std::size_t l = 0; l < cs.size(); ++l)
        ee_direct_rec(contract_bit(cur, 0, cs[l], sn[l]), depth + 1, cs, sn, acc);
}

}  // namespace detail

/// Direct n_settings^N-term sum of E^2 over the grid.
inline double ee_direct_sum(const CorrelationTensor& t, const SettingGrid& grid) {
    if (grid.n_parties != t.n_parties)
        throw std::invalid_argument("grid/tensor size mismatch");
    if (std::pow(double(grid.n_settings()), t.n_parties) > kMaxDirectGridTerms)
        throw std::invalid_argument("grid too large for direct summation");
    std::vector<double> cs(grid.angles.size()), sn(grid.angles.size());
    for (std::size_t l = 0; l < grid.angles.size(); ++l) {
        cs[l] = std::cos(grid.angles[l]);
        sn[l] = std::sin(grid.angles[l]);
    }
    double acc = 0.0;
    detail::ee_direct_rec(t.components, 0, cs, sn, acc);
    return acc;
}

/// (n/2)^N * sum of squared components; equals the direct sum for uniform
/// grids by the orthogonality of (cos, sin) over the settings.
inline double ee_closed_form(const CorrelationTensor& t, int n_settings = 3) {
    return std::pow(double(n_settings) / 2.0, t.n_parties) *
           sum_squared_components(t);
}

/// (E, E): the grid self-inner-product. Uses the direct sum when the grid is
/// small enough, otherwise falls back to the closed form and flags the mode.
inline EEResult ee_inner_product(const CorrelationTensor& t, const SettingGrid& grid) {
    if (grid.n_parties != t.n_parties)
        throw std::invalid_argument("grid/tensor size mismatch");
    EEResult r;
    if (std::pow(double(grid.n_settings()), t.n_parties) <= kMaxDirectGridTerms) {
        r.value = ee_direct_sum(t, grid);
        r.direct = true;
    } else {
        r.value = ee_closed_form(t, grid.n_settings());
        r.direct = false;
    }
    return r;
}

enum class TMaxMethod { GridRefine, Alternating, ClosedFormGhz };

namespace detail {

/// Coordinate-wise ascent on the angles: each party's optimum against fixed
/// partners is analytic, value sqrt(a^2 + b^2) at atan2(b, a).
inline double refine_angles(const CorrelationTensor& t, std::vector<double>& angles,
                            double tol, int max_sweeps) {
    double best = evaluate(t, DirectionSet{angles});
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double prev = best;
        for (int j = 0; j < t.n_parties; ++j) {
            auto [a, b] = partial_pair(t, angles, j);
            angles[j] = std::atan2(b, a);
            best = std::hypot(a, b);
        }
        if (best - prev <= tol)
            break;
    }
    return best;
}

inline void grid_scan_rec(const CorrelationTensor& t, const std::vector<double>& cur,
                          int depth, std::vector<double>& angles,
                          const std::vector<double>& grid_angles,
                          const std::vector<double>& cs, const std::vector<double>& sn,
                          double& best, std::vector<double>& best_angles) {
    const int n = t.n_parties;
    if (depth == n - 1) {
        // last party maximized exactly over the continuous angle
        double v = std::hypot(cur[0], cur[1]);
        if (v > best) {
            best = v;
            angles[depth] = std::atan2(cur[1], cur[0]);
            best_angles = angles;
        }
        return;
    }
    for (std::size_t g = 0; g < cs.size(); ++g) {
        angles[depth] = grid_angles[g];
        grid_scan_rec(t, contract_bit(cur, 0, cs[g], sn[g]), depth + 1, angles,
                      grid_angles, cs, sn, best, best_angles);
    }
}

}  // namespace detail

/// T_max: max over in-plane product directions of evaluate(t, .).
///
/// GridRefine scans a 64-point-per-party coarse grid (last party solved
/// analytically) then polishes by coordinate ascent; refused for N > 6.
/// Alternating runs multistart coordinate ascent from random angles.
/// ClosedFormGhz reads V off a ghz-werner label.
inline double t_max(const CorrelationTensor& t, TMaxMethod method,
                    std::uint64_t seed = kDefaultSeed) {
    const double two_pi = 2.0 * std::numbers::pi;
    switch (method) {
    case TMaxMethod::GridRefine: {
        if (t.n_parties > 6)
            throw std::invalid_argument("grid_refine limited to N <= 6");
        const int points = 64;
        std::vector<double> ga(points), cs(points), sn(points);
        for (int g = 0; g < points; ++g) {
            ga[g] = two_pi * double(g) / points;
            cs[g] = std::cos(ga[g]);
            sn[g] = std::sin(ga[g]);
        }
        std::vector<double> angles(t.n_parties, 0.0), best_angles(t.n_parties, 0.0);
        double best = 0.0;
        detail::grid_scan_rec(t, t.components, 0, angles, ga, cs, sn, best, best_angles);
        return detail::refine_angles(t, best_angles, 1e-10, 500);
    }
    case TMaxMethod::Alternating: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(0.0, two_pi);
        double best = 0.0;
        for (int restart = 0; restart < 32; ++restart) {
            std::vector<double> angles(t.n_parties);
            for (double& a : angles)
                a = dist(rng);
            best = std::max(best, detail::refine_angles(t, angles, 1e-12, 500));
        }
        return best;
    }
    case TMaxMethod::ClosedFormGhz: {
        const std::string key = "ghz-werner V=";
        auto pos = t.label.find(key);
        if (pos == std::string::npos)
            throw std::invalid_argument("tensor is not labeled ghz-werner");
        return std::stod(t.label.substr(pos + key.size()));
    }
    }
    throw std::invalid_argument("unknown t_max method");
}

inline double three_setting_bound(const CorrelationTensor& t,
                                  TMaxMethod method = TMaxMethod::Alternating,
                                  std::uint64_t seed = kDefaultSeed) {
    return std::pow(2.0, t.n_parties) * t_max(t, method, seed);
}

/// Everything the classifier derives from one tensor. Verdict booleans are
/// pure functions of the numeric fields.
struct BoundsReport {
    int n_parties = 0;
    std::optional<double> visibility;   // parsed from ghz-werner labels
    double ee_value = 0.0;
    bool ee_direct = false;
    double t_max = 0.0;
    double three_setting_bound = 0.0;
    double sum_sq = 0.0;
    bool zb_two_setting_exists = false;
    bool three_setting_violated = false;
    double plane_infinite_threshold = 0.0;
    std::optional<double> lhv_oracle_max;
    std::string verdict;
};

constexpr double kViolationTol = 1e-9;
constexpr double kZbTol = 1e-12;

inline BoundsReport classify(const CorrelationTensor& t,
                             std::optional<double> lhv_max = std::nullopt,
                             TMaxMethod method = TMaxMethod::Alternating,
                             std::uint64_t seed = kDefaultSeed) {
    BoundsReport r;
    r.n_parties = t.n_parties;
    const std::string key = "ghz-werner V=";
    if (auto pos = t.label.find(key); pos != std::string::npos)
        r.visibility = std::stod(t.label.substr(pos + key.size()));
    SettingGrid grid = SettingGrid::uniform(t.n_parties);
    EEResult ee = ee_inner_product(t, grid);
    r.ee_value = ee.value;
    r.ee_direct = ee.direct;
    r.t_max = t_max(t, method, seed);
    r.three_setting_bound = std::pow(2.0, t.n_parties) * r.t_max;
    r.sum_sq = sum_squared_components(t);
    r.zb_two_setting_exists = r.sum_sq <= 1.0 + kZbTol;
    r.three_setting_violated = r.ee_value > r.three_setting_bound + kViolationTol;
    r.plane_infinite_threshold = 2.0 * std::pow(2.0 / std::numbers::pi, t.n_parties);
    r.lhv_oracle_max = lhv_max;
    if (r.three_setting_violated && r.zb_two_setting_exists)
        r.verdict = "two-setting model exists but cannot extend to a three-setting model";
    else if (r.three_setting_violated)
        r.verdict = "no three-setting model";
    else
        r.verdict = "no three-setting violation detected";
    return r;
}

}  // namespace bell3

#endif
