#ifndef BELL3_LHV_HPP
#define BELL3_LHV_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bell3/bounds.hpp"
#include "bell3/correlation_tensor.hpp"

namespace bell3 {

/// One hidden-variable value: a predetermined +-1 outcome for every
/// (observer, setting) pair. signs[j][l] is observer j's answer at setting l.
struct DeterministicStrategy {
    std::vector<std::vector<int>> signs;

    int n_parties() const { return int(signs.size()); }

    void validate(int n_settings) const {
        for (const auto& row : signs) {
            if (int(row.size()) != n_settings)
                throw std::invalid_argument("strategy row length mismatch");
            for (int s : row)
                if (s != 1 && s != -1)
                    throw std::invalid_argument("strategy entries must be +-1");
        }
    }

    /// Little-endian packing: observer j contributes pattern * 8^j, where
    /// bit l of the pattern marks a -1 at setting l.
    std::uint64_t packed() const {
        std::uint64_t idx = 0;
        for (int j = n_parties() - 1; j >= 0; --j) {
            std::uint64_t p = 0;
            for (std::size_t l = 0; l < signs[j].size(); ++l)
                if (signs[j][l] < 0)
                    p |= std::uint64_t(1) << l;
            idx = idx * (std::uint64_t(1) << signs[j].size()) + p;
        }
        return idx;
    }

    static DeterministicStrategy from_patterns(const std::vector<std::uint64_t>& patterns,
                                               int n_settings) {
        DeterministicStrategy s;
        s.signs.resize(patterns.size());
        for (std::size_t j = 0; j < patterns.size(); ++j) {
            s.signs[j].resize(n_settings);
            for (int l = 0; l < n_settings; ++l)
                s.signs[j][l] = (patterns[j] >> l) & 1u ? -1 : 1;
        }
        return s;
    }
};

/// Finite convex mixture of deterministic strategies standing in for the
/// hidden-variable distribution rho(lambda).
struct ConvexLHVModel {
    std::vector<DeterministicStrategy> strategies;
    std::vector<double> weights;

    void validate(int n_settings) const {
        if (strategies.size() != weights.size())
            throw std::invalid_argument("strategy/weight count mismatch");
        double sum = 0.0;
        for (double w : weights) {
            if (w < 0.0)
                throw std::invalid_argument("weights must be non-negative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("weights must sum to 1");
        for (const auto& s : strategies)
            s.validate(n_settings);
    }
};

/// Projection of one observer's sign triple onto the plane spanned by the
/// M1/M2 basis, in polar form.
struct ProjectionDecomposition {
    double norm = 0.0;
    double beta = 0.0;  // in [0, 2pi); 0 when the projection vanishes
};

namespace detail {

inline void grid_correlations_rec(const std::vector<double>& cur, int depth,
                                  const std::vector<double>& cs,
                                  const std::vector<double>& sn,
                                  std::vector<double>& out, std::size_t& w) {
    if (cur.size() == 1) {
        out[w++] = cur[0];
        return;
    }
    for (std::size_t l = 0; l < cs.size(); ++l)
        grid_correlations_rec(contract_bit(cur, 0, cs[l], sn[l]), depth + 1, cs, sn,
                              out, w);
}

}  // namespace detail

/// E at every grid point, as a flat array of n_settings^N values in
/// row-major order with party 0 as the outermost (slowest) digit.
inline std::vector<double> grid_correlations(const CorrelationTensor& t,
                                             const SettingGrid& grid) {
    if (grid.n_parties != t.n_parties)
        throw std::invalid_argument("grid/tensor size mismatch");
    const int S = grid.n_settings();
    std::vector<double> cs(S), sn(S);
    for (int l = 0; l < S; ++l) {
        cs[l] = std::cos(grid.angles[l]);
        sn[l] = std::sin(grid.angles[l]);
    }
    std::size_t total = 1;
    for (int j = 0; j < t.n_parties; ++j)
        total *= std::size_t(S);
    std::vector<double> out(total);
    std::size_t w = 0;
    detail::grid_correlations_rec(t.components, 0, cs, sn, out, w);
    return out;
}

/// (E_LR, E) contribution of a single lambda: the n_settings^N-term sum of
/// the strategy's sign products times E at each grid point.
inline double lhv_inner_product(const DeterministicStrategy& strategy,
                                const CorrelationTensor& t, const SettingGrid& grid) {
    if (strategy.n_parties() != t.n_parties)
        throw std::invalid_argument("strategy/tensor size mismatch");
    strategy.validate(grid.n_settings());
    const int S = grid.n_settings();
    std::vector<double> egrid = grid_correlations(t, grid);
    double acc = 0.0;
    for (std::size_t idx = 0; idx < egrid.size(); ++idx) {
        // party 0 is the outermost (slowest) digit of idx
        std::size_t rest = idx;
        double sign = 1.0;
        for (int j = t.n_parties - 1; j >= 0; --j) {
            sign *= strategy.signs[j][rest % S];
            rest /= S;
        }
        acc += sign * egrid[idx];
    }
    return acc;
}

inline double mixture_inner_product(const ConvexLHVModel& model,
                                    const CorrelationTensor& t,
                                    const SettingGrid& grid) {
    model.validate(grid.n_settings());
    double acc = 0.0;
    for (std::size_t k = 0; k < model.strategies.size(); ++k)
        acc += model.weights[k] * lhv_inner_product(model.strategies[k], t, grid);
    return acc;
}

/// Polar decomposition of z = sum_l s_l e^{i a_l}: norm = sqrt(2/3) |z|,
/// beta = arg(z) mapped to [0, 2pi). For the three-setting grid the norm is
/// either 0 or 2 sqrt(2/3).
inline ProjectionDecomposition projection_decomposition(const std::vector<int>& observer_signs,
                                                        const SettingGrid& grid) {
    if (int(observer_signs.size()) != grid.n_settings())
        throw std::invalid_argument("sign count must match settings");
    std::complex<double> z = 0.0;
    for (int l = 0; l < grid.n_settings(); ++l) {
        if (observer_signs[l] != 1 && observer_signs[l] != -1)
            throw std::invalid_argument("signs must be +-1");
        z += double(observer_signs[l]) *
             std::exp(std::complex<double>(0.0, grid.angles[l]));
    }
    ProjectionDecomposition d;
    d.norm = std::sqrt(2.0 / 3.0) * std::abs(z);
    // |z| is 0 or 2 exactly for +-1 signs on the default grid; snap roundoff
    if (d.norm < 1e-9)
        d.norm = 0.0;
    if (d.norm > 0.0) {
        d.beta = std::arg(z);
        if (d.beta < 0.0)
            d.beta += 2.0 * std::numbers::pi;
    }
    return d;
}

inline ProjectionDecomposition projection_decomposition(const std::vector<int>& observer_signs) {
    SettingGrid g = SettingGrid::uniform(2, 3);
    return projection_decomposition(observer_signs, g);
}

/// Same inner product through the factored route: per-observer projection
/// norms and angles, then (3/2)^{N/2} prod_j norm_j * E(beta_1..beta_N).
/// Must agree with lhv_inner_product; the direct sum is authoritative.
inline double factored_inner_product(const DeterministicStrategy& strategy,
                                     const CorrelationTensor& t,
                                     const SettingGrid& grid) {
    if (strategy.n_parties() != t.n_parties)
        throw std::invalid_argument("strategy/tensor size mismatch");
    strategy.validate(grid.n_settings());
    double prefactor = std::pow(3.0 / 2.0, 0.5 * t.n_parties);
    DirectionSet dirs;
    dirs.angles.resize(t.n_parties);
    double norm_product = 1.0;
    for (int j = 0; j < t.n_parties; ++j) {
        ProjectionDecomposition d = projection_decomposition(strategy.signs[j], grid);
        norm_product *= d.norm;
        dirs.angles[j] = d.beta;
    }
    if (norm_product == 0.0)
        return 0.0;
    return prefactor * norm_product * evaluate(t, dirs);
}

enum class LhvMode { Exhaustive, Alternating };

struct LhvResult {
    double max_value = 0.0;
    DeterministicStrategy argmax;
    LhvMode mode = LhvMode::Exhaustive;
};

namespace detail {

/// Sums out the outermost-party digit of a grid-E array against signs.
inline std::vector<double> contract_observer(const std::vector<double>& egrid,
                                             const std::vector<int>& signs) {
    const std::size_t S = signs.size();
    const std::size_t block = egrid.size() / S;
    std::vector<double> out(block, 0.0);
    for (std::size_t l = 0; l < S; ++l) {
        const double s = double(signs[l]);
        for (std::size_t k = 0; k < block; ++k)
            out[k] += s * egrid[l * block + k];
    }
    return out;
}

struct ExhaustiveBest {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t packed = 0;
};

inline void exhaustive_rec(const std::vector<double>& cur, int depth, int n_parties,
                           int S, std::uint64_t packed_prefix, ExhaustiveBest& best) {
    const std::uint64_t patterns = std::uint64_t(1) << S;
    if (depth == n_parties) {
        double v = cur[0];
        if (v > best.value || (v == best.value && packed_prefix < best.packed)) {
            best.value = v;
            best.packed = packed_prefix;
        }
        return;
    }
    std::vector<int> signs(S);
    for (std::uint64_t p = 0; p < patterns; ++p) {
        for (int l = 0; l < S; ++l)
            signs[l] = (p >> l) & 1u ? -1 : 1;
        // party `depth` is the outermost digit, weight 8^depth in the packing
        std::uint64_t weight = 1;
        for (int k = 0; k < depth; ++k)
            weight *= patterns;
        exhaustive_rec(contract_observer(cur, signs), depth + 1, n_parties, S,
                       packed_prefix + p * weight, best);
    }
}

/// Factored objective: exact by distributivity of the grid sum, cheap for
/// any N. S_j = (sum_l s_l cos a_l, sum_l s_l sin a_l).
inline double factored_objective(const CorrelationTensor& t,
                                 const std::vector<std::array<double, 2>>& svecs) {
    std::vector<double> cur = t.components;
    for (int j = 0; j < t.n_parties; ++j)
        cur = contract_bit(cur, 0, svecs[j][0], svecs[j][1]);
    return cur[0];
}

}  // namespace detail

/// Maximum of (E_LR, E) over deterministic strategies.
///
/// Exhaustive mode enumerates all 8^N strategies against a precomputed
/// E-grid, contracting observer by observer (ties broken toward the smallest
/// packed strategy index); refused above N = 9. Alternating mode runs
/// best-response coordinate ascent with 64 random restarts and works for any
/// N, never exceeding the exhaustive value.
inline LhvResult max_lhv_inner_product(const CorrelationTensor& t, const SettingGrid& grid,
                                       LhvMode mode, std::uint64_t seed = kDefaultSeed,
                                       unsigned max_threads = 0) {
    const int n = t.n_parties;
    const int S = grid.n_settings();
    LhvResult result;
    result.mode = mode;

    if (mode == LhvMode::Exhaustive) {
        if (n > 9)
            throw std::invalid_argument("exhaustive search limited to N <= 9");
        std::vector<double> egrid = grid_correlations(t, grid);
        const std::uint64_t patterns = std::uint64_t(1) << S;

        unsigned hw = std::thread::hardware_concurrency();
        if (max_threads == 0)
            max_threads = hw ? hw : 1;
        unsigned workers = std::min<unsigned>(max_threads, unsigned(patterns));
        if (n <= 3)
            workers = 1;  // not worth spawning for <= 512 strategies

        // partition by the outermost observer's pattern; deterministic merge
        std::vector<detail::ExhaustiveBest> bests(patterns);
        auto run_pattern = [&](std::uint64_t p) {
            std::vector<int> signs(S);
            for (int l = 0; l < S; ++l)
                signs[l] = (p >> l) & 1u ? -1 : 1;
            detail::exhaustive_rec(detail::contract_observer(egrid, signs), 1, n, S,
                                   p, bests[p]);
        };
        if (workers <= 1) {
            for (std::uint64_t p = 0; p < patterns; ++p)
                run_pattern(p);
        } else {
            std::vector<std::thread> pool;
            std::atomic<std::uint64_t> next{0};
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::uint64_t p = next++; p < patterns; p = next++)
                        run_pattern(p);
                });
            for (auto& th : pool)
                th.join();
        }
        detail::ExhaustiveBest best;
        for (const auto& b : bests)
            if (b.value > best.value || (b.value == best.value && b.packed < best.packed))
                best = b;

        result.max_value = best.value;
        std::vector<std::uint64_t> pats(n);
        std::uint64_t rest = best.packed;
        for (int j = 0; j < n; ++j) {
            pats[j] = rest % patterns;
            rest /= patterns;
        }
        result.argmax = DeterministicStrategy::from_patterns(pats, S);
        return result;
    }

    // alternating: best-response sweeps on the factored objective
    std::mt19937_64 rng(seed);
    std::vector<std::array<double, 2>> setting_dirs(S);
    for (int l = 0; l < S; ++l)
        setting_dirs[l] = {std::cos(grid.angles[l]), std::sin(grid.angles[l])};

    double best = -std::numeric_limits<double>::infinity();
    DeterministicStrategy best_strategy;
    for (int restart = 0; restart < 64; ++restart) {
        DeterministicStrategy s;
        s.signs.assign(n, std::vector<int>(S));
        for (auto& row : s.signs)
            for (int& x : row)
                x = (rng() & 1u) ? 1 : -1;

        std::vector<std::array<double, 2>> svecs(n);
        auto refresh = [&](int j) {
            svecs[j] = {0.0, 0.0};
            for (int l = 0; l < S; ++l) {
                svecs[j][0] += s.signs[j][l] * setting_dirs[l][0];
                svecs[j][1] += s.signs[j][l] * setting_dirs[l][1];
            }
        };
        for (int j = 0; j < n; ++j)
            refresh(j);

        double value = detail::factored_objective(t, svecs);
        for (int sweep = 0; sweep < 500; ++sweep) {
            double prev = value;
            for (int j = 0; j < n; ++j) {
                // partial 2-vector against the other observers' sign vectors
                std::vector<double> cur = t.components;
                for (int k = n - 1; k >= 0; --k)
                    if (k != j)
                        cur = contract_bit(cur, k, svecs[k][0], svecs[k][1]);
                for (int l = 0; l < S; ++l) {
                    double w = cur[0] * setting_dirs[l][0] + cur[1] * setting_dirs[l][1];
                    s.signs[j][l] = (w >= 0.0) ? 1 : -1;
                }
                refresh(j);
                value = cur[0] * svecs[j][0] + cur[1] * svecs[j][1];
            }
            if (value - prev <= 1e-12)
                break;
        }
        if (value > best) {
            best = value;
            best_strategy = s;
        }
    }
    result.max_value = best;
    result.argmax = best_strategy;
    return result;
}

/// Residuals of the grid orthogonality sums: sum cos*sin, sum cos^2, sum
/// sin^2 against 0, n/2, n/2.
struct TrigIdentityReport {
    int n_settings = 3;
    double cross_sum = 0.0;
    double cos_sq_sum = 0.0;
    double sin_sq_sum = 0.0;
    double cross_residual = 0.0;
    double cos_sq_residual = 0.0;
    double sin_sq_residual = 0.0;
    bool pass = false;
};

inline TrigIdentityReport trig_identity_suite(int n_settings = 3, double tol = 1e-14) {
    if (n_settings < 2)
        throw std::invalid_argument("n_settings must be >= 2");
    TrigIdentityReport r;
    r.n_settings = n_settings;
    for (int l = 0; l < n_settings; ++l) {
        double a = double(l) * std::numbers::pi / double(n_settings);
        r.cross_sum += std::cos(a) * std::sin(a);
        r.cos_sq_sum += std::cos(a) * std::cos(a);
        r.sin_sq_sum += std::sin(a) * std::sin(a);
    }
    const double half = double(n_settings) / 2.0;
    r.cross_residual = std::abs(r.cross_sum);
    r.cos_sq_residual = std::abs(r.cos_sq_sum - half);
    r.sin_sq_residual = std::abs(r.sin_sq_sum - half);
    r.pass = r.cross_residual <= tol && r.cos_sq_residual <= tol &&
             r.sin_sq_residual <= tol;
    return r;
}

}  // namespace bell3

#endif
