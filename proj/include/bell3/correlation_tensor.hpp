#ifndef BELL3_CORRELATION_TENSOR_HPP
#define BELL3_CORRELATION_TENSOR_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bell3 {

/// N-party correlation tensor restricted to the two in-plane axes per
/// observer. Components are stored as a dense flat array of 2^N reals;
/// the packed index has bit j equal to (i_j - 1), party 0 in bit 0.
///
/// Third-axis components are deliberately not represented: every formula
/// this library evaluates uses in-plane indices only.
struct CorrelationTensor {
    int n_parties = 0;
    std::vector<double> components;
    std::string label;

    std::size_t size() const { return std::size_t(1) << n_parties; }
};

/// One in-plane measurement direction per observer, as an angle in radians
/// against the local x-axis. Direction j is (cos a_j, sin a_j).
struct DirectionSet {
    std::vector<double> angles;
};

inline CorrelationTensor make_zero_tensor(int n_parties, std::string label = {}) {
    if (n_parties < 2)
        throw std::invalid_argument("n_parties must be >= 2");
    CorrelationTensor t;
    t.n_parties = n_parties;
    t.components.assign(std::size_t(1) << n_parties, 0.0);
    t.label = std::move(label);
    return t;
}

/// Correlation tensor of the state V|GHZ><GHZ| + (1-V) * identity/2^N in the
/// x-y block. A component whose index has k twos is (-1)^{k/2} * V for even k
/// and 0 for odd k; the sign convention is pinned by the state-vector oracle
/// (see statevector_oracle.hpp), not assumed.
inline CorrelationTensor ghz_werner_tensor(int n_parties, double visibility) {
    if (n_parties < 2)
        throw std::invalid_argument("n_parties must be >= 2");
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw std::invalid_argument("visibility must be in [0, 1]");
    CorrelationTensor t = make_zero_tensor(n_parties);
    t.label = "ghz-werner V=" + std::to_string(visibility);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        int k = 0;
        for (int j = 0; j < n_parties; ++j)
            k += int((idx >> j) & 1u);
        if (k % 2 == 0)
            t.components[idx] = ((k / 2) % 2 == 0 ? visibility : -visibility);
    }
    return t;
}

/// True when every component lies in [-1, 1]. Not enforced on construction so
/// synthetic test tensors remain expressible.
inline bool components_physical(const CorrelationTensor& t) {
    for (double c : t.components)
        if (!(std::abs(c) <= 1.0))
            return false;
    return true;
}

/// Sums out the given bit of a flat little-endian array against the
/// coefficient pair (c1, c2), halving its length.
inline std::vector<double> contract_bit(const std::vector<double>& v, int bit,
                                        double c1, double c2) {
    const std::size_t stride = std::size_t(1) << bit;
    std::vector<double> out(v.size() / 2);
    std::size_t w = 0;
    for (std::size_t hi = 0; hi < v.size(); hi += 2 * stride)
        for (std::size_t lo = 0; lo < stride; ++lo)
            out[w++] = c1 * v[hi + lo] + c2 * v[hi + lo + stride];
    return out;
}

/// Contracts every party except `kept` against (cos a_j, sin a_j), leaving the
/// 2-vector (A1, A2) such that the full contraction is A1*cos(a_kept) +
/// A2*sin(a_kept).
inline std::array<double, 2> partial_pair(const CorrelationTensor& t,
                                          const std::vector<double>& angles,
                                          int kept) {
    std::vector<double> cur = t.components;
    // top-down: party j always sits at bit j when its turn comes
    for (int j = t.n_parties - 1; j >= 0; --j)
        if (j != kept)
            cur = contract_bit(cur, j, std::cos(angles[j]), std::sin(angles[j]));
    return {cur[0], cur[1]};
}

/// Evaluates T . (n_1 x ... x n_N) for in-plane directions n_j =
/// (cos a_j, sin a_j). Multilinear in the per-party coefficient pairs.
inline double evaluate(const CorrelationTensor& t, const DirectionSet& dirs) {
    if (int(dirs.angles.size()) != t.n_parties)
        throw std::invalid_argument("direction count does not match n_parties");
    std::vector<double> cur = t.components;
    for (int j = 0; j < t.n_parties; ++j)
        cur = contract_bit(cur, 0, std::cos(dirs.angles[j]), std::sin(dirs.angles[j]));
    return cur[0];
}

inline double sum_squared_components(const CorrelationTensor& t) {
    double s = 0.0;
    for (double c : t.components)
        s += c * c;
    return s;
}

}  // namespace bell3

#endif
