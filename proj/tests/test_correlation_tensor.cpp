#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bell3/correlation_tensor.hpp"
#include "bell3/statevector_oracle.hpp"

using namespace bell3;

namespace {

// packed index for explicit index digits (1-based, party 0 first)
std::size_t pack(std::initializer_list<int> digits) {
    std::size_t idx = 0;
    int j = 0;
    for (int d : digits)
        idx |= std::size_t(d - 1) << j++;
    return idx;
}

}  // namespace

TEST_CASE("ghz_werner_tensor N=2 V=1") {
    auto t = ghz_werner_tensor(2, 1.0);
    CHECK(t.components[pack({1, 1})] == doctest::Approx(1.0));
    CHECK(t.components[pack({2, 2})] == doctest::Approx(-1.0));
    CHECK(t.components[pack({1, 2})] == 0.0);
    CHECK(t.components[pack({2, 1})] == 0.0);
}

TEST_CASE("ghz_werner_tensor N=3 V=0.5") {
    auto t = ghz_werner_tensor(3, 0.5);
    CHECK(t.components[pack({1, 1, 1})] == doctest::Approx(0.5));
    CHECK(t.components[pack({1, 2, 2})] == doctest::Approx(-0.5));
    CHECK(t.components[pack({2, 1, 2})] == doctest::Approx(-0.5));
    CHECK(t.components[pack({2, 2, 1})] == doctest::Approx(-0.5));
    int nonzero = 0;
    for (double c : t.components)
        if (c != 0.0)
            ++nonzero;
    CHECK(nonzero == 4);
}

TEST_CASE("ghz_werner_tensor V=0 is the zero tensor") {
    auto t = ghz_werner_tensor(4, 0.0);
    for (double c : t.components)
        CHECK(c == 0.0);
}

TEST_CASE("ghz_werner_tensor rejects bad inputs") {
    CHECK_THROWS_AS(ghz_werner_tensor(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ghz_werner_tensor(3, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(ghz_werner_tensor(3, 1.1), std::invalid_argument);
}

TEST_CASE("ghz_werner_tensor has 2^{N-1} nonzero components") {
    for (int n = 2; n <= 8; ++n) {
        auto t = ghz_werner_tensor(n, 0.7);
        int nonzero = 0;
        for (double c : t.components)
            if (c != 0.0)
                ++nonzero;
        CHECK(nonzero == (1 << (n - 1)));
    }
}

TEST_CASE("evaluate at basis and diagonal directions") {
    auto t = ghz_werner_tensor(2, 1.0);
    CHECK(evaluate(t, {{0.0, 0.0}}) == doctest::Approx(1.0));
    CHECK(evaluate(t, {{std::numbers::pi / 4, std::numbers::pi / 4}}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    auto z = make_zero_tensor(3);
    CHECK(evaluate(z, {{0.3, 1.1, 2.5}}) == 0.0);
}

TEST_CASE("evaluate rejects length mismatch") {
    auto t = ghz_werner_tensor(3, 1.0);
    CHECK_THROWS_AS(evaluate(t, {{0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("GHZ-Werner evaluate equals V cos(sum of angles)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> npick(2, 10);
    std::uniform_real_distribution<double> vpick(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = npick(rng);
        double v = vpick(rng);
        auto t = ghz_werner_tensor(n, v);
        DirectionSet dirs;
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            dirs.angles.push_back(angle(rng));
            sum += dirs.angles.back();
        }
        CHECK(std::abs(evaluate(t, dirs) - v * std::cos(sum)) <= 1e-12);
    }
}

TEST_CASE("contraction is multilinear in one party's coefficient pair") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> comp(-1.0, 1.0);
    CorrelationTensor t = make_zero_tensor(3);
    for (double& c : t.components)
        c = comp(rng);
    const double a0 = 0.4, a1 = 1.3, a2 = 2.2, s = 2.5;
    auto contract_all = [&](double c1, double c2) {
        auto cur = contract_bit(t.components, 0, std::cos(a0), std::sin(a0));
        cur = contract_bit(cur, 0, c1, c2);
        cur = contract_bit(cur, 0, std::cos(a2), std::sin(a2));
        return cur[0];
    };
    double base = contract_all(std::cos(a1), std::sin(a1));
    double scaled = contract_all(s * std::cos(a1), s * std::sin(a1));
    CHECK(scaled == doctest::Approx(s * base).epsilon(1e-12));
}

TEST_CASE("sum_squared_components closed form") {
    CHECK(sum_squared_components(ghz_werner_tensor(3, 0.5)) == doctest::Approx(1.0));
    CHECK(sum_squared_components(make_zero_tensor(5)) == 0.0);
    CHECK(sum_squared_components(ghz_werner_tensor(6, 0.1765)) ==
          doctest::Approx(0.1765 * 0.1765 * 32.0).epsilon(1e-12));
    for (int n = 2; n <= 10; ++n)
        for (double v : {0.1, 0.5, 1.0})
            CHECK(std::abs(sum_squared_components(ghz_werner_tensor(n, v)) -
                           v * v * std::pow(2.0, n - 1)) <= 1e-12);
}

TEST_CASE("statevector oracle spot values") {
    using A = PauliAxis;
    CHECK(statevector_correlation_oracle(2, 1.0, {A::X, A::X}) == doctest::Approx(1.0));
    CHECK(statevector_correlation_oracle(2, 1.0, {A::X, A::Y}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(statevector_correlation_oracle(3, 0.5, {A::Y, A::Y, A::X}) ==
          doctest::Approx(-0.5));
    CHECK_THROWS_AS(statevector_correlation_oracle(1, 1.0, {PauliAxis::X}),
                    std::invalid_argument);
    CHECK_THROWS_AS(statevector_correlation_oracle(11, 1.0, {}), std::invalid_argument);
}

TEST_CASE("tensor components match the statevector oracle") {
    for (int n = 2; n <= 4; ++n) {
        for (double v : {0.3, 1.0}) {
            auto t = ghz_werner_tensor(n, v);
            for (std::size_t idx = 0; idx < t.size(); ++idx) {
                std::vector<PauliAxis> axes(n);
                for (int j = 0; j < n; ++j)
                    axes[j] = (idx >> j) & 1u ? PauliAxis::Y : PauliAxis::X;
                double expected = statevector_correlation_oracle(n, v, axes);
                CHECK(std::abs(t.components[idx] - expected) <= 1e-12);
            }
        }
    }
}

TEST_CASE("components_physical flags out-of-range entries") {
    auto t = ghz_werner_tensor(2, 1.0);
    CHECK(components_physical(t));
    t.components[0] = 1.5;
    CHECK_FALSE(components_physical(t));
}
