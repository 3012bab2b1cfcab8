#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "glidesnn/codec.hpp"
#include "glidesnn/error.hpp"

using namespace glidesnn;

namespace {

// Decode the input raster itself (no neurons): output rate = input rate.
double passthrough(double e, std::size_t n, const CodecParams& p, Rng& rng) {
    const auto raster = poisson_encode(normalize_error(e, p).value, n, p, rng);
    std::vector<std::size_t> counts(n, 0);
    for (std::size_t s = 0; s < raster.n_steps(); ++s)
        for (std::size_t i = 0; i < n; ++i) counts[i] += raster.at(i, s);
    CodecParams q = p;
    q.r_out_max = p.r_max;
    return rate_decode(counts, q);
}

}  // namespace

TEST_CASE("normalize_error") {
    CHECK(normalize_error(0.0, 1.0).value == 0.5);
    CHECK(normalize_error(1.0, 1.0).value == 1.0);
    CHECK_FALSE(normalize_error(1.0, 1.0).saturated);
    const auto n = normalize_error(-2.0, 1.0);
    CHECK(n.value == 0.0);
    CHECK(n.saturated);
    CHECK(normalize_error(-0.5, 2.0).value == doctest::Approx(0.375));
}

TEST_CASE("CodecParams validation") {
    CodecParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.steps() == 200);
    p.r_max = 3.0;  // 3 * 0.5 > 1
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.window = 4.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.e_max = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("poisson_encode shapes and edge values") {
    const CodecParams p;
    Rng rng(1);
    const auto zero = poisson_encode(0.0, 20, p, rng);
    CHECK(zero.n_neurons() == 20);
    CHECK(zero.n_steps() == 200);
    CHECK(zero.total_spikes() == 0);
    CHECK_THROWS_AS((void)poisson_encode(1.5, 20, p, rng), DomainError);
    CHECK_THROWS_AS((void)poisson_encode(-0.1, 20, p, rng), DomainError);
    for (std::size_t s = 0; s < zero.n_steps(); ++s)
        for (auto b : zero.column(s)) CHECK(b <= 1);
}

TEST_CASE("full-scale value gives 400 +- 3 sigma spikes over 20 neurons") {
    const CodecParams p;
    Rng rng(2024);
    const auto r = poisson_encode(1.0, 20, p, rng);
    const double mean = 20.0 * 200.0 * 0.1;
    CHECK(mean == 400.0);
    CHECK(std::abs(static_cast<double>(r.total_spikes()) - mean) <= 3.0 * std::sqrt(400.0 * 0.9));
}

TEST_CASE("same seed gives the same raster") {
    const CodecParams p;
    Rng a(5);
    Rng b(5);
    const auto x = poisson_encode(0.7, 10, p, a);
    const auto y = poisson_encode(0.7, 10, p, b);
    bool same = true;
    for (std::size_t s = 0; s < x.n_steps(); ++s)
        for (std::size_t i = 0; i < 10; ++i) same = same && x.at(i, s) == y.at(i, s);
    CHECK(same);
}

TEST_CASE("entries are independent with the right per-step probability") {
    CodecParams p;
    p.r_max = 1.0;
    Rng rng(8);
    // mean and lag-1 co-occurrence over a long raster
    const auto r = poisson_encode(0.6, 50, p, rng);
    double ones = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::size_t s = 0; s < r.n_steps(); ++s) {
            ones += r.at(i, s);
            if (s + 1 < r.n_steps()) pairs += r.at(i, s) * r.at(i, s + 1);
        }
    }
    const double n = 50.0 * r.n_steps();
    const double q = 0.6 * 1.0 * 0.5;
    CHECK(ones / n == doctest::Approx(q).epsilon(0.05));
    CHECK(pairs / (50.0 * (r.n_steps() - 1)) == doctest::Approx(q * q).epsilon(0.15));
}

TEST_CASE("expected spike count increases with the value") {
    const CodecParams p;
    double prev = -1.0;
    for (int k = 0; k <= 10; ++k) {
        Rng rng(100 + k);
        double total = 0.0;
        for (int t = 0; t < 20; ++t) total += static_cast<double>(poisson_encode(k / 10.0, 20, p, rng).total_spikes());
        CHECK(total > prev);
        prev = total;
    }
}

TEST_CASE("rate_decode endpoints") {
    CodecParams p;
    p.e_max = 2.0;
    const std::vector<std::size_t> none(20, 0);
    CHECK(rate_decode(none, p) == -2.0);
    p.symmetric_zero = true;
    CHECK(rate_decode(none, p) == 0.0);
    p.symmetric_zero = false;
    // mean rate 0.1 / ms = 0.5 r_out_max over 100 ms: 10 spikes per neuron
    const std::vector<std::size_t> mid(20, 10);
    CHECK(rate_decode(mid, p) == doctest::Approx(0.0).scale(1.0));
    const std::vector<std::size_t> full(20, 20);
    CHECK(rate_decode(full, p) == doctest::Approx(2.0));
}

TEST_CASE("passthrough round trip within 3 binomial sigmas") {
    const CodecParams p;
    Rng rng(31);
    for (double e : {-0.8, -0.3, 0.0, 0.25, 0.9}) {
        const double v = normalize_error(e, p).value;
        const double q = v * p.r_max * p.dt;
        const double n_draws = 20.0 * p.steps();
        const double rate_sd = std::sqrt(n_draws * q * (1 - q)) / (20.0 * p.window);
        const double sd = rate_sd / p.r_max * 2.0 * p.e_max;
        CHECK(std::abs(passthrough(e, 20, p, rng) - e) <= 3.0 * sd);
    }
}

TEST_CASE("round-trip error shrinks as 1/sqrt(n T)") {
    const CodecParams p;
    Rng rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto mae = [&](std::size_t n) {
        double s = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double e = u(rng);
            s += std::abs(passthrough(e, n, p, rng) - e);
        }
        return s / 1000.0;
    };
    const double small = mae(5);
    const double large = mae(20);
    // 4x the neurons -> error halves; accept a factor of 2 either side
    CHECK(small / large > 1.0);
    CHECK(small / large < 4.0);
}

TEST_CASE("input_current") {
    SynapseMatrix w(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) w.at(i, j) = 1.0 + i + 10.0 * j;

    const std::vector<std::uint8_t> zero(4, 0);
    for (double c : input_current(w, zero)) CHECK(c == 0.0);

    const std::vector<std::uint8_t> one_hot{0, 0, 1, 0};
    const auto c = input_current(w, one_hot);
    for (std::size_t j = 0; j < 3; ++j) CHECK(c[j] == w.at(2, j));

    const std::vector<std::uint8_t> wrong(5, 0);
    CHECK_THROWS_AS((void)input_current(w, wrong), StructuralError);
    std::vector<double> out(2);
    CHECK_THROWS_AS(input_current(w, zero, out), StructuralError);
}

TEST_CASE("input_current matches a naive sum and is linear over disjoint spikes") {
    Rng rng(4);
    std::uniform_real_distribution<double> wd(0.0, 10.0);
    std::bernoulli_distribution bit(0.3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n_pre = 1 + trial % 40;
        const std::size_t n_post = 1 + (trial * 7) % 20;
        SynapseMatrix w(n_pre, n_post);
        for (std::size_t i = 0; i < n_pre; ++i)
            for (std::size_t j = 0; j < n_post; ++j) w.at(i, j) = wd(rng);
        std::vector<std::uint8_t> s(n_pre);
        std::vector<std::uint8_t> s1(n_pre, 0);
        std::vector<std::uint8_t> s2(n_pre, 0);
        for (std::size_t i = 0; i < n_pre; ++i) {
            s[i] = bit(rng);
            (i % 2 ? s1 : s2)[i] = s[i];
        }
        const auto fast = input_current(w, s);
        const auto a = input_current(w, s1);
        const auto b = input_current(w, s2);
        for (std::size_t j = 0; j < n_post; ++j) {
            double naive = 0.0;
            for (std::size_t i = 0; i < n_pre; ++i) naive += w.at(i, j) * s[i];
            CHECK(std::abs(fast[j] - naive) <= 1e-12);
            CHECK(std::abs(a[j] + b[j] - fast[j]) <= 1e-12);
        }
    }
}
