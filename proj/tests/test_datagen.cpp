#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "maddclust/datagen.hpp"
#include "maddclust/types.hpp"

using namespace maddclust;

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (static_cast<double>(v.size()) - 1.0);
}

double corr_of(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean_of(a), mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double cov_of(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean_of(a), mb = mean_of(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / (static_cast<double>(a.size()) - 1.0);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// column c of a scenario's class cls over `reps` independent draws
std::vector<double> draw_column(const ScenarioSampler& sampler, int cls, std::size_t c,
                                std::size_t reps, std::mt19937_64& rng) {
    std::vector<double> row(sampler.dim()), out;
    out.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        sampler.draw(cls, row, rng);
        out.push_back(row[c]);
    }
    return out;
}

double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

} // namespace

TEST_CASE("shell radius hits its endpoints and stays ordered") {
    CHECK(shell_radius(1.0, 2.0, 10, 0.0) == doctest::Approx(1.0));
    CHECK(shell_radius(1.0, 2.0, 10, 1.0) == doctest::Approx(2.0));
    CHECK(shell_radius(0.0, 2.0, 5, 0.0) == 0.0);
    CHECK(shell_radius(0.0, 2.0, 1, 0.25) == doctest::Approx(0.5)); // linear CDF in 1-d
    // area-uniform annulus radius: r = sqrt(u b^2 + (1-u) a^2)
    CHECK(shell_radius(1.0, 1.5, 2, 0.5) == doctest::Approx(std::sqrt(1.625)));

    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double r = shell_radius(1.0, 3.0, 7, i / 20.0);
        CHECK(r >= prev);
        CHECK(r >= 1.0);
        CHECK(r <= 3.0);
        prev = r;
    }

    SUBCASE("huge dimensions stay finite and concentrate at the outer radius") {
        const double r = shell_radius(1.0, 2.0, 100000, 0.5);
        CHECK(std::isfinite(r));
        CHECK(r > 1.9999);
        CHECK(r <= 2.0);
    }
    SUBCASE("bad arguments are rejected") {
        CHECK_THROWS_AS(shell_radius(-0.1, 1.0, 3, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(shell_radius(2.0, 1.0, 3, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(shell_radius(1.0, 1.0, 3, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(shell_radius(1.0, 2.0, 0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(shell_radius(1.0, 2.0, 3, 1.5), std::invalid_argument);
    }
}

TEST_CASE("shell radius mean square matches its closed form") {
    // d = 1: uniform on [a, b]; d = 2: area-uniform annulus
    CHECK(shell_radius_mean_square(0.0, 1.0, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(shell_radius_mean_square(1.0, 2.0, 2) == doctest::Approx(2.5));

    std::mt19937_64 rng(7u);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SUBCASE("monte carlo agreement in high dimension") {
        double s = 0.0;
        const int reps = 100000;
        for (int i = 0; i < reps; ++i) {
            const double r = shell_radius(1.0, 1.5, 1000, unif(rng));
            s += r * r;
        }
        const double expect = shell_radius_mean_square(1.0, 1.5, 1000);
        CHECK(s / reps == doctest::Approx(expect).epsilon(0.01));
    }
    SUBCASE("monte carlo agreement for the solid ball") {
        double s = 0.0;
        const int reps = 100000;
        for (int i = 0; i < reps; ++i) {
            const double r = shell_radius(0.0, 1.0, 3, unif(rng));
            s += r * r;
        }
        CHECK(shell_radius_mean_square(0.0, 1.0, 3) == doctest::Approx(0.6));
        CHECK(s / reps == doctest::Approx(0.6).epsilon(0.01));
    }
    CHECK_THROWS_AS(shell_radius_mean_square(2.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(shell_radius_mean_square(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("structured gaussian reproduces its covariance models") {
    std::mt19937_64 rng(11u);
    const std::size_t n = 20000;

    SUBCASE("ar1 covariance matches 0.5^|i-j| entrywise") {
        const std::size_t big = 100000;
        const DataMatrix x = structured_gaussian(big, 3, {}, CovarianceModel::ar1(0.5), 1.0, rng);
        std::vector<std::vector<double>> col(3, std::vector<double>(big));
        for (std::size_t i = 0; i < big; ++i)
            for (std::size_t q = 0; q < 3; ++q) col[q][i] = x(i, q);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
                const double target = std::pow(0.5, std::abs(static_cast<int>(a) - static_cast<int>(b)));
                CHECK(cov_of(col[a], col[b]) == doctest::Approx(target).epsilon(0.02));
            }
    }
    SUBCASE("paired blocks correlate within pairs only, odd tail stays free") {
        const DataMatrix x = structured_gaussian(n, 5, {}, CovarianceModel::paired_block(0.9), 1.0, rng);
        std::vector<double> c0(n), c1(n), c2(n), c3(n), c4(n);
        for (std::size_t i = 0; i < n; ++i) {
            c0[i] = x(i, 0);
            c1[i] = x(i, 1);
            c2[i] = x(i, 2);
            c3[i] = x(i, 3);
            c4[i] = x(i, 4);
        }
        CHECK(corr_of(c0, c1) == doctest::Approx(0.9).epsilon(0.02));
        CHECK(corr_of(c2, c3) == doctest::Approx(0.9).epsilon(0.02));
        CHECK(std::abs(corr_of(c0, c2)) < 0.03);
        CHECK(std::abs(corr_of(c3, c4)) < 0.03);
        CHECK(var_of(c4) == doctest::Approx(1.0).epsilon(0.05));
    }
    SUBCASE("mean, scale and diagonal variances are applied") {
        const std::vector<double> mu = {1.0, -2.0};
        const DataMatrix x = structured_gaussian(n, 2, mu, CovarianceModel::identity(), 4.0, rng);
        std::vector<double> c0(n), c1(n);
        for (std::size_t i = 0; i < n; ++i) {
            c0[i] = x(i, 0);
            c1[i] = x(i, 1);
        }
        CHECK(mean_of(c0) == doctest::Approx(1.0).epsilon(0.1));
        CHECK(mean_of(c1) == doctest::Approx(-2.0).epsilon(0.05));
        CHECK(var_of(c0) == doctest::Approx(4.0).epsilon(0.05));

        const DataMatrix y =
            structured_gaussian(n, 2, {}, CovarianceModel::diagonal({9.0, 0.25}), 1.0, rng);
        std::vector<double> d0(n), d1(n);
        for (std::size_t i = 0; i < n; ++i) {
            d0[i] = y(i, 0);
            d1[i] = y(i, 1);
        }
        CHECK(var_of(d0) == doctest::Approx(9.0).epsilon(0.05));
        CHECK(var_of(d1) == doctest::Approx(0.25).epsilon(0.05));
    }
    SUBCASE("invalid setups are rejected") {
        CHECK_THROWS_AS(structured_gaussian(0, 2, {}, CovarianceModel::identity(), 1.0, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(structured_gaussian(5, 2, {}, CovarianceModel::identity(), 0.0, rng),
                        std::invalid_argument);
        const std::vector<double> mu = {1.0};
        CHECK_THROWS_AS(structured_gaussian(5, 2, mu, CovarianceModel::identity(), 1.0, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(structured_gaussian(5, 2, {}, CovarianceModel::ar1(1.0), 1.0, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(structured_gaussian(5, 2, {}, CovarianceModel::diagonal({1.0}), 1.0, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(structured_gaussian(5, 2, {}, CovarianceModel::diagonal({1.0, -1.0}), 1.0, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("sphere direction lands on the unit sphere") {
    std::mt19937_64 rng(3u);
    std::vector<double> v(6);
    for (int i = 0; i < 100; ++i) {
        sphere_direction(v, rng);
        CHECK(squared_norm(v) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ar1 quadratic form matches the explicit inverse") {
    // d = 2, phi = 0.5: Sigma^{-1} = [[1, -1/2], [-1/2, 1]] / 0.75
    const std::vector<double> x = {1.0, 1.0};
    CHECK(ar1_quadratic_form(x, 0.5) == doctest::Approx(4.0 / 3.0));
    // x = (2, -1): (x0^2 - 2 phi x0 x1 + x1^2) / (1 - phi^2) = (4 + 2 + 1) / 0.75
    const std::vector<double> y = {2.0, -1.0};
    CHECK(ar1_quadratic_form(y, 0.5) == doctest::Approx(7.0 / 0.75));
    CHECK_THROWS_AS(ar1_quadratic_form({}, 0.5), std::invalid_argument);
}

TEST_CASE("ellipsoid shells respect their quadratic-form bands exactly") {
    std::mt19937_64 rng(19u);
    std::vector<double> row(50);
    for (int shell = 1; shell <= 3; ++shell) {
        for (int i = 0; i < 500; ++i) {
            ellipsoid_shell_row(row, shell, 0.5, rng);
            const double q = ar1_quadratic_form(row, 0.5);
            CHECK(q >= shell - 1.0 - 1e-9);
            CHECK(q <= shell - 0.5 + 1e-9);
        }
    }
    CHECK_THROWS_AS(ellipsoid_shell_row(row, 0, 0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(ellipsoid_shell_row(row, 4, 0.5, rng), std::invalid_argument);
}

TEST_CASE("half annulus points stay inside their regions") {
    std::mt19937_64 rng(23u);
    double x = 0.0, y = 0.0;
    std::vector<double> r2(2000);

    for (std::size_t i = 0; i < r2.size(); ++i) {
        half_annulus_point(1, x, y, rng);
        const double q = (x - 2.0) * (x - 2.0) + y * y;
        CHECK(q >= 1.0 - 1e-9);
        CHECK(q <= 2.25 + 1e-9);
        CHECK(y >= -1e-12);
        r2[i] = q;
    }
    // area-uniform radius: E[R^2] = (1 + 2.25) / 2
    CHECK(mean_of(r2) == doctest::Approx(1.625).epsilon(0.03));

    for (int i = 0; i < 500; ++i) {
        half_annulus_point(2, x, y, rng);
        const double q = (x + 2.0) * (x + 2.0) + y * y;
        CHECK(q >= 1.0 - 1e-9);
        CHECK(q <= 2.25 + 1e-9);
        CHECK(y >= -1e-12);
    }
    for (int i = 0; i < 500; ++i) {
        half_annulus_point(3, x, y, rng);
        const double q = x * x + y * y;
        CHECK(q >= 16.0 - 1e-9);
        CHECK(q <= 20.25 + 1e-9);
        CHECK(y <= 1e-12);
    }
    CHECK_THROWS_AS(half_annulus_point(0, x, y, rng), std::invalid_argument);
    CHECK_THROWS_AS(half_annulus_point(4, x, y, rng), std::invalid_argument);
}

TEST_CASE("ball and cube draws have the right support and spread") {
    std::mt19937_64 rng(29u);
    std::vector<double> row(10);
    std::vector<double> ball_r2(2000), cube_r2(2000);
    const double half = 1.0 / std::sqrt(10.0);

    for (std::size_t i = 0; i < ball_r2.size(); ++i) {
        ball_uniform_row(row, rng);
        ball_r2[i] = squared_norm(row);
        CHECK(ball_r2[i] <= 1.0 + 1e-12);
    }
    CHECK(mean_of(ball_r2) == doctest::Approx(10.0 / 12.0).epsilon(0.025));

    for (std::size_t i = 0; i < cube_r2.size(); ++i) {
        cube_uniform_row(row, rng);
        cube_r2[i] = squared_norm(row);
        for (double v : row) CHECK(std::abs(v) <= half + 1e-12);
        CHECK(cube_r2[i] <= 1.0 + 1e-12); // the cube is inscribed in the ball
    }
    CHECK(mean_of(cube_r2) == doctest::Approx(1.0 / 3.0).epsilon(0.06));

    // in fifty dimensions essentially no ball draw lands inside that cube
    std::vector<double> wide(50);
    const double half50 = 1.0 / std::sqrt(50.0);
    int inside = 0;
    for (int i = 0; i < 10000; ++i) {
        ball_uniform_row(wide, rng);
        bool in = true;
        for (double v : wide)
            if (std::abs(v) > half50) {
                in = false;
                break;
            }
        inside += in ? 1 : 0;
    }
    CHECK(inside < 10);
}

TEST_CASE("autoregressive paths carry their stationary moments") {
    std::mt19937_64 rng(31u);
    const std::size_t reps = 100000;
    std::vector<double> row(20);
    std::vector<double> first1(reps), second1(reps), first2(reps), second2(reps);

    for (std::size_t i = 0; i < reps; ++i) {
        ar_process_row(row, 1, rng);
        first1[i] = row[0];
        second1[i] = row[1];
        ar_process_row(row, 2, rng);
        first2[i] = row[0];
        second2[i] = row[1];
    }
    CHECK(mean_of(first1) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(var_of(first1) == doctest::Approx(16.0 / 15.0).epsilon(0.03));
    CHECK(corr_of(first1, second1) == doctest::Approx(0.25).epsilon(0.05));

    CHECK(mean_of(first2) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(var_of(first2) == doctest::Approx(16.0 / 7.0).epsilon(0.03));
    CHECK(corr_of(first2, second2) == doctest::Approx(0.75).epsilon(0.02));

    CHECK_THROWS_AS(ar_process_row(row, 3, rng), std::invalid_argument);
}

TEST_CASE("heavy tail draws are always finite with the right scale") {
    std::mt19937_64 rng(37u);
    std::vector<double> t3(4001), cauchy(4001);
    for (std::size_t i = 0; i < t3.size(); ++i) {
        t3[i] = std::abs(heavy_tail_draw(HeavyTail::T3, rng));
        cauchy[i] = std::abs(heavy_tail_draw(HeavyTail::Cauchy, rng));
        CHECK(std::isfinite(t3[i]));
        CHECK(std::isfinite(cauchy[i]));
    }
    // median |t_3| = 0.7649, median |Cauchy| = 1
    CHECK(median_of(t3) == doctest::Approx(0.7649).epsilon(0.1));
    CHECK(median_of(cauchy) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("paired-block location-scale scenario moments") {
    const ScenarioSampler sampler(Scenario::ExampleA, 6);
    std::mt19937_64 rng(41u);
    const std::size_t reps = 4000;
    std::vector<double> row(6);
    std::vector<double> a0(reps), a1(reps), a2(reps), b0(reps), b1(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        sampler.draw(1, row, rng);
        a0[i] = row[0];
        a1[i] = row[1];
        a2[i] = row[2];
        sampler.draw(2, row, rng);
        b0[i] = row[0];
        b1[i] = row[1];
    }
    CHECK(std::abs(mean_of(a0)) < 0.05);
    CHECK(var_of(a0) == doctest::Approx(0.5).epsilon(0.1));
    CHECK(corr_of(a0, a1) == doctest::Approx(0.98).epsilon(0.01));
    CHECK(std::abs(corr_of(a1, a2)) < 0.05);

    CHECK(mean_of(b0) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(mean_of(b1) == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(var_of(b0) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(corr_of(b0, b1) == doctest::Approx(0.98).epsilon(0.01));
}

TEST_CASE("concentric-shell scenario radii scale with sqrt(d)") {
    const std::size_t d = 50;
    const ScenarioSampler sampler(Scenario::ExampleB, d);
    std::mt19937_64 rng(43u);
    std::vector<double> row(d);
    for (int cls = 1; cls <= 3; ++cls) {
        const double a = cls - 1.0;
        double sum_r2 = 0.0;
        const int reps = 2000;
        for (int i = 0; i < reps; ++i) {
            sampler.draw(cls, row, rng);
            const double scaled = squared_norm(row) / static_cast<double>(d);
            CHECK(scaled >= a * a - 1e-9);
            CHECK(scaled <= (a + 0.5) * (a + 0.5) + 1e-9);
            sum_r2 += scaled;
        }
        CHECK(sum_r2 / reps ==
              doctest::Approx(shell_radius_mean_square(a, a + 0.5, d)).epsilon(0.02));
    }
}

TEST_CASE("half-shifted autoregressive scenario moves only the first half") {
    const std::size_t d = 10;
    const ScenarioSampler sampler(Scenario::Ex1, d);
    std::mt19937_64 rng(47u);
    const std::size_t reps = 4000;

    auto c1_first = draw_column(sampler, 1, 0, reps, rng);
    auto c2_first = draw_column(sampler, 2, 0, reps, rng);
    auto c3_first = draw_column(sampler, 3, 0, reps, rng);
    auto c2_last = draw_column(sampler, 2, d - 1, reps, rng);

    CHECK(std::abs(mean_of(c1_first)) < 0.08);
    CHECK(mean_of(c2_first) == doctest::Approx(0.75).epsilon(0.1));
    CHECK(mean_of(c3_first) == doctest::Approx(-0.75).epsilon(0.1));
    CHECK(std::abs(mean_of(c2_last)) < 0.08);
    CHECK(var_of(c2_first) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("alternating-mean scenario flips signs and doubles the spread") {
    const ScenarioSampler sampler(Scenario::Ex2, 6);
    std::mt19937_64 rng(53u);
    const std::size_t reps = 4000;

    // 1-based coordinate 1 has alpha = 0.5, coordinate 2 has alpha = 1
    auto c1_q0 = draw_column(sampler, 1, 0, reps, rng);
    auto c1_q1 = draw_column(sampler, 1, 1, reps, rng);
    auto c2_q0 = draw_column(sampler, 2, 0, reps, rng);
    auto c2_q1 = draw_column(sampler, 2, 1, reps, rng);
    auto c3_q0 = draw_column(sampler, 3, 0, reps, rng);
    auto c4_q0 = draw_column(sampler, 4, 0, reps, rng);

    CHECK(mean_of(c1_q0) == doctest::Approx(0.5).epsilon(0.15));
    CHECK(mean_of(c1_q1) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(mean_of(c2_q0) == doctest::Approx(-0.5).epsilon(0.2));
    CHECK(mean_of(c2_q1) == doctest::Approx(1.0).epsilon(0.15));
    CHECK(mean_of(c3_q0) == doctest::Approx(-0.5).epsilon(0.15));
    CHECK(mean_of(c4_q0) == doctest::Approx(0.5).epsilon(0.2));

    CHECK(var_of(c1_q0) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(var_of(c2_q0) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(var_of(c4_q0) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("variance-profile scenario swaps loud and quiet halves") {
    const std::size_t d = 8;
    const ScenarioSampler sampler(Scenario::Ex7, d);
    std::mt19937_64 rng(59u);
    const std::size_t reps = 4000;

    auto c1_first = draw_column(sampler, 1, 0, reps, rng);
    auto c1_last = draw_column(sampler, 1, d - 1, reps, rng);
    auto c2_first = draw_column(sampler, 2, 0, reps, rng);
    auto c3_first = draw_column(sampler, 3, 0, reps, rng); // 1-based index 1 is odd: variance 9
    auto c3_second = draw_column(sampler, 3, 1, reps, rng);
    auto c4_first = draw_column(sampler, 4, 0, reps, rng);

    CHECK(var_of(c1_first) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(var_of(c1_last) == doctest::Approx(9.0).epsilon(0.1));
    CHECK(var_of(c2_first) == doctest::Approx(9.0).epsilon(0.1));
    CHECK(var_of(c3_first) == doctest::Approx(9.0).epsilon(0.1));
    CHECK(var_of(c3_second) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(var_of(c4_first) == doctest::Approx(1.0).epsilon(0.1));
    for (const auto& col : {c1_first, c2_first, c3_first, c4_first})
        CHECK(std::abs(mean_of(col)) < 0.2);
}

TEST_CASE("heavy-tail scenario separates by tail, not location") {
    const ScenarioSampler t3(Scenario::Ex8, 4);
    const ScenarioSampler cauchy(Scenario::Ex8Cauchy, 4);
    std::mt19937_64 rng(61u);
    const std::size_t reps = 4000;

    auto light = draw_column(t3, 1, 0, reps, rng);
    CHECK(std::abs(mean_of(light)) < 0.1);
    CHECK(var_of(light) == doctest::Approx(3.0).epsilon(0.1));

    std::vector<double> t3_abs(reps), cauchy_abs(reps);
    std::vector<double> row(4);
    for (std::size_t i = 0; i < reps; ++i) {
        t3.draw(2, row, rng);
        t3_abs[i] = std::abs(row[0]);
        cauchy.draw(2, row, rng);
        cauchy_abs[i] = std::abs(row[0]);
        for (double v : row) CHECK(std::isfinite(v));
    }
    CHECK(median_of(t3_abs) == doctest::Approx(0.7649).epsilon(0.1));
    CHECK(median_of(cauchy_abs) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("null scenario is one uniform population") {
    CHECK(scenario_classes(Scenario::NullUniform) == 1);
    const ScenarioSampler sampler(Scenario::NullUniform, 5);
    std::mt19937_64 rng(67u);
    std::vector<double> row(5);
    std::vector<double> sums(5, 0.0);
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        sampler.draw(1, row, rng);
        for (std::size_t q = 0; q < 5; ++q) {
            CHECK(row[q] >= 0.0);
            CHECK(row[q] < 1.0);
            sums[q] += row[q];
        }
    }
    // each feature mean within five standard errors of 1/2
    const double se = std::sqrt(1.0 / 12.0 / reps);
    for (double sq : sums) CHECK(std::abs(sq / reps - 0.5) < 5.0 * se);
}

TEST_CASE("odd dimensions leave one free coordinate in paired scenarios") {
    CHECK(ScenarioSampler(Scenario::ExampleA, 6).notes().empty());
    CHECK_FALSE(ScenarioSampler(Scenario::ExampleA, 7).notes().empty());
    CHECK_FALSE(ScenarioSampler(Scenario::Ex4, 5).notes().empty());
    CHECK(ScenarioSampler(Scenario::Ex3, 5).notes().empty());

    const std::size_t d = 5;
    const ScenarioSampler sampler(Scenario::Ex4, d);
    std::mt19937_64 rng(71u);
    std::vector<double> row(d);
    std::vector<double> tail(1000);
    for (std::size_t i = 0; i < tail.size(); ++i) {
        sampler.draw(1, row, rng);
        for (int p = 0; p < 2; ++p) {
            const double x = row[2 * p], y = row[2 * p + 1];
            const double q = (x - 2.0) * (x - 2.0) + y * y;
            CHECK(q >= 1.0 - 1e-9);
            CHECK(q <= 2.25 + 1e-9);
        }
        tail[i] = row[d - 1];
    }
    CHECK(std::abs(mean_of(tail)) < 0.15);
    CHECK(var_of(tail) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("scenario names round-trip and class counts match") {
    for (Scenario s : scenario_catalog()) CHECK(scenario_from_name(scenario_name(s)) == s);
    CHECK_THROWS_AS(scenario_from_name("ex99"), std::invalid_argument);

    CHECK(scenario_classes(Scenario::ExampleA) == 2);
    CHECK(scenario_classes(Scenario::ExampleB) == 3);
    CHECK(scenario_classes(Scenario::Ex2) == 4);
    CHECK(scenario_classes(Scenario::Ex7) == 4);
    CHECK(scenario_true_k(Scenario::Ex6) == 2);
    CHECK(scenario_catalog().size() == 12);
}

TEST_CASE("scenario sampling is deterministic and shaped by the spec") {
    const ScenarioSpec spec = ScenarioSpec::uniform(Scenario::Ex3, 20, 5, 42u);
    const LabeledSample first = sample_scenario(spec);
    const LabeledSample second = sample_scenario(spec);

    CHECK(first.data.rows() == 15);
    CHECK(first.data.cols() == 20);
    REQUIRE(first.labels.size() == 15);
    for (std::size_t i = 0; i < 15; ++i) CHECK(first.labels[i] == static_cast<int>(i / 5) + 1);

    bool identical = true;
    for (std::size_t i = 0; i < 15 && identical; ++i)
        for (std::size_t q = 0; q < 20; ++q)
            if (first.data(i, q) != second.data(i, q)) {
                identical = false;
                break;
            }
    CHECK(identical);

    ScenarioSpec other = spec;
    other.seed = 43u;
    const LabeledSample third = sample_scenario(other);
    bool differs = false;
    for (std::size_t i = 0; i < 15 && !differs; ++i)
        for (std::size_t q = 0; q < 20; ++q)
            if (first.data(i, q) != third.data(i, q)) {
                differs = true;
                break;
            }
    CHECK(differs);

    SUBCASE("ragged class sizes are laid out in order") {
        ScenarioSpec ragged;
        ragged.scenario = Scenario::Ex6;
        ragged.d = 8;
        ragged.class_sizes = {2, 4};
        ragged.seed = 9u;
        const LabeledSample s = sample_scenario(ragged);
        CHECK(s.data.rows() == 6);
        CHECK(s.labels == std::vector<int>{1, 1, 2, 2, 2, 2});
    }
    SUBCASE("bad specs are rejected") {
        ScenarioSpec bad = spec;
        bad.class_sizes = {5, 5};
        CHECK_THROWS_AS(sample_scenario(bad), std::invalid_argument);
        bad = spec;
        bad.class_sizes = {5, 5, 1};
        CHECK_THROWS_AS(sample_scenario(bad), std::invalid_argument);
        bad = spec;
        bad.d = 1;
        CHECK_THROWS_AS(sample_scenario(bad), std::invalid_argument);
    }
}

TEST_CASE("sampler rejects out-of-range classes and shapes") {
    const ScenarioSampler sampler(Scenario::Ex1, 10);
    std::mt19937_64 rng(1u);
    std::vector<double> row(10), wrong(9);
    CHECK_THROWS_AS(sampler.draw(0, row, rng), std::invalid_argument);
    CHECK_THROWS_AS(sampler.draw(4, row, rng), std::invalid_argument);
    CHECK_THROWS_AS(sampler.draw(1, wrong, rng), std::invalid_argument);
    CHECK_THROWS_AS(ScenarioSampler(Scenario::Ex1, 1), std::invalid_argument);
}
