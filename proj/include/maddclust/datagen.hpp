#ifndef MADDCLUST_DATAGEN_HPP
#define MADDCLUST_DATAGEN_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maddclust/types.hpp"

namespace maddclust {

/// The simulation catalog. ExampleA/ExampleB are the two location-scale
/// illustrations; Ex1..Ex8 the numbered benchmark suites; Ex8Cauchy swaps the
/// heavy-tailed class of Ex8 for a Cauchy; NullUniform is a single uniform
/// population for null calibration.
enum class Scenario {
    ExampleA,
    ExampleB,
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex6,
    Ex7,
    Ex8,
    Ex8Cauchy,
    NullUniform,
};

Scenario scenario_from_name(std::string_view name);
std::string scenario_name(Scenario scenario);
std::size_t scenario_classes(Scenario scenario);
int scenario_true_k(Scenario scenario);
const std::vector<Scenario>& scenario_catalog();

struct ScenarioSpec {
    Scenario scenario = Scenario::Ex1;
    std::size_t d = 500;
    std::vector<std::size_t> class_sizes; // one entry per class, each >= 2
    std::uint64_t seed = 1;

    void validate() const;

    /// Uniform class sizes, e.g. desk(scn, 500, 30, seed).
    static ScenarioSpec uniform(Scenario scenario, std::size_t d, std::size_t per_class,
                                std::uint64_t seed);
};

/// Inverse-CDF radius for the uniform distribution on the spherical shell
/// {a <= r <= b} in d dimensions: r = b (u + (1-u)(a/b)^d)^{1/d}, evaluated
/// in log space so d in the thousands cannot overflow.
double shell_radius(double a, double b, std::size_t d, double u);

/// Closed-form E[R^2] of that radius: (d/(d+2)) (b^{d+2}-a^{d+2})/(b^d-a^d).
double shell_radius_mean_square(double a, double b, std::size_t d);

/// Gaussian covariance structures used by the catalog. Sampling is exact:
/// the AR(1) factor is applied through its defining recursion and the paired
/// blocks through their 2x2 Cholesky factors.
struct CovarianceModel {
    enum class Kind { Identity, Ar1, PairedBlock, Diagonal };
    Kind kind = Kind::Identity;
    double param = 0.0;            // Ar1 coefficient or block correlation
    std::vector<double> variances; // Diagonal only, length d

    static CovarianceModel identity() { return {}; }
    static CovarianceModel ar1(double phi) { return {Kind::Ar1, phi, {}}; }
    static CovarianceModel paired_block(double corr) { return {Kind::PairedBlock, corr, {}}; }
    static CovarianceModel diagonal(std::vector<double> v) {
        return {Kind::Diagonal, 0.0, std::move(v)};
    }
};

/// n draws from N(mean, scale * Cov). An empty mean means zero.
DataMatrix structured_gaussian(std::size_t n, std::size_t d, std::span<const double> mean,
                               const CovarianceModel& cov, double scale, std::mt19937_64& rng);

/// Uniform direction on the unit sphere in out.size() dimensions.
void sphere_direction(std::span<double> out, std::mt19937_64& rng);

/// One draw uniform on {x : shell - 1 <= x' (Sigma_ar1)^{-1} x <= shell - 1/2},
/// shell in {1,2,3}; Sigma is the AR(1) matrix with coefficient phi.
void ellipsoid_shell_row(std::span<double> out, int shell, double phi, std::mt19937_64& rng);

/// x' Sigma^{-1} x for the AR(1) covariance, via the inverse recursion.
double ar1_quadratic_form(std::span<const double> x, double phi);

/// One point uniform on half-annulus `which`: 1 = center (2,0) radii [1,1.5]
/// upper half, 2 = center (-2,0) radii [1,1.5] upper half, 3 = center (0,0)
/// radii [4,4.5] lower half.
void half_annulus_point(int which, double& x, double& y, std::mt19937_64& rng);

/// Uniform draw from the solid unit ball.
void ball_uniform_row(std::span<double> out, std::mt19937_64& rng);

/// Uniform draw from the largest hypercube inscribed in the unit ball
/// (half-side 1/sqrt(d)).
void cube_uniform_row(std::span<double> out, std::mt19937_64& rng);

/// Stationary AR path X(1..d): which = 1 is X(t) = 0.75 + 0.25 X(t-1) + e_t
/// with X(0) ~ N(1, 16/15); which = 2 is X(t) = 0.25 + 0.75 X(t-1) + e_t with
/// X(0) ~ N(1, 16/7); e_t ~ N(0,1).
void ar_process_row(std::span<double> out, int which, std::mt19937_64& rng);

enum class HeavyTail { T3, Cauchy };
/// One finite draw from the heavy-tailed family (t with 3 df, or Cauchy).
double heavy_tail_draw(HeavyTail kind, std::mt19937_64& rng);

/// Streaming per-class access to a scenario's populations; sample_scenario is
/// built on this, and Monte-Carlo checks can draw pairs without materializing
/// a sample.
class ScenarioSampler {
public:
    ScenarioSampler(Scenario scenario, std::size_t d);

    Scenario scenario() const { return scenario_; }
    std::size_t num_classes() const { return scenario_classes(scenario_); }
    std::size_t dim() const { return d_; }
    const std::vector<std::string>& notes() const { return notes_; }

    /// One observation from class cls (1-based) into out (size dim()).
    void draw(int cls, std::span<double> out, std::mt19937_64& rng) const;

private:
    Scenario scenario_;
    std::size_t d_;
    std::vector<std::string> notes_;
};

/// Deterministic sample of the whole scenario: classes are emitted in order,
/// class_sizes[c] rows each, labels 1-based.
LabeledSample sample_scenario(const ScenarioSpec& spec);

} // namespace maddclust

#endif
