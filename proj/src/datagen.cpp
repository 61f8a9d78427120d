#include "maddclust/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace maddclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logaddexp(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

void ar1_row(std::span<double> out, double phi, std::mt19937_64& rng) {
    std::normal_distribution<double> norm(0.0, 1.0);
    const double s = std::sqrt(1.0 - phi * phi);
    double prev = norm(rng);
    out[0] = prev;
    for (std::size_t q = 1; q < out.size(); ++q) {
        prev = phi * prev + s * norm(rng);
        out[q] = prev;
    }
}

void paired_block_row(std::span<double> out, double corr, std::mt19937_64& rng) {
    std::normal_distribution<double> norm(0.0, 1.0);
    const double s = std::sqrt(1.0 - corr * corr);
    const std::size_t d = out.size();
    const std::size_t pairs = d / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
        const double z1 = norm(rng), z2 = norm(rng);
        out[2 * p] = z1;
        out[2 * p + 1] = corr * z1 + s * z2;
    }
    if (d % 2 == 1) out[d - 1] = norm(rng); // unpaired trailing coordinate, unit variance
}

void diagonal_row(std::span<double> out, std::span<const double> variances, std::mt19937_64& rng) {
    std::normal_distribution<double> norm(0.0, 1.0);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] = std::sqrt(variances[q]) * norm(rng);
}

// Ex-7 per-coordinate variances; positions are 1-based in the definitions.
double ex7_variance(int cls, std::size_t q0, std::size_t d) {
    const std::size_t i = q0 + 1;
    switch (cls) {
        case 1: return i <= d / 2 ? 1.0 : 9.0;
        case 2: return i <= d / 2 ? 9.0 : 1.0;
        case 3: return i % 2 == 0 ? 1.0 : 9.0;
        case 4: return i % 2 == 0 ? 9.0 : 1.0;
        default: throw std::invalid_argument("ex7_variance: bad class");
    }
}

} // namespace

Scenario scenario_from_name(std::string_view name) {
    if (name == "example-a" || name == "a") return Scenario::ExampleA;
    if (name == "example-b" || name == "b") return Scenario::ExampleB;
    if (name == "ex1") return Scenario::Ex1;
    if (name == "ex2") return Scenario::Ex2;
    if (name == "ex3") return Scenario::Ex3;
    if (name == "ex4") return Scenario::Ex4;
    if (name == "ex5") return Scenario::Ex5;
    if (name == "ex6") return Scenario::Ex6;
    if (name == "ex7") return Scenario::Ex7;
    if (name == "ex8") return Scenario::Ex8;
    if (name == "ex8-cauchy") return Scenario::Ex8Cauchy;
    if (name == "null-uniform") return Scenario::NullUniform;
    throw std::invalid_argument("unknown scenario: " + std::string(name));
}

std::string scenario_name(Scenario scenario) {
    switch (scenario) {
        case Scenario::ExampleA: return "example-a";
        case Scenario::ExampleB: return "example-b";
        case Scenario::Ex1: return "ex1";
        case Scenario::Ex2: return "ex2";
        case Scenario::Ex3: return "ex3";
        case Scenario::Ex4: return "ex4";
        case Scenario::Ex5: return "ex5";
        case Scenario::Ex6: return "ex6";
        case Scenario::Ex7: return "ex7";
        case Scenario::Ex8: return "ex8";
        case Scenario::Ex8Cauchy: return "ex8-cauchy";
        case Scenario::NullUniform: return "null-uniform";
    }
    return "?";
}

std::size_t scenario_classes(Scenario scenario) {
    switch (scenario) {
        case Scenario::ExampleA: return 2;
        case Scenario::ExampleB: return 3;
        case Scenario::Ex1: return 3;
        case Scenario::Ex2: return 4;
        case Scenario::Ex3: return 3;
        case Scenario::Ex4: return 3;
        case Scenario::Ex5: return 2;
        case Scenario::Ex6: return 2;
        case Scenario::Ex7: return 4;
        case Scenario::Ex8: return 2;
        case Scenario::Ex8Cauchy: return 2;
        case Scenario::NullUniform: return 1;
    }
    return 0;
}

int scenario_true_k(Scenario scenario) { return static_cast<int>(scenario_classes(scenario)); }

const std::vector<Scenario>& scenario_catalog() {
    static const std::vector<Scenario> catalog = {
        Scenario::ExampleA, Scenario::ExampleB, Scenario::Ex1,       Scenario::Ex2,
        Scenario::Ex3,      Scenario::Ex4,      Scenario::Ex5,       Scenario::Ex6,
        Scenario::Ex7,      Scenario::Ex8,      Scenario::Ex8Cauchy, Scenario::NullUniform,
    };
    return catalog;
}

void ScenarioSpec::validate() const {
    if (d < 2) throw std::invalid_argument("ScenarioSpec: d must be >= 2");
    const std::size_t classes = scenario_classes(scenario);
    if (class_sizes.size() != classes)
        throw std::invalid_argument("ScenarioSpec: " + scenario_name(scenario) + " has " +
                                    std::to_string(classes) + " classes, got " +
                                    std::to_string(class_sizes.size()) + " sizes");
    for (std::size_t s : class_sizes)
        if (s < 2) throw std::invalid_argument("ScenarioSpec: each class needs at least 2 observations");
}

ScenarioSpec ScenarioSpec::uniform(Scenario scenario, std::size_t d, std::size_t per_class,
                                   std::uint64_t seed) {
    ScenarioSpec spec;
    spec.scenario = scenario;
    spec.d = d;
    spec.class_sizes.assign(scenario_classes(scenario), per_class);
    spec.seed = seed;
    return spec;
}

double shell_radius(double a, double b, std::size_t d, double u) {
    if (!(a >= 0.0) || !(a < b)) throw std::invalid_argument("shell_radius: needs 0 <= a < b");
    if (d < 1) throw std::invalid_argument("shell_radius: d must be >= 1");
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("shell_radius: u outside [0,1]");
    const double dd = static_cast<double>(d);
    const double log_ratio_d = a == 0.0 ? -kInf : dd * std::log(a / b);
    const double log_u = u == 0.0 ? -kInf : std::log(u);
    const double log_1mu = u == 1.0 ? -kInf : std::log1p(-u);
    const double val = logaddexp(log_u, log_ratio_d + log_1mu);
    if (val == -kInf) return a; // u = 0 with a = 0
    return b * std::exp(val / dd);
}

double shell_radius_mean_square(double a, double b, std::size_t d) {
    if (!(a >= 0.0) || !(a < b)) throw std::invalid_argument("shell_radius_mean_square: needs 0 <= a < b");
    if (d < 1) throw std::invalid_argument("shell_radius_mean_square: d must be >= 1");
    const double dd = static_cast<double>(d);
    const double ratio_d = a == 0.0 ? 0.0 : std::exp(dd * std::log(a / b));
    const double ratio_d2 = a == 0.0 ? 0.0 : std::exp((dd + 2.0) * std::log(a / b));
    return dd / (dd + 2.0) * b * b * (1.0 - ratio_d2) / (1.0 - ratio_d);
}

DataMatrix structured_gaussian(std::size_t n, std::size_t d, std::span<const double> mean,
                               const CovarianceModel& cov, double scale, std::mt19937_64& rng) {
    if (n == 0 || d == 0) throw std::invalid_argument("structured_gaussian: empty shape");
    if (!(scale > 0.0)) throw std::invalid_argument("structured_gaussian: scale must be positive");
    if (!mean.empty() && mean.size() != d)
        throw std::invalid_argument("structured_gaussian: mean length mismatch");
    switch (cov.kind) {
        case CovarianceModel::Kind::Ar1:
        case CovarianceModel::Kind::PairedBlock:
            if (!(std::abs(cov.param) < 1.0))
                throw std::invalid_argument("structured_gaussian: correlation parameter must lie in (-1,1)");
            break;
        case CovarianceModel::Kind::Diagonal:
            if (cov.variances.size() != d)
                throw std::invalid_argument("structured_gaussian: diagonal variance length mismatch");
            for (double v : cov.variances)
                if (!(v > 0.0))
                    throw std::invalid_argument("structured_gaussian: covariance not positive definite");
            break;
        case CovarianceModel::Kind::Identity:
            break;
    }

    DataMatrix out(n, d);
    const double sd = std::sqrt(scale);
    std::normal_distribution<double> norm(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = out.row(i);
        switch (cov.kind) {
            case CovarianceModel::Kind::Identity:
                for (std::size_t q = 0; q < d; ++q) row[q] = norm(rng);
                break;
            case CovarianceModel::Kind::Ar1:
                ar1_row(row, cov.param, rng);
                break;
            case CovarianceModel::Kind::PairedBlock:
                paired_block_row(row, cov.param, rng);
                break;
            case CovarianceModel::Kind::Diagonal:
                diagonal_row(row, cov.variances, rng);
                break;
        }
        for (std::size_t q = 0; q < d; ++q) {
            row[q] *= sd;
            if (!mean.empty()) row[q] += mean[q];
        }
    }
    return out;
}

void sphere_direction(std::span<double> out, std::mt19937_64& rng) {
    std::normal_distribution<double> norm(0.0, 1.0);
    double ss = 0.0;
    do {
        ss = 0.0;
        for (std::size_t q = 0; q < out.size(); ++q) {
            out[q] = norm(rng);
            ss += out[q] * out[q];
        }
    } while (ss == 0.0);
    const double inv = 1.0 / std::sqrt(ss);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] *= inv;
}

void ellipsoid_shell_row(std::span<double> out, int shell, double phi, std::mt19937_64& rng) {
    if (shell < 1 || shell > 3) throw std::invalid_argument("ellipsoid_shell_row: shell must be 1..3");
    const double a = std::sqrt(shell - 1.0);
    const double b = std::sqrt(shell - 0.5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    sphere_direction(out, rng);
    const double r = shell_radius(a, b, out.size(), unif(rng));
    for (std::size_t q = 0; q < out.size(); ++q) out[q] *= r;
    // apply the AR(1) Cholesky factor through its defining recursion
    const double s = std::sqrt(1.0 - phi * phi);
    for (std::size_t q = 1; q < out.size(); ++q) out[q] = phi * out[q - 1] + s * out[q];
}

double ar1_quadratic_form(std::span<const double> x, double phi) {
    if (x.empty()) throw std::invalid_argument("ar1_quadratic_form: empty vector");
    const double s = std::sqrt(1.0 - phi * phi);
    double total = x[0] * x[0];
    for (std::size_t q = 1; q < x.size(); ++q) {
        const double z = (x[q] - phi * x[q - 1]) / s;
        total += z * z;
    }
    return total;
}

void half_annulus_point(int which, double& x, double& y, std::mt19937_64& rng) {
    double cx = 0.0, r_lo = 4.0, r_hi = 4.5;
    bool upper = false;
    switch (which) {
        case 1: cx = 2.0; r_lo = 1.0; r_hi = 1.5; upper = true; break;
        case 2: cx = -2.0; r_lo = 1.0; r_hi = 1.5; upper = true; break;
        case 3: break;
        default: throw std::invalid_argument("half_annulus_point: region must be 1..3");
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double r = shell_radius(r_lo, r_hi, 2, unif(rng)); // area-uniform radius in 2-d
    const double pi = std::acos(-1.0);
    const double theta = upper ? pi * unif(rng) : pi + pi * unif(rng);
    x = cx + r * std::cos(theta);
    y = r * std::sin(theta);
}

void ball_uniform_row(std::span<double> out, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    sphere_direction(out, rng);
    const double r = shell_radius(0.0, 1.0, out.size(), unif(rng));
    for (std::size_t q = 0; q < out.size(); ++q) out[q] *= r;
}

void cube_uniform_row(std::span<double> out, std::mt19937_64& rng) {
    const double half = 1.0 / std::sqrt(static_cast<double>(out.size()));
    std::uniform_real_distribution<double> unif(-half, half);
    for (std::size_t q = 0; q < out.size(); ++q) out[q] = unif(rng);
}

void ar_process_row(std::span<double> out, int which, std::mt19937_64& rng) {
    double c = 0.0, phi = 0.0, v0 = 0.0;
    if (which == 1) {
        c = 0.75;
        phi = 0.25;
        v0 = 16.0 / 15.0;
    } else if (which == 2) {
        c = 0.25;
        phi = 0.75;
        v0 = 16.0 / 7.0;
    } else {
        throw std::invalid_argument("ar_process_row: process must be 1 or 2");
    }
    std::normal_distribution<double> norm(0.0, 1.0);
    double prev = 1.0 + std::sqrt(v0) * norm(rng); // stationary start
    for (std::size_t t = 0; t < out.size(); ++t) {
        prev = c + phi * prev + norm(rng);
        out[t] = prev;
    }
}

double heavy_tail_draw(HeavyTail kind, std::mt19937_64& rng) {
    for (;;) {
        double v = 0.0;
        if (kind == HeavyTail::T3) {
            std::student_t_distribution<double> t3(3.0);
            v = t3(rng);
        } else {
            std::cauchy_distribution<double> cauchy(0.0, 1.0);
            v = cauchy(rng);
        }
        if (std::isfinite(v)) return v;
    }
}

ScenarioSampler::ScenarioSampler(Scenario scenario, std::size_t d) : scenario_(scenario), d_(d) {
    if (d < 2) throw std::invalid_argument("ScenarioSampler: d must be >= 2");
    if (d % 2 == 1 && (scenario == Scenario::ExampleA || scenario == Scenario::Ex4))
        notes_.push_back(scenario_name(scenario) + ": odd d pairs only the first " +
                         std::to_string(d - 1) + " coordinates; the last is an unpaired unit-variance normal");
}

void ScenarioSampler::draw(int cls, std::span<double> out, std::mt19937_64& rng) const {
    if (out.size() != d_) throw std::invalid_argument("ScenarioSampler::draw: output span size mismatch");
    if (cls < 1 || static_cast<std::size_t>(cls) > num_classes())
        throw std::invalid_argument("ScenarioSampler::draw: class " + std::to_string(cls) + " outside 1.." +
                                    std::to_string(num_classes()));
    std::normal_distribution<double> norm(0.0, 1.0);
    std::uniform_real_distribution<double> unif01(0.0, 1.0);

    switch (scenario_) {
        case Scenario::ExampleA: {
            paired_block_row(out, 0.98, rng);
            const double sd = cls == 1 ? std::sqrt(0.5) : std::sqrt(2.0);
            for (std::size_t q = 0; q < d_; ++q) {
                out[q] *= sd;
                if (cls == 2) out[q] += (q % 2 == 0 ? 1.0 : -1.0); // (1, -1, 1, ...)
            }
            break;
        }
        case Scenario::ExampleB: {
            const double a = static_cast<double>(cls - 1);
            const double r = shell_radius(a, a + 0.5, d_, unif01(rng)) *
                             std::sqrt(static_cast<double>(d_));
            sphere_direction(out, rng);
            for (std::size_t q = 0; q < d_; ++q) out[q] *= r;
            break;
        }
        case Scenario::Ex1: {
            ar1_row(out, 0.5, rng);
            if (cls > 1) {
                const double shift = cls == 2 ? 0.75 : -0.75;
                for (std::size_t q = 0; q < d_ / 2; ++q) out[q] += shift;
            }
            break;
        }
        case Scenario::Ex2: {
            ar1_row(out, 0.5, rng);
            const double sd = (cls == 2 || cls == 4) ? 2.0 : 1.0; // scale 4 covariance
            const double sign = cls <= 2 ? 1.0 : -1.0;
            for (std::size_t q = 0; q < d_; ++q) {
                const std::size_t i = q + 1;
                const double alpha = i % 2 == 0 ? 1.0 : 0.5;
                const double mean_q = (cls == 1 || cls == 3)
                                          ? alpha
                                          : (i % 2 == 0 ? alpha : -alpha); // beta_i = (-1)^i alpha_i
                out[q] = sd * out[q] + sign * mean_q;
            }
            break;
        }
        case Scenario::Ex3:
            ellipsoid_shell_row(out, cls, 0.5, rng);
            break;
        case Scenario::Ex4: {
            const std::size_t pairs = d_ / 2;
            for (std::size_t p = 0; p < pairs; ++p)
                half_annulus_point(cls, out[2 * p], out[2 * p + 1], rng);
            if (d_ % 2 == 1) out[d_ - 1] = norm(rng);
            break;
        }
        case Scenario::Ex5:
            ar_process_row(out, cls, rng);
            break;
        case Scenario::Ex6:
            if (cls == 1)
                ball_uniform_row(out, rng);
            else
                cube_uniform_row(out, rng);
            break;
        case Scenario::Ex7:
            for (std::size_t q = 0; q < d_; ++q)
                out[q] = std::sqrt(ex7_variance(cls, q, d_)) * norm(rng);
            break;
        case Scenario::Ex8:
        case Scenario::Ex8Cauchy: {
            if (cls == 1) {
                const double sd = std::sqrt(3.0);
                for (std::size_t q = 0; q < d_; ++q) out[q] = sd * norm(rng);
            } else {
                const HeavyTail kind =
                    scenario_ == Scenario::Ex8 ? HeavyTail::T3 : HeavyTail::Cauchy;
                for (std::size_t q = 0; q < d_; ++q) out[q] = heavy_tail_draw(kind, rng);
            }
            break;
        }
        case Scenario::NullUniform:
            for (std::size_t q = 0; q < d_; ++q) out[q] = unif01(rng);
            break;
    }
}

LabeledSample sample_scenario(const ScenarioSpec& spec) {
    spec.validate();
    const ScenarioSampler sampler(spec.scenario, spec.d);
    std::size_t n = 0;
    for (std::size_t s : spec.class_sizes) n += s;

    LabeledSample sample;
    sample.data = DataMatrix(n, spec.d);
    sample.labels.reserve(n);
    auto engine = std::mt19937_64(spec.seed);
    std::size_t row = 0;
    for (std::size_t c = 0; c < spec.class_sizes.size(); ++c) {
        for (std::size_t i = 0; i < spec.class_sizes[c]; ++i, ++row) {
            sampler.draw(static_cast<int>(c) + 1, sample.data.row(row), engine);
            sample.labels.push_back(static_cast<int>(c) + 1);
        }
    }
    sample.data.ensure_finite();
    return sample;
}

} // namespace maddclust
