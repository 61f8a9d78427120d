#ifndef MADDCLUST_EXPERIMENT_HPP
#define MADDCLUST_EXPERIMENT_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "maddclust/csv.hpp"
#include "maddclust/datagen.hpp"
#include "maddclust/estimators.hpp"
#include "maddclust/sweep.hpp"
#include "maddclust/transform.hpp"

namespace maddclust {

/// One Rand-scored clustering method: a family plus the geometry it runs on
/// (a MADD transform, or plain Euclidean when `madd` is empty). Names look
/// like "avgl-rho0", "km-euclid", "spect-rho2".
struct MethodSpec {
    enum class Family { AverageLinkage, SingleLinkage, CompleteLinkage, KMeans, Spectral };
    Family family = Family::AverageLinkage;
    std::optional<TransformSpec> madd = TransformSpec::rho0();

    std::string name() const;
};
MethodSpec method_from_name(const std::string& name);

/// One fit of `method` at a fixed k. `sigma` is the spectral bandwidth when
/// the method used one, NaN otherwise.
struct FitResult {
    ClusterAssignment assignment;
    double sigma = std::numeric_limits<double>::quiet_NaN();
};
FitResult fit_method(const DataMatrix& data, const MethodSpec& method, int k, std::uint64_t seed);

struct ExperimentConfig {
    // Data source: either a generator scenario or an input CSV.
    std::optional<Scenario> scenario;
    std::string input_csv;
    bool input_has_header = true;
    std::optional<LabelColumn> label_column;

    std::vector<std::size_t> dims = {500}; // scenario mode only
    std::size_t per_class = 30;            // scenario mode only
    std::size_t reps = 10;
    std::uint64_t base_seed = 1;           // trial t (1-based) draws with seed base_seed + t - 1

    std::vector<MethodSpec> methods;       // scored by Rand index at the true k
    std::optional<int> fit_k;              // overrides the true k (required for unlabeled CSV input)

    std::vector<BaseAlgorithm> estimator_bases;
    std::vector<std::string> estimators;   // any of: dunn, pd, kl, gap, jump, cv
    int k_cap = 12;
    int gap_repeats = 100;
    int cv_repeats = 100;
    double jump_t = 1.0;
    PenaltySpec penalty;

    std::size_t threads = 0;               // 0 = all hardware threads
    std::string out_dir;                   // empty = no files, return records only
    bool write_svg = false;
    std::string title;

    void validate() const;
};

/// One scored quantity from one trial. `metric` is "rand" for clustering
/// accuracy (disagreement fraction, 0 = perfect) or "k-hat" for an estimated
/// cluster count; `sigma` carries the spectral bandwidth when the method used
/// one and NaN otherwise.
struct TrialRecord {
    std::string scenario;
    std::size_t d = 0;
    std::size_t trial = 0; // 1-based
    std::uint64_t seed = 0;
    std::string method;
    std::string metric;
    double value = 0.0;
    double sigma = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

struct ExperimentMeta {
    std::string source;      // scenario name, or "csv:<path>"
    std::size_t classes = 0; // ground-truth class count (0 when unknown)
    std::size_t per_class = 0;
    std::size_t reps = 0;
    std::uint64_t base_seed = 0;
    std::vector<std::size_t> dims;
    int k_cap = 12;
};

struct SummaryReport {
    ExperimentMeta meta;
    std::vector<TrialRecord> records;
    std::string summary_json; // exact bytes written to summary.json
};

/// Runs every (d, trial) task through all configured methods and estimators.
/// Tasks execute on a bounded worker pool (`threads`); records are gathered
/// in task order, so output is identical for any thread count. With a
/// non-empty out_dir writes trials.csv, summary.json and (optionally)
/// plot.svg, and verifies that the summary rebuilt from the written trial
/// rows matches byte for byte.
SummaryReport run_experiment(const ExperimentConfig& config);

std::vector<TrialRecord> read_trial_csv(const std::string& path);
void write_trial_csv(const std::string& path, const std::vector<TrialRecord>& records);
std::string build_summary_json(const ExperimentMeta& meta, const std::vector<TrialRecord>& records);

/// Pre-canned studies. `table` selects the study family:
///   fig2 - Example A/B accuracy curves over d = 2..2048 (writes SVG plots)
///   t1   - Examples 1-6 accuracy at d in {100,200,500}
///   t2   - Examples 7-8 accuracy with rho0/rho1/rho2 variants
///   t3   - Examples 1-6 cluster-count estimator frequencies at d = 500
///   t4   - Examples 7-8 cluster-count estimator frequencies at d = 500
/// `scale` is "desk" (30 per class, 10 trials) or "full" (50 per class, 100
/// trials; hours of compute). Emits per-study subdirectories under out_dir
/// plus a combined CSV named after the study.
void reproduce(const std::string& table, const std::string& scale, const std::string& out_dir,
               std::size_t threads = 0, std::uint64_t base_seed = 1);

} // namespace maddclust

#endif
