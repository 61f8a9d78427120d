#include "maddclust/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "maddclust/hierarchy.hpp"
#include "maddclust/rand_index.hpp"
#include "maddclust/rng.hpp"
#include "maddclust/spectral.hpp"
#include "maddclust/svg.hpp"

namespace maddclust {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Stable string hash used to derive per-method seed streams, so a method's
// randomness does not depend on its position in the config.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (!failed.load()) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Per-trial cache so methods sharing a geometry reuse one matrix.
class TrialMatrices {
  public:
    explicit TrialMatrices(const DataMatrix& data) : data_(data) {}

    const DissimilarityMatrix& euclid() {
        if (!euclid_) euclid_ = euclidean_distance_matrix(data_);
        return *euclid_;
    }

    const DissimilarityMatrix& rho(const TransformSpec& t) {
        const std::string key = t.name();
        for (const auto& [k, m] : rho_)
            if (k == key) return m;
        rho_.emplace_back(key, madd_matrix(base_distance_matrix(data_, t)));
        return rho_.back().second;
    }

    const DissimilarityMatrix& for_method(const MethodSpec& m) {
        return m.madd ? rho(*m.madd) : euclid();
    }

  private:
    const DataMatrix& data_;
    std::optional<DissimilarityMatrix> euclid_;
    std::vector<std::pair<std::string, DissimilarityMatrix>> rho_;
};

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

FitResult fit_method_cached(TrialMatrices& mats, const DataMatrix& X, const MethodSpec& m, int k,
                            std::uint64_t seed) {
    FitResult out;
    switch (m.family) {
        case MethodSpec::Family::AverageLinkage:
            out.assignment = cut(agglomerate(mats.for_method(m), Linkage::Average), k);
            break;
        case MethodSpec::Family::SingleLinkage:
            out.assignment = cut(agglomerate(mats.for_method(m), Linkage::Single), k);
            break;
        case MethodSpec::Family::CompleteLinkage:
            out.assignment = cut(agglomerate(mats.for_method(m), Linkage::Complete), k);
            break;
        case MethodSpec::Family::KMeans: {
            KMeansConfig kc;
            kc.k = k;
            kc.seed = seed;
            out.assignment = m.madd ? kmeans_madd(mats.rho(*m.madd), kc) : kmeans_euclid(X, kc);
            break;
        }
        case MethodSpec::Family::Spectral: {
            SpectralConfig sc;
            sc.k = k;
            sc.embed.seed = seed;
            SpectralResult res = spectral(mats.for_method(m), sc);
            out.assignment = std::move(res.assignment);
            out.sigma = res.sigma;
            break;
        }
    }
    return out;
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, const std::string& source,
                                   std::size_t d, std::size_t trial, std::uint64_t trial_seed,
                                   const DataMatrix& X, const std::vector<int>& truth, int true_k) {
    std::vector<TrialRecord> records;
    TrialMatrices mats(X);

    for (const auto& m : cfg.methods) {
        const std::string name = m.name();
        const std::uint64_t mseed = rng::derive_seed(trial_seed, fnv1a(name));
        FitResult fit = fit_method_cached(mats, X, m, true_k, mseed);
        TrialRecord rec{source, d,      trial,
                        trial_seed,     name, "rand",
                        rand_index(truth, fit.assignment.labels), fit.sigma, ""};
        records.push_back(std::move(rec));
    }

    for (const auto& base : cfg.estimator_bases) {
        const std::string bname = base.name();
        KSweep sweep = build_ksweep(X, base, cfg.k_cap,
                                    rng::derive_seed(trial_seed, fnv1a(bname + ":sweep")));
        for (const auto& tok : cfg.estimators) {
            std::vector<EstimatorReport> reports;
            if (tok == "dunn") {
                reports.push_back(dunn_select(sweep));
            } else if (tok == "pd") {
                reports.push_back(pd_select(sweep, cfg.penalty));
            } else if (tok == "kl") {
                reports.push_back(kl_select(sweep));
            } else if (tok == "jump") {
                reports.push_back(jump_select(sweep, cfg.jump_t,
                                              base.uses_madd() ? JumpMode::Madd : JumpMode::Euclid));
            } else if (tok == "gap") {
                reports.push_back(gap_select(X, base, sweep, cfg.gap_repeats,
                                             rng::derive_seed(trial_seed, fnv1a(bname + ":gap"))));
            } else if (tok == "cv") {
                CvReports cv = cv_select(X, base, cfg.k_cap, cfg.cv_repeats,
                                         rng::derive_seed(trial_seed, fnv1a(bname + ":cv")));
                reports.push_back(std::move(cv.averaged));
                reports.push_back(std::move(cv.vote));
            } else {
                throw std::invalid_argument("experiment: unknown estimator '" + tok + "'");
            }
            for (auto& r : reports) {
                TrialRecord rec{source,
                                d,
                                trial,
                                trial_seed,
                                bname + ":" + r.estimator,
                                "k-hat",
                                static_cast<double>(r.k_hat),
                                std::numeric_limits<double>::quiet_NaN(),
                                join(r.diagnostics, ';')};
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

}  // namespace

std::string MethodSpec::name() const {
    std::string fam;
    switch (family) {
        case Family::AverageLinkage: fam = "avgl"; break;
        case Family::SingleLinkage: fam = "single"; break;
        case Family::CompleteLinkage: fam = "complete"; break;
        case Family::KMeans: fam = "km"; break;
        case Family::Spectral: fam = "spect"; break;
    }
    return fam + "-" + (madd ? madd->name() : std::string("euclid"));
}

FitResult fit_method(const DataMatrix& data, const MethodSpec& method, int k, std::uint64_t seed) {
    TrialMatrices mats(data);
    return fit_method_cached(mats, data, method, k, seed);
}

MethodSpec method_from_name(const std::string& name) {
    auto dash = name.rfind('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == name.size()) {
        throw std::invalid_argument("method: expected <family>-<distance>, got '" + name + "'");
    }
    const std::string fam = name.substr(0, dash);
    const std::string dist = name.substr(dash + 1);
    MethodSpec spec;
    if (fam == "avgl") spec.family = MethodSpec::Family::AverageLinkage;
    else if (fam == "single") spec.family = MethodSpec::Family::SingleLinkage;
    else if (fam == "complete") spec.family = MethodSpec::Family::CompleteLinkage;
    else if (fam == "km") spec.family = MethodSpec::Family::KMeans;
    else if (fam == "spect") spec.family = MethodSpec::Family::Spectral;
    else throw std::invalid_argument("method: unknown family '" + fam + "'");
    if (dist == "euclid") spec.madd.reset();
    else spec.madd = transform_from_name(dist);
    return spec;
}

void ExperimentConfig::validate() const {
    if (!scenario && input_csv.empty())
        throw std::invalid_argument("experiment: need a scenario or an input csv");
    if (scenario && !input_csv.empty())
        throw std::invalid_argument("experiment: scenario and input csv are mutually exclusive");
    if (reps == 0) throw std::invalid_argument("experiment: reps must be positive");
    if (scenario) {
        if (dims.empty()) throw std::invalid_argument("experiment: no dimensions requested");
        for (std::size_t d : dims)
            if (d < 2) throw std::invalid_argument("experiment: dimensions must be at least 2");
        if (per_class < 2) throw std::invalid_argument("experiment: per-class size must be at least 2");
    }
    if (methods.empty() && estimators.empty())
        throw std::invalid_argument("experiment: nothing to run (no methods, no estimators)");
    if (!estimators.empty() && estimator_bases.empty())
        throw std::invalid_argument("experiment: estimators need at least one base algorithm");
    if (k_cap < 2) throw std::invalid_argument("experiment: k_cap must be at least 2");
    static const std::set<std::string> known{"dunn", "pd", "kl", "gap", "jump", "cv"};
    for (const auto& tok : estimators)
        if (!known.count(tok)) throw std::invalid_argument("experiment: unknown estimator '" + tok + "'");
}

void write_trial_csv(const std::string& path, const std::vector<TrialRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("experiment: cannot write '" + path + "'");
    out << "scenario,d,trial,seed,method,metric,value,sigma,note\n";
    for (const auto& r : records) {
        out << r.scenario << ',' << r.d << ',' << r.trial << ',' << r.seed << ',' << r.method << ','
            << r.metric << ',' << format_double(r.value) << ',';
        if (!std::isnan(r.sigma)) out << format_double(r.sigma);
        out << ',' << r.note << '\n';
    }
    if (!out) throw std::runtime_error("experiment: write failed for '" + path + "'");
}

std::vector<TrialRecord> read_trial_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("experiment: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("experiment: '" + path + "' is empty");
    std::vector<TrialRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.push_back("");
        if (f.size() != 9) {
            throw std::runtime_error("experiment: '" + path + "' line " + std::to_string(line_no) +
                                     " has " + std::to_string(f.size()) + " fields, expected 9");
        }
        TrialRecord r;
        r.scenario = f[0];
        r.d = std::stoull(f[1]);
        r.trial = std::stoull(f[2]);
        r.seed = std::stoull(f[3]);
        r.method = f[4];
        r.metric = f[5];
        r.value = std::stod(f[6]);
        r.sigma = f[7].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[7]);
        r.note = f[8];
        records.push_back(std::move(r));
    }
    return records;
}

std::string build_summary_json(const ExperimentMeta& meta, const std::vector<TrialRecord>& records) {
    ordered_json root;
    root["schema_version"] = 1;
    root["source"] = meta.source;
    root["classes"] = meta.classes;
    root["per_class"] = meta.per_class;
    root["reps"] = meta.reps;
    root["base_seed"] = meta.base_seed;
    root["dims"] = meta.dims;
    root["k_cap"] = meta.k_cap;

    struct Group {
        std::size_t d;
        std::string method;
        std::string metric;
        std::vector<double> values;
        std::vector<double> sigmas;
    };
    std::vector<Group> groups;
    auto find_group = [&](const TrialRecord& r) -> Group& {
        for (auto& g : groups)
            if (g.d == r.d && g.method == r.method && g.metric == r.metric) return g;
        groups.push_back(Group{r.d, r.method, r.metric, {}, {}});
        return groups.back();
    };
    for (const auto& r : records) {
        Group& g = find_group(r);
        g.values.push_back(r.value);
        if (!std::isnan(r.sigma)) g.sigmas.push_back(r.sigma);
    }

    ordered_json results = ordered_json::array();
    for (const auto& g : groups) {
        ordered_json item;
        item["d"] = g.d;
        item["method"] = g.method;
        item["metric"] = g.metric;
        item["trials"] = g.values.size();
        if (g.metric == "k-hat") {
            std::map<long long, int> freq;
            for (double v : g.values) freq[static_cast<long long>(v)]++;
            long long mode = 0;
            int best = -1;
            ordered_json jfreq;
            for (const auto& [k, c] : freq) {
                jfreq[std::to_string(k)] = c;
                if (c > best) {
                    best = c;
                    mode = k;
                }
            }
            item["mode"] = mode;
            item["freq"] = jfreq;
        } else {
            double sum = 0;
            double lo = g.values.empty() ? 0.0 : g.values.front();
            double hi = lo;
            for (double v : g.values) {
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            item["mean"] = g.values.empty() ? 0.0 : sum / static_cast<double>(g.values.size());
            item["min"] = lo;
            item["max"] = hi;
        }
        if (!g.sigmas.empty()) {
            double s = 0;
            for (double v : g.sigmas) s += v;
            item["sigma_mean"] = s / static_cast<double>(g.sigmas.size());
        }
        results.push_back(std::move(item));
    }
    root["results"] = std::move(results);
    return root.dump(2) + "\n";
}

SummaryReport run_experiment(const ExperimentConfig& config) {
    config.validate();

    ExperimentMeta meta;
    std::optional<IngestResult> loaded;
    std::vector<std::size_t> dims;
    std::size_t classes = 0;

    if (config.scenario) {
        meta.source = scenario_name(*config.scenario);
        classes = scenario_classes(*config.scenario);
        dims = config.dims;
        meta.per_class = config.per_class;
    } else {
        loaded = ingest_csv(config.input_csv, config.input_has_header, config.label_column);
        meta.source = "csv:" + config.input_csv;
        dims = {loaded->data.cols()};
        if (!loaded->labels.empty()) {
            classes = std::set<int>(loaded->labels.begin(), loaded->labels.end()).size();
        }
        meta.per_class = 0;
    }
    const int true_k = config.fit_k ? *config.fit_k : static_cast<int>(classes);
    if (!config.methods.empty()) {
        if (true_k < 1)
            throw std::runtime_error("experiment: clustering methods need a class count (labels or fit_k)");
        if (!config.scenario && loaded->labels.empty())
            throw std::runtime_error("experiment: Rand scoring needs ground-truth labels in the input csv");
    }
    meta.classes = classes;
    meta.reps = config.reps;
    meta.base_seed = config.base_seed;
    meta.dims = dims;
    meta.k_cap = config.k_cap;

    const std::size_t tasks = dims.size() * config.reps;
    std::vector<std::vector<TrialRecord>> per_task(tasks);
    parallel_for(tasks, config.threads, [&](std::size_t ti) {
        const std::size_t d_idx = ti / config.reps;
        const std::size_t trial = ti % config.reps + 1;
        const std::uint64_t tseed = config.base_seed + trial - 1;
        if (config.scenario) {
            LabeledSample sample = sample_scenario(
                ScenarioSpec::uniform(*config.scenario, dims[d_idx], config.per_class, tseed));
            per_task[ti] = run_trial(config, meta.source, dims[d_idx], trial, tseed, sample.data,
                                     sample.labels, true_k);
        } else {
            per_task[ti] = run_trial(config, meta.source, dims[d_idx], trial, tseed, loaded->data,
                                     loaded->labels, true_k);
        }
    });

    SummaryReport report;
    report.meta = meta;
    for (auto& part : per_task)
        for (auto& rec : part) report.records.push_back(std::move(rec));
    report.summary_json = build_summary_json(meta, report.records);

    if (!config.out_dir.empty()) {
        fs::create_directories(config.out_dir);
        const std::string trials_path = (fs::path(config.out_dir) / "trials.csv").string();
        write_trial_csv(trials_path, report.records);
        {
            std::ofstream out(fs::path(config.out_dir) / "summary.json");
            if (!out) throw std::runtime_error("experiment: cannot write summary.json in " + config.out_dir);
            out << report.summary_json;
        }
        // Writing must be lossless: the summary rebuilt from the trial file
        // has to match what we just computed in memory.
        if (build_summary_json(meta, read_trial_csv(trials_path)) != report.summary_json)
            throw std::runtime_error("experiment: summary.json does not match its trial records");

        if (config.write_svg) {
            PlotSpec plot;
            plot.title = config.title.empty() ? meta.source : config.title;
            std::vector<std::string> order;
            for (const auto& r : report.records) {
                if (r.metric != "rand") continue;
                if (std::find(order.begin(), order.end(), r.method) == order.end())
                    order.push_back(r.method);
            }
            for (const auto& name : order) {
                PlotSeries series;
                series.label = name;
                for (std::size_t d : dims) {
                    double sum = 0;
                    std::size_t cnt = 0;
                    for (const auto& r : report.records) {
                        if (r.metric == "rand" && r.method == name && r.d == d) {
                            sum += r.value;
                            ++cnt;
                        }
                    }
                    if (cnt) {
                        series.x.push_back(std::log2(static_cast<double>(d)));
                        series.y.push_back(sum / static_cast<double>(cnt));
                    }
                }
                plot.series.push_back(std::move(series));
            }
            write_line_plot((fs::path(config.out_dir) / "plot.svg").string(), plot);
        }
    }
    return report;
}

namespace {

std::vector<MethodSpec> methods_from_names(const std::vector<std::string>& names) {
    std::vector<MethodSpec> out;
    for (const auto& n : names) out.push_back(method_from_name(n));
    return out;
}

std::vector<BaseAlgorithm> bases_from_names(const std::vector<std::string>& names) {
    std::vector<BaseAlgorithm> out;
    for (const auto& n : names) out.push_back(base_algorithm_from_name(n));
    return out;
}

double group_mean(const std::vector<TrialRecord>& records, std::size_t d, const std::string& method,
                  const std::string& metric) {
    double sum = 0;
    std::size_t cnt = 0;
    for (const auto& r : records) {
        if (r.d == d && r.method == method && r.metric == metric) {
            sum += r.value;
            ++cnt;
        }
    }
    return cnt ? sum / static_cast<double>(cnt) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void reproduce(const std::string& table, const std::string& scale, const std::string& out_dir,
               std::size_t threads, std::uint64_t base_seed) {
    if (scale != "desk" && scale != "full")
        throw std::invalid_argument("reproduce: scale must be 'desk' or 'full', got '" + scale + "'");
    const bool full = scale == "full";
    const std::size_t per_class = full ? 50 : 30;
    const std::size_t reps = full ? 100 : 10;
    fs::create_directories(out_dir);

    auto base_config = [&](Scenario scn) {
        ExperimentConfig cfg;
        cfg.scenario = scn;
        cfg.per_class = per_class;
        cfg.reps = reps;
        cfg.base_seed = base_seed;
        cfg.threads = threads;
        return cfg;
    };
    const std::vector<std::string> six{"avgl-euclid", "avgl-rho0", "km-euclid",
                                       "km-rho0",     "spect-euclid", "spect-rho0"};

    if (table == "fig2") {
        std::vector<std::size_t> dims;
        for (std::size_t d = 2; d <= 2048; d *= 2) dims.push_back(d);
        for (Scenario scn : {Scenario::ExampleA, Scenario::ExampleB}) {
            ExperimentConfig cfg = base_config(scn);
            cfg.dims = dims;
            cfg.methods = methods_from_names(six);
            cfg.out_dir = (fs::path(out_dir) / ("fig2-" + scenario_name(scn))).string();
            cfg.write_svg = true;
            cfg.title = scenario_name(scn) + ": mean Rand index vs dimension";
            run_experiment(cfg);
        }
        return;
    }

    if (table == "t1" || table == "t2") {
        const std::vector<Scenario> scns =
            table == "t1" ? std::vector<Scenario>{Scenario::Ex1, Scenario::Ex2, Scenario::Ex3,
                                                  Scenario::Ex4, Scenario::Ex5, Scenario::Ex6}
                          : std::vector<Scenario>{Scenario::Ex7, Scenario::Ex8};
        std::vector<std::string> names = six;
        if (table == "t2") {
            names = {"avgl-euclid", "avgl-rho0", "avgl-rho1", "avgl-rho2",
                     "km-euclid",   "km-rho0",   "km-rho1",   "km-rho2",
                     "spect-euclid", "spect-rho0", "spect-rho1", "spect-rho2"};
        }
        const std::vector<std::size_t> dims{100, 200, 500};
        std::ofstream combined(fs::path(out_dir) / (table + ".csv"));
        if (!combined) throw std::runtime_error("reproduce: cannot write " + table + ".csv in " + out_dir);
        combined << "example,d,method,mean_rand\n";
        for (Scenario scn : scns) {
            ExperimentConfig cfg = base_config(scn);
            cfg.dims = dims;
            cfg.methods = methods_from_names(names);
            cfg.out_dir = (fs::path(out_dir) / (table + "-" + scenario_name(scn))).string();
            SummaryReport rep = run_experiment(cfg);
            for (std::size_t d : dims)
                for (const auto& name : names)
                    combined << scenario_name(scn) << ',' << d << ',' << name << ','
                             << format_double(group_mean(rep.records, d, name, "rand")) << '\n';
        }
        return;
    }

    if (table == "t3" || table == "t4") {
        const std::vector<Scenario> scns =
            table == "t3" ? std::vector<Scenario>{Scenario::Ex1, Scenario::Ex2, Scenario::Ex3,
                                                  Scenario::Ex4, Scenario::Ex5, Scenario::Ex6}
                          : std::vector<Scenario>{Scenario::Ex7, Scenario::Ex8};
        const std::vector<std::string> bases =
            table == "t3" ? std::vector<std::string>{"avgl-rho0", "km-rho0"}
                          : std::vector<std::string>{"avgl-rho0", "avgl-rho1", "avgl-rho2",
                                                     "km-rho0", "km-rho1", "km-rho2"};
        const std::vector<std::string> estimators{"dunn", "pd", "kl", "gap", "jump", "cv"};
        const std::vector<std::string> row_tokens{"dunn", "pd", "kl", "gap", "jump", "cv-a", "cv-v"};
        std::ofstream combined(fs::path(out_dir) / (table + ".csv"));
        if (!combined) throw std::runtime_error("reproduce: cannot write " + table + ".csv in " + out_dir);
        combined << "example,base,estimator,k,count\n";
        for (Scenario scn : scns) {
            ExperimentConfig cfg = base_config(scn);
            cfg.dims = {500};
            cfg.estimator_bases = bases_from_names(bases);
            cfg.estimators = estimators;
            cfg.out_dir = (fs::path(out_dir) / (table + "-" + scenario_name(scn))).string();
            SummaryReport rep = run_experiment(cfg);
            for (const auto& bname : bases) {
                for (const auto& tok : row_tokens) {
                    std::map<int, int> freq;
                    for (const auto& r : rep.records)
                        if (r.metric == "k-hat" && r.method == bname + ":" + tok)
                            freq[static_cast<int>(r.value)]++;
                    for (int k = 1; k <= cfg.k_cap; ++k)
                        combined << scenario_name(scn) << ',' << bname << ',' << tok << ',' << k << ','
                                 << (freq.count(k) ? freq[k] : 0) << '\n';
                }
            }
        }
        return;
    }

    throw std::invalid_argument("reproduce: unknown table '" + table +
                                "' (expected fig2, t1, t2, t3 or t4)");
}

}  // namespace maddclust
