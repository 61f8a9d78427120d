#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maddclust/csv.hpp"
#include "maddclust/datagen.hpp"
#include "maddclust/estimators.hpp"
#include "maddclust/experiment.hpp"
#include "maddclust/rand_index.hpp"
#include "maddclust/sweep.hpp"

namespace {

using namespace maddclust;

std::optional<LabelColumn> parse_label_column(const std::string& raw) {
    if (raw.empty()) return std::nullopt;
    if (raw[0] == '#') return LabelColumn{static_cast<std::size_t>(std::stoul(raw.substr(1)))};
    return LabelColumn{raw};
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

std::string scenario_catalog_help() {
    std::string s = "one of:";
    for (Scenario scn : scenario_catalog()) s += " " + scenario_name(scn);
    return s;
}

int run(int argc, char** argv) {
    CLI::App app{"MADD-based clustering toolkit for high-dimension low-sample-size data"};
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Draw a labeled sample from a generator scenario");
    std::string sim_scn;
    std::size_t sim_d = 500, sim_n = 30;
    std::string sim_sizes;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    sim->add_option("--scenario", sim_scn, scenario_catalog_help())->required();
    sim->add_option("--d", sim_d, "feature dimension")->required();
    sim->add_option("--n", sim_n, "observations per class (default 30)");
    sim->add_option("--sizes", sim_sizes, "comma-separated per-class sizes (overrides --n)");
    sim->add_option("--seed", sim_seed, "generator seed (default 1)");
    sim->add_option("--out", sim_out, "output CSV path (features + label column)")->required();

    // ---- cluster ----
    auto* clu = app.add_subcommand("cluster", "Cluster a CSV dataset with one method at a fixed k");
    std::string clu_in, clu_label, clu_method = "avgl-rho0", clu_out;
    bool clu_no_header = false;
    int clu_k = 0;
    std::uint64_t clu_seed = 1;
    clu->add_option("--in", clu_in, "input CSV")->required();
    clu->add_flag("--no-header", clu_no_header, "input has no header row");
    clu->add_option("--label-col", clu_label, "ground-truth column: a name, or #index (0-based)");
    clu->add_option("--method", clu_method,
                    "family-distance, families avgl|single|complete|km|spect, "
                    "distances euclid|rho0|rho1|rho2");
    clu->add_option("--k", clu_k, "number of clusters (default: class count from --label-col)");
    clu->add_option("--seed", clu_seed, "seed for randomized methods (default 1)");
    clu->add_option("--out", clu_out, "write row,label CSV here");

    // ---- estimate-k ----
    auto* est = app.add_subcommand("estimate-k", "Estimate the number of clusters in a CSV dataset");
    std::string est_in, est_label, est_base = "avgl-rho0", est_list = "dunn,pd,kl,jump";
    bool est_no_header = false;
    int est_kcap = 12, est_gap_b = 100, est_cv_b = 100;
    double est_lambda = 0.015, est_jump_t = 1.0;
    std::uint64_t est_seed = 1;
    est->add_option("--in", est_in, "input CSV")->required();
    est->add_flag("--no-header", est_no_header, "input has no header row");
    est->add_option("--label-col", est_label, "column to strip before clustering");
    est->add_option("--base", est_base, "base algorithm, e.g. avgl-rho0 or km-euclid");
    est->add_option("--estimators", est_list, "comma list of dunn,pd,kl,gap,jump,cv");
    est->add_option("--k-cap", est_kcap, "largest k considered (default 12)");
    est->add_option("--gap-b", est_gap_b, "reference draws for gap (default 100)");
    est->add_option("--cv-b", est_cv_b, "split repetitions for cv (default 100)");
    est->add_option("--lambda", est_lambda, "penalty scale for pd (default 0.015)");
    est->add_option("--jump-t", est_jump_t, "transformation power for jump (default 1)");
    est->add_option("--seed", est_seed, "seed (default 1)");

    // ---- reproduce ----
    auto* rep = app.add_subcommand("reproduce", "Run a pre-canned simulation study");
    std::string rep_table, rep_scale = "desk", rep_out;
    std::size_t rep_threads = 0;
    std::uint64_t rep_seed = 1;
    rep->add_option("--table", rep_table, "fig2 | t1 | t2 | t3 | t4")->required();
    rep->add_option("--scale", rep_scale, "desk (default) or full");
    rep->add_option("--out", rep_out, "output directory")->required();
    rep->add_option("--threads", rep_threads, "worker threads (default: all cores)");
    rep->add_option("--seed", rep_seed, "base seed (default 1)");

    // ---- ingest ----
    auto* ing = app.add_subcommand("ingest", "Validate a CSV dataset and report its shape");
    std::string ing_in, ing_label, ing_out;
    bool ing_no_header = false;
    ing->add_option("--in", ing_in, "input CSV")->required();
    ing->add_flag("--no-header", ing_no_header, "input has no header row");
    ing->add_option("--label-col", ing_label, "label column: a name, or #index (0-based)");
    ing->add_option("--out", ing_out, "write a normalized copy here");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        Scenario scn = scenario_from_name(sim_scn);
        ScenarioSpec spec;
        if (sim_sizes.empty()) {
            spec = ScenarioSpec::uniform(scn, sim_d, sim_n, sim_seed);
        } else {
            spec.scenario = scn;
            spec.d = sim_d;
            spec.seed = sim_seed;
            for (const auto& tok : split_list(sim_sizes))
                spec.class_sizes.push_back(std::stoul(tok));
        }
        LabeledSample sample = sample_scenario(spec);
        write_data_csv(sim_out, sample.data, &sample.labels);
        std::cout << "wrote " << sample.data.rows() << " x " << sample.data.cols() << " sample ("
                  << scenario_classes(scn) << " classes) to " << sim_out << "\n";
        return 0;
    }

    if (clu->parsed()) {
        IngestResult in = ingest_csv(clu_in, !clu_no_header, parse_label_column(clu_label));
        int k = clu_k;
        if (k <= 0) {
            if (in.labels.empty())
                throw std::runtime_error("cluster: --k is required when no --label-col is given");
            k = static_cast<int>(in.label_names.size());
        }
        MethodSpec method = method_from_name(clu_method);
        FitResult fit = fit_method(in.data, method, k, clu_seed);
        std::cout << "method " << method.name() << ", n = " << in.data.rows()
                  << ", d = " << in.data.cols() << ", k = " << k << "\n";
        if (!std::isnan(fit.sigma)) std::cout << "spectral bandwidth sigma = " << fit.sigma << "\n";
        if (!in.labels.empty())
            std::cout << "rand index vs ground truth = " << rand_index(in.labels, fit.assignment.labels)
                      << " (0 = perfect)\n";
        auto sizes = fit.assignment.cluster_sizes();
        std::cout << "cluster sizes:";
        for (std::size_t s : sizes) std::cout << ' ' << s;
        std::cout << "\n";
        if (!clu_out.empty()) {
            std::ofstream out(clu_out);
            if (!out) throw std::runtime_error("cluster: cannot write '" + clu_out + "'");
            out << "row,label\n";
            for (std::size_t i = 0; i < fit.assignment.labels.size(); ++i)
                out << i << ',' << fit.assignment.labels[i] << '\n';
            std::cout << "wrote labels to " << clu_out << "\n";
        }
        return 0;
    }

    if (est->parsed()) {
        IngestResult in = ingest_csv(est_in, !est_no_header, parse_label_column(est_label));
        BaseAlgorithm base = base_algorithm_from_name(est_base);
        KSweep sweep = build_ksweep(in.data, base, est_kcap, est_seed);
        std::cout << "base " << base.name() << ", n = " << in.data.rows() << ", d = " << in.data.cols()
                  << ", k in 1.." << est_kcap << "\n";
        for (const auto& tok : split_list(est_list)) {
            std::vector<EstimatorReport> reports;
            if (tok == "dunn") {
                reports.push_back(dunn_select(sweep));
            } else if (tok == "pd") {
                PenaltySpec penalty;
                penalty.lambda = est_lambda;
                reports.push_back(pd_select(sweep, penalty));
            } else if (tok == "kl") {
                reports.push_back(kl_select(sweep));
            } else if (tok == "jump") {
                reports.push_back(jump_select(sweep, est_jump_t,
                                              base.uses_madd() ? JumpMode::Madd : JumpMode::Euclid));
            } else if (tok == "gap") {
                reports.push_back(gap_select(in.data, base, sweep, est_gap_b, est_seed));
            } else if (tok == "cv") {
                CvReports cv = cv_select(in.data, base, est_kcap, est_cv_b, est_seed);
                reports.push_back(cv.averaged);
                reports.push_back(cv.vote);
            } else {
                throw std::runtime_error("estimate-k: unknown estimator '" + tok + "'");
            }
            for (const auto& r : reports) {
                std::cout << "  " << r.estimator << ": k-hat = " << r.k_hat;
                if (!r.diagnostics.empty()) {
                    std::cout << " [";
                    for (std::size_t i = 0; i < r.diagnostics.size(); ++i)
                        std::cout << (i ? ";" : "") << r.diagnostics[i];
                    std::cout << "]";
                }
                std::cout << "\n";
            }
        }
        return 0;
    }

    if (rep->parsed()) {
        reproduce(rep_table, rep_scale, rep_out, rep_threads, rep_seed);
        std::cout << "wrote " << rep_table << " (" << rep_scale << ") results to " << rep_out << "\n";
        return 0;
    }

    if (ing->parsed()) {
        IngestResult in = ingest_csv(ing_in, !ing_no_header, parse_label_column(ing_label));
        std::cout << "ok: n = " << in.data.rows() << ", d = " << in.data.cols();
        if (!in.labels.empty()) std::cout << ", classes = " << in.label_names.size();
        std::cout << "\n";
        if (!ing_out.empty()) {
            write_data_csv(ing_out, in.data, in.labels.empty() ? nullptr : &in.labels);
            std::cout << "wrote normalized copy to " << ing_out << "\n";
        }
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
