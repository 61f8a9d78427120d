#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "maddclust/csv.hpp"
#include "maddclust/experiment.hpp"
#include "maddclust/rand_index.hpp"
#include "maddclust/svg.hpp"

using namespace maddclust;
namespace fs = std::filesystem;

namespace {

// fresh scratch directory per test, removed on destruction
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("maddclust-test-" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string thrown_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

// two tight gaussian blobs, `per` points each
DataMatrix two_blobs(std::size_t per, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.05);
    DataMatrix data(2 * per, d);
    for (std::size_t i = 0; i < 2 * per; ++i)
        for (std::size_t q = 0; q < d; ++q) data(i, q) = (i < per ? 0.0 : 8.0) + gauss(rng);
    return data;
}

bool same_records(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        const bool sigma_same =
            (std::isnan(x.sigma) && std::isnan(y.sigma)) || x.sigma == y.sigma;
        if (x.scenario != y.scenario || x.d != y.d || x.trial != y.trial || x.seed != y.seed ||
            x.method != y.method || x.metric != y.metric || x.value != y.value || !sigma_same ||
            x.note != y.note)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("doubles survive a text round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -0.0, 2.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv ingestion maps labels and columns") {
    TempDir tmp("ingest");
    write_text(tmp.file("basic.csv"), "x,y,label\n1.5,2.5,a\n3,4,b\n5,6.25,a\n");

    const IngestResult by_name = ingest_csv(tmp.file("basic.csv"), true, LabelColumn{std::string("label")});
    CHECK(by_name.data.rows() == 3);
    CHECK(by_name.data.cols() == 2);
    CHECK(by_name.data(0, 0) == 1.5);
    CHECK(by_name.data(2, 1) == 6.25);
    CHECK(by_name.columns == std::vector<std::string>{"x", "y"});
    CHECK(by_name.labels == std::vector<int>{1, 2, 1});
    CHECK(by_name.label_names == std::vector<std::string>{"a", "b"});

    const IngestResult by_index = ingest_csv(tmp.file("basic.csv"), true, LabelColumn{std::size_t{2}});
    CHECK(by_index.labels == by_name.labels);
    CHECK(by_index.data(1, 0) == 3.0);

    SUBCASE("no label column keeps every numeric field") {
        write_text(tmp.file("plain.csv"), "a,b,c\n1,2,3\n4,5,6\n");
        const IngestResult all = ingest_csv(tmp.file("plain.csv"), true);
        CHECK(all.data.cols() == 3);
        CHECK(all.labels.empty());
        CHECK(all.data(1, 2) == 6.0);
    }
    SUBCASE("headerless files select labels by position") {
        write_text(tmp.file("raw.csv"), "1,2,0\n3,4,1\n5,6,0\n");
        const IngestResult raw = ingest_csv(tmp.file("raw.csv"), false, LabelColumn{std::size_t{2}});
        CHECK(raw.data.cols() == 2);
        CHECK(raw.labels == std::vector<int>{1, 2, 1});
        CHECK(raw.label_names == std::vector<std::string>{"0", "1"});
    }
}

TEST_CASE("csv ingestion honors quoting rules") {
    TempDir tmp("quotes");
    write_text(tmp.file("quoted.csv"),
               "\"x 1\",\"y,z\",label\n\"1.5\",2.5,\"cluster \"\"one\"\"\"\n3,4,\"multi\nline\"\n");
    const IngestResult r = ingest_csv(tmp.file("quoted.csv"), true, LabelColumn{std::string("label")});
    CHECK(r.columns == std::vector<std::string>{"x 1", "y,z"});
    CHECK(r.data(0, 0) == 1.5);
    CHECK(r.data(1, 1) == 4.0);
    REQUIRE(r.label_names.size() == 2);
    CHECK(r.label_names[0] == "cluster \"one\"");
    CHECK(r.label_names[1] == "multi\nline");
}

TEST_CASE("csv ingestion reports precise errors") {
    TempDir tmp("errors");

    // row numbers are physical file lines, header included
    write_text(tmp.file("ragged.csv"), "a,b\n1,2\n3\n");
    const std::string ragged =
        thrown_message([&] { ingest_csv(tmp.file("ragged.csv"), true); });
    CHECK(ragged.find("ragged row 3") != std::string::npos);
    CHECK(ragged.find("expected 2") != std::string::npos);

    write_text(tmp.file("alpha.csv"), "a,b\n1,2\n3,oops\n");
    const std::string alpha = thrown_message([&] { ingest_csv(tmp.file("alpha.csv"), true); });
    CHECK(alpha.find("row 3") != std::string::npos);
    CHECK(alpha.find("oops") != std::string::npos);

    write_text(tmp.file("ok.csv"), "a,b\n1,2\n");
    const std::string badname = thrown_message(
        [&] { ingest_csv(tmp.file("ok.csv"), true, LabelColumn{std::string("missing")}); });
    CHECK(badname.find("missing") != std::string::npos);
    CHECK_THROWS_AS(ingest_csv(tmp.file("ok.csv"), true, LabelColumn{std::size_t{7}}),
                    std::runtime_error);
    CHECK_THROWS_AS(ingest_csv(tmp.file("nope.csv"), true), std::runtime_error);
}

TEST_CASE("data csv writes are lossless through ingestion") {
    TempDir tmp("roundtrip");
    DataMatrix data(4, 3);
    std::mt19937_64 rng(5u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t q = 0; q < 3; ++q) data(i, q) = gauss(rng) / 3.0;
    const std::vector<int> labels = {1, 2, 1, 2};

    write_data_csv(tmp.file("data.csv"), data, &labels);
    const IngestResult back = ingest_csv(tmp.file("data.csv"), true, LabelColumn{std::string("label")});
    REQUIRE(back.data.rows() == 4);
    REQUIRE(back.data.cols() == 3);
    CHECK(back.columns == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(back.labels == labels);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t q = 0; q < 3; ++q) CHECK(back.data(i, q) == data(i, q));

    SUBCASE("unlabeled variant omits the label column") {
        write_data_csv(tmp.file("plain.csv"), data);
        const IngestResult plain = ingest_csv(tmp.file("plain.csv"), true);
        CHECK(plain.data.cols() == 3);
        CHECK(plain.labels.empty());
    }
}

TEST_CASE("method names round-trip across every family and geometry") {
    for (const char* name :
         {"avgl-rho0", "avgl-rho1", "avgl-rho2", "avgl-euclid", "single-rho0", "single-euclid",
          "complete-rho2", "km-rho0", "km-rho1", "km-euclid", "spect-rho0", "spect-euclid"}) {
        CHECK(method_from_name(name).name() == name);
    }
    CHECK(method_from_name("spect-rho0").family == MethodSpec::Family::Spectral);
    CHECK_FALSE(method_from_name("km-euclid").madd.has_value());
    CHECK_THROWS_AS(method_from_name("spectral"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_name("fancy-rho0"), std::invalid_argument);
    CHECK_THROWS_AS(method_from_name("avgl-rho7"), std::invalid_argument);
}

TEST_CASE("single-method fits separate clean blobs") {
    const DataMatrix data = two_blobs(8, 6, 3u);
    std::vector<int> truth(16, 1);
    std::fill(truth.begin() + 8, truth.end(), 2);

    for (const char* name : {"avgl-rho0", "km-euclid", "spect-rho0", "km-rho1"}) {
        const FitResult fit = fit_method(data, method_from_name(name), 2, 7u);
        CHECK(fit.assignment.k == 2);
        CHECK(rand_index(fit.assignment.labels, truth) == 0.0);
        if (std::string(name).rfind("spect", 0) == 0) {
            CHECK(std::isfinite(fit.sigma));
            CHECK(fit.sigma > 0.0);
        } else {
            CHECK(std::isnan(fit.sigma));
        }
    }
}

TEST_CASE("trial records survive the csv round-trip") {
    TempDir tmp("trials");
    std::vector<TrialRecord> records;
    records.push_back({"ex3", 500, 1, 42u, "avgl-rho0", "rand", 0.25,
                       std::numeric_limits<double>::quiet_NaN(), ""});
    records.push_back({"ex3", 500, 2, 43u, "spect-rho0", "rand", 0.0, 0.8125, ""});
    records.push_back({"ex3", 500, 2, 43u, "avgl-rho0:gap", "k-hat", 3.0,
                       std::numeric_limits<double>::quiet_NaN(), "no-crossing;boundary-selection"});

    write_trial_csv(tmp.file("trials.csv"), records);
    const auto back = read_trial_csv(tmp.file("trials.csv"));
    CHECK(same_records(records, back));

    CHECK_THROWS_AS(read_trial_csv(tmp.file("absent.csv")), std::runtime_error);
    write_text(tmp.file("short.csv"), "scenario,d\n");
    CHECK(read_trial_csv(tmp.file("short.csv")).empty());
    write_text(tmp.file("bad.csv"), "h\nonly,two\n");
    CHECK_THROWS_AS(read_trial_csv(tmp.file("bad.csv")), std::runtime_error);
}

TEST_CASE("summary json groups by dimension, method and metric") {
    ExperimentMeta meta;
    meta.source = "ex6";
    meta.classes = 2;
    meta.per_class = 5;
    meta.reps = 2;
    meta.base_seed = 9;
    meta.dims = {20};
    meta.k_cap = 4;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<TrialRecord> records = {
        {"ex6", 20, 1, 9u, "avgl-rho1", "rand", 0.25, nan, ""},
        {"ex6", 20, 2, 10u, "avgl-rho1", "rand", 0.15, 0.5, ""},
        {"ex6", 20, 1, 9u, "avgl-rho1:kl", "k-hat", 2.0, nan, ""},
        {"ex6", 20, 2, 10u, "avgl-rho1:kl", "k-hat", 3.0, nan, ""},
        {"ex6", 20, 3, 11u, "avgl-rho1:kl", "k-hat", 3.0, nan, ""},
        {"ex6", 20, 4, 12u, "avgl-rho1:kl", "k-hat", 2.0, nan, ""},
    };
    const std::string text = build_summary_json(meta, records);
    const auto j = nlohmann::json::parse(text);

    CHECK(j["schema_version"] == 1);
    CHECK(j["source"] == "ex6");
    CHECK(j["dims"][0] == 20);
    REQUIRE(j["results"].size() == 2);

    const auto& rand_group = j["results"][0];
    CHECK(rand_group["method"] == "avgl-rho1");
    CHECK(rand_group["metric"] == "rand");
    CHECK(rand_group["trials"] == 2);
    CHECK(rand_group["mean"] == doctest::Approx(0.2));
    CHECK(rand_group["min"] == doctest::Approx(0.15));
    CHECK(rand_group["max"] == doctest::Approx(0.25));
    CHECK(rand_group["sigma_mean"] == doctest::Approx(0.5));

    const auto& khat_group = j["results"][1];
    CHECK(khat_group["metric"] == "k-hat");
    CHECK(khat_group["trials"] == 4);
    CHECK(khat_group["mode"] == 2); // tied frequencies resolve to the smaller k
    CHECK(khat_group["freq"]["2"] == 2);
    CHECK(khat_group["freq"]["3"] == 2);
}

TEST_CASE("experiments rerun byte-identically and verify their own summaries") {
    TempDir tmp1("exp1");
    TempDir tmp2("exp2");

    ExperimentConfig cfg;
    cfg.scenario = Scenario::Ex6;
    cfg.dims = {20};
    cfg.per_class = 5;
    cfg.reps = 3;
    cfg.base_seed = 7;
    cfg.methods = {method_from_name("avgl-rho1"), method_from_name("km-euclid")};
    cfg.estimator_bases = {base_algorithm_from_name("avgl-rho1")};
    cfg.estimators = {"dunn", "kl"};
    cfg.k_cap = 4;
    cfg.out_dir = tmp1.file("");
    cfg.write_svg = true;
    cfg.title = "smoke";

    const SummaryReport first = run_experiment(cfg);
    cfg.out_dir = tmp2.file("");
    const SummaryReport second = run_experiment(cfg);

    const std::string trials1 = read_text(tmp1.file("trials.csv"));
    CHECK(trials1 == read_text(tmp2.file("trials.csv")));
    const std::string summary1 = read_text(tmp1.file("summary.json"));
    CHECK(summary1 == read_text(tmp2.file("summary.json")));
    CHECK(summary1 == first.summary_json);
    CHECK(same_records(first.records, second.records));

    // rand for 2 methods + k-hat for 2 estimators, per trial
    CHECK(first.records.size() == 3 * 4);

    // the summary is a pure function of the trial rows on disk
    const auto reread = read_trial_csv(tmp1.file("trials.csv"));
    CHECK(build_summary_json(first.meta, reread) == summary1);

    const std::string svg = read_text(tmp1.file("plot.svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("avgl-rho1") != std::string::npos);
    CHECK(svg.find("smoke") != std::string::npos);

    for (const auto& r : first.records) {
        CHECK(r.scenario == "ex6");
        CHECK(r.d == 20);
        CHECK(r.seed == 7 + r.trial - 1);
        if (r.metric == "rand") {
            CHECK(r.value >= 0.0);
            CHECK(r.value <= 1.0);
        } else {
            CHECK(r.metric == "k-hat");
            CHECK(r.method.find(':') != std::string::npos);
            CHECK(r.value >= 1.0);
            CHECK(r.value <= 4.0);
            CHECK(r.value == std::floor(r.value));
        }
    }

    SUBCASE("thread count does not change the records") {
        ExperimentConfig threaded = cfg;
        threaded.out_dir.clear();
        threaded.threads = 3;
        CHECK(same_records(run_experiment(threaded).records, first.records));
    }
}

TEST_CASE("adding trials extends the record stream without disturbing it") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::Ex6;
    cfg.dims = {16};
    cfg.per_class = 5;
    cfg.reps = 2;
    cfg.base_seed = 21;
    cfg.methods = {method_from_name("avgl-rho1")};

    const auto short_run = run_experiment(cfg).records;
    cfg.reps = 5;
    const auto long_run = run_experiment(cfg).records;
    REQUIRE(short_run.size() == 2);
    REQUIRE(long_run.size() == 5);
    CHECK(same_records(short_run, {long_run.begin(), long_run.begin() + 2}));

    SUBCASE("method order does not perturb per-method results") {
        ExperimentConfig more = cfg;
        more.methods = {method_from_name("km-euclid"), method_from_name("avgl-rho1")};
        const auto mixed = run_experiment(more).records;
        std::vector<TrialRecord> only_avgl;
        for (const auto& r : mixed)
            if (r.method == "avgl-rho1") only_avgl.push_back(r);
        CHECK(same_records(only_avgl, long_run));
    }
}

TEST_CASE("csv input drives labeled scoring and unlabeled estimation") {
    TempDir tmp("csvin");
    const DataMatrix data = two_blobs(6, 4, 11u);
    std::vector<int> labels(12, 1);
    std::fill(labels.begin() + 6, labels.end(), 2);
    write_data_csv(tmp.file("blobs.csv"), data, &labels);

    ExperimentConfig cfg;
    cfg.input_csv = tmp.file("blobs.csv");
    cfg.label_column = LabelColumn{std::string("label")};
    cfg.reps = 2;
    cfg.methods = {method_from_name("avgl-rho0")};
    const SummaryReport report = run_experiment(cfg);
    CHECK(report.meta.source == "csv:" + tmp.file("blobs.csv"));
    CHECK(report.meta.classes == 2);
    REQUIRE(report.records.size() == 2);
    for (const auto& r : report.records) {
        CHECK(r.value == 0.0); // clean blobs, exact recovery
        CHECK(r.d == 4);
    }

    SUBCASE("estimators work without labels") {
        ExperimentConfig est;
        est.input_csv = tmp.file("blobs.csv");
        est.label_column = LabelColumn{std::string("label")};
        est.reps = 1;
        est.estimator_bases = {base_algorithm_from_name("avgl-rho0")};
        est.estimators = {"dunn"};
        est.k_cap = 4;
        const auto records = run_experiment(est).records;
        REQUIRE(records.size() == 1);
        CHECK(records[0].method == "avgl-rho0:dunn");
        CHECK(records[0].value == 2.0);
    }
    SUBCASE("rand scoring without labels is rejected") {
        write_data_csv(tmp.file("plain.csv"), data);
        ExperimentConfig bad;
        bad.input_csv = tmp.file("plain.csv");
        bad.methods = {method_from_name("avgl-rho0")};
        bad.fit_k = 2;
        CHECK_THROWS_AS(run_experiment(bad), std::runtime_error);
    }
}

TEST_CASE("experiment configs reject contradictions") {
    ExperimentConfig cfg;
    cfg.methods = {method_from_name("avgl-rho0")};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument); // no source

    cfg.scenario = Scenario::Ex1;
    cfg.input_csv = "also.csv";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument); // two sources
    cfg.input_csv.clear();
    cfg.validate();

    SUBCASE("counts must be positive") {
        cfg.reps = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("dimensions and class sizes have floors") {
        cfg.dims = {};
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.dims = {1};
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.dims = {10};
        cfg.per_class = 1;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("estimator tokens are vetted") {
        cfg.estimator_bases = {base_algorithm_from_name("avgl-rho0")};
        cfg.estimators = {"dunn", "bogus"};
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.estimators = {"dunn"};
        cfg.k_cap = 1;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("estimators without a base are meaningless") {
        cfg.methods.clear();
        cfg.estimators = {"dunn"};
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("an empty work list is rejected") {
        cfg.methods.clear();
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("line plots render every series with escaped text") {
    PlotSpec spec;
    spec.title = "a<b & c";
    spec.series.push_back({"first", {1.0, 2.0, 3.0}, {0.1, 0.2, 0.3}});
    spec.series.push_back({"second", {1.0, 2.0, 3.0}, {0.3, 0.2, 0.1}});
    const std::string svg = render_line_plot(spec);

    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("a&lt;b &amp; c") != std::string::npos);
    CHECK(svg.find("first") != std::string::npos);
    CHECK(svg.find("second") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1))
        ++polylines;
    CHECK(polylines == 2);

    TempDir tmp("svg");
    write_line_plot(tmp.file("plot.svg"), spec);
    CHECK(read_text(tmp.file("plot.svg")) == svg);
}

TEST_CASE("reproduce rejects unknown studies and scales") {
    TempDir tmp("repro");
    CHECK_THROWS_AS(reproduce("t9", "desk", tmp.file("")), std::invalid_argument);
    CHECK_THROWS_AS(reproduce("fig2", "huge", tmp.file("")), std::invalid_argument);
}
