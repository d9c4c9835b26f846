#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ric/dataset.hpp"
#include "ric/oracle.hpp"
#include "synthetic.hpp"

using nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

class TmpDir {
  public:
    TmpDir() {
        char tmpl[] = "/tmp/ric_cli_XXXXXX";
        dir_ = mkdtemp(tmpl);
    }
    std::string path(const std::string& name) const { return dir_ + "/" + name; }

  private:
    std::string dir_;
};

// Runs the CLI through the shell, capturing exit code and both streams.
RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const std::string base = "/tmp/ric_cli_io_" + std::to_string(++counter);
    std::string cmd;
    if (!env.empty()) cmd += "env " + env + " ";
    cmd += std::string(RIC_CLI_PATH) + " " + args + " > " + base + ".out 2> " + base + ".err";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(base + ".out");
    r.err = slurp(base + ".err");
    std::remove((base + ".out").c_str());
    std::remove((base + ".err").c_str());
    return r;
}

std::vector<ordered_json> parse_jsonl(const std::string& text) {
    std::vector<ordered_json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(ordered_json::parse(line));
    }
    return out;
}

const char* kToyCsv =
    "a,b,class\n"
    "0,0,p\n"
    "0,1,p\n"
    "0,0,p\n"
    "1,0,p\n"
    "0,0,n\n"
    "1,1,n\n"
    "0,1,n\n"
    "1,0,n\n";

std::string ttt_args(const TmpDir& td, const std::string& extra) {
    return "mine --input " + std::string(test_support::ttt_path()) + " --label-col class " +
           extra + " --output " + td.path("rules.jsonl");
}

}  // namespace

TEST_CASE("queue-mode mining writes capped rule lists and a manifest") {
    TmpDir td;
    const RunResult r =
        run_cli(ttt_args(td, "--chains 300 --seed 6 --threads 2"));
    REQUIRE(r.exit_code == 0);

    const auto rules = parse_jsonl(slurp(td.path("rules.jsonl")));
    REQUIRE(!rules.empty());
    std::map<std::string, int> per_class;
    for (const auto& rule : rules) {
        per_class[rule.at("class").get<std::string>()]++;
        CHECK(rule.contains("items"));
        CHECK(rule.contains("freq"));
        CHECK(rule.at("confidence").get<double>() >= 0.0);
        CHECK(rule.at("confidence").get<double>() <= 1.0);
        CHECK(rule.contains("support_estimate"));
        CHECK(rule.at("freq").contains("positive"));
        CHECK(rule.at("freq").contains("negative"));
        for (const auto& item : rule.at("items")) {
            CHECK(item.contains("feature"));
            CHECK(item.contains("value"));
        }
    }
    for (const auto& [cls, n] : per_class) CHECK(n <= 10);

    const ordered_json man = ordered_json::parse(slurp(td.path("rules.jsonl.manifest.json")));
    CHECK(man.at("command") == "mine");
    CHECK(man.at("mode") == "queue");
    CHECK(man.at("seed").get<uint64_t>() == 6);
    CHECK(man.at("seed_source") == "flag");
    CHECK(man.at("chains").get<uint64_t>() == 300);
    CHECK(man.at("rows").get<std::size_t>() == 958);
    CHECK(man.at("rules_written").get<std::size_t>() == rules.size());
    CHECK(man.at("dataset_hash").get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(!man.at("kernel").get<std::string>().empty());
}

TEST_CASE("same flags and seed give byte-identical rule files") {
    TmpDir a, b;
    REQUIRE(run_cli(ttt_args(a, "--chains 200 --seed 42")).exit_code == 0);
    REQUIRE(run_cli(ttt_args(b, "--chains 200 --seed 42 --threads 4")).exit_code == 0);
    const std::string ra = slurp(a.path("rules.jsonl"));
    REQUIRE(!ra.empty());
    CHECK(ra == slurp(b.path("rules.jsonl")));

    TmpDir c;
    REQUIRE(run_cli(ttt_args(c, "--chains 200 --seed 43")).exit_code == 0);
    CHECK(ra != slurp(c.path("rules.jsonl")));
}

TEST_CASE("omitted seed is drawn and the manifest re-runs the result") {
    TmpDir a;
    REQUIRE(run_cli(ttt_args(a, "--chains 60")).exit_code == 0);
    const ordered_json man = ordered_json::parse(slurp(a.path("rules.jsonl.manifest.json")));
    CHECK(man.at("seed_source") == "drawn");

    TmpDir b;
    const std::string replay = "--chains " + std::to_string(man.at("chains").get<uint64_t>()) +
                               " --seed " + std::to_string(man.at("seed").get<uint64_t>());
    REQUIRE(run_cli(ttt_args(b, replay)).exit_code == 0);
    CHECK(slurp(a.path("rules.jsonl")) == slurp(b.path("rules.jsonl")));
}

TEST_CASE("usage and data errors use distinct exit codes") {
    TmpDir td;
    CHECK(run_cli("mine --label-col class").exit_code == 2);
    CHECK(run_cli(ttt_args(td, "--xi 0.5")).exit_code == 2);
    CHECK(run_cli(ttt_args(td, "--mode naive --dfreq 100")).exit_code == 2);
    CHECK(run_cli(ttt_args(td, "--mode naive --dconf 5")).exit_code == 2);
    CHECK(run_cli("totally-unknown-subcommand").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("mine --help").exit_code == 0);

    const RunResult bad_combo = run_cli(ttt_args(td, "--xi 0.5"));
    CHECK(bad_combo.err.find("naive mode only") != std::string::npos);

    CHECK(run_cli("mine --input /nonexistent.csv --label-col class --output " +
                  td.path("x.jsonl"))
              .exit_code == 1);

    spit(td.path("bad.csv"), "a,b\n1\n");
    CHECK(run_cli("mine --input " + td.path("bad.csv") + " --label-col b --output " +
                  td.path("x.jsonl"))
              .exit_code == 1);

    spit(td.path("toy.csv"), kToyCsv);
    CHECK(run_cli("mine --input " + td.path("toy.csv") + " --label-col nope --output " +
                  td.path("x.jsonl"))
              .exit_code == 1);
    CHECK(run_cli("mine --input " + td.path("toy.csv") + " --label-col class --bin-numeric a: "
                  "--output " + td.path("x.jsonl"))
              .exit_code == 1);
}

TEST_CASE("environment variables stand in for flags") {
    TmpDir td;
    const std::string env = "RIC_INPUT=" + std::string(test_support::ttt_path()) +
                            " RIC_LABEL_COL=class RIC_CHAINS=25 RIC_SEED=9 RIC_OUTPUT=" +
                            td.path("env_rules.jsonl");
    REQUIRE(run_cli("mine", env).exit_code == 0);
    const ordered_json man =
        ordered_json::parse(slurp(td.path("env_rules.jsonl.manifest.json")));
    CHECK(man.at("chains").get<uint64_t>() == 25);
    CHECK(man.at("seed").get<uint64_t>() == 9);
    CHECK(man.at("seed_source") == "flag");
}

TEST_CASE("params prints the planned pair") {
    const RunResult plain = run_cli("params --p1 0.5 --p2 0.1 --eta1 0.1 --eta2 0.1");
    CHECK(plain.exit_code == 0);
    CHECK(plain.out == "D_star=3\nM_star=18\n");

    const RunResult js = run_cli("params --p1 0.5 --p2 0.1 --eta1 0.1 --eta2 0.1 --json");
    CHECK(js.exit_code == 0);
    const ordered_json parsed = ordered_json::parse(js.out);
    CHECK(parsed.at("D_star").get<uint64_t>() == 3);
    CHECK(parsed.at("M_star").get<uint64_t>() == 18);

    const RunResult bad = run_cli("params --p1 0.1 --p2 0.5 --eta1 0.1 --eta2 0.1");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("p2 < p1") != std::string::npos);
}

TEST_CASE("verify reproduces exact columns for exact-valued rules") {
    TmpDir td;
    spit(td.path("toy.csv"), kToyCsv);
    const ric::EncodedDataset ds = ric::ingest_csv_text(kToyCsv, "class");

    auto make_rule = [&](const ric::Pattern& pat, const std::string& cls) {
        const uint32_t target = ds.class_code(cls);
        ordered_json items = ordered_json::array();
        for (const ric::Item& it : pat.items()) {
            items.push_back({{"feature", ds.feature_names[it.feature]},
                             {"value", ds.category_names[it.feature][it.code]}});
        }
        ordered_json freq = ordered_json::object();
        double support = 0.0;
        const ric::ClassPrior pri = ric::class_priors(ds);
        for (uint32_t c = 0; c < 2; ++c) {
            const double f = ric::exact_frequency(ds, pat, c);
            freq[ds.class_names[c]] = f;
            support += f * pri.priors[c];
        }
        return ordered_json{{"class", cls},
                            {"items", items},
                            {"freq", freq},
                            {"confidence", ric::exact_confidence(ds, pat, target)},
                            {"support_estimate", support}};
    };

    std::string lines;
    lines += make_rule(ric::Pattern::single(0, 0), "p").dump() + "\n";
    lines += make_rule(ric::Pattern({{0, 0}, {1, 0}}), "p").dump() + "\n";
    lines += make_rule(ric::Pattern::single(1, 1), "n").dump() + "\n";
    spit(td.path("exact.jsonl"), lines);

    const RunResult r = run_cli("verify --input " + td.path("toy.csv") +
                                " --label-col class --rules " + td.path("exact.jsonl"));
    REQUIRE(r.exit_code == 0);
    const ordered_json rep = ordered_json::parse(r.out);
    CHECK(rep.at("rules").get<int>() == 3);
    CHECK(rep.at("rmse_freq").get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.at("rmse_conf").get<double>() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.at("pearson_freq").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.at("pearson_conf").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.at("undefined_confidence").get<int>() == 0);
    REQUIRE(rep.at("per_rule").size() == 3);
    for (const auto& pr : rep.at("per_rule")) {
        CHECK(pr.at("est_freq").get<double>() ==
              doctest::Approx(pr.at("exact_freq").get<double>()).epsilon(1e-12));
        CHECK(pr.at("est_conf").get<double>() ==
              doctest::Approx(pr.at("exact_conf").get<double>()).epsilon(1e-12));
    }
}

TEST_CASE("verify handles empty rule files and mined output") {
    TmpDir td;
    spit(td.path("toy.csv"), kToyCsv);
    spit(td.path("none.jsonl"), "");
    const RunResult r = run_cli("verify --input " + td.path("toy.csv") +
                                " --label-col class --rules " + td.path("none.jsonl"));
    REQUIRE(r.exit_code == 0);
    const ordered_json rep = ordered_json::parse(r.out);
    CHECK(rep.at("rules").get<int>() == 0);
    CHECK(rep.at("rmse_freq").is_null());
    CHECK(rep.at("pearson_freq").is_null());

    REQUIRE(run_cli(ttt_args(td, "--chains 200 --seed 3")).exit_code == 0);
    const RunResult mined =
        run_cli("verify --input " + std::string(test_support::ttt_path()) +
                " --label-col class --rules " + td.path("rules.jsonl"));
    REQUIRE(mined.exit_code == 0);
    const ordered_json mrep = ordered_json::parse(mined.out);
    const auto n_rules = parse_jsonl(slurp(td.path("rules.jsonl"))).size();
    CHECK(mrep.at("rules").get<std::size_t>() == n_rules);
    CHECK(mrep.at("per_rule").size() == n_rules);

    spit(td.path("corrupt.jsonl"), "{not json\n");
    CHECK(run_cli("verify --input " + td.path("toy.csv") + " --label-col class --rules " +
                  td.path("corrupt.jsonl"))
              .exit_code == 1);
}

TEST_CASE("jaccard compares rule files keyed on class and pattern") {
    TmpDir td;
    const std::string rule_a =
        R"({"class":"p","items":[{"feature":"a","value":"0"},{"feature":"b","value":"1"}],"freq":{},"confidence":1.0,"support_estimate":0.1})";
    const std::string rule_a_reordered =
        R"({"class":"p","items":[{"feature":"b","value":"1"},{"feature":"a","value":"0"}],"freq":{},"confidence":0.9,"support_estimate":0.2})";
    const std::string rule_b =
        R"({"class":"n","items":[{"feature":"a","value":"0"},{"feature":"b","value":"1"}],"freq":{},"confidence":1.0,"support_estimate":0.1})";
    const std::string rule_c =
        R"({"class":"p","items":[{"feature":"a","value":"1"}],"freq":{},"confidence":0.5,"support_estimate":0.3})";

    spit(td.path("a.jsonl"), rule_a + "\n");
    spit(td.path("a2.jsonl"), rule_a_reordered + "\n");
    spit(td.path("b.jsonl"), rule_b + "\n");
    spit(td.path("ac.jsonl"), rule_a + "\n" + rule_c + "\n");
    spit(td.path("empty.jsonl"), "");

    auto jac = [&](const std::string& x, const std::string& y) {
        const RunResult r =
            run_cli("jaccard --rules-a " + td.path(x) + " --rules-b " + td.path(y));
        REQUIRE(r.exit_code == 0);
        return std::stod(r.out);
    };

    CHECK(jac("a.jsonl", "a.jsonl") == 1.0);
    CHECK(jac("a.jsonl", "a2.jsonl") == 1.0);
    CHECK(jac("a.jsonl", "b.jsonl") == 0.0);
    CHECK(jac("a.jsonl", "ac.jsonl") == 0.5);
    CHECK(jac("empty.jsonl", "empty.jsonl") == 1.0);
    CHECK(jac("a.jsonl", "empty.jsonl") == 0.0);
}

TEST_CASE("mined rule files agree with themselves across runs via jaccard") {
    TmpDir td;
    REQUIRE(run_cli(ttt_args(td, "--chains 150 --seed 8")).exit_code == 0);
    const std::string second = td.path("rules2.jsonl");
    REQUIRE(run_cli("mine --input " + std::string(test_support::ttt_path()) +
                    " --label-col class --chains 150 --seed 8 --output " + second)
                .exit_code == 0);
    const RunResult r = run_cli("jaccard --rules-a " + td.path("rules.jsonl") +
                                " --rules-b " + second);
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(r.out) == 1.0);
}

TEST_CASE("numeric binning and rare-category merging run end to end") {
    TmpDir td;
    std::string csv = "x,cat,class\n";
    for (int i = 1; i <= 8; ++i) {
        csv += std::to_string(i) + "," + (i <= 6 ? "common" : "rare" + std::to_string(i)) +
               "," + (i % 2 ? "u" : "v") + "\n";
    }
    spit(td.path("num.csv"), csv);
    const RunResult r = run_cli("mine --input " + td.path("num.csv") +
                                " --label-col class --bin-numeric x:4 --uncommon-threshold 2 "
                                "--chains 20 --seed 1 --output " + td.path("n.jsonl"));
    REQUIRE(r.exit_code == 0);
    const ordered_json man = ordered_json::parse(slurp(td.path("n.jsonl.manifest.json")));
    CHECK(man.at("bin_numeric").size() == 1);
    CHECK(man.at("bin_numeric")[0] == "x:4");
    CHECK(man.at("uncommon_threshold").get<uint32_t>() == 2);

    const auto rules = parse_jsonl(slurp(td.path("n.jsonl")));
    bool saw_bin = false;
    for (const auto& rule : rules) {
        for (const auto& item : rule.at("items")) {
            if (item.at("feature") == "x") {
                CHECK(item.at("value").get<std::string>().rfind("bin", 0) == 0);
                saw_bin = true;
            }
        }
    }
    CHECK(saw_bin);
}
