#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ric/estimator.hpp"
#include "ric/kernels.hpp"
#include "ric/miner.hpp"
#include "ric/oracle.hpp"

using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct IngestFlags {
    std::string input;
    std::string label_col;
    uint32_t uncommon_threshold = 0;
    std::vector<std::string> bin_numeric;  // "column:bins"
};

std::vector<ric::BinSpec> parse_bin_specs(const std::vector<std::string>& raw) {
    std::vector<ric::BinSpec> out;
    for (const std::string& s : raw) {
        const auto colon = s.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
            throw CLI::ValidationError("--bin-numeric expects column:bins, got '" + s + "'");
        }
        ric::BinSpec spec;
        spec.column = s.substr(0, colon);
        try {
            spec.n_bins = static_cast<uint32_t>(std::stoul(s.substr(colon + 1)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--bin-numeric expects a bin count in '" + s + "'");
        }
        out.push_back(std::move(spec));
    }
    return out;
}

ric::EncodedDataset load_dataset(const IngestFlags& in) {
    return ric::ingest_csv(in.input, in.label_col, in.uncommon_threshold,
                           parse_bin_specs(in.bin_numeric));
}

std::string hash_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[65536];
    while (f) {
        f.read(buf, sizeof(buf));
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << h;
    return os.str();
}

std::string pattern_names(const ric::EncodedDataset& ds, const ric::Pattern& p) {
    std::string out;
    for (const ric::Item& it : p.items()) {
        if (!out.empty()) out += ',';
        out += ds.feature_names[it.feature];
        out += '=';
        out += ds.category_names[it.feature][it.code];
    }
    return out;
}

ordered_json rule_to_json(const ric::EncodedDataset& ds, const ric::ScoredRule& r) {
    ordered_json items = ordered_json::array();
    for (const ric::Item& it : r.pattern.items()) {
        items.push_back({{"feature", ds.feature_names[it.feature]},
                         {"value", ds.category_names[it.feature][it.code]}});
    }
    ordered_json freq = ordered_json::object();
    for (std::size_t c = 0; c < r.freq_per_class.size(); ++c) {
        freq[ds.class_names[c]] = r.freq_per_class[c];
    }
    return ordered_json{{"class", ds.class_names[r.target_class]},
                        {"items", std::move(items)},
                        {"freq", std::move(freq)},
                        {"confidence", r.confidence},
                        {"support_estimate", r.support_estimate}};
}

std::vector<ordered_json> read_rules_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<ordered_json> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            rules.push_back(ordered_json::parse(line));
        } catch (const std::exception& e) {
            throw std::runtime_error("bad rule at " + path + ":" + std::to_string(line_no) +
                                     ": " + e.what());
        }
    }
    return rules;
}

// Dataset-free canonical key for a rule line: class plus items sorted by
// feature name.
std::pair<std::string, std::string> rule_key(const ordered_json& r) {
    std::vector<std::pair<std::string, std::string>> items;
    for (const auto& it : r.at("items")) {
        items.emplace_back(it.at("feature").get<std::string>(), it.at("value").get<std::string>());
    }
    std::sort(items.begin(), items.end());
    std::string key;
    for (const auto& [f, v] : items) {
        if (!key.empty()) key += ',';
        key += f;
        key += '=';
        key += v;
    }
    return {r.at("class").get<std::string>(), key};
}

int cmd_mine(const IngestFlags& ingest, ric::MinerConfig cfg, const std::string& mode,
             std::optional<uint64_t> seed_flag, const std::string& output) {
    cfg.mode = mode == "naive" ? ric::MineMode::naive : ric::MineMode::queue;
    std::string seed_source = "flag";
    if (seed_flag) {
        cfg.master_seed = *seed_flag;
    } else {
        std::random_device rd;
        cfg.master_seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
        seed_source = "drawn";
    }

    ric::EncodedDataset ds = load_dataset(ingest);
    ric::RuleSet rules = cfg.mode == ric::MineMode::naive ? ric::mine_naive(ds, cfg)
                                                          : ric::mine_queue(ds, cfg);

    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot open '" + output + "' for writing");
    std::size_t n_rules = 0;
    for (const ric::RuleList& list : rules) {
        for (const ric::ScoredRule& r : list) {
            out << rule_to_json(ds, r).dump() << '\n';
            ++n_rules;
        }
    }
    out.close();
    if (!out) throw std::runtime_error("writing '" + output + "' failed");

    ordered_json manifest{{"command", "mine"},
                          {"version", kVersion},
                          {"input", ingest.input},
                          {"dataset_hash", hash_file(ingest.input)},
                          {"rows", ds.n_rows()},
                          {"features", ds.p},
                          {"classes", ds.class_names},
                          {"label_col", ingest.label_col},
                          {"uncommon_threshold", ingest.uncommon_threshold},
                          {"bin_numeric", ingest.bin_numeric},
                          {"mode", mode},
                          {"chains", cfg.chains},
                          {"max_len", cfg.max_len},
                          {"max_order", cfg.k_stop},
                          {"dfreq", cfg.d_freq},
                          {"dconf", cfg.d_conf},
                          {"xi", cfg.xi},
                          {"seed", cfg.master_seed},
                          {"seed_source", seed_source},
                          {"threads", cfg.threads},
                          {"kernel", ric::active_kernel_name()},
                          {"rules_written", n_rules},
                          {"output", output}};
    const std::string mpath = output + ".manifest.json";
    std::ofstream mout(mpath);
    if (!mout) throw std::runtime_error("cannot open '" + mpath + "' for writing");
    mout << manifest.dump(2) << '\n';
    std::cerr << "wrote " << n_rules << " rules to " << output << "\n";
    return 0;
}

int cmd_params(double p1, double p2, double eta1, double eta2, bool as_json) {
    ric::PlanResult plan;
    try {
        plan = ric::plan_parameters({p1, p2, eta1, eta2});
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (as_json) {
        std::cout << ordered_json{{"D_star", plan.D_star}, {"M_star", plan.M_star}}.dump() << "\n";
    } else {
        std::cout << "D_star=" << plan.D_star << "\nM_star=" << plan.M_star << "\n";
    }
    return 0;
}

int cmd_verify(const IngestFlags& ingest, const std::string& rules_path) {
    ric::EncodedDataset ds = load_dataset(ingest);
    std::vector<ordered_json> raw = read_rules_file(rules_path);

    // Rebuild ScoredRules in dataset coordinates.
    ric::RuleSet rules(ds.class_names.size());
    for (const ordered_json& r : raw) {
        ric::ScoredRule sr;
        sr.target_class = ds.class_code(r.at("class").get<std::string>());
        std::vector<ric::Item> items;
        for (const auto& it : r.at("items")) {
            const uint32_t f = ds.feature_index(it.at("feature").get<std::string>());
            items.push_back({f, ds.category_code(f, it.at("value").get<std::string>())});
        }
        sr.pattern = ric::Pattern(std::move(items));
        sr.freq_per_class.assign(ds.class_names.size(), 0.0);
        for (const auto& [name, val] : r.at("freq").items()) {
            sr.freq_per_class[ds.class_code(name)] = val.get<double>();
        }
        sr.confidence = r.at("confidence").get<double>();
        sr.support_estimate = r.at("support_estimate").get<double>();
        rules[sr.target_class].push_back(std::move(sr));
    }

    ric::EvalReport rep = ric::evaluate(rules, ds);
    auto opt = [](const std::optional<double>& v) {
        return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    ordered_json per_rule = ordered_json::array();
    for (const ric::RuleCheck& chk : rep.rules) {
        per_rule.push_back(
            {{"class", ds.class_names[chk.rule->target_class]},
             {"pattern", pattern_names(ds, chk.rule->pattern)},
             {"est_freq", chk.rule->freq_per_class[chk.rule->target_class]},
             {"exact_freq", chk.exact_freq_target},
             {"est_conf", chk.rule->confidence},
             {"exact_conf", opt(chk.exact_conf)}});
    }
    ordered_json out{{"rules", rep.rules.size()},
                     {"rmse_freq", rep.rules.empty() ? ordered_json(nullptr)
                                                     : ordered_json(rep.rmse_freq)},
                     {"rmse_conf", opt(rep.rmse_conf)},
                     {"pearson_freq", opt(rep.pearson_freq)},
                     {"pearson_conf", opt(rep.pearson_conf)},
                     {"undefined_confidence", rep.undefined_conf_count},
                     {"per_rule", std::move(per_rule)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_jaccard(const std::string& path_a, const std::string& path_b) {
    std::set<std::pair<std::string, std::string>> sa, sb;
    for (const ordered_json& r : read_rules_file(path_a)) sa.insert(rule_key(r));
    for (const ordered_json& r : read_rules_file(path_b)) sb.insert(rule_key(r));
    double j = 1.0;
    if (!sa.empty() || !sb.empty()) {
        std::size_t both = 0;
        for (const auto& k : sa) both += sb.count(k);
        j = static_cast<double>(both) / static_cast<double>(sa.size() + sb.size() - both);
    }
    std::cout << ordered_json(j).dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interaction rule mining via random intersection chains"};
    app.require_subcommand(1);

    IngestFlags ingest;
    ric::MinerConfig cfg;
    std::string mode = "queue";
    std::string output = "rules.jsonl";
    std::optional<uint64_t> seed_flag;

    auto add_ingest = [&](CLI::App* sub) {
        sub->add_option("--input", ingest.input, "input csv path")
            ->required()
            ->envname("RIC_INPUT");
        sub->add_option("--label-col", ingest.label_col, "name of the label column")
            ->required()
            ->envname("RIC_LABEL_COL");
        sub->add_option("--uncommon-threshold", ingest.uncommon_threshold,
                        "merge categories seen fewer than this many times (0 = off)")
            ->envname("RIC_UNCOMMON_THRESHOLD");
        sub->add_option("--bin-numeric", ingest.bin_numeric,
                        "treat column as numeric, equal-frequency bins (column:bins)")
            ->envname("RIC_BIN_NUMERIC");
    };

    CLI::App* mine = app.add_subcommand("mine", "mine class-conditional interaction rules");
    add_ingest(mine);
    mine->add_option("--mode", mode, "queue or naive")
        ->check(CLI::IsMember({"queue", "naive"}))
        ->envname("RIC_MODE");
    mine->add_option("--chains", cfg.chains, "chains per class")->envname("RIC_CHAINS");
    mine->add_option("--max-len", cfg.max_len, "maximum chain length")->envname("RIC_MAX_LEN");
    mine->add_option("--max-order", cfg.k_stop,
                     "stop growing a chain once its tail has at most this many items")
        ->envname("RIC_MAX_ORDER");
    auto* dfreq_opt =
        mine->add_option("--dfreq", cfg.d_freq, "frequent-pattern queue size (queue mode)")
            ->envname("RIC_DFREQ");
    auto* dconf_opt =
        mine->add_option("--dconf", cfg.d_conf, "confident-rule queue size (queue mode)")
            ->envname("RIC_DCONF");
    auto* xi_opt = mine->add_option("--xi", cfg.xi, "confidence floor (naive mode)")
                       ->envname("RIC_XI");
    mine->add_option("--seed", seed_flag, "master seed; drawn at random when omitted")
        ->envname("RIC_SEED");
    mine->add_option("--threads", cfg.threads, "worker threads for chain generation")
        ->envname("RIC_THREADS");
    mine->add_option("--output", output, "rules file (jsonl)")->envname("RIC_OUTPUT");

    double p1 = 0, p2 = 0, eta1 = 0, eta2 = 0;
    bool params_json = false;
    CLI::App* params = app.add_subcommand("params", "plan chain length and count");
    params->add_option("--p1", p1, "frequency to retain")->required();
    params->add_option("--p2", p2, "frequency to reject")->required();
    params->add_option("--eta1", eta1, "acceptable miss rate for p1")->required();
    params->add_option("--eta2", eta2, "acceptable hit rate for p2")->required();
    params->add_flag("--json", params_json, "emit json");

    std::string rules_path;
    CLI::App* verify = app.add_subcommand("verify", "score a rules file against exact counts");
    add_ingest(verify);
    verify->add_option("--rules", rules_path, "rules file (jsonl)")->required();

    std::string rules_a, rules_b;
    CLI::App* jac = app.add_subcommand("jaccard", "overlap of two rule files");
    jac->add_option("--rules-a", rules_a, "first rules file")->required();
    jac->add_option("--rules-b", rules_b, "second rules file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (mine->parsed()) {
            if (mode == "queue" && xi_opt->count() > 0) {
                std::cerr << "error: --xi applies to naive mode only\n";
                return 2;
            }
            if (mode == "naive" && (dfreq_opt->count() > 0 || dconf_opt->count() > 0)) {
                std::cerr << "error: --dfreq/--dconf apply to queue mode only\n";
                return 2;
            }
            return cmd_mine(ingest, cfg, mode, seed_flag, output);
        }
        if (params->parsed()) return cmd_params(p1, p2, eta1, eta2, params_json);
        if (verify->parsed()) return cmd_verify(ingest, rules_path);
        if (jac->parsed()) return cmd_jaccard(rules_a, rules_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
