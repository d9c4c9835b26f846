#include "ric/miner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ric/estimator.hpp"
#include "ric/pqueue.hpp"

namespace ric {

namespace {

void check_common(const EncodedDataset& ds, const MinerConfig& cfg) {
    if (ds.class_names.empty()) throw std::runtime_error("dataset has no classes");
    if (cfg.chains == 0) throw std::invalid_argument("chains must be positive");
    if (cfg.max_len == 0) throw std::invalid_argument("max_len must be positive");
}

std::vector<ChainSet> build_chainsets(const EncodedDataset& ds, const MinerConfig& cfg) {
    std::vector<ChainSet> css;
    css.reserve(ds.class_names.size());
    for (uint32_t c = 0; c < ds.class_names.size(); ++c) {
        css.push_back(generate_chains(ds, c, cfg.chains, cfg.max_len, cfg.k_stop,
                                      cfg.master_seed, cfg.threads));
    }
    return css;
}

std::vector<double> all_class_freqs(const std::vector<std::unique_ptr<ChainFrequencySource>>& srcs,
                                    const Pattern& s) {
    std::vector<double> freqs(srcs.size());
    for (std::size_t c = 0; c < srcs.size(); ++c) freqs[c] = srcs[c]->frequency(s);
    return freqs;
}

double weighted_support(const std::vector<double>& freqs, const ClassPrior& priors) {
    double s = 0;
    for (std::size_t c = 0; c < freqs.size(); ++c) s += freqs[c] * priors.priors[c];
    return s;
}

}  // namespace

RuleSet mine_queue(const EncodedDataset& ds, const MinerConfig& cfg) {
    check_common(ds, cfg);
    const ClassPrior priors = class_priors(ds);
    const auto C = static_cast<uint32_t>(ds.class_names.size());

    std::vector<ChainSet> css = build_chainsets(ds, cfg);
    std::vector<std::unique_ptr<ChainFrequencySource>> srcs;
    for (uint32_t c = 0; c < C; ++c) srcs.push_back(std::make_unique<ChainFrequencySource>(css[c]));

    RuleSet out(C);
    for (uint32_t c = 0; c < C; ++c) {
        std::vector<Pattern> tails;
        tails.reserve(cfg.chains);
        for (uint64_t m = 0; m < cfg.chains; ++m) tails.push_back(css[c].tail(m));
        BoundedMaxQueue<Pattern> frequent = top_frequent_closure(tails, *srcs[c], cfg.d_freq);

        BoundedMaxQueue<Pattern> confident(cfg.d_conf);
        std::unordered_map<Pattern, std::vector<double>, PatternHash> freq_by_pattern;
        for (const auto& e : frequent.ordered()) {
            std::vector<double> freqs = all_class_freqs(srcs, e.value);
            double q = 0;
            try {
                q = confidence(freqs, priors, c);
            } catch (const std::domain_error&) {
                std::cerr << "warning: skipping pattern " << format_pattern(e.value)
                          << " for class '" << ds.class_names[c]
                          << "': confidence undefined (zero weighted frequency)\n";
                continue;
            }
            confident.insert(e.value, q);
            freq_by_pattern.emplace(e.value, std::move(freqs));
        }
        for (const auto& e : confident.ordered()) {
            const auto& freqs = freq_by_pattern.at(e.value);
            out[c].push_back({e.value, c, freqs, e.key, weighted_support(freqs, priors)});
        }
    }
    return out;
}

RuleSet mine_naive(const EncodedDataset& ds, const MinerConfig& cfg) {
    check_common(ds, cfg);
    if (cfg.xi < 0.0 || cfg.xi > 1.0) {
        throw std::invalid_argument("xi must lie in [0,1]");
    }
    const ClassPrior priors = class_priors(ds);
    const auto C = static_cast<uint32_t>(ds.class_names.size());

    std::vector<ChainSet> css = build_chainsets(ds, cfg);
    std::vector<std::unique_ptr<ChainFrequencySource>> srcs;
    for (uint32_t c = 0; c < C; ++c) srcs.push_back(std::make_unique<ChainFrequencySource>(css[c]));

    RuleSet out(C);
    for (uint32_t c = 0; c < C; ++c) {
        std::unordered_set<Pattern, PatternHash> seen;
        for (uint64_t m = 0; m < cfg.chains; ++m) {
            Pattern tail = css[c].tail(m);
            const auto n = tail.order();
            if (n > 20) {
                throw std::runtime_error(
                    "naive mode: a tail has " + std::to_string(n) +
                    " items, beyond the 20-item enumeration limit; rerun with mode=queue");
            }
            const auto& items = tail.items();
            for (uint32_t mask = 1; mask < (1u << n); ++mask) {
                std::vector<Item> sub;
                for (std::size_t i = 0; i < n; ++i) {
                    if (mask & (1u << i)) sub.push_back(items[i]);
                }
                seen.insert(Pattern(std::move(sub)));
            }
        }
        for (const Pattern& s : seen) {
            std::vector<double> freqs = all_class_freqs(srcs, s);
            double q = 0;
            try {
                q = confidence(freqs, priors, c);
            } catch (const std::domain_error&) {
                std::cerr << "warning: skipping pattern " << format_pattern(s) << " for class '"
                          << ds.class_names[c]
                          << "': confidence undefined (zero weighted frequency)\n";
                continue;
            }
            if (q >= cfg.xi) {
                out[c].push_back({s, c, freqs, q, weighted_support(freqs, priors)});
            }
        }
        std::sort(out[c].begin(), out[c].end(), [](const ScoredRule& x, const ScoredRule& y) {
            if (x.confidence != y.confidence) return x.confidence > y.confidence;
            return x.pattern < y.pattern;
        });
    }
    return out;
}

PlanResult plan_parameters(const PlanInputs& in) {
    if (!(in.p2 > 0.0) || !(in.p1 < 1.0) || !(in.p2 < in.p1)) {
        throw std::domain_error("plan_parameters: need 0 < p2 < p1 < 1");
    }
    if (!(in.eta1 > 0.0) || !(in.eta1 < 1.0) || !(in.eta2 > 0.0) || !(in.eta2 < 1.0)) {
        throw std::domain_error("plan_parameters: error targets must lie in (0,1)");
    }
    const double a = -std::log(in.eta1);
    const double b = -std::log1p(-in.eta2);
    const double lp1 = std::log(1.0 / in.p1);
    const double lp2 = std::log(1.0 / in.p2);

    const double d_sep = (std::log(2.0) + std::log(a) - std::log(b)) / (lp2 - lp1);
    double d_raw;
    if (a >= std::max(b + 1.0, 0.5 * b)) {
        // Single binding term: the miss-rate constraint cannot dominate.
        d_raw = d_sep;
    } else {
        const double d_miss = (std::log(b + 1.0) - std::log(a)) / lp1;
        d_raw = std::max(d_miss, d_sep);
    }
    PlanResult out;
    out.D_star = static_cast<uint64_t>(std::max(1.0, std::ceil(d_raw)));
    const double keep = 1.0 - std::pow(in.p1, static_cast<double>(out.D_star));
    out.M_star = static_cast<uint64_t>(std::max(1.0, std::ceil(a / std::log(1.0 / keep))));
    return out;
}

namespace {

// Planner wrapper tolerating the degenerate frequencies p1=1 (the item
// survives every intersection, so the miss-rate constraint drops out) and
// p2=0 (the item never appears, so separation holds vacuously).
PlanResult plan_with_boundaries(double p1, double p2, double eta1, double eta2) {
    if (p1 < 1.0 && p2 > 0.0) return plan_parameters({p1, p2, eta1, eta2});
    if (!(p2 >= 0.0) || !(p1 <= 1.0) || !(p2 < p1)) {
        throw std::domain_error("guarantee_simulation: need 0 <= p2 < p1 <= 1");
    }
    if (!(eta1 > 0.0) || !(eta1 < 1.0) || !(eta2 > 0.0) || !(eta2 < 1.0)) {
        throw std::domain_error("guarantee_simulation: error targets must lie in (0,1)");
    }
    const double a = -std::log(eta1);
    const double b = -std::log1p(-eta2);
    double d_raw = 1.0;
    if (p2 > 0.0) {
        d_raw = (std::log(2.0) + std::log(a) - std::log(b)) / std::log(1.0 / p2);
    }
    PlanResult out;
    out.D_star = static_cast<uint64_t>(std::max(1.0, std::ceil(d_raw)));
    const double keep = 1.0 - std::pow(p1, static_cast<double>(out.D_star));
    out.M_star = keep > 0.0
                     ? static_cast<uint64_t>(std::max(1.0, std::ceil(a / std::log(1.0 / keep))))
                     : 1;
    return out;
}

}  // namespace

GuaranteeResult guarantee_simulation(double p1, double p2, double eta1, double eta2,
                                     uint64_t trials, uint64_t master_seed) {
    if (trials == 0) throw std::invalid_argument("guarantee_simulation: trials must be positive");
    GuaranteeResult out;
    out.plan = plan_with_boundaries(p1, p2, eta1, eta2);

    const std::size_t N = 1000;
    const auto n1 = static_cast<std::size_t>(std::llround(p1 * N));
    const auto n2 = static_cast<std::size_t>(std::llround(p2 * N));

    EncodedDataset ds;
    ds.p = 2;
    ds.feature_names = {"a", "b"};
    ds.label_name = "class";
    ds.cardinalities = {2, 2};
    ds.category_names = {{"hit", "miss"}, {"hit", "miss"}};
    ds.class_names = {"c"};
    ds.codes.resize(N * 2);
    ds.labels.assign(N, 0);
    for (std::size_t i = 0; i < N; ++i) {
        ds.codes[i * 2 + 0] = i < n1 ? 0 : 1;
        ds.codes[i * 2 + 1] = i >= N - n2 ? 0 : 1;
    }
    ds.class_index.resize(1);
    for (std::size_t i = 0; i < N; ++i) ds.class_index[0].push_back(static_cast<uint32_t>(i));

    uint64_t hits1 = 0, hits2 = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        ChainSet cs = generate_chains(ds, 0, out.plan.M_star, out.plan.D_star, 0,
                                      derive_seed(master_seed, t));
        bool h1 = false, h2 = false;
        for (uint64_t m = 0; m < cs.M && !(h1 && h2); ++m) {
            const uint64_t r = cs.realized[m];
            if (cs.head_col[m] == 0 && cs.counts_col[m] == r) h1 = true;
            if (cs.head_col[cs.M + m] == 0 && cs.counts_col[cs.M + m] == r) h2 = true;
        }
        hits1 += h1 ? 1 : 0;
        hits2 += h2 ? 1 : 0;
    }
    out.hit_rate_frequent = static_cast<double>(hits1) / static_cast<double>(trials);
    out.hit_rate_infrequent = static_cast<double>(hits2) / static_cast<double>(trials);
    return out;
}

}  // namespace ric
