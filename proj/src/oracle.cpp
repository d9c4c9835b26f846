#include "ric/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ric {

ExactStats exact_stats(const EncodedDataset& ds, const Pattern& s) {
    ExactStats st;
    st.class_count.assign(ds.class_names.size(), 0);
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        if (ds.row_contains(i, s)) {
            ++st.support_count;
            ++st.class_count[ds.labels[i]];
        }
    }
    return st;
}

double exact_frequency(const EncodedDataset& ds, const Pattern& s, uint32_t class_code) {
    if (class_code >= ds.class_index.size()) {
        throw std::invalid_argument("exact_frequency: class code out of range");
    }
    const auto n_class = ds.class_index[class_code].size();
    if (n_class == 0) throw std::runtime_error("exact_frequency: class has no rows");
    uint64_t count = 0;
    for (uint32_t i : ds.class_index[class_code]) {
        if (ds.row_contains(i, s)) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(n_class);
}

double exact_confidence(const EncodedDataset& ds, const Pattern& s, uint32_t target) {
    if (target >= ds.class_index.size()) {
        throw std::invalid_argument("exact_confidence: class code out of range");
    }
    ExactStats st = exact_stats(ds, s);
    if (st.support_count == 0) {
        throw std::domain_error("exact_confidence undefined: pattern '" + format_pattern(s) +
                                "' has zero support");
    }
    return static_cast<double>(st.class_count[target]) / static_cast<double>(st.support_count);
}

std::vector<std::pair<Pattern, double>> brute_force_topk_subsets(
    const std::function<double(const Pattern&)>& freq, const Pattern& s, std::size_t k) {
    const std::size_t n = s.order();
    if (n > 20) throw std::invalid_argument("brute_force_topk_subsets: more than 20 items");
    const auto& items = s.items();

    std::vector<std::pair<Pattern, double>> scored;
    scored.reserve((1u << n) - 1);
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<Item> sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) sub.push_back(items[i]);
        }
        Pattern sp(std::move(sub));
        const double f = freq(sp);
        scored.emplace_back(std::move(sp), f);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::vector<ExactPattern> exact_miner(const EncodedDataset& ds, double min_support,
                                      uint32_t max_order) {
    if (ds.n_rows() > 100000) {
        throw std::runtime_error("exact_miner: table exceeds 100000 rows");
    }
    if (ds.p > 30) throw std::runtime_error("exact_miner: table exceeds 30 features");

    std::vector<ExactPattern> out;
    std::vector<Pattern> frontier;

    // Order 1: every (feature, code) pair.
    std::vector<Pattern> singles;
    for (uint32_t j = 0; j < ds.p; ++j) {
        for (uint32_t c = 0; c < ds.cardinalities[j]; ++c) {
            singles.push_back(Pattern::single(j, c));
        }
    }
    std::vector<Pattern> frequent_singles;
    for (const Pattern& s : singles) {
        ExactStats st = exact_stats(ds, s);
        if (static_cast<double>(st.support_count) >= min_support) {
            out.push_back({s, std::move(st)});
            frequent_singles.push_back(s);
            if (max_order >= 2) frontier.push_back(s);
        }
    }

    std::unordered_set<Pattern, PatternHash> frequent_set(frequent_singles.begin(),
                                                          frequent_singles.end());
    for (uint32_t order = 2; order <= max_order && !frontier.empty(); ++order) {
        std::vector<Pattern> next;
        for (const Pattern& base : frontier) {
            const uint32_t max_feature = base.items().back().feature;
            for (const Pattern& s : frequent_singles) {
                if (s.items()[0].feature <= max_feature) continue;
                Pattern cand = union_disjoint(base, s);
                // Every (order-1)-subset must itself be frequent.
                bool prunable = false;
                for (std::size_t drop = 0; drop + 1 < cand.order() && !prunable; ++drop) {
                    std::vector<Item> sub;
                    for (std::size_t i = 0; i < cand.order(); ++i) {
                        if (i != drop) sub.push_back(cand.items()[i]);
                    }
                    prunable = frequent_set.find(Pattern(std::move(sub))) == frequent_set.end();
                }
                if (prunable) continue;
                ExactStats st = exact_stats(ds, cand);
                if (static_cast<double>(st.support_count) >= min_support) {
                    next.push_back(cand);
                    out.push_back({std::move(cand), std::move(st)});
                }
            }
        }
        for (const Pattern& s : next) frequent_set.insert(s);
        frontier = std::move(next);
    }
    return out;
}

namespace {

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 3) return std::nullopt;
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

EvalReport evaluate(const RuleSet& rules, const EncodedDataset& ds) {
    EvalReport rep;
    double se_freq = 0;
    double se_conf = 0;
    std::size_t n_rules = 0, n_conf = 0;
    std::vector<double> ef, xf, ec, xc;

    for (const RuleList& list : rules) {
        for (const ScoredRule& r : list) {
            RuleCheck chk;
            chk.rule = &r;
            chk.exact_freq_target = exact_frequency(ds, r.pattern, r.target_class);
            ExactStats st = exact_stats(ds, r.pattern);
            if (st.support_count > 0) {
                chk.exact_conf = static_cast<double>(st.class_count[r.target_class]) /
                                 static_cast<double>(st.support_count);
            } else {
                ++rep.undefined_conf_count;
            }

            const double est_f = r.freq_per_class[r.target_class];
            se_freq += (est_f - chk.exact_freq_target) * (est_f - chk.exact_freq_target);
            ef.push_back(est_f);
            xf.push_back(chk.exact_freq_target);
            ++n_rules;
            if (chk.exact_conf) {
                se_conf += (r.confidence - *chk.exact_conf) * (r.confidence - *chk.exact_conf);
                ec.push_back(r.confidence);
                xc.push_back(*chk.exact_conf);
                ++n_conf;
            }
            rep.rules.push_back(std::move(chk));
        }
    }
    rep.rmse_freq = n_rules > 0 ? std::sqrt(se_freq / static_cast<double>(n_rules)) : 0.0;
    if (n_conf > 0) rep.rmse_conf = std::sqrt(se_conf / static_cast<double>(n_conf));
    rep.pearson_freq = pearson(ef, xf);
    rep.pearson_conf = pearson(ec, xc);
    return rep;
}

double jaccard(const RuleSet& a, const RuleSet& b) {
    std::set<std::pair<uint32_t, std::string>> sa, sb;
    for (const RuleList& list : a) {
        for (const ScoredRule& r : list) sa.emplace(r.target_class, format_pattern(r.pattern));
    }
    for (const RuleList& list : b) {
        for (const ScoredRule& r : list) sb.emplace(r.target_class, format_pattern(r.pattern));
    }
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t both = 0;
    for (const auto& key : sa) both += sb.count(key);
    const std::size_t all = sa.size() + sb.size() - both;
    return static_cast<double>(both) / static_cast<double>(all);
}

}  // namespace ric
