#include "ric/chain.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ric {

Chain ChainSet::chain(uint64_t m) const {
    Chain ch;
    ch.head.resize(p);
    ch.counts.resize(p);
    for (uint32_t j = 0; j < p; ++j) {
        ch.head[j] = head_col[static_cast<std::size_t>(j) * M + m];
        ch.counts[j] = counts_col[static_cast<std::size_t>(j) * M + m];
    }
    ch.realized_length = realized[m];
    return ch;
}

Pattern ChainSet::tail(uint64_t m) const {
    std::vector<Item> items;
    for (uint32_t j = 0; j < p; ++j) {
        if (counts_col[static_cast<std::size_t>(j) * M + m] == realized[m]) {
            items.push_back({j, head_col[static_cast<std::size_t>(j) * M + m]});
        }
    }
    return Pattern(std::move(items));
}

Chain generate_chain(const EncodedDataset& ds, uint32_t class_code, uint64_t D_max,
                     uint64_t K_stop, RngState& rng) {
    if (D_max == 0) throw std::invalid_argument("generate_chain: D_max must be at least 1");
    const uint32_t p = ds.p;

    Chain ch;
    const uint32_t* first = ds.row(sample_row(ds, class_code, rng));
    ch.head.assign(first, first + p);
    ch.counts.assign(p, 1);
    ch.realized_length = 1;

    uint64_t tail_size = p;
    while (ch.realized_length < D_max && tail_size > K_stop) {
        const uint32_t* r = ds.row(sample_row(ds, class_code, rng));
        uint64_t survivors = 0;
        for (uint32_t j = 0; j < p; ++j) {
            if (ch.counts[j] == ch.realized_length && r[j] == ch.head[j]) {
                ++ch.counts[j];
                ++survivors;
            }
        }
        ++ch.realized_length;
        tail_size = survivors;
    }
    return ch;
}

ChainSet generate_chains(const EncodedDataset& ds, uint32_t class_code, uint64_t M,
                         uint64_t D_max, uint64_t K_stop, uint64_t master_seed, int threads) {
    if (class_code >= ds.class_names.size()) {
        throw std::invalid_argument("class code " + std::to_string(class_code) + " out of range");
    }
    ChainSet cs;
    cs.class_name = ds.class_names[class_code];
    cs.p = ds.p;
    cs.M = M;
    cs.D_max = D_max;
    cs.K_stop = K_stop;
    cs.head_col.resize(static_cast<std::size_t>(ds.p) * M);
    cs.counts_col.resize(static_cast<std::size_t>(ds.p) * M);
    cs.realized.resize(M);

    const uint64_t class_stream = hash_string(cs.class_name);
    const uint64_t class_seed = derive_seed(master_seed, class_stream);

    auto run_range = [&](uint64_t begin, uint64_t end) {
        for (uint64_t m = begin; m < end; ++m) {
            RngState rng{derive_seed(class_seed, m)};
            Chain ch = generate_chain(ds, class_code, D_max, K_stop, rng);
            for (uint32_t j = 0; j < ds.p; ++j) {
                cs.head_col[static_cast<std::size_t>(j) * M + m] = ch.head[j];
                cs.counts_col[static_cast<std::size_t>(j) * M + m] = ch.counts[j];
            }
            cs.realized[m] = ch.realized_length;
        }
    };

    const auto n_workers =
        static_cast<uint64_t>(std::max(1, std::min<int>(threads, static_cast<int>(std::min<uint64_t>(M, 64)))));
    if (n_workers <= 1) {
        run_range(0, M);
    } else {
        std::vector<std::thread> pool;
        for (uint64_t w = 0; w < n_workers; ++w) {
            uint64_t begin = M * w / n_workers;
            uint64_t end = M * (w + 1) / n_workers;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return cs;
}

uint64_t survival_depth(const Chain& ch, const Pattern& s) {
    uint64_t k = ch.realized_length;
    for (const Item& it : s.items()) {
        uint64_t depth = ch.head[it.feature] == it.code ? ch.counts[it.feature] : 0;
        k = std::min(k, depth);
    }
    return k;
}

namespace {

constexpr char kMagic[4] = {'R', 'I', 'C', 'C'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("chain dump: truncated input");
}

template <typename T>
void write_vec(std::ostream& out, const std::vector<T>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
void read_vec(std::istream& in, std::vector<T>& v, std::size_t count) {
    v.resize(count);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(T)));
    if (!in) throw std::runtime_error("chain dump: truncated input");
}

}  // namespace

void dump_chainset(const ChainSet& cs, std::ostream& out) {
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    auto name_len = static_cast<uint32_t>(cs.class_name.size());
    write_pod(out, name_len);
    out.write(cs.class_name.data(), name_len);
    write_pod(out, cs.p);
    write_pod(out, cs.M);
    write_pod(out, cs.D_max);
    write_pod(out, cs.K_stop);
    write_vec(out, cs.realized);
    write_vec(out, cs.head_col);
    write_vec(out, cs.counts_col);
    if (!out) throw std::runtime_error("chain dump: write failed");
}

ChainSet load_chainset(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("chain dump: bad magic");
    }
    uint32_t version = 0;
    read_pod(in, version);
    if (version != kVersion) {
        throw std::runtime_error("chain dump: unsupported version " + std::to_string(version));
    }
    ChainSet cs;
    uint32_t name_len = 0;
    read_pod(in, name_len);
    cs.class_name.resize(name_len);
    in.read(cs.class_name.data(), name_len);
    if (!in) throw std::runtime_error("chain dump: truncated input");
    read_pod(in, cs.p);
    read_pod(in, cs.M);
    read_pod(in, cs.D_max);
    read_pod(in, cs.K_stop);
    read_vec(in, cs.realized, cs.M);
    read_vec(in, cs.head_col, static_cast<std::size_t>(cs.p) * cs.M);
    read_vec(in, cs.counts_col, static_cast<std::size_t>(cs.p) * cs.M);
    return cs;
}

}  // namespace ric
