#include "ncdist/oracle.hpp"

#include "ncdist/deriv.hpp"

#include <stdexcept>

namespace ncdist {

namespace {

// run-length form; adjacent entries always hold distinct variables
using BlockWord = std::vector<std::pair<VarId, int>>;

BlockWord canonical_blocks(const Word& w) {
    BlockWord b;
    for (VarId x : w) {
        if (!b.empty() && b.back().first == x)
            ++b.back().second;
        else
            b.emplace_back(x, 1);
    }
    return b;
}

// memo key: centered-prefix length then the runs
using StateKey = std::vector<uint64_t>;

StateKey key_of(const BlockWord& b, int j) {
    StateKey k;
    k.reserve(1 + 2 * b.size());
    k.push_back((uint64_t)j);
    for (auto& [v, e] : b) {
        k.push_back(v.id);
        k.push_back((uint64_t)e);
    }
    return k;
}

} // namespace

struct Embedding::Cache {
    std::map<StateKey, Scalar> phi;
    std::map<std::vector<Word>, Scalar> beta;
};

Embedding::Cache& Embedding::get_cache() const {
    if (!cache) cache = std::make_shared<Cache>();
    return *cache;
}

const Dist& Embedding::dist_of(VarId v) const {
    auto it = dists.find(v);
    if (it == dists.end())
        throw std::invalid_argument("embedding: unbound variable " + var_name(v));
    return it->second;
}

std::set<std::string> Embedding::algebras() const {
    std::set<std::string> out;
    for (auto& [v, d] : dists) out.insert(var_algebra(v));
    return out;
}

namespace {

struct Oracle {
    const Embedding& e;
    std::map<StateKey, Scalar>& memo;

    Scalar lam(const std::pair<VarId, int>& f) const {
        return e.dist_of(f.first).moment(f.second);
    }

    // phi of c_1 ... c_j f_{j+1} ... f_n  (c = centered block, f = raw block)
    Scalar val(const BlockWord& b, int j) {
        int n = (int)b.size();
        if (n == 0) return Scalar(1);
        if (j == n) return Scalar();   // alternating centered word of free variables
        StateKey k = key_of(b, j);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        Scalar r = lam(b[j]) * removed_val(b, j) + val(b, j + 1);
        memo.emplace(std::move(k), r);
        return r;
    }

    // phi of the list with index `pos` deleted, prefix [0, pos) centered;
    // a same-variable seam between c_{pos-1} and the raw block that slid in
    // is resolved by expanding the centered factor, cascading leftwards.
    Scalar removed_val(const BlockWord& b, int pos) {
        BlockWord rest;
        rest.reserve(b.size() - 1);
        for (int k = 0; k < (int)b.size(); ++k)
            if (k != pos) rest.push_back(b[k]);
        return seam_val(rest, pos);
    }

    Scalar seam_val(const BlockWord& rest, int pos) {
        if (pos > 0 && pos < (int)rest.size() && rest[pos - 1].first == rest[pos].first) {
            BlockWord merged;
            merged.reserve(rest.size() - 1);
            for (int k = 0; k < (int)rest.size(); ++k) {
                if (k == pos - 1) {
                    merged.emplace_back(rest[k].first, rest[k].second + rest[pos].second);
                } else if (k != pos) {
                    merged.push_back(rest[k]);
                }
            }
            return val(merged, pos - 1) - lam(rest[pos - 1]) * removed_val(rest, pos - 1);
        }
        return val(rest, pos);
    }
};

} // namespace

Scalar free_moment(const Embedding& e, const Word& w) {
    Oracle o{e, e.get_cache().phi};
    return o.val(canonical_blocks(w), 0);
}

Scalar free_moment(const Embedding& e, const NCPoly& p) {
    Scalar acc;
    for (auto& [w, c] : p.t) acc += c * free_moment(e, w);
    return acc;
}

Scalar mixed_boolean_cumulant(const Embedding& e, const std::vector<Word>& args) {
    if (args.empty()) throw std::invalid_argument("mixed_boolean_cumulant: no arguments");
    if (args.size() == 1) return free_moment(e, args[0]);
    auto& memo = e.get_cache().beta;
    auto it = memo.find(args);
    if (it != memo.end()) return it->second;

    Word all;
    for (auto& w : args) all.insert(all.end(), w.begin(), w.end());
    Scalar acc = free_moment(e, all);
    for (size_t k = 1; k < args.size(); ++k) {
        std::vector<Word> head(args.begin(), args.begin() + k);
        Word tail;
        for (size_t j = k; j < args.size(); ++j) tail.insert(tail.end(), args[j].begin(), args[j].end());
        acc -= mixed_boolean_cumulant(e, head) * free_moment(e, tail);
    }
    memo.emplace(args, acc);
    return acc;
}

std::vector<std::vector<int>> interval_partitions(int n) {
    std::vector<std::vector<int>> out;
    if (n <= 0) return out;
    // compositions of n, generated by first-part size
    std::vector<int> cur;
    struct Rec {
        int n;
        std::vector<std::vector<int>>& out;
        void go(std::vector<int>& cur, int left) {
            if (left == 0) {
                out.push_back(cur);
                return;
            }
            for (int p = 1; p <= left; ++p) {
                cur.push_back(p);
                go(cur, left - p);
                cur.pop_back();
            }
        }
    } rec{n, out};
    rec.go(cur, n);
    return out;
}

Scalar beta_pi(const Embedding& e, const std::vector<int>& parts, const std::vector<Word>& args) {
    size_t total = 0;
    for (int p : parts) total += (size_t)p;
    if (total != args.size())
        throw std::invalid_argument("beta_pi: partition does not cover the arguments");
    Scalar acc(1);
    size_t at = 0;
    for (int p : parts) {
        std::vector<Word> group(args.begin() + at, args.begin() + at + p);
        acc *= mixed_boolean_cumulant(e, group);
        at += (size_t)p;
    }
    return acc;
}

Scalar alternating_cumulant_bocu2(const Embedding& e, const std::vector<Word>& as,
                                  const std::vector<Word>& bs) {
    size_t n = as.size();
    if (bs.size() + 1 != n)
        throw std::invalid_argument("alternating_cumulant_bocu2: need n a's and n-1 b's");
    if (n == 1) return free_moment(e, as[0]);

    Scalar acc;
    // choose which interior a's join the outer cumulant; endpoints always do
    size_t mid = n - 2;
    for (uint64_t mask = 0; mask < (1ull << mid); ++mask) {
        std::vector<size_t> sel = {0};
        for (size_t t = 0; t < mid; ++t)
            if (mask >> t & 1) sel.push_back(t + 1);
        sel.push_back(n - 1);

        std::vector<Word> outer;
        for (size_t j : sel) outer.push_back(as[j]);
        Scalar term = mixed_boolean_cumulant(e, outer);
        if (term.is_zero()) continue;

        for (size_t l = 0; l + 1 < sel.size(); ++l) {
            std::vector<Word> pocket;
            pocket.push_back(bs[sel[l]]);
            for (size_t t = sel[l] + 1; t < sel[l + 1]; ++t) {
                pocket.push_back(as[t]);
                pocket.push_back(bs[t]);
            }
            term *= mixed_boolean_cumulant(e, pocket);
            if (term.is_zero()) break;
        }
        acc += term;
    }
    return acc;
}

Scalar bbeta(const Embedding& e, const NCPoly& p, const std::set<std::string>& algA) {
    Scalar acc;
    for (auto& [w, c] : p.t) {
        if (w.empty()) {
            acc += c;
            continue;
        }
        auto f = alternating_factorization(w, algA);
        if (f.type != BlockType::AA) continue;
        std::vector<Word> args;
        for (auto& [sub, inA] : f.blocks) args.push_back(sub);
        acc += c * mixed_boolean_cumulant(e, args);
    }
    return acc;
}

Scalar bbeta(const Embedding& e, const NCPoly& p, const std::string& algA) {
    return bbeta(e, p, std::set<std::string>{algA});
}

Scalar fbeta(const Embedding& e, const NCPoly& p, const std::set<std::string>& algA) {
    Scalar acc;
    for (auto& [w, c] : p.t) {
        if (w.empty()) {
            acc += c;
            continue;
        }
        if (!algA.count(var_algebra(w.front())) || !algA.count(var_algebra(w.back()))) continue;
        std::vector<Word> letters;
        for (VarId x : w) letters.push_back(Word{x});
        acc += c * mixed_boolean_cumulant(e, letters);
    }
    return acc;
}

Scalar fbeta(const Embedding& e, const NCPoly& p, const std::string& algA) {
    return fbeta(e, p, std::set<std::string>{algA});
}

} // namespace ncdist
