#include "ncdist/deriv.hpp"

namespace ncdist {

TensorElem free_derivative(const NCPoly& p, VarId x) {
    TensorElem out;
    for (auto& [w, c] : p.t)
        for (size_t k = 0; k < w.size(); ++k)
            if (w[k] == x)
                out.add(Word(w.begin(), w.begin() + k), Word(w.begin() + k + 1, w.end()), c);
    out.normalize();
    return out;
}

TensorElem rdelta(const NCPoly& p, VarId x) {
    TensorElem out;
    for (auto& [w, c] : p.t)
        for (size_t k = 0; k < w.size(); ++k)
            if (w[k] == x)
                out.add(Word(w.begin(), w.begin() + k), Word(w.begin() + k, w.end()), c);
    out.normalize();
    return out;
}

TensorElem ldelta(const NCPoly& p, VarId x) {
    TensorElem out;
    for (auto& [w, c] : p.t)
        for (size_t k = 0; k < w.size(); ++k)
            if (w[k] == x)
                out.add(Word(w.begin(), w.begin() + k + 1), Word(w.begin() + k + 1, w.end()), c);
    out.normalize();
    return out;
}

TensorElem rnabla(const NCPoly& p, VarId x) {
    TensorElem out = rdelta(p, x);
    TensorElem l = ldelta(p, x);
    for (auto& t : l.terms) out.add(t.left, t.right, -t.c);
    out.normalize();
    return out;
}

TensorElem block_delta_right(const NCPoly& p, const std::set<std::string>& algs) {
    TensorElem out;
    for (auto& [w, c] : p.t) {
        for (size_t k = 0; k < w.size(); ++k) {
            bool in = algs.count(var_algebra(w[k])) > 0;
            bool prev_in = k > 0 && algs.count(var_algebra(w[k - 1])) > 0;
            if (in && !prev_in)   // left edge of a maximal run; k==0 gives 1 (x) w
                out.add(Word(w.begin(), w.begin() + k), Word(w.begin() + k, w.end()), c);
        }
    }
    out.normalize();
    return out;
}

AltFactorization alternating_factorization(const Word& w, const std::set<std::string>& algA) {
    AltFactorization f;
    if (w.empty()) return f;
    size_t start = 0;
    bool cur = algA.count(var_algebra(w[0])) > 0;
    for (size_t k = 1; k <= w.size(); ++k) {
        bool in = k < w.size() && algA.count(var_algebra(w[k])) > 0;
        if (k == w.size() || in != cur) {
            f.blocks.emplace_back(Word(w.begin() + start, w.begin() + k), cur);
            start = k;
            cur = in;
        }
    }
    bool first = f.blocks.front().second, last = f.blocks.back().second;
    f.type = first ? (last ? BlockType::AA : BlockType::AB)
                   : (last ? BlockType::BA : BlockType::BB);
    return f;
}

} // namespace ncdist
