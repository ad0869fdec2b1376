#include "ncdist/word.hpp"

#include <stdexcept>
#include <unordered_map>

namespace ncdist {

namespace {

struct Registry {
    std::vector<std::string> names;
    std::vector<std::string> algebras;
    std::unordered_map<std::string, uint32_t> index;
};

Registry& reg() {
    static Registry r;
    return r;
}

} // namespace

VarId var(const std::string& name) {
    auto& r = reg();
    auto it = r.index.find(name);
    if (it != r.index.end()) return VarId{it->second};
    uint32_t id = (uint32_t)r.names.size();
    r.names.push_back(name);
    r.algebras.push_back(name);   // own algebra by default
    r.index.emplace(name, id);
    return VarId{id};
}

VarId var(const std::string& name, const std::string& algebra) {
    VarId v = var(name);
    reg().algebras[v.id] = algebra;
    return v;
}

VarId lookup_var(const std::string& name) {
    auto& r = reg();
    auto it = r.index.find(name);
    return it == r.index.end() ? VarId{} : VarId{it->second};
}

const std::string& var_name(VarId v) {
    auto& r = reg();
    if (!v.valid() || v.id >= r.names.size()) throw std::out_of_range("var_name: bad VarId");
    return r.names[v.id];
}

const std::string& var_algebra(VarId v) {
    auto& r = reg();
    if (!v.valid() || v.id >= r.algebras.size()) throw std::out_of_range("var_algebra: bad VarId");
    return r.algebras[v.id];
}

void set_var_algebra(VarId v, const std::string& algebra) {
    auto& r = reg();
    if (!v.valid() || v.id >= r.algebras.size()) throw std::out_of_range("set_var_algebra: bad VarId");
    r.algebras[v.id] = algebra;
}

bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k] == b[k]) continue;
        return var_name(a[k]) < var_name(b[k]);
    }
    return false;
}

std::string word_str(const Word& w) {
    std::string out;
    for (size_t k = 0; k < w.size(); ++k) {
        if (k) out += "*";
        out += var_name(w[k]);
    }
    return out;
}

Word word_concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

} // namespace ncdist
