#pragma once
// Interned variable symbols and words over them.  Each variable carries an
// algebra tag; variables in distinct tags are the "mutually free" players,
// and conditional-expectation code splits words along tag boundaries.

#include <cstdint>
#include <string>
#include <vector>

namespace ncdist {

struct VarId {
    uint32_t id = UINT32_MAX;
    bool valid() const { return id != UINT32_MAX; }
    friend bool operator==(VarId a, VarId b) { return a.id == b.id; }
    friend bool operator!=(VarId a, VarId b) { return a.id != b.id; }
    friend bool operator<(VarId a, VarId b) { return a.id < b.id; }
};

// Registers the name on first sight.  Default algebra tag = the variable's own
// name, i.e. every variable is free from every other one unless grouped.
VarId var(const std::string& name);
VarId var(const std::string& name, const std::string& algebra);
VarId lookup_var(const std::string& name);         // invalid VarId if unseen
const std::string& var_name(VarId v);
const std::string& var_algebra(VarId v);
void set_var_algebra(VarId v, const std::string& algebra);

using Word = std::vector<VarId>;

// Graded lexicographic: length first, then letterwise by variable name.
bool word_less(const Word& a, const Word& b);
struct WordLess {
    bool operator()(const Word& a, const Word& b) const { return word_less(a, b); }
};

std::string word_str(const Word& w);               // "X*Y*X"; "" for the unit
Word word_concat(const Word& a, const Word& b);

} // namespace ncdist
