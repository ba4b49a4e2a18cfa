#pragma once

// Built-in instance library. Each entry is a complete instance file in the
// text format of instance.hpp, together with the degree parameter d its
// classification runs under and the module a bare `check` targets. The
// library spans d-Koszul algebras (one loop truncated, 3-cycle, two loops,
// Kronecker, the commutative plane), the three-vertex triangle whose simple
// S1 is generalized 3-Koszul but not 3-Koszul, and nothing else: these are
// desk-scale witnesses, not a search corpus.

#include <string>
#include <vector>

#include "koszul/instance.hpp"

namespace koszul {

struct BuiltinInstance {
    const char* name;
    const char* text;
    int d;               // degree template the instance is classified under
    const char* module;  // default module for check/resolve/ext
};

inline const std::vector<BuiltinInstance>& builtin_instances() {
    static const std::vector<BuiltinInstance> lib = {
        {"ex23",
         "instance: ex23\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: 1 2 3\n"
         "arrow: alpha 1 1\n"
         "arrow: beta 1 2\n"
         "arrow: gamma 2 3\n"
         "relation: alpha alpha alpha\n"
         "relation: alpha beta gamma\n"
         "module: S1 = simple 1\n"
         "module: S2 = simple 2\n"
         "module: S3 = simple 3\n"
         "module: k = trivial\n",
         3, "S1"},
        {"kx2",
         "instance: kx2\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: v\n"
         "arrow: x v v\n"
         "truncate: 2\n"
         "module: k = trivial\n",
         2, "k"},
        {"kx3",
         "instance: kx3\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: v\n"
         "arrow: x v v\n"
         "truncate: 3\n"
         "module: k = trivial\n"
         "module: W = syzygy 1 k\n"
         "module: N1 = shift W -1\n",
         3, "k"},
        {"kx4",
         "instance: kx4\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: v\n"
         "arrow: x v v\n"
         "truncate: 4\n"
         "module: k = trivial\n",
         4, "k"},
        {"kx5",
         "instance: kx5\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: v\n"
         "arrow: x v v\n"
         "truncate: 5\n"
         "module: k = trivial\n",
         5, "k"},
        {"twoloop3",
         "instance: twoloop3\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: v\n"
         "arrow: x v v\n"
         "arrow: y v v\n"
         "truncate: 3\n"
         "module: k = trivial\n"
         "module: W = syzygy 1 k\n"
         "module: N1 = shift W -1\n",
         3, "k"},
        {"cycle3",
         "instance: cycle3\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: 1 2 3\n"
         "arrow: a 1 2\n"
         "arrow: b 2 3\n"
         "arrow: c 3 1\n"
         "truncate: 3\n"
         "module: k = trivial\n",
         3, "k"},
        {"kronecker",
         "instance: kronecker\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: u v\n"
         "arrow: a u v\n"
         "arrow: b u v\n"
         "truncate: 2\n"
         "module: k = trivial\n",
         2, "k"},
        {"kxy",
         "instance: kxy\n"
         "convention: application-order\n"
         "field: prime:32003\n"
         "vertices: v\n"
         "arrow: x v v\n"
         "arrow: y v v\n"
         "relation: x y - y x\n"
         "module: k = trivial\n",
         2, "k"},
    };
    return lib;
}

inline const BuiltinInstance* find_builtin(const std::string& name) {
    for (const auto& b : builtin_instances())
        if (name == b.name) return &b;
    return nullptr;
}

inline std::vector<std::string> builtin_names() {
    std::vector<std::string> out;
    for (const auto& b : builtin_instances()) out.push_back(b.name);
    return out;
}

}  // namespace koszul
