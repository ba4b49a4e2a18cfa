#pragma once

// Quivers and paths. A path is stored as a list of arrow indices in
// application order: the first entry acts first. The written word "gba" (g
// after b after a) is therefore the list [a, b, g]; its source is the source
// of a and its target the target of g.

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "koszul/error.hpp"

namespace koszul {

struct Arrow {
    std::string name;
    int source = 0;
    int target = 0;
};

using Path = std::vector<int>;  // arrow indices, application order

class Quiver {
public:
    Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
        : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
        std::unordered_set<std::string> seen;
        for (const auto& v : vertices_)
            if (!seen.insert(v).second) throw InputError("duplicate vertex name: " + v);
        for (int i = 0; i < static_cast<int>(vertices_.size()); ++i)
            vertex_index_[vertices_[i]] = i;
        seen.clear();
        for (int i = 0; i < static_cast<int>(arrows_.size()); ++i) {
            const auto& a = arrows_[i];
            if (!seen.insert(a.name).second) throw InputError("duplicate arrow name: " + a.name);
            if (a.source < 0 || a.source >= vertex_count() || a.target < 0 ||
                a.target >= vertex_count())
                throw InputError("arrow " + a.name + " references an undeclared vertex");
            arrow_index_[a.name] = i;
        }
    }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int arrow_count() const { return static_cast<int>(arrows_.size()); }
    const std::string& vertex_name(int v) const { return vertices_[v]; }
    const Arrow& arrow(int a) const { return arrows_[a]; }

    int vertex_index(const std::string& name) const {
        auto it = vertex_index_.find(name);
        if (it == vertex_index_.end()) throw InputError("unknown vertex: " + name);
        return it->second;
    }
    int arrow_index(const std::string& name) const {
        auto it = arrow_index_.find(name);
        if (it == arrow_index_.end()) throw InputError("unknown arrow: " + name);
        return it->second;
    }

    bool composable(const Path& p) const {
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            if (arrows_[p[i]].target != arrows_[p[i + 1]].source) return false;
        return true;
    }
    int path_source(const Path& p) const { return arrows_[p.front()].source; }
    int path_target(const Path& p) const { return arrows_[p.back()].target; }

    std::string format_path(const Path& p) const {
        if (p.empty()) return "(empty)";
        std::string s = "[";
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) s += ",";
            s += arrows_[p[i]].name;
        }
        return s + "]";
    }

    // all composable paths of the given length, lexicographic in arrow indices
    std::vector<Path> all_paths(int length) const {
        std::vector<Path> out;
        if (length == 0) return out;
        Path cur;
        enumerate(cur, length, out);
        return out;
    }

private:
    void enumerate(Path& cur, int length, std::vector<Path>& out) const {
        if (static_cast<int>(cur.size()) == length) {
            out.push_back(cur);
            return;
        }
        for (int a = 0; a < arrow_count(); ++a) {
            if (!cur.empty() && arrows_[cur.back()].target != arrows_[a].source) continue;
            cur.push_back(a);
            enumerate(cur, length, out);
            cur.pop_back();
        }
    }

    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::unordered_map<std::string, int> vertex_index_;
    std::unordered_map<std::string, int> arrow_index_;
};

// One homogeneous relation: a k-combination of parallel equal-length paths.
// Coefficients are kept as integer fractions so a relation is field-agnostic.
struct RelationTerm {
    long long num = 1;
    long long den = 1;
    Path path;
};

struct Relation {
    std::vector<RelationTerm> terms;
};

inline void validate_relation(const Quiver& q, const Relation& rel) {
    if (rel.terms.empty()) throw InputError("empty relation");
    const Path& first = rel.terms.front().path;
    if (first.size() < 2)
        throw InputError("relation paths must have length >= 2, got length " +
                         std::to_string(first.size()));
    for (const auto& t : rel.terms) {
        if (!q.composable(t.path))
            throw InputError("non-composable path in relation: " + q.format_path(t.path));
        if (t.path.size() != first.size())
            throw InputError("inhomogeneous relation: paths of length " +
                             std::to_string(first.size()) + " and " +
                             std::to_string(t.path.size()));
        if (q.path_source(t.path) != q.path_source(first) ||
            q.path_target(t.path) != q.path_target(first))
            throw InputError("relation mixes non-parallel paths: " + q.format_path(first) +
                             " vs " + q.format_path(t.path));
    }
}

}  // namespace koszul
