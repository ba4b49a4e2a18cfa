#pragma once

// The degree templates delta and Delta, and the classifiers built on them.
// A classifier resolves the module minimally and reads off where each step's
// generators sit; the result is a certificate carrying the verdict, the
// truncation bounds it was checked under, and the per-step generator degrees
// as evidence. Failure certificates point at the first offending generator.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "koszul/resolution.hpp"

namespace koszul {

// delta(2n) = nd, delta(2n+1) = nd + 1.
inline int delta(int i, int d) {
    if (i < 0) throw InputError("homological degree must be nonnegative");
    if (d < 2) throw InputError("degree template needs d >= 2");
    const int n = i / 2;
    return i % 2 == 0 ? n * d : n * d + 1;
}

// Delta(2n) = {nd}, Delta(2n+1) = {nd+1, ..., nd+d-1}. For d = 2 the odd set
// collapses to a singleton and the generalized and plain templates coincide.
inline std::set<int> Delta(int i, int d) {
    const int lo = delta(i, d);
    std::set<int> out{lo};
    if (i % 2 == 1)
        for (int j = lo + 1; j <= lo + d - 2; ++j) out.insert(j);
    return out;
}

struct KoszulWitness {
    int step = 0;    // homological degree i
    int vertex = 0;  // vertex index of the generator
    int degree = 0;  // internal degree, outside the template at step i
    std::string vertex_name;  // label from the presentation, for reports
};

// Everything a verdict depends on, pinned: the property that was tested, the
// truncation bounds it was tested under, the coefficient field, and the full
// generator-degree table of the minimal resolution. "holds" means holds up to
// (H, D) and claims nothing beyond that window.
struct KoszulCertificate {
    std::string property;  // "d-koszul" | "generalized-d-koszul" | "koszul-linear"
    int d = 2;
    bool holds = true;
    int H = 0;
    int D = 0;
    std::string field;
    std::optional<KoszulWitness> witness;
    // generators[i] lists (vertex, internal degree), sorted by degree then vertex.
    std::vector<std::vector<std::pair<int, int>>> generators;
};

// (i, j) -> dim Ext^i(M, A_0)_j. Over a minimal resolution the dual complex
// has zero differentials, so the dimension is the number of generators of the
// i-th projective sitting in internal degree j.
template <class F>
std::map<std::pair<int, int>, int> ext_concentration_table(const Resolution<F>& res) {
    std::map<std::pair<int, int>, int> table;
    for (int i = 0; i <= res.homological_bound(); ++i)
        for (const auto& [v, deg] : res.generators(i)) ++table[{i, deg}];
    return table;
}

template <class F>
std::map<std::pair<int, int>, int> ext_concentration_table(const GradedModule<F>& m, int H,
                                                           int window_hi) {
    return ext_concentration_table(minimal_resolution(m, H, window_hi));
}

namespace detail {

// Shared classifier loop. The scan order (step ascending, then the stored
// degree-then-vertex order within a step) makes the witness the first
// offender in lexicographic (i, degree, vertex) order, so reruns with a
// larger H report the same witness. window_hi < 0 means the full template
// window delta(H) + d; a smaller explicit window is allowed when the data
// genuinely ends earlier (the certificate records what was used).
template <class F>
KoszulCertificate classify_generators(const GradedModule<F>& m, int d, int H, bool generalized,
                                      std::string property, int window_hi) {
    if (H < 0) throw InputError("homological bound must be nonnegative");
    const int D = window_hi < 0 ? delta(H, d) + d : window_hi;
    Resolution<F> res = minimal_resolution(m, H, D);
    KoszulCertificate cert;
    cert.property = std::move(property);
    cert.d = d;
    cert.H = H;
    cert.D = D;
    cert.field = m.algebra().field().describe();
    for (int i = 0; i <= H; ++i) {
        cert.generators.push_back(res.generators(i));
        if (!cert.holds) continue;
        const std::set<int> allowed = generalized ? Delta(i, d) : std::set<int>{delta(i, d)};
        for (const auto& [v, deg] : res.generators(i)) {
            if (allowed.count(deg)) continue;
            cert.holds = false;
            cert.witness = KoszulWitness{i, v, deg, m.algebra().vertex_name(v)};
            break;
        }
    }
    return cert;
}

}  // namespace detail

// Every generator of the i-th projective must sit in degree delta(i).
template <class F>
KoszulCertificate is_d_koszul(const GradedModule<F>& m, int d, int H, int window_hi = -1) {
    return detail::classify_generators(m, d, H, false, "d-koszul", window_hi);
}

// Generator degrees may range over Delta(i); only the odd steps gain slack.
template <class F>
KoszulCertificate is_generalized_d_koszul(const GradedModule<F>& m, int d, int H,
                                          int window_hi = -1) {
    return detail::classify_generators(m, d, H, true, "generalized-d-koszul", window_hi);
}

// An algebra is d-Koszul when its degree-zero part is, as a module over it.
template <class F>
KoszulCertificate is_d_koszul_algebra(const Algebra<F>& a, int d, int H, int window_hi = -1) {
    return is_d_koszul(trivial_module(a), d, H, window_hi);
}

// The linear-resolution test: generators of the i-th projective all in degree
// i. This is the d = 2 template under a separate name, since it applies over
// any standardly graded algebra regardless of its relation degrees.
template <class F>
KoszulCertificate is_koszul_module(const GradedModule<F>& m, int H, int window_hi = -1) {
    return detail::classify_generators(m, 2, H, false, "koszul-linear", window_hi);
}

}  // namespace koszul
