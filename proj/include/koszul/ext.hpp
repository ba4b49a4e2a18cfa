#pragma once

// Ext groups against the degree-zero part, with the shift grading made
// explicit: a class of homological degree i and internal degree j is a
// functional on the degree-j generators of the i-th projective. Products are
// Yoneda compositions, computed by lifting the right factor through the
// resolution behind the left factor and composing at the top. The even Ext
// algebra is assembled grade by grade into an ordinary structure-constant
// algebra, so the resolution machinery can be pointed at it in turn.

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "koszul/koszul.hpp"
#include "koszul/resolution.hpp"

namespace koszul {

// One Ext class over a fixed resolution. coeffs are the coordinates in the
// dual-generator basis of step i (nonzero only at generators of degree j);
// rep is the corresponding map onto the shifted degree-zero part. src records
// which simple's resolution the class lives over, -1 when that has no
// meaning (classes of a plain module).
template <class F>
struct ExtElement {
    int i = 0;
    int j = 0;
    int tag = 0;  // vertex of the degree-zero part the functional lands in
    int src = -1;
    std::vector<typename F::Elem> coeffs;
    GradedMap<F> rep;

    bool is_zero() const {
        const auto& fld = rep.source->field();
        for (const auto& c : coeffs)
            if (!fld.is_zero(c)) return false;
        return true;
    }
};

namespace detail {

// rebuild the representative map from dual-generator coordinates
template <class F>
GradedMap<F> dual_rep(const Resolution<F>& res, int i,
                      const std::vector<typename F::Elem>& coeffs, int j) {
    const auto& a = res.module().algebra();
    auto proj = res.projective_ptr(i);
    auto tgt = std::make_shared<GradedModule<F>>(shift(trivial_module(a), j));
    Matrix<F> block(a.field(), a.r(), proj->dim(j));
    const auto& gens = proj->gens();
    for (int g = 0; g < static_cast<int>(gens.size()); ++g) {
        if (gens[g].second != j) continue;
        block.at(gens[g].first, proj->block_offset(j, g)) = coeffs[g];
    }
    GradedMap<F> rep;
    rep.source = proj;
    rep.target = tgt;
    rep.blocks.emplace(j, std::move(block));
    return rep;
}

}  // namespace detail

// Dual basis to the generators of the i-th projective: one class of internal
// degree j per generator of degree j, picking that generator's top coordinate.
template <class F>
std::vector<ExtElement<F>> ext_basis(const Resolution<F>& res, int i) {
    const auto& fld = res.module().field();
    const auto& gens = res.projective(i).gens();
    std::vector<ExtElement<F>> out;
    for (int g = 0; g < static_cast<int>(gens.size()); ++g) {
        ExtElement<F> e;
        e.i = i;
        e.j = gens[g].second;
        e.tag = gens[g].first;
        e.coeffs.assign(gens.size(), fld.zero());
        e.coeffs[g] = fld.one();
        e.rep = detail::dual_rep(res, i, e.coeffs, e.j);
        out.push_back(std::move(e));
    }
    return out;
}

// g after f. g is a class over res_g, which must resolve a degree-zero
// semisimple piece (one simple, or the whole degree-zero part); f is a class
// over res_f. f's representative is projected onto the piece res_g resolves,
// lifted g.i steps through res_g, and composed with g's representative; the
// composite is read back off the generator tops. Internal degrees add.
template <class F>
ExtElement<F> yoneda_product(const ExtElement<F>& g, const Resolution<F>& res_g,
                             const ExtElement<F>& f, const Resolution<F>& res_f) {
    const auto& fld = res_f.module().field();
    const int i = f.i, m = g.i, jf = f.j, jall = f.j + g.j;
    if (i + m > res_f.homological_bound())
        throw InputError("yoneda product needs resolution depth " + std::to_string(i + m) +
                         ", have " + std::to_string(res_f.homological_bound()));
    if (m > res_g.homological_bound())
        throw InputError("yoneda product: left factor lives past its resolution depth");

    auto piece = res_g.module_ptr();
    engine_check(piece->lo() == 0, "yoneda lift target must start in degree zero");
    for (int n = 1; n <= std::min(piece->hi(), res_g.degree_bound()); ++n)
        engine_check(piece->dim(n) == 0, "yoneda lift target must be concentrated in degree zero");
    std::vector<int> rows;
    for (int idx = 0; idx < piece->dim(0); ++idx) rows.push_back(piece->tag(0, idx));
    {
        std::vector<int> seen(rows);
        std::sort(seen.begin(), seen.end());
        engine_check(std::adjacent_find(seen.begin(), seen.end()) == seen.end(),
                     "yoneda lift target repeats a vertex");
    }

    const int window = std::min(res_f.degree_bound(), res_g.degree_bound() + jf);

    // chain lift of f through res_g: step s maps the (i+s)-th projective of
    // res_f into the s-th projective of res_g shifted up by f's degree
    GradedMap<F> prev;
    for (int s = 0; s <= m; ++s) {
        const auto& proj = res_f.projective(i + s);
        const auto& gens = proj.gens();
        auto tgt = std::make_shared<GradedModule<F>>(shift(*res_g.projective_ptr(s), jf));
        std::vector<Matrix<F>> images(gens.size(), Matrix<F>(fld, 0, 0));
        int gpos = 0;
        while (gpos < static_cast<int>(gens.size())) {
            const int t = gens[gpos].second;
            engine_check(t <= window, "yoneda product: generator past the lift window");
            std::vector<int> offs, who;
            int gend = gpos;
            while (gend < static_cast<int>(gens.size()) && gens[gend].second == t) {
                offs.push_back(proj.block_offset(t, gend));
                who.push_back(gend);
                ++gend;
            }
            Matrix<F> rhs(fld, 0, 0);
            if (s == 0)
                rhs = t == jf ? f.rep.at(t).row_select(rows).col_select(offs)
                              : Matrix<F>(fld, piece->dim(t - jf), static_cast<int>(offs.size()));
            else
                rhs = prev.at(t).mul(res_f.differential(i + s).at(t).col_select(offs));
            auto x = solve(res_g.differential(s).at(t - jf), rhs);
            if (!x)
                throw InputError("yoneda product: no lift at step " + std::to_string(s) +
                                 ", degree " + std::to_string(t));
            for (int c = 0; c < static_cast<int>(who.size()); ++c)
                images[who[c]] = x->col_select({c});
            gpos = gend;
        }
        prev = map_from_generator_images<F>(res_f.projective_ptr(i + s), tgt, images, window);
    }

    ExtElement<F> out;
    out.i = i + m;
    out.j = jall;
    out.tag = g.tag;
    out.src = f.src;
    const auto& rproj = res_f.projective(i + m);
    const auto& rgens = rproj.gens();
    out.coeffs.assign(rgens.size(), fld.zero());
    for (int h = 0; h < static_cast<int>(rgens.size()); ++h) {
        if (rgens[h].second != jall) continue;
        Matrix<F> col = prev.at(jall).col_select({rproj.block_offset(jall, h)});
        Matrix<F> val = g.rep.at(jall - jf).mul(col);
        out.coeffs[h] = val.at(rgens[h].first, 0);
    }
    out.rep = detail::dual_rep(res_f, i + m, out.coeffs, jall);
    return out;
}

// The even Ext algebra of the base algebra, with everything its construction
// produced: one resolution per simple (to homological depth 2 H_E), the
// per-grade Ext bases with their summand provenance, and the outcome of the
// standard-grading check. A failed check is carried, not thrown; resolving
// over a failed even algebra is refused downstream. Modules built over
// `even` borrow it, so the bundle must stay alive and in place beneath them.
template <class F>
struct ExtAlgebraBundle {
    const Algebra<F>* base = nullptr;
    int H_E = 0;
    std::vector<Resolution<F>> simple_res;
    std::vector<std::vector<ExtElement<F>>> basis;  // grade n = Ext^{2n}, grouped by src
    Algebra<F> even;
    StructureReport graded;
};

// Grade n is Ext^{2n} of the degree-zero part with itself; multiplication is
// the Yoneda product on all basis pairs with grade sum at most H_E. The
// degree-zero part is resolved one simple at a time, so each basis class
// carries the vertex of the summand it came from; a product g.f is nonzero
// only when f lands in the summand g lives over, mirroring path composition.
template <class F>
ExtAlgebraBundle<F> build_ext_even_algebra(const Algebra<F>& a, int H_E, int window_hi) {
    if (H_E < 0) throw InputError("even Ext algebra needs a nonnegative grade bound");
    const auto& fld = a.field();
    std::vector<Resolution<F>> simple_res;
    std::vector<GradedModule<F>> simples;
    for (int v = 0; v < a.r(); ++v) simples.push_back(simple_module(a, v));
    for (int v = 0; v < a.r(); ++v)
        simple_res.push_back(minimal_resolution(simples[v], 2 * H_E, window_hi));

    std::vector<std::vector<ExtElement<F>>> basis(H_E + 1);
    std::vector<std::vector<int>> src_offset(H_E + 1, std::vector<int>(a.r() + 1, 0));
    std::vector<std::vector<std::pair<int, int>>> tags(H_E + 1);
    for (int n = 0; n <= H_E; ++n) {
        for (int v = 0; v < a.r(); ++v) {
            src_offset[n][v] = static_cast<int>(basis[n].size());
            for (auto& e : ext_basis(simple_res[v], 2 * n)) {
                e.src = v;
                tags[n].emplace_back(v, e.tag);
                basis[n].push_back(std::move(e));
            }
        }
        src_offset[n][a.r()] = static_cast<int>(basis[n].size());
    }

    std::map<std::pair<int, int>, Matrix<F>> tables;
    for (int gm = 1; gm <= H_E; ++gm)
        for (int gn = 1; gm + gn <= H_E; ++gn) {
            const int dm = static_cast<int>(basis[gm].size());
            const int dn = static_cast<int>(basis[gn].size());
            Matrix<F> t(fld, static_cast<int>(basis[gm + gn].size()), dm * dn);
            for (int p = 0; p < dm; ++p)
                for (int q = 0; q < dn; ++q) {
                    const auto& g = basis[gm][p];
                    const auto& f = basis[gn][q];
                    if (g.src != f.tag) continue;
                    auto prod =
                        yoneda_product(g, simple_res[g.src], f, simple_res[f.src]);
                    const int base_row = src_offset[gm + gn][f.src];
                    for (int h = 0; h < static_cast<int>(prod.coeffs.size()); ++h)
                        t.at(base_row + h, p * dn + q) = prod.coeffs[h];
                }
            tables.emplace(std::make_pair(gm, gn), std::move(t));
        }

    Algebra<F> even = Algebra<F>::from_structure_constants(fld, a.r(), H_E, tags, tables,
                                                           /*strict=*/false, "ext-even algebra");
    StructureReport rep = check_standardly_graded(even);
    return ExtAlgebraBundle<F>{&a,
                               H_E,
                               std::move(simple_res),
                               std::move(basis),
                               std::move(even),
                               std::move(rep)};
}

namespace detail {

// Ext of the resolved module in one parity, as a module over the even
// algebra: grade n is Ext^{2n+parity}, the vertex tag of a class is where its
// functional lands, and the grade-1 action is the Yoneda product against the
// even algebra's grade-1 basis.
template <class F>
GradedModule<F> ext_parity_module(const ExtAlgebraBundle<F>& b, const Resolution<F>& res_m,
                                  int parity) {
    const auto& fld = res_m.module().field();
    const int need = 2 * b.H_E + parity;
    if (res_m.homological_bound() < need)
        throw InputError("ext module needs resolution depth " + std::to_string(need) + ", have " +
                         std::to_string(res_m.homological_bound()));

    std::vector<std::vector<ExtElement<F>>> basis(b.H_E + 1);
    std::vector<std::vector<int>> vtags(b.H_E + 1);
    for (int n = 0; n <= b.H_E; ++n) {
        basis[n] = ext_basis(res_m, 2 * n + parity);
        for (const auto& e : basis[n]) vtags[n].push_back(e.tag);
    }

    std::vector<std::vector<Matrix<F>>> act;
    for (int n = 0; n + 1 <= b.H_E; ++n) {
        std::vector<Matrix<F>> layer;
        for (const auto& g : b.basis[1]) {
            Matrix<F> mat(fld, static_cast<int>(basis[n + 1].size()),
                          static_cast<int>(basis[n].size()));
            for (int q = 0; q < static_cast<int>(basis[n].size()); ++q) {
                const auto& f = basis[n][q];
                if (g.src != f.tag) continue;
                auto prod = yoneda_product(g, b.simple_res[g.src], f, res_m);
                for (int h = 0; h < static_cast<int>(prod.coeffs.size()); ++h)
                    mat.at(h, q) = prod.coeffs[h];
            }
            layer.push_back(std::move(mat));
        }
        act.push_back(std::move(layer));
    }
    return GradedModule<F>::dense(b.even, 0, std::move(vtags), std::move(act));
}

}  // namespace detail

template <class F>
GradedModule<F> build_ext_even_module(const ExtAlgebraBundle<F>& b, const Resolution<F>& res_m) {
    return detail::ext_parity_module(b, res_m, 0);
}

template <class F>
GradedModule<F> build_ext_odd_module(const ExtAlgebraBundle<F>& b, const Resolution<F>& res_m) {
    return detail::ext_parity_module(b, res_m, 1);
}

}  // namespace koszul
