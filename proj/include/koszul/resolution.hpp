#pragma once

// Minimal graded projective resolutions, built step by step: each projective is
// a cover on the top of the previous kernel, and the differentials are stored
// as one matrix per internal degree. Chain maps between resolutions are lifted
// through the augmentations, and short exact sequences of modules produce
// (generally non-minimal) resolutions through the graded horseshoe assembly.

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "koszul/gmod.hpp"

namespace koszul {

template <class F>
class Resolution;
template <class F>
struct ShortExactSequence;
template <class F>
struct ResolutionStepData;
template <class F>
Resolution<F> minimal_resolution(const GradedModule<F>& m, int H, int window_hi);
template <class F>
Resolution<F> horseshoe(const ShortExactSequence<F>& ses, const Resolution<F>& res_a,
                        const Resolution<F>& res_c);
template <class F>
GradedModule<F> syzygy(const Resolution<F>& res, int i);

// A module map out of a free module is fixed by one image column per generator;
// every block is the span of right products of those images. Blocks cover all
// degrees up to the common inspectable window.
template <class F>
GradedMap<F> map_from_generator_images(std::shared_ptr<const GradedModule<F>> src,
                                       std::shared_ptr<const GradedModule<F>> tgt,
                                       const std::vector<Matrix<F>>& images, int window_hi) {
    engine_check(src->kind() == GradedModule<F>::Kind::free,
                 "generator images need a free source");
    const auto& a = src->algebra();
    const auto& gens = src->gens();
    engine_check(images.size() == gens.size(), "one image column per generator");

    GradedMap<F> f;
    f.source = src;
    f.target = tgt;
    const int hi = std::min({src->inspect_hi(), tgt->inspect_hi(), window_hi});
    std::map<int, std::vector<Matrix<F>>> cols;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        const auto [v, s] = gens[g];
        engine_check(images[g].rows() == tgt->dim(s) && images[g].cols() == 1,
                     "generator image shape mismatch");
        for (int k = 0; s + k <= hi; ++k) {
            if (k > 0 && a.dim(k) == 0) break;
            Matrix<F> prods = right_products(*tgt, images[g], s, k);
            cols[s + k].push_back(prods.col_select(a.by_src(k, v)));
        }
    }
    for (auto& [n, blocks] : cols) {
        Matrix<F> blk(src->field(), tgt->dim(n), 0);
        for (auto& b : blocks) blk = Matrix<F>::hcat(blk, b);
        engine_check(blk.cols() == src->dim(n), "generator image blocks lost columns");
        f.blocks.emplace(n, std::move(blk));
    }
    return f;
}

template <class F>
class Resolution {
public:
    struct Step {
        std::vector<std::pair<int, int>> gens;  // (vertex, internal degree)
        std::shared_ptr<const GradedModule<F>> proj;
        GradedMap<F> differential;  // into the previous projective; step 0 maps onto the module
    };

    const GradedModule<F>& module() const { return *module_; }
    std::shared_ptr<const GradedModule<F>> module_ptr() const { return module_; }
    int homological_bound() const { return H_; }
    int degree_bound() const { return window_; }
    bool claimed_minimal() const { return minimal_; }

    const std::vector<std::pair<int, int>>& generators(int i) const { return step(i).gens; }
    const GradedModule<F>& projective(int i) const { return *step(i).proj; }
    std::shared_ptr<const GradedModule<F>> projective_ptr(int i) const { return step(i).proj; }
    const GradedMap<F>& differential(int i) const { return step(i).differential; }

    // exactness, minimality when claimed, and the complex property, all within
    // the degree window; expensive (one rank per block), meant for checks
    bool verify(std::string* why = nullptr) const {
        auto fail = [&](const std::string& msg) {
            if (why) *why = msg;
            return false;
        };
        int top_deg = std::min(window_, module_->inspect_hi());
        for (const auto& st : steps_) top_deg = std::min(top_deg, st.proj->inspect_hi());
        for (int i = 0; i <= H_; ++i) {
            std::string sub;
            if (!steps_[i].differential.validate(top_deg, &sub))
                return fail("differential " + std::to_string(i) + ": " + sub);
        }
        for (int n = module_->lo(); n <= top_deg; ++n) {
            const Matrix<F> d0 = steps_[0].differential.at(n);
            int prev_rank = rank(d0);
            if (prev_rank != module_->dim(n))
                return fail("augmentation misses the module at degree " + std::to_string(n));
            for (int i = 1; i <= H_; ++i) {
                const Matrix<F> di = steps_[i].differential.at(n);
                if (!steps_[i - 1].differential.at(n).mul(di).is_zero())
                    return fail("differentials " + std::to_string(i - 1) + "," +
                                std::to_string(i) + " do not compose to zero at degree " +
                                std::to_string(n));
                const int r = rank(di);
                if (r + prev_rank != steps_[i - 1].proj->dim(n))
                    return fail("homology at step " + std::to_string(i - 1) + ", degree " +
                                std::to_string(n));
                prev_rank = r;
            }
        }
        if (minimal_) {
            const auto& fld = module_->field();
            for (int i = 1; i <= H_; ++i)
                for (std::size_t g = 0; g < steps_[i - 1].gens.size(); ++g) {
                    const int s = steps_[i - 1].gens[g].second;
                    if (s > top_deg) continue;
                    const Matrix<F> d = steps_[i].differential.at(s);
                    const int row = steps_[i - 1].proj->block_offset(s, static_cast<int>(g));
                    for (int c = 0; c < d.cols(); ++c)
                        if (!fld.is_zero(d.at(row, c)))
                            return fail("differential " + std::to_string(i) +
                                        " misses the radical at degree " + std::to_string(s));
                }
        }
        return true;
    }

private:
    Resolution() = default;
    const Step& step(int i) const {
        if (i < 0 || i > H_) throw InputError("resolution step " + std::to_string(i) +
                                              " outside [0, " + std::to_string(H_) + "]");
        return steps_[static_cast<std::size_t>(i)];
    }

    std::shared_ptr<const GradedModule<F>> module_;
    std::vector<Step> steps_;
    std::vector<SubmoduleResult<F>> kernels_;  // kernels_[i] is the (i+1)-st syzygy
    int H_ = 0;
    int window_ = 0;
    bool minimal_ = false;

    template <class G>
    friend Resolution<G> minimal_resolution(const GradedModule<G>&, int, int);
    template <class G>
    friend Resolution<G> horseshoe(const ShortExactSequence<G>&, const Resolution<G>&,
                                   const Resolution<G>&);
    template <class G>
    friend GradedModule<G> syzygy(const Resolution<G>&, int);
    template <class G>
    friend Resolution<G> resolution_from_parts(const GradedModule<G>&,
                                               const std::vector<ResolutionStepData<G>>&, int,
                                               int, bool);
};

// ----- resolution cache -----

// One step of a resolution in storable form: the generator list and the
// differential blocks. Matrices carry their field by value, so an entry
// stays valid after the algebra it was computed over is gone; rebuilding
// re-attaches the steps to whatever live module the caller presents.
template <class F>
struct ResolutionStepData {
    std::vector<std::pair<int, int>> gens;
    std::map<int, Matrix<F>> blocks;
};

template <class F>
Resolution<F> resolution_from_parts(const GradedModule<F>& m,
                                    const std::vector<ResolutionStepData<F>>& steps, int H,
                                    int window_hi, bool minimal) {
    engine_check(static_cast<int>(steps.size()) == H + 1,
                 "resolution rebuild needs one step per homological degree");
    Resolution<F> res;
    res.module_ = std::make_shared<GradedModule<F>>(m);
    res.H_ = H;
    res.window_ = window_hi;
    res.minimal_ = minimal;
    std::shared_ptr<const GradedModule<F>> prev = res.module_;
    for (int i = 0; i <= H; ++i) {
        typename Resolution<F>::Step st;
        st.gens = steps[i].gens;
        st.proj = std::make_shared<GradedModule<F>>(
            GradedModule<F>::free_module(m.algebra(), st.gens));
        st.differential.source = st.proj;
        st.differential.target = prev;
        st.differential.blocks = steps[i].blocks;
        prev = st.proj;
        res.steps_.push_back(std::move(st));
    }
    return res;
}

template <class F>
std::vector<ResolutionStepData<F>> resolution_parts(const Resolution<F>& res) {
    std::vector<ResolutionStepData<F>> out;
    for (int i = 0; i <= res.homological_bound(); ++i) {
        ResolutionStepData<F> st;
        st.gens = res.generators(i);
        st.blocks = res.differential(i).blocks;
        out.push_back(std::move(st));
    }
    return out;
}

template <class F>
bool same_parts(const std::vector<ResolutionStepData<F>>& a,
                const std::vector<ResolutionStepData<F>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].gens != b[i].gens || a[i].blocks != b[i].blocks) return false;
    return true;
}

inline std::string cache_digest(const std::string& s) {
    std::uint64_t h1 = 14695981039346656037ull;
    std::uint64_t h2 = 0x9e3779b97f4a7c15ull;
    for (unsigned char ch : s) {
        h1 = (h1 ^ ch) * 1099511628211ull;
        h2 = (h2 ^ ch) * 0x100000001b3ull + 0x632be59bd9b4e019ull;
    }
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(h1),
                  static_cast<unsigned long long>(h2));
    return std::string(buf);
}

template <class F>
std::string resolution_cache_key(const GradedModule<F>& m, int H, int window_hi) {
    std::ostringstream os;
    os << m.field().describe() << '|' << m.algebra().content_hash() << '|' << H << '|'
       << window_hi << '|';
    m.serialize(os, window_hi);
    return cache_digest(os.str());
}

// Process-wide content-addressed store of computed minimal resolutions,
// keyed on (field, algebra content, module content, H, window). Off by
// default; the command driver switches it on unless told not to. Access is
// serialized through one mutex. Verify mode recomputes on every hit and
// insists the cached steps match the fresh ones exactly.
template <class F>
class ResolutionCache {
public:
    static ResolutionCache& instance() {
        static ResolutionCache c;
        return c;
    }

    void set_enabled(bool on) {
        std::lock_guard<std::mutex> lk(mu_);
        enabled_ = on;
    }
    bool enabled() const {
        std::lock_guard<std::mutex> lk(mu_);
        return enabled_;
    }
    void set_verify(bool on) {
        std::lock_guard<std::mutex> lk(mu_);
        verify_ = on;
    }
    bool verify_mode() const {
        std::lock_guard<std::mutex> lk(mu_);
        return verify_;
    }
    void clear() {
        std::lock_guard<std::mutex> lk(mu_);
        map_.clear();
        hits_ = misses_ = 0;
    }
    std::size_t size() const {
        std::lock_guard<std::mutex> lk(mu_);
        return map_.size();
    }
    std::size_t hits() const {
        std::lock_guard<std::mutex> lk(mu_);
        return hits_;
    }
    std::size_t misses() const {
        std::lock_guard<std::mutex> lk(mu_);
        return misses_;
    }

    std::optional<std::vector<ResolutionStepData<F>>> lookup(const std::string& key) {
        std::lock_guard<std::mutex> lk(mu_);
        const auto it = map_.find(key);
        if (it == map_.end()) {
            ++misses_;
            return std::nullopt;
        }
        ++hits_;
        return it->second;
    }
    void store(const std::string& key, std::vector<ResolutionStepData<F>> parts) {
        std::lock_guard<std::mutex> lk(mu_);
        map_.insert_or_assign(key, std::move(parts));
    }

private:
    ResolutionCache() = default;
    mutable std::mutex mu_;
    bool enabled_ = false;
    bool verify_ = false;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    std::map<std::string, std::vector<ResolutionStepData<F>>> map_;
};

template <class F>
Resolution<F> minimal_resolution(const GradedModule<F>& m, int H, int window_hi) {
    if (H < 0) throw InputError("homological bound must be nonnegative");
    const auto& a = m.algebra();
    const auto& fld = m.field();
    if (!a.structure_report().pass())
        throw InputError("algebra failed its structure checks (" + a.structure_report().witness +
                         "); refusing to resolve over it");
    if (m.inspect_hi() < window_hi)
        throw BudgetError("module data ends at degree " + std::to_string(m.inspect_hi()) +
                          ", resolution window needs " + std::to_string(window_hi));

    auto& cache = ResolutionCache<F>::instance();
    std::string key;
    if (cache.enabled()) {
        key = resolution_cache_key(m, H, window_hi);
        if (auto hit = cache.lookup(key)) {
            if (cache.verify_mode()) {
                cache.set_enabled(false);
                const Resolution<F> fresh = minimal_resolution(m, H, window_hi);
                cache.set_enabled(true);
                engine_check(same_parts(*hit, resolution_parts(fresh)),
                             "cached resolution diverged from recomputation");
            }
            return resolution_from_parts(m, *hit, H, window_hi, true);
        }
    }

    Resolution<F> res;
    res.module_ = std::make_shared<GradedModule<F>>(m);
    res.H_ = H;
    res.window_ = window_hi;
    res.minimal_ = true;

    std::shared_ptr<const GradedModule<F>> target = res.module_;
    GradedMap<F> incl;  // inclusion of the current cover target into the previous projective
    for (int i = 0; i <= H; ++i) {
        auto t = top(*target, window_hi);
        std::vector<std::tuple<int, int, int>> order;  // (degree, vertex, ambient index)
        for (int n = t.module.lo(); n <= t.module.hi(); ++n) {
            const auto& reps = t.rep_index[n - t.module.lo()];
            for (std::size_t j = 0; j < reps.size(); ++j)
                order.emplace_back(n, t.module.tag(n, static_cast<int>(j)), reps[j]);
        }
        std::sort(order.begin(), order.end());

        std::vector<std::pair<int, int>> gens;
        std::vector<Matrix<F>> images;
        for (const auto& [n, v, amb] : order) {
            gens.emplace_back(v, n);
            Matrix<F> e(fld, target->dim(n), 1);
            e.at(amb, 0) = fld.one();
            images.push_back(std::move(e));
        }
        auto proj = std::make_shared<GradedModule<F>>(projective_module(a, gens));
        if (proj->inspect_hi() < window_hi)
            throw BudgetError("projective at step " + std::to_string(i) +
                              " only reaches degree " + std::to_string(proj->inspect_hi()) +
                              ", resolution window needs " + std::to_string(window_hi));
        GradedMap<F> cover = map_from_generator_images<F>(proj, target, images, window_hi);

        typename Resolution<F>::Step st;
        st.gens = std::move(gens);
        st.proj = proj;
        if (i == 0) {
            st.differential = cover;
        } else {
            st.differential.source = proj;
            st.differential.target = incl.target;
            for (const auto& [n, blk] : cover.blocks)
                st.differential.blocks.emplace(n, incl.at(n).mul(blk));
        }
        res.steps_.push_back(std::move(st));

        if (i < H) {
            auto K = kernel_of(cover, window_hi);
            incl = K.inclusion;
            target = K.inclusion.source;
            res.kernels_.push_back(std::move(K));
        }
    }
    if (cache.enabled()) cache.store(key, resolution_parts(res));
    return res;
}

// Omega^i within the resolution's budget; syzygies of a minimal resolution are
// stored during construction, others are recomputed from the differential.
template <class F>
GradedModule<F> syzygy(const Resolution<F>& res, int i) {
    if (i < 0 || i > res.homological_bound())
        throw InputError("syzygy index " + std::to_string(i) + " outside [0, " +
                         std::to_string(res.homological_bound()) + "]");
    if (i == 0) return res.module();
    if (static_cast<std::size_t>(i) <= res.kernels_.size())
        return res.kernels_[static_cast<std::size_t>(i - 1)].module;
    return kernel_of(res.differential(i - 1), res.degree_bound()).module;
}

template <class F>
struct ShortExactSequence {
    GradedMap<F> inclusion;   // A -> B
    GradedMap<F> projection;  // B -> C
};

namespace detail {

// column of a map at one generator coordinate of its free source
template <class F>
Matrix<F> generator_image(const GradedMap<F>& f, int g) {
    const auto [v, s] = f.source->gens()[static_cast<std::size_t>(g)];
    (void)v;
    std::vector<int> idx = {f.source->block_offset(s, g)};
    return f.at(s).col_select(idx);
}

template <class F>
Matrix<F> two_by_two(const F& fld, const Matrix<F>& tl, const Matrix<F>& tr, const Matrix<F>& br) {
    Matrix<F> out(fld, tl.rows() + br.rows(), tl.cols() + tr.cols());
    for (int r = 0; r < tl.rows(); ++r) {
        for (int c = 0; c < tl.cols(); ++c) out.at(r, c) = tl.at(r, c);
        for (int c = 0; c < tr.cols(); ++c) out.at(r, tl.cols() + c) = tr.at(r, c);
    }
    for (int r = 0; r < br.rows(); ++r)
        for (int c = 0; c < br.cols(); ++c) out.at(tl.rows() + r, tl.cols() + c) = br.at(r, c);
    return out;
}

}  // namespace detail

// Graded horseshoe: from resolutions of the ends of a degreewise exact sequence
// 0 -> A -> B -> C -> 0, assemble a resolution of the middle with projectives
// P_i(A) + P_i(C) and differentials in block triangular form. Exact by
// construction, not minimal in general.
template <class F>
Resolution<F> horseshoe(const ShortExactSequence<F>& ses, const Resolution<F>& res_a,
                        const Resolution<F>& res_c) {
    const GradedModule<F>& A = *ses.inclusion.source;
    const GradedModule<F>& B = *ses.inclusion.target;
    const GradedModule<F>& C = *ses.projection.target;
    const auto& a = A.algebra();
    const auto& fld = A.field();
    if (res_a.homological_bound() != res_c.homological_bound())
        throw InputError("horseshoe needs equal homological bounds");
    const int H = res_a.homological_bound();
    const int window = std::min(res_a.degree_bound(), res_c.degree_bound());

    const int lo = std::min({A.lo(), B.lo(), C.lo()});
    const int top =
        std::min({window, A.inspect_hi(), B.inspect_hi(), C.inspect_hi(),
                  ses.projection.source->inspect_hi()});
    for (int n = lo; n <= top; ++n) {
        if (ses.projection.source->dim(n) != B.dim(n))
            throw InputError("horseshoe: the two maps disagree on the middle module at degree " +
                             std::to_string(n));
        if (A.dim(n) + C.dim(n) != B.dim(n) || rank(ses.inclusion.at(n)) != A.dim(n) ||
            rank(ses.projection.at(n)) != C.dim(n) ||
            !ses.projection.at(n).mul(ses.inclusion.at(n)).is_zero())
            throw InputError("horseshoe: sequence is not exact at degree " + std::to_string(n));
    }

    Resolution<F> res;
    res.module_ = ses.inclusion.target;
    res.H_ = H;
    res.window_ = window;
    res.minimal_ = false;

    GradedMap<F> tau;  // current correction P_i(C) -> P_{i-1}(A)
    for (int i = 0; i <= H; ++i) {
        std::vector<std::pair<int, int>> gens = res_a.generators(i);
        const auto& cg = res_c.generators(i);
        gens.insert(gens.end(), cg.begin(), cg.end());
        auto proj = std::make_shared<GradedModule<F>>(projective_module(a, gens));

        typename Resolution<F>::Step st;
        st.gens = std::move(gens);
        st.proj = proj;
        st.differential.source = proj;

        if (i == 0) {
            // augmentation: A-generators map through the inclusion, C-generators
            // lift through the projection
            std::vector<Matrix<F>> images;
            for (std::size_t g = 0; g < res_a.generators(0).size(); ++g) {
                const int s = res_a.generators(0)[g].second;
                images.push_back(
                    ses.inclusion.at(s).mul(detail::generator_image(res_a.differential(0),
                                                                    static_cast<int>(g))));
            }
            for (std::size_t g = 0; g < res_c.generators(0).size(); ++g) {
                const int s = res_c.generators(0)[g].second;
                auto u = solve(ses.projection.at(s),
                               detail::generator_image(res_c.differential(0),
                                                       static_cast<int>(g)));
                engine_check(u.has_value(), "horseshoe: augmentation lift failed");
                images.push_back(std::move(*u));
            }
            st.differential = map_from_generator_images<F>(proj, ses.inclusion.target, images,
                                                           window);
        } else {
            // tau_i on generators: solve the previous-layer equation, then spread
            std::vector<Matrix<F>> tau_images;
            for (std::size_t g = 0; g < res_c.generators(i).size(); ++g) {
                const int s = res_c.generators(i)[g].second;
                const Matrix<F> dcol =
                    detail::generator_image(res_c.differential(i), static_cast<int>(g));
                std::optional<Matrix<F>> t;
                if (i == 1) {
                    // C-part of the assembled augmentation applied to d_1 image
                    const Matrix<F> eps = res.steps_[0].differential.at(s);
                    const int acols = res_a.projective(0).dim(s);
                    std::vector<int> cpos;
                    for (int c = acols; c < eps.cols(); ++c) cpos.push_back(c);
                    const Matrix<F> y = eps.col_select(cpos).mul(dcol);
                    const Matrix<F> lhs =
                        ses.inclusion.at(s).mul(res_a.differential(0).at(s));
                    t = solve(lhs, y.scaled(fld.neg(fld.one())));
                } else {
                    const Matrix<F> y = tau.at(s).mul(dcol);
                    t = solve(res_a.differential(i - 1).at(s),
                              y.scaled(fld.neg(fld.one())));
                }
                engine_check(t.has_value(), "horseshoe: differential lift failed at step " +
                                                std::to_string(i));
                tau_images.push_back(std::move(*t));
            }
            GradedMap<F> next_tau = map_from_generator_images(
                res_c.projective_ptr(i), res_a.projective_ptr(i - 1), tau_images, window);

            st.differential.target = res.steps_[i - 1].proj;
            const int blk_hi = std::min({proj->inspect_hi(), window});
            for (int n = proj->lo(); n <= blk_hi; ++n) {
                Matrix<F> db = detail::two_by_two(fld, res_a.differential(i).at(n),
                                                  next_tau.at(n), res_c.differential(i).at(n));
                // embed target coordinates of P(A) and P(C) into the concatenation
                engine_check(db.rows() == st.differential.target->dim(n) &&
                                 db.cols() == proj->dim(n),
                             "horseshoe: block assembly shape mismatch");
                st.differential.blocks.emplace(n, std::move(db));
            }
            tau = std::move(next_tau);

            // the complex property is the one identity the assembly must satisfy
            for (int n = proj->lo(); n <= blk_hi; ++n)
                engine_check(res.steps_[i - 1].differential.at(n).mul(st.differential.at(n))
                                 .is_zero(),
                             "horseshoe: assembled differentials do not compose to zero");
        }
        res.steps_.push_back(std::move(st));
    }
    return res;
}

// Chain map over f covering resolutions of source and target: f_0..f_depth with
// every square commuting. Found degreewise through the augmentations; solvable
// whenever the inputs are exact within the window.
template <class F>
std::vector<GradedMap<F>> lift_chain_map(const GradedMap<F>& f, const Resolution<F>& res_m,
                                         const Resolution<F>& res_n, int depth) {
    if (depth < 0 ||
        depth > std::min(res_m.homological_bound(), res_n.homological_bound()))
        throw InputError("lift depth outside the resolutions' bounds");
    const int window = std::min(res_m.degree_bound(), res_n.degree_bound());
    const auto& fld = f.source->field();

    std::vector<GradedMap<F>> out;
    for (int j = 0; j <= depth; ++j) {
        const GradedMap<F>& dm = res_m.differential(j);
        const GradedMap<F>& dn = res_n.differential(j);
        const GradedMap<F>& prev = j == 0 ? f : out.back();
        const auto& gens = res_m.projective(j).gens();

        std::vector<Matrix<F>> images(gens.size(), Matrix<F>(fld, 0, 0));
        std::map<int, std::vector<int>> by_deg;
        for (std::size_t g = 0; g < gens.size(); ++g)
            by_deg[gens[g].second].push_back(static_cast<int>(g));
        for (const auto& [s, idxs] : by_deg) {
            std::vector<int> offs;
            for (int g : idxs) offs.push_back(res_m.projective(j).block_offset(s, g));
            const Matrix<F> rhs = prev.at(s).mul(dm.at(s).col_select(offs));
            auto t = solve(dn.at(s), rhs);
            if (!t)
                throw InputError("lift_chain_map: no lift at step " + std::to_string(j) +
                                 ", degree " + std::to_string(s) +
                                 " (source map is not a chain map within the window)");
            for (std::size_t c = 0; c < idxs.size(); ++c) {
                std::vector<int> one = {static_cast<int>(c)};
                images[static_cast<std::size_t>(idxs[c])] = t->col_select(one);
            }
        }
        out.push_back(map_from_generator_images(res_m.projective_ptr(j),
                                                res_n.projective_ptr(j), images, window));
    }
    return out;
}

// Generator multisets of the minimized resolution, step by step, from the
// generator-coordinate complex (the resolution with the radical quotiented
// away). Exact below the homological bound; the last step is an upper bound
// because the next differential is outside the data.
template <class F>
std::vector<std::vector<std::pair<int, int>>> minimize(const Resolution<F>& res) {
    const auto& fld = res.module().field();
    const int H = res.homological_bound();
    using Key = std::pair<int, int>;  // (degree, vertex)

    std::vector<std::map<Key, std::vector<int>>> coords(H + 1);
    for (int i = 0; i <= H; ++i) {
        const auto& gens = res.generators(i);
        for (std::size_t g = 0; g < gens.size(); ++g)
            coords[i][{gens[g].second, gens[g].first}].push_back(
                res.projective(i).block_offset(gens[g].second, static_cast<int>(g)));
    }
    std::vector<std::map<Key, int>> trank(H + 2);
    for (int i = 1; i <= H; ++i)
        for (const auto& [key, tcols] : coords[i]) {
            auto it = coords[i - 1].find(key);
            if (it == coords[i - 1].end()) {
                trank[i][key] = 0;
                continue;
            }
            const Matrix<F> d = res.differential(i).at(key.first);
            Matrix<F> t(fld, static_cast<int>(it->second.size()),
                        static_cast<int>(tcols.size()));
            for (std::size_t r = 0; r < it->second.size(); ++r)
                for (std::size_t c = 0; c < tcols.size(); ++c)
                    t.at(static_cast<int>(r), static_cast<int>(c)) =
                        d.at(it->second[r], tcols[c]);
            trank[i][key] = rank(t);
        }

    auto rank_at = [&](int i, const Key& key) {
        auto it = trank[i].find(key);
        return it == trank[i].end() ? 0 : it->second;
    };
    std::vector<std::vector<std::pair<int, int>>> out(H + 1);
    for (int i = 0; i <= H; ++i)
        for (const auto& [key, cs] : coords[i]) {
            const int mult = static_cast<int>(cs.size()) - (i > 0 ? rank_at(i, key) : 0) -
                             rank_at(i + 1, key);
            engine_check(mult >= 0, "minimize: negative generator multiplicity");
            for (int c = 0; c < mult; ++c) out[i].emplace_back(key.second, key.first);
        }
    return out;
}

}  // namespace koszul
