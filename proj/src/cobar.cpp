#include "operadia/cobar.hpp"

#include <algorithm>
#include <stdexcept>

namespace operadia {

namespace {

int wide(int a, std::size_t levels)
{
    int r = 1;
    for (std::size_t i = 0; i < levels; ++i) r *= std::max(a, 1);
    return r;
}

ElemMap columns(Matrix m)
{
    return [m = std::move(m)](int i) { return m.col(static_cast<std::size_t>(i)); };
}

KeyMap chain(std::vector<KeyMap> fs)
{
    return [fs = std::move(fs)](const Key& k) {
        Comb c = single(k);
        for (const KeyMap& f : fs) c = operadia::apply(f, c);
        return c;
    };
}

// Subspace split into (degree, weight) pieces, assuming it is bigraded.
Subspace homogeneous(const GradedSpace& x, const Subspace& s)
{
    std::map<std::pair<int, int>, std::vector<int>> parts;
    for (std::size_t i = 0; i < x.dim(); ++i) parts[{x.deg[i], x.weight(i)}].push_back(static_cast<int>(i));
    Matrix out(x.dim(), 0);
    for (const auto& [dw, idx] : parts) {
        Matrix rows = s.basis.select_rows(idx);
        Subspace piece = image_basis(rows);
        std::vector<SVec> cols;
        for (std::size_t j = 0; j < piece.dim(); ++j) {
            std::vector<SVec::Entry> e;
            for (const auto& [r, v] : piece.basis.col(j).entries()) e.emplace_back(idx[r], v);
            cols.emplace_back(std::move(e));
        }
        out = out.hstack(Matrix::from_columns(x.dim(), std::move(cols)));
    }
    return {x.dim(), out};
}

struct Levels {
    std::vector<Seq> pq, pqq, ppq, pqp;
};

Levels levels_of(const Operad& p, const Coperad& q)
{
    return {{p.seq, q.seq}, {p.seq, q.seq, q.seq}, {p.seq, p.seq, q.seq}, {p.seq, q.seq, p.seq}};
}

// Σ(ητ, α) at `level`, with ητ(q) = τ(q)·1.
KeyMap twist_at(const std::vector<Seq>& lv, int level, const Operad& p, const Coperad& q, const Matrix& alpha)
{
    ElemMap eta_tau = [&p, tau = q.tau](int e) { return SVec::unit(p.unit, tau.get(e)); };
    ElemMap a = columns(alpha);
    return [lv, level, eta_tau, a](const Key& k) { return shuffle_at_level(lv, k, level, eta_tau, a, -1); };
}

KeyMap split_at(const std::vector<Seq>& lv, int level, const Coperad& q)
{
    SplitMap w = [&q](int e) { return q.w[e]; };
    return [lv, level, w, &q](const Key& k) { return expand_level(lv, k, level, w, q.seq, q.seq); };
}

bool is_top(const Tree& t, const std::vector<int>& ends, const Seq& labels, int pos)
{
    return t[pos] >= 0 && ends[pos] == pos + 1 + labels.ar[t[pos]];
}

int leaves_before(const Tree& t, int pos)
{
    return static_cast<int>(std::count(t.begin(), t.begin() + pos, -1));
}

}  // namespace

CobarAlgebra cobar(const CogebraOverOperad& v, const Coperad& q, const TwistingMorphism& alpha, int max_level)
{
    if (!check_twisting(alpha.alpha, q, v.p).is_zero()) throw std::invalid_argument("cobar: α is not a twisting morphism");
    CobarAlgebra c;
    c.v = v;
    c.algebra = free_algebra_coperad(q, ChainComplex(v.space, v.d));
    GradedMap va = cotensor_contra(v.vp, c.algebra.xq, -1, single_level(columns(alpha.alpha.mat)));
    c.b = add(compose(c.algebra.inclusion, v.d), scale(compose(va, v.coaction), -1));
    c.algebra.algebra.d = extend_derivation_qalg(c.algebra, c.b);
    if (max_level >= 0) c.tower = free_tower(c.algebra, max_level);
    return c;
}

std::vector<SquareZeroReport> cobar_curvature(const CobarAlgebra& c)
{
    const Coperad& q = c.algebra.algebra.q;
    GradedMap xth = cotensor_from_unit(c.algebra.xq, -2, [&q](const Key& k) { return q.theta.get(k[0]); });
    std::vector<SquareZeroReport> out;
    for (std::size_t n = 0; n < c.tower.levels.size(); ++n) {
        const QAlgebra& lv = c.tower.levels[n];
        const Matrix& pr = c.tower.from_head[n];
        GradedMap lth = lv.unit_map(q.theta, -2);
        out.push_back({lv.d.mat * (pr * c.b.mat) + pr * xth.mat, lv.d.mat * lv.d.mat + lv.action.mat * lth.mat});
    }
    return out;
}

CobarDual cobar_dual(const QAlgebra& lambda, const Operad& p, const TwistingMorphism& alpha)
{
    if (!check_twisting(alpha.alpha, lambda.q, p).is_zero())
        throw std::invalid_argument("cobar†: α is not a twisting morphism");
    CobarDual c;
    c.lambda = lambda;
    c.cogebra = free_cogebra_operad(p, lambda.space);
    GradedMap la = cotensor_contra(c.cogebra.xp, lambda.lq, -1, single_level(columns(alpha.alpha.mat)));
    c.b = add(compose(lambda.d, c.cogebra.projection),
              compose(lambda.action, compose(la, c.cogebra.inclusion)));
    c.cogebra.cogebra.d = extend_coderivation_pcog(c.cogebra, c.b);
    return c;
}

SquareZeroReport cobar_dual_square_zero(const CobarDual& c)
{
    return check_square_zero_pcog(c.cogebra, c.cogebra.cogebra.d, c.b);
}

GradedMap cobar_map(const CobarAlgebra& src, const CobarAlgebra& tgt, const GradedMap& phi)
{
    return tensor_power(src.algebra.xq, tgt.algebra.xq, columns(phi.mat));
}

GradedMap cobar_dual_map(const CobarDual& src, const CobarDual& tgt, const GradedMap& g)
{
    GradedMap gp = compose(tensor_power(src.cogebra.xp, tgt.cogebra.xp, columns(g.mat)), src.cogebra.inclusion);
    auto m = solve(tgt.cogebra.carrier.basis, gp.mat);
    if (!m) throw std::invalid_argument("cobar† map: image leaves L^P");
    return GradedMap(src.cogebra.cogebra.space, tgt.cogebra.cogebra.space, 0, *m);
}

TrustWindow trust_window(const Truncation& t, int lo, int hi)
{
    return {std::max(lo, t.degree_lo + 2), std::min(hi, t.degree_hi - 2)};
}

CobarResolution unit_resolution(const CogebraOverOperad& v, const Coperad& q)
{
    const Operad& p = v.p;
    if (!p.trees) throw std::invalid_argument("resolution expects P = Bar†Q");
    int iota = q.adapted_unit();
    if (iota < 0) throw std::invalid_argument("resolution expects a cogmented coperad");

    CobarResolution r;
    r.q = q;
    r.p = p;
    r.v = v;
    r.alpha = canonical_alpha(q, p);
    r.cobar = cobar(v, q, r.alpha, -1);
    r.dual = cobar_dual(r.cobar.algebra.algebra, p, r.alpha);

    int a = std::max({1, p.trunc.max_arity, q.seq.max_arity()});
    int w = std::min(p.trunc.max_weight, q.trunc.max_weight);
    const GradedSpace& vs = v.space;
    Levels lv = levels_of(p, q);
    r.vpq = Cotensor(vs, lv.pq, wide(a, 2), w);
    Cotensor vpqq(vs, lv.pqq, wide(a, 3), w);
    Cotensor vpqp(vs, lv.pqp, wide(a, 3), w);
    Cotensor outer(v.vp.space(), lv.pq, wide(a, 2), w);

    GradedMap lax = lax_map(r.dual.cogebra.xp, r.cobar.algebra.xq, r.vpq);
    r.embed = compose(lax, r.dual.cogebra.inclusion);
    r.carrier = image_basis(r.embed.mat);
    r.carrier.ambient_dim = r.vpq.size();

    BarDualDerivations parts = bar_dual_derivations(q, p);
    auto derivation = [&p](const std::vector<SVec>& values) -> ElemMap {
        return [&p, values](int e) { return derive_tree(p, values, -1, e, [](int) { return true; }); };
    };
    auto at_root = [&lv](ElemMap f) -> KeyMap {
        return [&lv, f](const Key& k) { return apply_at_level(lv.pq, k, 0, f, -1); };
    };
    const Matrix& al = r.alpha.alpha.mat;

    TwoLevelMap m = [&p](const Key& k) { return p.compose_full(k); };
    KeyMap f1 = chain({split_at(lv.pq, 1, q), twist_at(lv.pqq, 1, p, q, al),
                       [&lv, m](const Key& k) { return collapse_levels(lv.ppq, k, 0, m); }});
    r.parts[0] = cotensor_contra(r.vpq, r.vpq, -1, f1);
    r.parts[1] = scale(cotensor_contra(r.vpq, r.vpq, -1, at_root(derivation(parts.w))), -1);
    ElemMap dq = columns(q.d.mat);
    ElemMap dr = derivation(parts.q);
    KeyMap f3 = [&lv, dq, dr](const Key& k) {
        Comb c = apply_at_level(lv.pq, k, 0, dr, -1);
        add_comb(c, shuffle_at_level(lv.pq, k, 1, identity_elem(), dq, -1));
        return c;
    };
    r.parts[2] = scale(cotensor_contra(r.vpq, r.vpq, -1, f3), -1);
    r.parts[3] = shuffle_power(r.vpq, r.vpq, identity_elem(), columns(v.d.mat), -1);
    GradedMap a_ext = scale(tensor_power(r.vpq, outer, columns(v.coaction.mat)), -1);
    GradedMap l3 = lax_map(outer, v.vp, vpqp);
    GradedMap tw = cotensor_contra(vpqp, vpqq, -1, twist_at(lv.pqq, 2, p, q, al));
    GradedMap sp = cotensor_contra(vpqq, r.vpq, 0, split_at(lv.pq, 1, q));
    r.parts[4] = compose(sp, compose(tw, compose(l3, a_ext)));
    r.parts[5] = scale(cotensor_contra(r.vpq, r.vpq, -1, at_root(derivation(parts.theta))), -1);
    r.d = r.parts[0];
    for (int i = 1; i < 6; ++i) r.d = add(r.d, r.parts[i]);

    const TreeBasis& tb = *p.trees;
    std::vector<SVec> wvals = parts.w;
    KeyMap dwu = [&p, &tb, wvals, iota](const Key& k) {
        const Tree& t = tb.trees[k[0]];
        std::vector<int> ends = subtree_ends(tb.labels, t);
        auto at = [&](int pos) {
            if (!is_top(t, ends, tb.labels, pos)) return false;
            int first = leaves_before(t, pos);
            for (int i = 0; i < tb.labels.ar[t[pos]]; ++i)
                if (k[1 + first + i] != iota) return false;
            return true;
        };
        Comb c;
        SVec dt = derive_tree(p, wvals, -1, k[0], at);
        for (const auto& [e, v] : dt.entries()) {
            Key nk = k;
            nk[0] = e;
            add_term(c, nk, v);
        }
        return c;
    };
    r.d2u = scale(cotensor_contra(r.vpq, r.vpq, -1, dwu), -1);

    Matrix beta = r.alpha.beta.mat;
    KeyMap h = [&tb, &q, beta, iota](const Key& k) {
        Comb c;
        const Tree& t = tb.trees[k[0]];
        std::vector<int> ends = subtree_ends(tb.labels, t);
        int pos = -1;
        for (int i = 0; i < static_cast<int>(t.size()); ++i)
            if (is_top(t, ends, tb.labels, i)) {
                pos = i;
                break;
            }
        if (pos < 0) return c;
        int first = leaves_before(t, pos);
        int ar = tb.labels.ar[t[pos]];
        for (int i = 0; i < first + ar; ++i)
            if (k[1 + i] != iota) return c;
        Tree t2(t.begin(), t.begin() + pos);
        t2.push_back(-1);
        t2.insert(t2.end(), t.begin() + ends[pos], t.end());
        int e2 = tb.find(t2);
        if (e2 < 0) return c;
        int before = 0, after = 0;
        for (int i = 0; i < static_cast<int>(t.size()); ++i) {
            if (t[i] < 0 || i == pos) continue;
            (i < pos ? before : after) += tb.labels.deg[t[i]];
        }
        for (const auto& [qe, coef] : beta.col(static_cast<std::size_t>(tb.single(t[pos]))).entries()) {
            Key nk{e2};
            for (int i = 0; i < first; ++i) nk.push_back(iota);
            nk.push_back(qe);
            nk.insert(nk.end(), k.begin() + 1 + first + ar, k.end());
            int s = ((before + q.seq.deg[qe] * after) % 2 == 0) ? 1 : -1;
            add_term(c, nk, coef * s);
        }
        return c;
    };
    r.h = scale(cotensor_contra(r.vpq, r.vpq, 1, h), -1);

    Cotensor lp = r.dual.cogebra.xp;
    GradedMap ip = tensor_power(v.vp, lp, columns(r.cobar.algebra.inclusion.mat));
    r.j = compose(lax, compose(ip, v.coaction));
    r.proj = cotensor_to_unit(r.vpq, 0, single(Key{p.unit, iota}));
    r.kernel = homogeneous(r.vpq.space(), intersection(kernel_basis(r.proj.mat), r.carrier));
    return r;
}

bool transported_differential_agrees(const CobarResolution& r)
{
    return r.d.mat * r.embed.mat == r.embed.mat * r.dual.cogebra.cogebra.d.mat;
}

std::array<bool, 6> kernel_stability(const CobarResolution& r)
{
    std::array<bool, 6> out{};
    for (int i = 0; i < 6; ++i) out[i] = contains(r.kernel, span(r.parts[i].mat * r.kernel.basis));
    return out;
}

ChainComplex restricted_complex(const GradedSpace& ambient, const Matrix& d, const Subspace& s)
{
    GradedSpace sp = subspace_grading(ambient, s);
    return ChainComplex(sp, GradedMap(sp, sp, -1, restrict_map(d, s, s)));
}

namespace {

std::vector<int> trusted_columns(const GradedSpace& x, const Subspace& s, const TrustWindow& w)
{
    GradedSpace sp = subspace_grading(x, s);
    std::vector<int> cols;
    for (std::size_t i = 0; i < sp.dim(); ++i)
        if (w.contains(sp.deg[i])) cols.push_back(static_cast<int>(i));
    return cols;
}

}  // namespace

HomotopyReport verify_homotopy_identities(const CobarResolution& r, const TrustWindow& w)
{
    HomotopyReport rep;
    rep.window = w;
    Matrix k = r.kernel.basis.select_columns(trusted_columns(r.vpq.space(), r.kernel, w));
    const Matrix& h = r.h.mat;
    Matrix a = r.parts[0].mat + r.d2u.mat;
    Matrix b = r.parts[2].mat + r.parts[3].mat;
    rep.first_residual = (a * h + h * a) * k - k;
    rep.second_residual = (b * h + h * b) * k;
    rep.h_square_zero = (h * h).is_zero();
    std::vector<int> idx;
    for (int i = 0; i < r.vpq.size(); ++i)
        if (r.vpq.key(i)[0] == r.p.trees->trivial) idx.push_back(i);
    rep.h_zero_on_unit_tree = h.transpose().select_columns(idx).is_zero();
    return rep;
}

bool AcyclicityReport::ok() const
{
    for (const auto& [d, n] : kernel_homology)
        if (n != 0) return false;
    for (const auto& [d, n] : kernel_dims) {
        auto it = dh_ranks.find(d);
        if (it == dh_ranks.end() || it->second != n) return false;
    }
    return d_square_zero && q_left_inverse && unit_quasi_iso;
}

AcyclicityReport verify_acyclicity(const CobarResolution& r, const TrustWindow& w)
{
    AcyclicityReport rep;
    rep.window = w;
    const GradedSpace& amb = r.vpq.space();
    rep.d_square_zero = (r.d.mat * r.d.mat * r.carrier.basis).is_zero();
    rep.q_left_inverse = r.proj.mat * r.j.mat == Matrix::identity(r.v.space.dim());

    ChainComplex k = restricted_complex(amb, r.d.mat, r.kernel);
    for (const auto& [d, n] : homology(k))
        if (w.contains(d)) rep.kernel_homology[d] = n;
    Matrix hk = restrict_map(r.d.mat * r.h.mat + r.h.mat * r.d.mat, r.kernel, r.kernel);
    GradedMap hkm(k.space, k.space, 0, hk);
    for (const auto& [d, n] : k.space.dims()) {
        if (!w.contains(d)) continue;
        rep.kernel_dims[d] = n;
        rep.dh_ranks[d] = rank(hkm.block(d));
    }

    ChainComplex total = restricted_complex(amb, r.d.mat, r.carrier);
    auto jc = solve(r.carrier.basis, r.j.mat);
    if (jc) {
        GradedMap jm(r.v.space, total.space, 0, *jc);
        rep.unit_quasi_iso = is_quasi_iso(jm, ChainComplex(r.v.space, r.v.d), total, w.lo, w.hi);
    }
    return rep;
}

}  // namespace operadia
