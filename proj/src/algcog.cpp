#include "operadia/algcog.hpp"

#include <stdexcept>

namespace operadia {

namespace {

int wide(int a, std::size_t levels)
{
    int r = 1;
    for (std::size_t i = 0; i < levels; ++i) r *= std::max(a, 1);
    return r;
}

AxiomCheck check(std::string name, bool ok, std::string detail = "")
{
    return {std::move(name), ok, ok ? "" : std::move(detail)};
}

std::string nnz_detail(const Matrix& m) { return "residual has " + std::to_string(m.nnz()) + " nonzero entries"; }

AxiomCheck zero_check(std::string name, const Matrix& residual)
{
    return check(std::move(name), residual.is_zero(), nnz_detail(residual));
}

// [a; (b_1 c_1), ..., (b_k c_k)] -> [a; b_1..b_k; c_1..c_k]; each pair is a key of `inner`.
std::pair<Key, int> flatten(int top, const std::vector<int>& pairs, const KeyBasis& inner,
                            const std::vector<Seq>& inner_levels)
{
    Key k{top};
    Key tail;
    std::vector<std::pair<int, int>> swaps;
    int c_deg = 0;
    for (int v : pairs) {
        const Key& ik = inner.key(v);
        int b = ik[0];
        int b_deg = inner_levels[0].deg[b];
        swaps.emplace_back(b_deg, c_deg);
        k.push_back(b);
        int d = 0;
        for (std::size_t j = 1; j < ik.size(); ++j) {
            tail.push_back(ik[j]);
            d += inner_levels[1].deg[ik[j]];
        }
        c_deg += d;
    }
    k.insert(k.end(), tail.begin(), tail.end());
    return {k, koszul_sign(swaps)};
}

// Inverse of flatten; returns an empty key when some pair is outside `inner`.
std::pair<Key, int> regroup(const std::vector<Seq>& levels3, const Key& k, const KeyBasis& inner)
{
    auto off = level_offsets(levels3, k);
    Key out{k[0]};
    std::vector<std::pair<int, int>> swaps;
    int c_deg = 0;
    int pos = off[2];
    for (int j = off[1]; j < off[2]; ++j) {
        int b = k[j];
        Key ik{b};
        int d = 0;
        for (int c = 0; c < levels3[1].ar[b]; ++c, ++pos) {
            ik.push_back(k[pos]);
            d += levels3[2].deg[k[pos]];
        }
        int idx = inner.find(ik);
        if (idx < 0) return {Key{}, 0};
        swaps.emplace_back(levels3[1].deg[b], c_deg);
        c_deg += d;
        out.push_back(idx);
    }
    return {out, koszul_sign(swaps)};
}

ElemMap column_of(const Matrix& m)
{
    return [&m](int i) { return m.col(static_cast<std::size_t>(i)); };
}

Comb unit_comb(const Operad& p) { return single(Key{p.unit}); }

}  // namespace

KeyMap single_level(const std::function<SVec(int)>& f)
{
    return [f](const Key& k) { return to_comb(f(k[0])); };
}

KeyMap coproduct_map(const Coperad& q)
{
    return [&q](const Key& k) { return q.w[k[0]]; };
}

KeyMap composition_map(const Operad& p)
{
    return [&p](const Key& k) { return to_comb(p.compose_full(k)); };
}

Comb to_comb(const SVec& v)
{
    Comb c;
    for (const auto& [i, x] : v.entries()) add_term(c, Key{i}, x);
    return c;
}

SVec from_comb(const KeyBasis& b, const Comb& c) { return b.to_svec(c); }

AlgebraOverOperad free_algebra_operad(const Operad& p, const ChainComplex& x)
{
    int a_max = p.trunc.max_arity;
    int w_max = p.trunc.max_weight;
    Seq xs = seq_of_space(x.space);
    std::vector<Seq> lv{p.seq, xs};
    Composite carrier(lv, a_max, w_max);
    GradedSpace sp = carrier.space();
    ElemMap dp = column_of(p.d.mat);
    ElemMap dx = column_of(x.d.mat);
    Matrix d = matrix_of(sp.dim(), sp.dim(), [&](int i) {
        const Key& k = carrier.key(i);
        Comb c = apply_at_level(lv, k, 0, dp, -1);
        add_comb(c, shuffle_at_level(lv, k, 1, identity_elem(), dx, -1));
        return carrier.to_svec(c);
    });

    AlgebraOverOperad a;
    a.p = p;
    a.carrier = ChainComplex(sp, GradedMap(sp, sp, -1, d));
    a.domain = Composite({p.seq, seq_of_space(sp)}, a_max, w_max);
    std::vector<Seq> lv3{p.seq, p.seq, xs};
    Matrix act = matrix_of(a.domain.size(), sp.dim(), [&](int i) {
        const Key& k = a.domain.key(i);
        auto [flat, sign] = flatten(k[0], std::vector<int>(k.begin() + 1, k.end()), carrier, lv);
        Comb c = collapse_levels(lv3, flat, 0, [&](const Key& g) { return p.compose_full(g); });
        return carrier.to_svec(c).scaled(sign);
    });
    a.action = GradedMap(a.domain.space(), sp, 0, act);
    return a;
}

Report validate_algebra(const AlgebraOverOperad& a)
{
    Report r;
    const Operad& p = a.p;
    const GradedSpace& sp = a.carrier.space;
    Seq lam = seq_of_space(sp);
    std::vector<Seq> lv{p.seq, lam};
    auto act = [&](const Comb& c) { return a.action.mat * a.domain.to_svec(c); };

    bool unit_ok = true;
    for (std::size_t i = 0; i < sp.dim(); ++i) {
        int k = a.domain.find(Key{p.unit, static_cast<int>(i)});
        if (k < 0 || !(a.action.mat.col(k) == SVec::unit(static_cast<int>(i)))) unit_ok = false;
    }
    r.checks.push_back(check("unit", unit_ok, "a(1; x) differs from x"));

    std::vector<Seq> lv3{p.seq, p.seq, lam};
    Composite c3(lv3, wide(p.trunc.max_arity, 2), p.trunc.max_weight);
    TwoLevelMap inner = [&](const Key& g) {
        int k = a.domain.find(g);
        return k < 0 ? SVec() : a.action.mat.col(k);
    };
    bool assoc_ok = true;
    for (const Key& k : c3.keys()) {
        SVec r1 = act(collapse_levels(lv3, k, 1, inner));
        SVec r2 = act(collapse_levels(lv3, k, 0, [&](const Key& g) { return p.compose_full(g); }));
        if (!(r1 == r2)) {
            assoc_ok = false;
            break;
        }
    }
    r.checks.push_back(check("associativity", assoc_ok, "a∘(Id⋄a) differs from a∘(m⋄Id)"));

    ElemMap dp = column_of(p.d.mat);
    ElemMap dl = column_of(a.carrier.d.mat);
    bool der_ok = true;
    for (int i = 0; i < a.domain.size(); ++i) {
        const Key& k = a.domain.key(i);
        Comb c = apply_at_level(lv, k, 0, dp, -1);
        add_comb(c, shuffle_at_level(lv, k, 1, identity_elem(), dl, -1));
        if (!(act(c) == a.carrier.d.mat * a.action.mat.col(i))) {
            der_ok = false;
            break;
        }
    }
    r.checks.push_back(check("derivation", der_ok, "d∘a differs from a∘(d_P⋄Id + Id⋄'d)"));
    return r;
}

CogebraOverCoperad free_cogebra_coperad(const Coperad& q, const ChainComplex& x)
{
    int a_max = std::max(1, q.seq.max_arity());
    int w_max = q.trunc.max_weight;
    Seq xs = seq_of_space(x.space);
    std::vector<Seq> lv{q.seq, xs};
    Composite carrier(lv, a_max, w_max);
    GradedSpace sp = carrier.space();

    CogebraOverCoperad c;
    c.q = q;
    c.space = sp;
    ElemMap dq = column_of(q.d.mat);
    ElemMap dx = column_of(x.d.mat);
    c.d = GradedMap(sp, sp, -1, matrix_of(sp.dim(), sp.dim(), [&](int i) {
                        const Key& k = carrier.key(i);
                        Comb r = apply_at_level(lv, k, 0, dq, -1);
                        add_comb(r, shuffle_at_level(lv, k, 1, identity_elem(), dx, -1));
                        return carrier.to_svec(r);
                    }));
    c.codomain = Composite({q.seq, seq_of_space(sp)}, a_max, w_max);
    std::vector<Seq> lv3{q.seq, q.seq, xs};
    SplitMap w = [&](int e) { return q.w[e]; };
    c.coaction = GradedMap(sp, c.codomain.space(), 0, matrix_of(sp.dim(), c.codomain.size(), [&](int i) {
                               Comb out;
                               for (const auto& [k3, v] : expand_level(lv, carrier.key(i), 0, w, q.seq, q.seq)) {
                                   auto [g, sign] = regroup(lv3, k3, carrier);
                                   if (!g.empty()) add_term(out, g, v * sign);
                               }
                               return c.codomain.to_svec(out);
                           }));
    return c;
}

Report validate_cogebra(const CogebraOverCoperad& c)
{
    Report r;
    const Coperad& q = c.q;
    const Matrix& delta = c.coaction.mat;
    Seq vs = seq_of_space(c.space);
    std::vector<Seq> lv{q.seq, vs};

    Matrix counit = matrix_of(c.space.dim(), c.space.dim(), [&](int i) {
        SVec out;
        for (const auto& [t, v] : delta.col(i).entries()) {
            const Key& k = c.codomain.key(t);
            if (k.size() == 2) out.axpy(v * q.tau.get(k[0]), SVec::unit(k[1]));
        }
        return out;
    });
    r.checks.push_back(zero_check("counit", counit - Matrix::identity(c.space.dim())));

    bool assoc_ok = true;
    for (std::size_t i = 0; i < c.space.dim() && assoc_ok; ++i) {
        Comb lhs, rhs;
        for (const auto& [t, v] : delta.col(i).entries()) {
            const Key& k = c.codomain.key(t);
            add_comb(rhs, expand_level(lv, k, 0, [&](int e) { return q.w[e]; }, q.seq, q.seq), v);
            // (Id⋄δ): expand every lower element through δ.
            std::vector<std::pair<std::vector<int>, Rational>> terms{{{}, v}};
            std::vector<std::pair<std::vector<int>, Rational>> next;
            for (std::size_t j = 1; j < k.size(); ++j) {
                next.clear();
                for (const auto& [ts, cv] : terms)
                    for (const auto& [u, uv] : delta.col(k[j]).entries()) {
                        auto nt = ts;
                        nt.push_back(u);
                        next.emplace_back(std::move(nt), cv * uv);
                    }
                terms.swap(next);
            }
            for (const auto& [ts, cv] : terms) {
                Key flat{k[0]};
                Key tail;
                std::vector<std::pair<int, int>> swaps;
                int lower_deg = 0;
                for (int u : ts) {
                    const Key& uk = c.codomain.key(u);
                    swaps.emplace_back(q.seq.deg[uk[0]], lower_deg);
                    flat.push_back(uk[0]);
                    for (std::size_t m = 1; m < uk.size(); ++m) {
                        tail.push_back(uk[m]);
                        lower_deg += vs.deg[uk[m]];
                    }
                }
                flat.insert(flat.end(), tail.begin(), tail.end());
                add_term(lhs, flat, cv * koszul_sign(swaps));
            }
        }
        add_comb(lhs, rhs, -1);
        assoc_ok = lhs.empty();
    }
    r.checks.push_back(check("coassociativity", assoc_ok, "(Id⋄δ)∘δ differs from (w⋄Id)∘δ"));

    ElemMap dq = column_of(q.d.mat);
    ElemMap dv = column_of(c.d.mat);
    Matrix twisted = matrix_of(c.codomain.size(), c.codomain.size(), [&](int t) {
        const Key& k = c.codomain.key(t);
        Comb out = apply_at_level(lv, k, 0, dq, -1);
        add_comb(out, shuffle_at_level(lv, k, 1, identity_elem(), dv, -1));
        return c.codomain.to_svec(out);
    });
    r.checks.push_back(zero_check("coderivation", delta * c.d.mat - twisted * delta));
    return r;
}

Cotensor QAlgebra::cotensor(const std::vector<Seq>& levels) const
{
    return Cotensor(space, levels, wide(std::max(1, q.seq.max_arity()), levels.size()), q.trunc.max_weight);
}

GradedMap QAlgebra::unit_map(const SVec& u, int degree) const
{
    return cotensor_from_unit(lq, degree, [&u](const Key& k) { return u.get(k[0]); });
}

Report validate_qalgebra(const QAlgebra& a)
{
    Report r;
    const Coperad& q = a.q;
    Cotensor lqq(a.lq.space(), {q.seq}, std::max(1, q.seq.max_arity()), q.trunc.max_weight);
    GradedMap aq = tensor_power(lqq, a.lq, column_of(a.action.mat));
    Cotensor l2 = a.cotensor({q.seq, q.seq});
    GradedMap l = lax_map(lqq, a.lq, l2);
    GradedMap lw = cotensor_contra(l2, a.lq, 0, coproduct_map(q));
    r.checks.push_back(zero_check("associativity", a.action.mat * aq.mat - a.action.mat * lw.mat * l.mat));

    GradedMap unit = a.unit_map(q.tau, 0);
    r.checks.push_back(zero_check("unit", a.action.mat * unit.mat - Matrix::identity(a.space.dim())));

    GradedMap sh = shuffle_power(a.lq, a.lq, identity_elem(), column_of(a.d.mat), -1);
    GradedMap ldq = cotensor_contra(a.lq, a.lq, -1, single_level(column_of(q.d.mat)));
    r.checks.push_back(zero_check("derivation", a.action.mat * (sh.mat - ldq.mat) - a.d.mat * a.action.mat));

    GradedMap th = a.unit_map(q.theta, -2);
    r.checks.push_back(zero_check("curvature", a.d.mat * a.d.mat + a.action.mat * th.mat));
    return r;
}

FreeQAlgebra free_algebra_coperad(const Coperad& q, const ChainComplex& x)
{
    int a_max = std::max(1, q.seq.max_arity());
    int w_max = q.trunc.max_weight;
    FreeQAlgebra f;
    f.generators = x.space;
    f.xq = Cotensor(x.space, {q.seq}, a_max, w_max);
    QAlgebra& a = f.algebra;
    a.q = q;
    a.space = f.xq.space();
    a.lq = a.cotensor({q.seq});
    Cotensor xqq(x.space, {q.seq, q.seq}, wide(a_max, 2), w_max);
    a.action = compose(cotensor_contra(xqq, f.xq, 0, coproduct_map(q)), lax_map(a.lq, f.xq, xqq));
    f.inclusion = cotensor_from_unit(f.xq, 0, [&q](const Key& k) { return q.tau.get(k[0]); });
    a.d = GradedMap::zero(a.space, a.space, -1);
    a.d = extend_derivation_qalg(f, compose(f.inclusion, x.d));
    return f;
}

GradedMap extend_derivation_qalg(const FreeQAlgebra& f, const GradedMap& gen)
{
    if (gen.degree != -1) throw std::invalid_argument("generator map must have degree -1");
    if (gen.src.deg != f.generators.deg || gen.tgt.deg != f.algebra.space.deg)
        throw std::invalid_argument("generator map must go from X to X^Q");
    const QAlgebra& a = f.algebra;
    GradedMap dc = scale(cotensor_contra(f.xq, f.xq, -1, single_level(column_of(a.q.d.mat))), -1);
    GradedMap sh = shuffle_power(f.xq, a.lq, column_of(f.inclusion.mat), column_of(gen.mat), -1);
    return add(dc, compose(a.action, sh));
}

GradedMap restrict_derivation_qalg(const FreeQAlgebra& f, const GradedMap& d) { return compose(d, f.inclusion); }

SquareZeroReport check_square_zero_qalg(const FreeQAlgebra& f, const GradedMap& d, const GradedMap& gen)
{
    const Coperad& q = f.algebra.q;
    GradedMap xth = cotensor_from_unit(f.xq, -2, [&q](const Key& k) { return q.theta.get(k[0]); });
    GradedMap lth = f.algebra.unit_map(q.theta, -2);
    return {d.mat * gen.mat + xth.mat, d.mat * d.mat + f.algebra.action.mat * lth.mat};
}

Subspace action_closure_generators(const QAlgebra& a, const Subspace& x) { return shuffle_subobject(a.lq, x); }

bool is_ideal(const QAlgebra& a, const Subspace& i)
{
    Subspace gens = action_closure_generators(a, i);
    return contains(i, span(a.action.mat * gens.basis));
}

bool is_d_stable(const QAlgebra& a, const Subspace& i) { return contains(i, span(a.d.mat * i.basis)); }

Subspace annihilator(const Cotensor& xq, const Subspace& fq)
{
    std::map<std::pair<Key, std::size_t>, int> row;
    std::vector<std::tuple<int, int, Rational>> trip;
    for (int t = 0; t < xq.size(); ++t) {
        const Key& k = xq.key(t);
        int a = k[0];
        Key word = xq.word(k);
        for (std::size_t j = 0; j < fq.dim(); ++j) {
            Rational v = fq.basis.at(a, j);
            if (v == 0) continue;
            auto [it, fresh] = row.emplace(std::make_pair(word, j), static_cast<int>(row.size()));
            trip.emplace_back(it->second, t, v);
        }
    }
    return kernel_basis(Matrix::from_triplets(row.size(), xq.size(), trip));
}

QuotientAlgebra quotient_algebra(const QAlgebra& a, const Subspace& ideal)
{
    auto [proj, sec] = quotient(a.space.dim(), ideal);
    QuotientAlgebra out;
    QAlgebra& r = out.algebra;
    r.q = a.q;
    for (std::size_t i = 0; i < sec.cols(); ++i) {
        int c = sec.col(i).entries()[0].first;
        r.space.deg.push_back(a.space.deg[c]);
        r.space.wt.push_back(a.space.weight(c));
        r.space.labels.push_back(c < static_cast<int>(a.space.labels.size()) ? a.space.labels[c] : "e" + std::to_string(c));
    }
    r.lq = r.cotensor({a.q.seq});
    GradedMap sec_q = tensor_power(r.lq, a.lq, column_of(sec));
    r.action = GradedMap(r.lq.space(), r.space, 0, proj * a.action.mat * sec_q.mat);
    r.d = GradedMap(r.space, r.space, -1, proj * a.d.mat * sec);
    out.proj = std::move(proj);
    out.section = std::move(sec);
    return out;
}

AlgebraTower tower_from_ideals(const QAlgebra& head, const std::vector<Subspace>& ideals)
{
    AlgebraTower t;
    for (std::size_t n = 0; n < ideals.size(); ++n) {
        QuotientAlgebra qa = quotient_algebra(head, ideals[n]);
        t.transition.push_back(n == 0 ? Matrix() : t.from_head.back() * qa.section);
        t.levels.push_back(std::move(qa.algebra));
        t.from_head.push_back(std::move(qa.proj));
        t.section.push_back(std::move(qa.section));
        t.ideals.push_back(ideals[n]);
    }
    return t;
}

AlgebraTower free_tower(const FreeQAlgebra& f, int max_level)
{
    Filtration filt = coradical_filtration(f.algebra.q, max_level);
    std::vector<Subspace> ideals;
    for (int n = 0; n <= max_level; ++n) ideals.push_back(annihilator(f.xq, filt.at(n)));
    return tower_from_ideals(f.algebra, ideals);
}

Report validate_tower(const AlgebraTower& t, const Filtration& f)
{
    Report r;
    for (std::size_t n = 0; n < t.levels.size(); ++n) {
        const QAlgebra& lv = t.levels[n];
        std::string tag = "level " + std::to_string(n) + ": ";
        for (AxiomCheck c : validate_qalgebra(lv).checks) {
            c.name = tag + c.name;
            r.checks.push_back(std::move(c));
        }
        Subspace ann = annihilator(lv.lq, f.at(n));
        r.checks.push_back(zero_check(tag + "action factors through F_nQ", lv.action.mat * ann.basis));
        if (n == 0) continue;
        const QAlgebra& prev = t.levels[n - 1];
        const Matrix& tr = t.transition[n];
        GradedMap tq = tensor_power(lv.lq, prev.lq, column_of(tr));
        r.checks.push_back(zero_check(tag + "transition respects the action",
                                      tr * lv.action.mat - prev.action.mat * tq.mat));
        r.checks.push_back(zero_check(tag + "transition respects the derivation", tr * lv.d.mat - prev.d.mat * tr));
        r.checks.push_back(check(tag + "transition is onto", rank(tr) == prev.space.dim(), "rank deficit"));
    }
    return r;
}

Cotensor CogebraOverOperad::cotensor(const std::vector<Seq>& levels) const
{
    return Cotensor(space, levels, wide(p.trunc.max_arity, levels.size()), p.trunc.max_weight);
}

Report validate_cogebra(const CogebraOverOperad& c)
{
    Report r;
    const Operad& p = c.p;
    std::size_t n = c.space.dim();
    GradedMap counit = cotensor_to_unit(c.vp, 0, unit_comb(p));
    r.checks.push_back(zero_check("counit", counit.mat * c.coaction.mat - Matrix::identity(n)));

    Cotensor vpp(c.vp.space(), {p.seq}, p.trunc.max_arity, p.trunc.max_weight);
    GradedMap ap = tensor_power(c.vp, vpp, column_of(c.coaction.mat));
    Cotensor v2 = c.cotensor({p.seq, p.seq});
    GradedMap l = lax_map(vpp, c.vp, v2);
    GradedMap vm = cotensor_contra(c.vp, v2, 0, composition_map(p));
    r.checks.push_back(zero_check("coassociativity", vm.mat * c.coaction.mat - l.mat * ap.mat * c.coaction.mat));

    GradedMap sh = shuffle_power(c.vp, c.vp, identity_elem(), column_of(c.d.mat), -1);
    GradedMap vdp = cotensor_contra(c.vp, c.vp, -1, single_level(column_of(p.d.mat)));
    r.checks.push_back(zero_check("coderivation", c.coaction.mat * c.d.mat - (sh.mat - vdp.mat) * c.coaction.mat));
    r.checks.push_back(zero_check("square-zero", c.d.mat * c.d.mat));
    return r;
}

FreeCogebra free_cogebra_operad(const Operad& p, const GradedSpace& x)
{
    int a_max = p.trunc.max_arity;
    int w_max = p.trunc.max_weight;
    FreeCogebra f;
    f.generators = x;
    f.xp = Cotensor(x, {p.seq}, a_max, w_max);
    Cotensor xpp(f.xp.space(), {p.seq}, a_max, w_max);
    Cotensor x2(x, {p.seq, p.seq}, wide(a_max, 2), w_max);
    GradedMap xm = cotensor_contra(f.xp, x2, 0, composition_map(p));
    GradedMap l = lax_map(xpp, f.xp, x2);

    // Pairs (v, u) with X^m v = l u, projected to v.
    Subspace pairs = kernel_basis(xm.mat.hstack(-l.mat));
    std::vector<int> first(static_cast<std::size_t>(f.xp.size()));
    for (int i = 0; i < f.xp.size(); ++i) first[i] = i;
    f.carrier = image_basis(pairs.basis.select_rows(first));
    f.carrier.ambient_dim = f.xp.size();

    CogebraOverOperad& c = f.cogebra;
    c.p = p;
    c.space = subspace_grading(f.xp.space(), f.carrier);
    c.vp = c.cotensor({p.seq});
    f.inclusion = GradedMap(c.space, f.xp.space(), 0, f.carrier.basis);
    GradedMap incl_p = tensor_power(c.vp, xpp, column_of(f.carrier.basis));
    Matrix lifted = l.mat * incl_p.mat;
    f.lax_rank_defect = c.vp.space().dim() - rank(lifted);
    auto coaction = solve(lifted, xm.mat * f.carrier.basis);
    if (!coaction) throw std::logic_error("free cogebra: X^m(L) is not reached by l(P,P,L)");
    c.coaction = GradedMap(c.space, c.vp.space(), 0, *coaction);
    f.projection = compose(cotensor_to_unit(f.xp, 0, unit_comb(p)), f.inclusion);
    c.d = GradedMap::zero(c.space, c.space, -1);
    return f;
}

FreeCogebra free_cogebra_operad(const Operad& p, const ChainComplex& x)
{
    FreeCogebra f = free_cogebra_operad(p, x.space);
    f.cogebra.d = extend_coderivation_pcog(f, compose(x.d, f.projection));
    return f;
}

GradedMap extend_coderivation_pcog(const FreeCogebra& f, const GradedMap& gen)
{
    const CogebraOverOperad& c = f.cogebra;
    if (gen.degree != -1) throw std::invalid_argument("cogenerator map must have degree -1");
    if (gen.src.deg != c.space.deg || gen.tgt.deg != f.generators.deg)
        throw std::invalid_argument("cogenerator map must go from L^P X to X");
    GradedMap xdp = cotensor_contra(f.xp, f.xp, -1, single_level(column_of(c.p.d.mat)));
    GradedMap sh = shuffle_power(c.vp, f.xp, column_of(f.projection.mat), column_of(gen.mat), -1);
    Matrix total = sh.mat * c.coaction.mat - xdp.mat * f.inclusion.mat;
    auto d = solve(f.carrier.basis, total);
    if (!d) throw std::logic_error("coderivation leaves L^P X");
    return {c.space, c.space, -1, *d};
}

GradedMap restrict_coderivation_pcog(const FreeCogebra& f, const GradedMap& d) { return compose(f.projection, d); }

SquareZeroReport check_square_zero_pcog(const FreeCogebra&, const GradedMap& d, const GradedMap& gen)
{
    return {gen.mat * d.mat, d.mat * d.mat};
}

namespace {

CogebraOverOperad builtin_shell(const Operad& p, GradedSpace sp, Matrix d)
{
    CogebraOverOperad c;
    c.p = p;
    c.space = std::move(sp);
    c.d = GradedMap(c.space, c.space, -1, std::move(d));
    c.vp = c.cotensor({p.seq});
    return c;
}

int key_index(const Cotensor& vp, const Key& k)
{
    int i = vp.find(k);
    if (i < 0) throw std::invalid_argument("built-in cogebra needs a larger truncation");
    return i;
}

}  // namespace

CogebraOverOperad onedim_cogebra(const Operad& p)
{
    GradedSpace sp{{0}, {0}, {"v"}};
    CogebraOverOperad c = builtin_shell(p, sp, Matrix::zero(1, 1));
    int e = key_index(c.vp, Key{p.unit, 0});
    c.coaction = GradedMap(c.space, c.vp.space(), 0, Matrix::from_triplets(c.vp.size(), 1, {{e, 0, Rational(1)}}));
    return c;
}

CogebraOverOperad twodim_cogebra(const Operad& p)
{
    if (!p.trees) throw std::invalid_argument("twodim cogebra expects P = Bar†(ℚ[X])");
    const Seq& labels = p.trees->labels;
    int g1 = -1;
    for (int l = 0; l < labels.size(); ++l)
        if (labels.ar[l] == 1 && labels.wt[l] == 1 && labels.deg[l] == -1) g1 = p.trees->single(l);
    if (g1 < 0) throw std::invalid_argument("twodim cogebra expects a generator s⁻¹X");
    GradedSpace sp{{0, -1}, {0, 0}, {"v0", "v1"}};
    CogebraOverOperad c = builtin_shell(p, sp, Matrix::from_triplets(2, 2, {{1, 0, Rational(1)}}));
    std::vector<std::tuple<int, int, Rational>> t{{key_index(c.vp, Key{p.unit, 0}), 0, Rational(1)},
                                                  {key_index(c.vp, Key{g1, 1}), 0, Rational(1)},
                                                  {key_index(c.vp, Key{p.unit, 1}), 1, Rational(1)}};
    c.coaction = GradedMap(c.space, c.vp.space(), 0, Matrix::from_triplets(c.vp.size(), 2, t));
    return c;
}

}  // namespace operadia
