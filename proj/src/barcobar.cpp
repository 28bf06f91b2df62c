#include "operadia/barcobar.hpp"

#include <stdexcept>

namespace operadia {

Coperad bar(const Operad& p, const Truncation& t)
{
    if (t.max_arity < 1 || t.max_weight < 0) throw std::invalid_argument("truncation too small for the generators");
    Seq labels;
    std::vector<int> suspended(p.seq.size(), -1);
    for (int e = 0; e < p.seq.size(); ++e)
        if (p.seq.ar[e] <= t.max_arity)
            suspended[e] = labels.add(p.seq.ar[e], p.seq.deg[e] + 1, 1, "s" + p.seq.name[e]);
    int s2 = labels.add(1, 2, 1, "s2");

    Coperad q = cofree_coperad(labels, t);
    const TreeBasis& tb = *q.trees;
    auto suspend = [&](const SVec& v, const Rational& scale) {
        std::vector<SVec::Entry> e;
        for (const auto& [x, c] : v.entries())
            if (suspended[x] >= 0) e.emplace_back(suspended[x], c * scale);
        std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return SVec(std::move(e));
    };
    std::vector<int> origin(labels.size(), -1);
    for (int e = 0; e < p.seq.size(); ++e)
        if (suspended[e] >= 0) origin[suspended[e]] = e;

    auto proj = [&](int e) -> SVec {
        const Tree& tr = tb.trees[e];
        std::vector<int> verts;
        for (std::size_t pos = 0; pos < tr.size(); ++pos)
            if (tr[pos] >= 0) verts.push_back(static_cast<int>(pos));
        if (verts.size() == 1) {
            int l = tr[verts[0]];
            if (l == s2) return SVec::unit(suspended[p.unit]);
            return suspend(p.d.mat.col(origin[l]), -1);
        }
        if (verts.size() == 2) {
            int a = tr[0], b = tr[verts[1]];
            if (a == s2 || b == s2) return SVec();
            int slot = 1;
            for (int pos = 1; pos < verts[1]; ++pos) slot += tr[pos] < 0;
            int pa = origin[a];
            return suspend(p.partial(pa, slot, origin[b]), koszul_sign({{p.seq.deg[pa], 1}}));
        }
        return SVec();
    };
    q.d = extend_coderivation(q, proj, -1);
    q.theta = SVec::unit(tb.single(s2));
    return q;
}

std::vector<W2Term> w2_terms(const Coperad& q, int e)
{
    int u = q.adapted_unit();
    if (u < 0) throw std::invalid_argument("coperad is not cogmented in an adapted basis");
    std::vector<W2Term> out;
    for (const auto& [k, c] : q.w[e]) {
        if (k[0] == u) continue;
        int slot = -1;
        bool ok = true;
        for (std::size_t j = 1; j < k.size(); ++j) {
            if (k[j] == u) continue;
            if (slot >= 0) ok = false;
            slot = static_cast<int>(j);
        }
        if (ok && slot > 0) out.push_back({k[0], slot, k[slot], c});
    }
    return out;
}

BarDualDerivations bar_dual_derivations(const Coperad& q, const Operad& p)
{
    int u = q.adapted_unit();
    if (u < 0) throw std::invalid_argument("coperad is not cogmented");
    if (!p.trees) throw std::invalid_argument("expected p = bar_dual(q)");
    const TreeBasis& tb = *p.trees;
    const Seq& labels = tb.labels;
    std::vector<int> label_of(q.seq.size(), -1);
    std::vector<int> element;
    int l = 0;
    for (int r : q.reduced_basis()) {
        if (q.seq.ar[r] > p.trunc.max_arity) continue;
        label_of[r] = l++;
        element.push_back(r);
    }
    BarDualDerivations out;
    out.w.resize(labels.size());
    out.q.resize(labels.size());
    out.theta.resize(labels.size());
    for (int g = 0; g < labels.size(); ++g) {
        int r = element[g];
        Rational th = q.theta.get(r);
        if (th != 0) out.theta[g].axpy(th, SVec::unit(tb.trivial));
        for (const auto& [c, v] : q.d.mat.col(r).entries()) {
            if (c == u || label_of[c] < 0) continue;
            int idx = tb.single(label_of[c]);
            if (idx >= 0) out.q[g].axpy(-v, SVec::unit(idx));
        }
        for (const W2Term& w : w2_terms(q, r)) {
            if (label_of[w.top] < 0 || label_of[w.sub] < 0) continue;
            auto [tree, sign] = graft(labels, tb.single_vertex(label_of[w.top]), w.slot, tb.single_vertex(label_of[w.sub]));
            int idx = tb.find(tree);
            if (idx < 0) continue;
            out.w[g].axpy(-w.coeff * sign * koszul_sign({{q.seq.deg[w.top], 1}}), SVec::unit(idx));
        }
    }
    return out;
}

Operad bar_dual(const Coperad& q, const Truncation& t)
{
    int u = q.adapted_unit();
    if (u < 0) throw std::invalid_argument("coperad is not cogmented");
    Seq labels;
    for (int r : q.reduced_basis()) {
        if (q.seq.ar[r] > t.max_arity) continue;
        labels.add(q.seq.ar[r], q.seq.deg[r] - 1, q.seq.wt[r], "s-1" + q.seq.name[r]);
    }
    Operad p = free_operad(labels, t);
    BarDualDerivations parts = bar_dual_derivations(q, p);
    p.d = extend_derivation(p, [&](int g) {
        SVec v = parts.w[g];
        v.axpy(1, parts.q[g]);
        v.axpy(1, parts.theta[g]);
        return v;
    }, -1);
    return p;
}

GradedMap check_twisting(const GradedMap& alpha, const Coperad& q, const Operad& p)
{
    const Matrix& a = alpha.mat;
    auto column = [&](int e) {
        SVec out = p.d.mat * a.col(e);
        out.axpy(1, a * q.d.mat.col(e));
        for (const W2Term& w : w2_terms(q, e))
            out.axpy(w.coeff * koszul_sign({{q.seq.deg[w.top], 1}}), p.compose(a.col(w.top), w.slot, a.col(w.sub)));
        out.axpy(-q.theta.get(e), SVec::unit(p.unit));
        return out;
    };
    return {q.space(), p.space(), -2, matrix_of(q.seq.size(), p.seq.size(), column)};
}

TwistingMorphism canonical_alpha(const Coperad& q, const Operad& p)
{
    if (!p.trees) throw std::invalid_argument("canonical_alpha expects p = bar_dual(q)");
    const TreeBasis& tb = *p.trees;
    std::vector<int> reduced = q.reduced_basis();
    std::vector<int> single_of(q.seq.size(), -1);
    std::vector<int> element_of(p.seq.size(), -1);
    int l = 0;
    for (int r : reduced) {
        if (q.seq.ar[r] > p.trunc.max_arity) continue;
        int idx = tb.single(l++);
        single_of[r] = idx;
        if (idx >= 0) element_of[idx] = r;
    }
    TwistingMorphism tw;
    tw.alpha = {q.space(), p.space(), -1, matrix_of(q.seq.size(), p.seq.size(), [&](int e) {
                    return single_of[e] >= 0 ? SVec::unit(single_of[e]) : SVec();
                })};
    tw.beta = {p.space(), q.space(), 1, matrix_of(p.seq.size(), q.seq.size(), [&](int e) {
                   return element_of[e] >= 0 ? SVec::unit(element_of[e]) : SVec();
               })};
    return tw;
}

}  // namespace operadia
