#include "operadia/opcop.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace operadia {

int label_weight(const Seq& labels, int l) { return std::max(1, labels.wt[l]); }

int tree_arity(const Tree& t) { return static_cast<int>(std::count(t.begin(), t.end(), -1)); }

int tree_degree(const Seq& labels, const Tree& t)
{
    int d = 0;
    for (int l : t)
        if (l >= 0) d += labels.deg[l];
    return d;
}

int tree_weight(const Seq& labels, const Tree& t)
{
    int w = 0;
    for (int l : t)
        if (l >= 0) w += label_weight(labels, l);
    return w;
}

std::vector<int> subtree_ends(const Seq& labels, const Tree& t)
{
    std::vector<int> end(t.size());
    std::function<int(int)> rec = [&](int pos) {
        int p = pos + 1;
        if (t[pos] >= 0)
            for (int c = 0; c < labels.ar[t[pos]]; ++c) p = rec(p);
        end[pos] = p;
        return p;
    };
    if (!t.empty() && rec(0) != static_cast<int>(t.size())) throw std::invalid_argument("malformed tree");
    return end;
}

std::string tree_name(const Seq& labels, const Tree& t)
{
    if (t.size() == 1 && t[0] < 0) return "id";
    auto end = subtree_ends(labels, t);
    std::function<std::string(int)> rec = [&](int pos) -> std::string {
        if (t[pos] < 0) return "|";
        std::string s = labels.name[t[pos]];
        bool all_leaves = true;
        std::vector<std::string> kids;
        for (int c = 0, p = pos + 1; c < labels.ar[t[pos]]; ++c, p = end[p]) {
            if (t[p] >= 0) all_leaves = false;
            kids.push_back(rec(p));
        }
        if (all_leaves) return s;
        s += "(";
        for (std::size_t k = 0; k < kids.size(); ++k) s += (k ? "," : "") + kids[k];
        return s + ")";
    };
    return rec(0);
}

std::pair<Tree, int> graft(const Seq& labels, const Tree& t1, int i, const Tree& t2)
{
    int seen = 0;
    for (std::size_t pos = 0; pos < t1.size(); ++pos) {
        if (t1[pos] >= 0 || ++seen != i) continue;
        Tree out(t1.begin(), t1.begin() + pos);
        out.insert(out.end(), t2.begin(), t2.end());
        out.insert(out.end(), t1.begin() + pos + 1, t1.end());
        Tree suffix(t1.begin() + pos + 1, t1.end());
        return {std::move(out), koszul_sign({{tree_degree(labels, t2), tree_degree(labels, suffix)}})};
    }
    throw std::invalid_argument("graft: no such leaf");
}

namespace {

struct Fragment {
    Tree top;
    std::vector<Tree> bottoms;
    std::vector<int> top_pos;                  // label positions in the top, preorder
    std::vector<std::vector<int>> bottom_pos;  // label positions per bottom
};

// Root-closed vertex subsets of the subtree at pos that contain pos.
std::vector<Fragment> rooted_fragments(const Seq& labels, const Tree& t, const std::vector<int>& end, int pos)
{
    std::vector<Fragment> acc(1);
    acc[0].top = {t[pos]};
    acc[0].top_pos = {pos};
    for (int c = 0, p = pos + 1; c < labels.ar[t[pos]]; ++c, p = end[p]) {
        std::vector<Fragment> options;
        Fragment leaf;
        leaf.top = {-1};
        if (t[p] < 0) {
            leaf.bottoms = {{-1}};
            leaf.bottom_pos = {{}};
            options.push_back(leaf);
        } else {
            leaf.bottoms = {Tree(t.begin() + p, t.begin() + end[p])};
            std::vector<int> bp;
            for (int q = p; q < end[p]; ++q)
                if (t[q] >= 0) bp.push_back(q);
            leaf.bottom_pos = {bp};
            options.push_back(leaf);
            auto inner = rooted_fragments(labels, t, end, p);
            options.insert(options.end(), inner.begin(), inner.end());
        }
        std::vector<Fragment> next;
        for (const auto& a : acc)
            for (const auto& o : options) {
                Fragment f = a;
                f.top.insert(f.top.end(), o.top.begin(), o.top.end());
                f.top_pos.insert(f.top_pos.end(), o.top_pos.begin(), o.top_pos.end());
                f.bottoms.insert(f.bottoms.end(), o.bottoms.begin(), o.bottoms.end());
                f.bottom_pos.insert(f.bottom_pos.end(), o.bottom_pos.begin(), o.bottom_pos.end());
                next.push_back(std::move(f));
            }
        acc = std::move(next);
    }
    return acc;
}

// Sign of reordering the labels of t[lo, hi) in preorder into the fragment order.
int fragment_sign(const Seq& labels, const Tree& t, int lo, int hi, const Fragment& f)
{
    std::vector<int> ordinal(t.size(), -1);
    std::vector<int> degs;
    for (int p = lo; p < hi; ++p)
        if (t[p] >= 0) {
            ordinal[p] = static_cast<int>(degs.size());
            degs.push_back(labels.deg[t[p]]);
        }
    std::vector<int> perm;
    for (int p : f.top_pos) perm.push_back(ordinal[p]);
    for (const auto& bp : f.bottom_pos)
        for (int p : bp) perm.push_back(ordinal[p]);
    return permutation_sign(degs, perm);
}

}  // namespace

std::vector<Cut> cuts(const Seq& labels, const Tree& t)
{
    std::vector<Cut> out;
    out.push_back({{-1}, {t}, 1});
    if (t.size() == 1 && t[0] < 0) return out;
    auto end = subtree_ends(labels, t);
    for (const auto& f : rooted_fragments(labels, t, end, 0))
        out.push_back({f.top, f.bottoms, fragment_sign(labels, t, 0, static_cast<int>(t.size()), f)});
    return out;
}

int TreeBasis::find(const Tree& t) const
{
    auto it = index.find(t);
    return it == index.end() ? -1 : it->second;
}

Tree TreeBasis::single_vertex(int label) const
{
    Tree t{label};
    for (int c = 0; c < labels.ar[label]; ++c) t.push_back(-1);
    return t;
}

std::shared_ptr<const TreeBasis> enumerate_trees(const Seq& labels, int max_arity, int max_weight)
{
    for (int l = 0; l < labels.size(); ++l)
        if (labels.ar[l] < 1) throw std::invalid_argument("tree labels need arity at least one");
    auto basis = std::make_shared<TreeBasis>();
    basis->labels = labels;
    std::vector<Tree> found;
    Tree cur;
    std::function<void(int, int, int)> rec = [&](int slots, int leaves, int weight) {
        if (slots == 0) {
            found.push_back(cur);
            return;
        }
        cur.push_back(-1);
        rec(slots - 1, leaves + 1, weight);
        cur.pop_back();
        for (int l = 0; l < labels.size(); ++l) {
            int nslots = slots + labels.ar[l] - 1;
            int nweight = weight + label_weight(labels, l);
            if (nweight > max_weight || leaves + nslots > max_arity) continue;
            cur.push_back(l);
            rec(nslots, leaves, nweight);
            cur.pop_back();
        }
    };
    if (max_arity >= 1) rec(1, 0, 0);
    std::sort(found.begin(), found.end(), [](const Tree& a, const Tree& b) {
        int aa = tree_arity(a), ab = tree_arity(b);
        return aa != ab ? aa < ab : a < b;
    });
    for (const Tree& t : found) {
        int i = basis->seq.add(tree_arity(t), tree_degree(labels, t), tree_weight(labels, t), tree_name(labels, t));
        basis->index.emplace(t, i);
        basis->trees.push_back(t);
    }
    basis->trivial = basis->find({-1});
    return basis;
}

bool Report::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.ok; });
}

const AxiomCheck* Report::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string Report::summary() const
{
    std::ostringstream s;
    for (const auto& c : checks) {
        s << c.name << ": " << (c.ok ? "pass" : "FAIL");
        if (!c.ok && !c.detail.empty()) s << " (" << c.detail << ")";
        s << "\n";
    }
    return s.str();
}

Matrix matrix_of(std::size_t src_dim, std::size_t tgt_dim, const std::function<SVec(int)>& f)
{
    std::vector<SVec> cols;
    cols.reserve(src_dim);
    for (std::size_t j = 0; j < src_dim; ++j) cols.push_back(f(static_cast<int>(j)));
    return Matrix::from_columns(tgt_dim, std::move(cols));
}

SVec Operad::compose(const SVec& a, int i, const SVec& b) const
{
    SVec out;
    for (const auto& [x, cx] : a.entries())
        for (const auto& [y, cy] : b.entries()) out.axpy(cx * cy, partial(x, i, y));
    return out;
}

SVec Operad::compose_full(const Key& key) const
{
    SVec r = SVec::unit(key[0]);
    int pos = 1;
    for (std::size_t j = 1; j < key.size(); ++j) {
        r = compose(r, pos, SVec::unit(key[j]));
        pos += seq.ar[key[j]];
    }
    return r;
}

Operad unit_operad(const Truncation& t)
{
    if (t.max_arity < 1) throw std::invalid_argument("truncation too small to hold the unit");
    Operad p;
    p.seq = unit_seq();
    p.seq.name[0] = "id";
    p.unit = 0;
    p.partial = [](int, int, int) { return SVec::unit(0); };
    p.d = GradedMap::zero(p.space(), p.space(), -1);
    p.trunc = t;
    return p;
}

Operad as_planar(const Truncation& t)
{
    if (t.max_arity < 1) throw std::invalid_argument("truncation too small to hold the unit");
    Operad p;
    for (int n = 1; n <= t.max_arity && n - 1 <= t.max_weight; ++n) p.seq.add(n, 0, n - 1, "m" + std::to_string(n));
    p.unit = 0;
    int top = p.seq.size();
    p.partial = [top](int a, int, int b) {
        int r = a + b;  // element i has arity i+1
        return r < top ? SVec::unit(r) : SVec();
    };
    p.d = GradedMap::zero(p.space(), p.space(), -1);
    p.trunc = t;
    return p;
}

Operad free_operad(const Seq& gens, const Truncation& t)
{
    if (t.max_arity < 1) throw std::invalid_argument("truncation too small to hold the unit");
    Operad p;
    auto basis = enumerate_trees(gens, t.max_arity, t.max_weight);
    p.trees = basis;
    p.seq = basis->seq;
    p.unit = basis->trivial;
    p.partial = [basis](int a, int i, int b) {
        auto [tree, sign] = graft(basis->labels, basis->trees[a], i, basis->trees[b]);
        int r = basis->find(tree);
        return r < 0 ? SVec() : SVec::unit(r, sign);
    };
    p.d = GradedMap::zero(p.space(), p.space(), -1);
    p.trunc = t;
    return p;
}

namespace {

Matrix block_diag(const Matrix& a, const Matrix& b)
{
    Matrix top = a.hstack(Matrix::zero(a.rows(), b.cols()));
    Matrix bottom = Matrix::zero(b.rows(), a.cols()).hstack(b);
    return top.vstack(bottom);
}

SymSeq direct_sum(const SymSeq& a, const SymSeq& b)
{
    SymSeq out;
    out.planar = a.planar && b.planar;
    out.cert = a.cert;
    for (const SymSeq* s : {&a, &b})
        for (int i = 0; i < s->seq.size(); ++i) out.seq.add(s->seq.ar[i], s->seq.deg[i], s->seq.wt[i], s->seq.name[i]);
    for (int n = 2; n <= std::max(a.seq.max_arity(), b.seq.max_arity()); ++n) {
        std::vector<Matrix> acts;
        for (int i = 1; i < n; ++i) acts.push_back(block_diag(a.action(n, i), b.action(n, i)));
        out.actions[n] = std::move(acts);
    }
    return out;
}

}  // namespace

std::map<int, std::size_t> free_symmetric_dims(const SymSeq& gens, const Truncation& t)
{
    if (gens.planar) throw std::invalid_argument("free_symmetric_dims expects a symmetric sequence");
    SymSeq unit = unit_symseq(t);
    unit.planar = false;
    SymSeq tcur = unit;
    for (int round = 0; round <= t.max_weight + t.max_arity; ++round) {
        SymSeq next = direct_sum(unit, compose_product(gens, tcur, t));
        bool same = next.seq.size() == tcur.seq.size();
        tcur = std::move(next);
        if (same && round > 0) break;
    }
    std::map<int, std::size_t> dims;
    for (int n = 1; n <= t.max_arity; ++n) dims[n] = tcur.seq.in_arity(n).size();
    return dims;
}

SVec derive_tree(const Operad& p, const std::vector<SVec>& values, int degree, int e,
                 const std::function<bool(int pos)>& at)
{
    const TreeBasis& tb = *p.trees;
    const Seq& labels = tb.labels;
    const Tree& t = tb.trees[e];
    if (t.size() == 1 && t[0] < 0) return SVec();
    auto end = subtree_ends(labels, t);
    std::vector<SVec::Entry> acc;
    int prefix_deg = 0;
    for (int pos = 0; pos < static_cast<int>(t.size()); ++pos) {
        int l = t[pos];
        if (l < 0) continue;
        if (at && !at(pos)) {
            prefix_deg += labels.deg[l];
            continue;
        }
        std::vector<Tree> kids;
        for (int c = 0, q = pos + 1; c < labels.ar[l]; ++c, q = end[q]) kids.emplace_back(t.begin() + q, t.begin() + end[q]);
        std::vector<int> kid_deg;
        for (const Tree& k : kids) kid_deg.push_back(tree_degree(labels, k));
        int outer = koszul_sign({{degree, prefix_deg}});
        for (const auto& [s, c] : values[l].entries()) {
            const Tree& st = tb.trees[s];
            // Interleave the children into the leaves of the substituted tree.
            Tree mid;
            std::vector<int> degs, perm;
            int sd = 0;
            std::vector<int> s_labels;
            for (int v : st)
                if (v >= 0) s_labels.push_back(v);
            for (int v : s_labels) degs.push_back(labels.deg[v]);
            std::vector<int> kid_start;
            for (const Tree& k : kids) {
                kid_start.push_back(static_cast<int>(degs.size()));
                for (int v : k)
                    if (v >= 0) degs.push_back(labels.deg[v]);
            }
            int leaf = 0;
            for (int v : st) {
                if (v >= 0) {
                    mid.push_back(v);
                    perm.push_back(sd++);
                    continue;
                }
                const Tree& k = kids[leaf];
                int o = kid_start[leaf];
                for (int x : k) {
                    mid.push_back(x);
                    if (x >= 0) perm.push_back(o++);
                }
                ++leaf;
            }
            Tree nt(t.begin(), t.begin() + pos);
            nt.insert(nt.end(), mid.begin(), mid.end());
            nt.insert(nt.end(), t.begin() + end[pos], t.end());
            int r = tb.find(nt);
            if (r < 0) continue;
            acc.emplace_back(r, c * outer * permutation_sign(degs, perm));
        }
        prefix_deg += labels.deg[l];
    }
    std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SVec out;
    for (auto& [i, v] : acc) out.axpy(v, SVec::unit(i));
    return out;
}

std::vector<SVec> derivation_values(const Operad& p, const std::function<SVec(int label)>& gen_values, int degree)
{
    if (!p.trees) throw std::invalid_argument("extend_derivation needs a free operad");
    const TreeBasis& tb = *p.trees;
    const Seq& labels = tb.labels;
    std::vector<SVec> values(labels.size());
    for (int l = 0; l < labels.size(); ++l) {
        values[l] = gen_values(l);
        for (const auto& [s, c] : values[l].entries()) {
            if (tree_arity(tb.trees[s]) != labels.ar[l]) throw std::invalid_argument("derivation: arity mismatch");
            if (tree_degree(labels, tb.trees[s]) != labels.deg[l] + degree)
                throw std::invalid_argument("derivation: degree mismatch");
        }
    }
    return values;
}

GradedMap extend_derivation(const Operad& p, const std::function<SVec(int label)>& gen_values, int degree)
{
    std::vector<SVec> values = derivation_values(p, gen_values, degree);
    GradedSpace sp = p.space();
    return {sp, sp, degree,
            matrix_of(sp.dim(), sp.dim(), [&](int e) { return derive_tree(p, values, degree, e, nullptr); })};
}

SVec restrict_to_generator(const Operad& p, const GradedMap& d, int label)
{
    return d.mat.col(p.trees->single(label));
}

namespace {

struct Checker {
    AxiomCheck check;
    int failures = 0;

    explicit Checker(std::string name) { check.name = std::move(name); }
    void expect(bool ok, const std::function<std::string()>& detail)
    {
        if (ok) return;
        if (failures++ == 0) {
            check.ok = false;
            check.detail = detail();
        }
    }
};

}  // namespace

Report validate_operad(const Operad& p)
{
    Report rep;
    const Seq& s = p.seq;
    int n = s.size();
    auto fits = [&](int arity, int weight) { return arity <= p.trunc.max_arity && weight <= p.trunc.max_weight; };
    auto nm = [&](int e) { return s.name[e]; };
    GradedSpace sp = p.space();

    Checker unit("unit");
    if (p.unit < 0 || p.unit >= n || s.ar[p.unit] != 1 || s.deg[p.unit] != 0) {
        unit.expect(false, [] { return std::string("no arity-one degree-zero unit"); });
    } else {
        for (int a = 0; a < n; ++a) {
            unit.expect(p.partial(p.unit, 1, a) == SVec::unit(a), [&] { return "id o_1 " + nm(a); });
            for (int i = 1; i <= s.ar[a]; ++i)
                unit.expect(p.partial(a, i, p.unit) == SVec::unit(a), [&] { return nm(a) + " o_" + std::to_string(i) + " id"; });
        }
    }
    rep.checks.push_back(unit.check);

    Checker seqa("sequential associativity"), para("parallel associativity");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!fits(s.ar[a] + s.ar[b] - 1, s.wt[a] + s.wt[b])) continue;
            for (int c = 0; c < n; ++c) {
                int ar = s.ar[a] + s.ar[b] + s.ar[c] - 2;
                if (!fits(ar, s.wt[a] + s.wt[b] + s.wt[c])) continue;
                for (int i = 1; i <= s.ar[a]; ++i) {
                    SVec ab = p.partial(a, i, b);
                    for (int j = 1; j <= s.ar[b]; ++j) {
                        SVec l = p.compose(ab, i + j - 1, SVec::unit(c));
                        SVec r = p.compose(SVec::unit(a), i, p.partial(b, j, c));
                        seqa.expect(l == r, [&] {
                            return "(" + nm(a) + " o_" + std::to_string(i) + " " + nm(b) + ") o_" +
                                   std::to_string(i + j - 1) + " " + nm(c);
                        });
                    }
                    for (int k = i + 1; k <= s.ar[a]; ++k) {
                        SVec l = p.compose(ab, k + s.ar[b] - 1, SVec::unit(c));
                        SVec r = p.compose(p.partial(a, k, c), i, SVec::unit(b))
                                     .scaled(koszul_sign({{s.deg[b], s.deg[c]}}));
                        para.expect(l == r, [&] {
                            return nm(a) + " with " + nm(b) + " at " + std::to_string(i) + " and " + nm(c) + " at " +
                                   std::to_string(k);
                        });
                    }
                }
            }
        }
    rep.checks.push_back(seqa.check);
    rep.checks.push_back(para.check);

    Checker deriv("derivation"), square("d squared");
    bool shaped = p.d.mat.rows() == static_cast<std::size_t>(n) && p.d.mat.cols() == static_cast<std::size_t>(n);
    if (!shaped) {
        deriv.expect(false, [] { return std::string("differential has the wrong shape"); });
    } else {
        int dd = p.d.degree;
        for (const auto& [r, c, v] : p.d.mat.entries())
            deriv.expect(s.deg[r] == s.deg[c] + dd, [&] { return "d not homogeneous on " + nm(c); });
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (!fits(s.ar[a] + s.ar[b] - 1, s.wt[a] + s.wt[b])) continue;
                for (int i = 1; i <= s.ar[a]; ++i) {
                    SVec l = p.d.mat * p.partial(a, i, b);
                    SVec r = p.compose(p.d.mat.col(a), i, SVec::unit(b));
                    r.axpy(koszul_sign({{dd, s.deg[a]}}), p.compose(SVec::unit(a), i, p.d.mat.col(b)));
                    deriv.expect(l == r, [&] { return "d(" + nm(a) + " o_" + std::to_string(i) + " " + nm(b) + ")"; });
                }
            }
        Matrix d2 = p.d.mat * p.d.mat;
        for (int e = 0; e < n; ++e) square.expect(d2.col(e).empty(), [&] { return "d^2 on " + nm(e); });
    }
    rep.checks.push_back(deriv.check);
    rep.checks.push_back(square.check);
    return rep;
}

int Coperad::adapted_unit() const
{
    if (iota.nnz() != 1 || tau.nnz() != 1) return -1;
    auto [i, vi] = iota.entries().front();
    auto [t, vt] = tau.entries().front();
    return i == t && vi == 1 && vt == 1 ? i : -1;
}

std::vector<int> Coperad::reduced_basis() const
{
    int u = adapted_unit();
    if (u < 0) throw std::invalid_argument("coperad is not cogmented in an adapted basis");
    std::vector<int> r;
    for (int e = 0; e < seq.size(); ++e)
        if (e != u) r.push_back(e);
    return r;
}

Comb Coperad::decompose(const Comb& c, int n, int level) const
{
    auto lv = levels(n);
    SplitMap split = [this](int e) { return w[e]; };
    Comb out;
    for (const auto& [k, v] : c) add_comb(out, expand_level(lv, k, level, split, seq, seq), v);
    return out;
}

Coperad unit_coperad(const Truncation& t)
{
    Coperad q;
    q.seq = unit_seq();
    q.seq.name[0] = "id";
    q.w = {single({0, 0})};
    q.tau = q.iota = SVec::unit(0);
    q.d = GradedMap::zero(q.space(), q.space(), -1);
    q.trunc = t;
    return q;
}

Coperad qx_coperad(const Truncation& t)
{
    Coperad q;
    for (int n = 0; n <= t.max_weight; ++n) q.seq.add(1, 0, n, "X^" + std::to_string(n));
    for (int n = 0; n <= t.max_weight; ++n) {
        Comb c;
        for (int i = 0; i <= n; ++i) add_term(c, {i, n - i}, 1);
        q.w.push_back(std::move(c));
    }
    q.tau = q.iota = SVec::unit(0);
    q.d = GradedMap::zero(q.space(), q.space(), -1);
    q.trunc = t;
    return q;
}

Coperad cofree_coperad(const Seq& labels, const Truncation& t)
{
    Coperad q;
    auto basis = enumerate_trees(labels, t.max_arity, t.max_weight);
    q.trees = basis;
    q.seq = basis->seq;
    for (const Tree& tr : basis->trees) {
        Comb c;
        for (const Cut& cut : cuts(labels, tr)) {
            Key k{basis->find(cut.top)};
            for (const Tree& b : cut.bottoms) k.push_back(basis->find(b));
            if (std::find(k.begin(), k.end(), -1) != k.end()) throw std::logic_error("cofree: cut outside basis");
            add_term(c, k, cut.sign);
        }
        q.w.push_back(std::move(c));
    }
    q.tau = q.iota = SVec::unit(basis->trivial);
    q.d = GradedMap::zero(q.space(), q.space(), -1);
    q.trunc = t;
    return q;
}

GradedMap extend_coderivation(const Coperad& q, const std::function<SVec(int tree)>& proj_values, int degree)
{
    if (!q.trees) throw std::invalid_argument("extend_coderivation needs a cofree coperad");
    const TreeBasis& tb = *q.trees;
    const Seq& labels = tb.labels;
    std::vector<SVec> values(tb.trees.size());
    for (std::size_t e = 0; e < tb.trees.size(); ++e) {
        values[e] = proj_values(static_cast<int>(e));
        for (const auto& [l, c] : values[e].entries()) {
            if (labels.ar[l] != tree_arity(tb.trees[e])) throw std::invalid_argument("coderivation: arity mismatch");
            if (labels.deg[l] != tree_degree(labels, tb.trees[e]) + degree)
                throw std::invalid_argument("coderivation: degree mismatch");
        }
    }
    auto column = [&](int e) {
    const Tree& t = tb.trees[e];
        std::vector<SVec::Entry> acc;
        if (!(t.size() == 1 && t[0] < 0)) {
            auto end = subtree_ends(labels, t);
            int prefix_deg = 0;
            for (int r = 0; r < static_cast<int>(t.size()); ++r) {
                if (t[r] < 0) continue;
                int outer = koszul_sign({{degree, prefix_deg}});
                for (const auto& f : rooted_fragments(labels, t, end, r)) {
                    int top = tb.find(f.top);
                    if (top < 0) continue;
                    const SVec& val = values[top];
                    if (val.empty()) continue;
                    int sign = outer * fragment_sign(labels, t, r, end[r], f);
                    for (const auto& [l, c] : val.entries()) {
                        Tree nt(t.begin(), t.begin() + r);
                        nt.push_back(l);
                        for (const Tree& b : f.bottoms) nt.insert(nt.end(), b.begin(), b.end());
                        nt.insert(nt.end(), t.begin() + end[r], t.end());
                        int idx = tb.find(nt);
                        if (idx >= 0) acc.emplace_back(idx, c * sign);
                    }
                }
                prefix_deg += labels.deg[t[r]];
            }
        }
        std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SVec out;
        for (auto& [i, v] : acc) out.axpy(v, SVec::unit(i));
        return out;
    };
    GradedSpace sp = q.space();
    return {sp, sp, degree, matrix_of(sp.dim(), sp.dim(), column)};
}

SVec project_to_cogenerators(const Coperad& q, const SVec& v)
{
    std::vector<SVec::Entry> e;
    for (const auto& [i, c] : v.entries()) {
        const Tree& t = q.trees->trees[i];
        if (t.size() > 0 && t[0] >= 0 && tree_arity(t) == static_cast<int>(t.size()) - 1) e.emplace_back(t[0], c);
    }
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return SVec(std::move(e));
}

Report validate_curved_coperad(const Coperad& q)
{
    Report rep;
    const Seq& s = q.seq;
    int n = s.size();
    auto nm = [&](int e) { return s.name[e]; };
    auto lv2 = q.levels(2);
    ElemMap delem = [&](int i) { return q.d.mat.col(i); };

    Checker coassoc("coassociativity"), counit("counit"), cogm("cogmentation"), coder("coderivation"),
        curv("curvature"), thetad("theta d = 0");
    for (int e = 0; e < n; ++e) {
        const Comb& we = q.w[e];
        coassoc.expect(q.decompose(we, 2, 0) == q.decompose(we, 2, 1), [&] { return "on " + nm(e); });

        SVec left, right;
        for (const auto& [k, v] : we) {
            if (k.size() == 2) left.axpy(v * q.tau.get(k[0]), SVec::unit(k[1]));
            Rational prod = v;
            for (std::size_t j = 1; j < k.size() && prod != 0; ++j) prod *= q.tau.get(k[j]);
            right.axpy(prod, SVec::unit(k[0]));
        }
        counit.expect(left == SVec::unit(e) && right == SVec::unit(e), [&] { return "on " + nm(e); });

        SVec de = q.d.mat.col(e);
        Comb lhs;
        for (const auto& [c, v] : de.entries()) add_comb(lhs, q.w[c], v);
        Comb rhs;
        for (const auto& [k, v] : we) {
            add_comb(rhs, apply_at_level(lv2, k, 0, delem, q.d.degree), v);
            add_comb(rhs, shuffle_at_level(lv2, k, 1, identity_elem(), delem, q.d.degree), v);
        }
        coder.expect(lhs == rhs, [&] { return "on " + nm(e); });

        SVec dd = q.d.mat * de;
        SVec expect;
        for (const auto& [k, v] : we) {
            if (k.size() == 2) expect.axpy(v * q.theta.get(k[0]), SVec::unit(k[1]));
            for (std::size_t j = 1; j < k.size(); ++j) {
                Rational prod = v * q.theta.get(k[j]);
                for (std::size_t i = 1; i < k.size() && prod != 0; ++i)
                    if (i != j) prod *= q.tau.get(k[i]);
                expect.axpy(-prod, SVec::unit(k[0]));
            }
        }
        curv.expect(dd == expect, [&] { return "d^2 on " + nm(e); });
        thetad.expect(q.theta.dot(de) == 0, [&] { return "on " + nm(e); });
    }
    Comb wi;
    for (const auto& [i, v] : q.iota.entries()) add_comb(wi, q.w[i], v);
    Comb ii;
    for (const auto& [a, x] : q.iota.entries())
        for (const auto& [b, y] : q.iota.entries()) add_term(ii, {a, b}, x * y);
    cogm.expect(q.tau.dot(q.iota) == 1, [] { return std::string("tau iota != 1"); });
    cogm.expect(wi == ii, [] { return std::string("w(iota) != iota o iota"); });
    cogm.expect((q.d.mat * q.iota).empty(), [] { return std::string("d(iota) != 0"); });
    for (const auto& [i, v] : q.theta.entries())
        thetad.expect(s.ar[i] == 1 && s.deg[i] == 2, [&] { return "theta not of degree -2 on " + nm(i); });
    rep.checks = {coassoc.check, counit.check, cogm.check, coder.check, curv.check, thetad.check};
    return rep;
}

Comb reduced_decomposition(const Coperad& q, int e)
{
    Comb out = q.w[e];
    for (const auto& [k, v] : q.w[e]) {
        if (k.size() == 2) {
            Rational t = q.tau.get(k[0]);
            if (t != 0)
                for (const auto& [c, x] : q.iota.entries()) add_term(out, {c, k[1]}, -v * t * x);
        }
        Rational prod = v;
        for (std::size_t j = 1; j < k.size() && prod != 0; ++j) prod *= q.tau.get(k[j]);
        if (prod == 0) continue;
        std::vector<std::pair<Key, Rational>> terms{{Key{k[0]}, prod}};
        for (std::size_t j = 1; j < k.size(); ++j) {
            std::vector<std::pair<Key, Rational>> next;
            for (const auto& [kk, c] : terms)
                for (const auto& [i, x] : q.iota.entries()) {
                    Key nk = kk;
                    nk.push_back(i);
                    next.emplace_back(std::move(nk), c * x);
                }
            terms = std::move(next);
        }
        for (const auto& [kk, c] : terms) add_term(out, kk, -c);
    }
    return out;
}

namespace {

struct AdaptedBasis {
    Matrix inverse;          // local coordinates -> adapted coordinates
    std::vector<int> level;  // filtration level of each adapted vector
};

}  // namespace

Filtration coradical_filtration(const Coperad& q, int max_stage)
{
    int u = q.adapted_unit();
    if (u < 0) throw std::invalid_argument("coradical filtration needs a cogmented coperad in an adapted basis");
    const Seq& s = q.seq;
    int A = s.max_arity();
    std::vector<std::vector<int>> elems(A + 1);
    std::vector<int> local(s.size());
    for (int m = 1; m <= A; ++m) {
        elems[m] = s.in_arity(m);
        for (std::size_t i = 0; i < elems[m].size(); ++i) local[elems[m][i]] = static_cast<int>(i);
    }
    // stages[n][m]: basis of F_n Q(m) in local coordinates.
    std::vector<std::vector<Matrix>> stages;
    std::vector<Matrix> f0(A + 1);
    for (int m = 1; m <= A; ++m) f0[m] = Matrix::zero(elems[m].size(), 0);
    if (A >= 1) f0[1] = Matrix::from_columns(elems[1].size(), {SVec::unit(local[u])});
    stages.push_back(f0);
    Filtration out;
    auto to_global = [&](const std::vector<Matrix>& st) {
        std::vector<SVec> cols;
        for (int m = 1; m <= A; ++m)
            for (const SVec& c : st[m].columns()) {
                std::vector<SVec::Entry> e;
                for (const auto& [i, v] : c.entries()) e.emplace_back(elems[m][i], v);
                std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
                cols.emplace_back(std::move(e));
            }
        return Subspace{static_cast<std::size_t>(s.size()), Matrix::from_columns(s.size(), std::move(cols))};
    };
    out.stages.push_back(to_global(f0));
    for (int n = 1; n <= max_stage; ++n) {
        std::vector<AdaptedBasis> ad(A + 1);
        for (int m = 1; m <= A; ++m) {
            std::size_t dm = elems[m].size();
            Matrix basis = Matrix::zero(dm, 0);
            std::vector<int> level;
            auto try_add = [&](const SVec& v, int lvl) {
                Matrix cand = basis.hstack(Matrix::from_columns(dm, {v}));
                if (rank(cand) > basis.cols()) {
                    basis = cand;
                    level.push_back(lvl);
                }
            };
            for (int k = 0; k < n; ++k)
                for (const SVec& c : stages[k][m].columns()) try_add(c, k);
            for (std::size_t i = 0; i < dm && basis.cols() < dm; ++i) try_add(SVec::unit(static_cast<int>(i)), n + 1);
            auto inv = solve(basis, Matrix::identity(dm));
            ad[m] = {*inv, level};
        }
        std::vector<Matrix> next(A + 1);
        for (int m = 1; m <= A; ++m) {
            std::vector<int> reduced;
            for (int e : elems[m])
                if (e != u) reduced.push_back(e);
            std::map<Key, int> bad_index;
            std::vector<SVec> cols;
            for (int e : reduced) {
                std::map<int, Rational> acc;
                for (const auto& [k, v] : reduced_decomposition(q, e)) {
                    bool top = true;
                    std::vector<std::tuple<Key, Rational, int>> cur{{Key{}, v, 0}};
                    for (int x : k) {
                        int ar = s.ar[x];
                        const SVec& col = ad[ar].inverse.col(local[x]);
                        std::vector<std::tuple<Key, Rational, int>> nxt;
                        for (const auto& [kk, c, l] : cur)
                            for (const auto& [a, y] : col.entries()) {
                                int lvl = ad[ar].level[a];
                                if (top && lvl == 0) lvl = n + 1;  // F_0 Q̄ = 0
                                Key nk = kk;
                                nk.push_back(ar);
                                nk.push_back(a);
                                nxt.emplace_back(std::move(nk), c * y, l + lvl);
                            }
                        cur = std::move(nxt);
                        top = false;
                    }
                    for (const auto& [kk, c, l] : cur) {
                        if (l <= n) continue;
                        auto [it, inserted] = bad_index.emplace(kk, static_cast<int>(bad_index.size()));
                        acc[it->second] += c;
                    }
                }
                std::vector<SVec::Entry> entries;
                for (auto& [i, c] : acc)
                    if (c != 0) entries.emplace_back(i, c);
                cols.emplace_back(std::move(entries));
            }
            Matrix cond = Matrix::from_columns(bad_index.size(), std::move(cols));
            Subspace ker = kernel_basis(cond);
            std::vector<SVec> basis_cols = stages[0][m].columns();
            for (const SVec& c : ker.basis.columns()) {
                std::vector<SVec::Entry> e;
                for (const auto& [i, v] : c.entries()) e.emplace_back(local[reduced[i]], v);
                std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
                basis_cols.emplace_back(std::move(e));
            }
            next[m] = Matrix::from_columns(elems[m].size(), std::move(basis_cols));
        }
        bool same = true;
        for (int m = 1; m <= A; ++m) same = same && next[m].cols() == stages.back()[m].cols();
        stages.push_back(next);
        out.stages.push_back(to_global(next));
        if (same) {
            out.stabilized = true;
            break;
        }
    }
    return out;
}

bool is_locally_conilpotent(const Coperad& q)
{
    Filtration f = coradical_filtration(q, q.seq.size() + 1);
    return f.stages.back().dim() == static_cast<std::size_t>(q.seq.size());
}

}  // namespace operadia
