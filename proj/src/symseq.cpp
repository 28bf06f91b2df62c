#include "operadia/symseq.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace operadia {

std::size_t KeyHash::operator()(const Key& k) const noexcept
{
    std::size_t h = k.size();
    for (int v : k) h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

void add_term(Comb& c, const Key& k, const Rational& v)
{
    if (v == 0) return;
    auto [it, inserted] = c.emplace(k, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0) c.erase(it);
    }
}

void add_comb(Comb& c, const Comb& d, const Rational& scale)
{
    for (const auto& [k, v] : d) add_term(c, k, v * scale);
}

Comb single(const Key& k, const Rational& v)
{
    Comb c;
    add_term(c, k, v);
    return c;
}

Comb apply(const KeyMap& f, const Comb& c)
{
    Comb out;
    for (const auto& [k, v] : c) add_comb(out, f(k), v);
    return out;
}

ExactnessCert ExactnessCert::full(const Truncation& t)
{
    return {{0, t.max_arity}, {t.degree_lo, t.degree_hi}, {0, t.max_weight}};
}

int Seq::add(int arity, int degree, int weight, std::string label)
{
    ar.push_back(arity);
    deg.push_back(degree);
    wt.push_back(weight);
    name.push_back(std::move(label));
    return size() - 1;
}

std::vector<int> Seq::in_arity(int n) const
{
    std::vector<int> r;
    for (int i = 0; i < size(); ++i)
        if (ar[i] == n) r.push_back(i);
    return r;
}

int Seq::max_arity() const
{
    int m = 0;
    for (int a : ar) m = std::max(m, a);
    return m;
}

GradedSpace Seq::space() const
{
    GradedSpace s;
    s.deg = deg;
    s.wt = wt;
    s.labels = name;
    return s;
}

int Seq::find(const std::string& label) const
{
    for (int i = 0; i < size(); ++i)
        if (name[i] == label) return i;
    return -1;
}

Seq seq_of_space(const GradedSpace& x)
{
    Seq s;
    for (std::size_t i = 0; i < x.dim(); ++i)
        s.add(0, x.deg[i], x.weight(i), i < x.labels.size() ? x.labels[i] : "x" + std::to_string(i));
    return s;
}

Matrix SymSeq::action(int n, int i) const
{
    auto it = actions.find(n);
    if (it == actions.end() || i < 1 || i > static_cast<int>(it->second.size()))
        return Matrix::identity(seq.in_arity(n).size());
    return it->second[i - 1];
}

Seq unit_seq()
{
    Seq s;
    s.add(1, 0, 0, "1");
    return s;
}

SymSeq unit_symseq(const Truncation& t)
{
    SymSeq m;
    m.seq = unit_seq();
    m.cert = ExactnessCert::full(t);
    return m;
}

std::vector<int> level_offsets(const std::vector<Seq>& levels, const Key& key)
{
    std::vector<int> off{0};
    if (levels.empty()) return off;
    off.push_back(1);
    for (std::size_t l = 1; l < levels.size(); ++l) {
        int count = 0;
        for (int j = off[l - 1]; j < off[l]; ++j) count += levels[l - 1].ar[key[j]];
        off.push_back(off[l] + count);
    }
    return off;
}

namespace {

std::vector<int> key_degrees(const std::vector<Seq>& levels, const Key& key, const std::vector<int>& off)
{
    std::vector<int> d(off.back());
    for (std::size_t l = 0; l < levels.size(); ++l)
        for (int j = off[l]; j < off[l + 1]; ++j) d[j] = levels[l].deg[key[j]];
    return d;
}

}  // namespace

int key_degree(const std::vector<Seq>& levels, const Key& key)
{
    auto off = level_offsets(levels, key);
    auto d = key_degrees(levels, key, off);
    return std::accumulate(d.begin(), d.end(), 0);
}

int key_weight(const std::vector<Seq>& levels, const Key& key)
{
    auto off = level_offsets(levels, key);
    int w = 0;
    for (std::size_t l = 0; l < levels.size(); ++l)
        for (int j = off[l]; j < off[l + 1]; ++j) w += levels[l].wt[key[j]];
    return w;
}

int key_arity(const std::vector<Seq>& levels, const Key& key)
{
    auto off = level_offsets(levels, key);
    int a = 0;
    const Seq& last = levels.back();
    for (int j = off[levels.size() - 1]; j < off[levels.size()]; ++j) a += last.ar[key[j]];
    return a;
}

int KeyBasis::find(const Key& k) const
{
    auto it = index_.find(k);
    return it == index_.end() ? -1 : it->second;
}

GradedSpace KeyBasis::space() const
{
    GradedSpace s;
    s.deg = deg_;
    s.wt = wt_;
    s.labels = labels_;
    return s;
}

SVec KeyBasis::to_svec(const Comb& c) const
{
    std::vector<SVec::Entry> e;
    for (const auto& [k, v] : c) {
        int i = find(k);
        if (i >= 0) e.emplace_back(i, v);
    }
    return SVec(std::move(e));
}

void KeyBasis::push(Key k, int arity, int degree, int weight, std::string label)
{
    keys_.push_back(std::move(k));
    ar_.push_back(arity);
    deg_.push_back(degree);
    wt_.push_back(weight);
    labels_.push_back(std::move(label));
}

void KeyBasis::finish()
{
    std::vector<int> order(keys_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (ar_[a] != ar_[b]) return ar_[a] < ar_[b];
        return keys_[a] < keys_[b];
    });
    auto permute = [&](auto& v) {
        auto old = v;
        for (std::size_t i = 0; i < order.size(); ++i) v[i] = std::move(old[order[i]]);
    };
    permute(keys_);
    permute(ar_);
    permute(deg_);
    permute(wt_);
    permute(labels_);
    index_.clear();
    index_.reserve(keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i) index_.emplace(keys_[i], static_cast<int>(i));
}

namespace {

struct CompositeEnumerator {
    const std::vector<Seq>& levels;
    int max_arity;
    int max_weight;
    std::vector<std::vector<int>> by_weight;  // per level, elements sorted by weight
    std::function<void(const Key&, int arity, int degree, int weight)> emit;
    Key key;

    void run()
    {
        for (const Seq& s : levels) {
            std::vector<int> order(s.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s.wt[a] < s.wt[b]; });
            by_weight.push_back(std::move(order));
        }
        rec(0, 0, 1, 0, 0, 0);
    }

    void rec(std::size_t level, int slot, int slots, int next_width, int weight, int degree)
    {
        if (slot == slots) {
            if (level + 1 == levels.size()) {
                emit(key, next_width, degree, weight);
                return;
            }
            rec(level + 1, 0, next_width, 0, weight, degree);
            return;
        }
        const Seq& s = levels[level];
        for (int e : by_weight[level]) {
            if (weight + s.wt[e] > max_weight) break;
            if (next_width + s.ar[e] > max_arity) continue;
            key.push_back(e);
            rec(level, slot + 1, slots, next_width + s.ar[e], weight + s.wt[e], degree + s.deg[e]);
            key.pop_back();
        }
    }
};

std::string composite_label(const std::vector<Seq>& levels, const Key& key)
{
    auto off = level_offsets(levels, key);
    std::string out;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        if (l) out += " | ";
        for (int j = off[l]; j < off[l + 1]; ++j) {
            if (j > off[l]) out += ",";
            out += levels[l].name[key[j]];
        }
    }
    return out;
}

}  // namespace

Composite::Composite(std::vector<Seq> levels, int max_arity, int max_weight) : levels_(std::move(levels))
{
    if (levels_.empty()) throw std::invalid_argument("composite needs at least one level");
    CompositeEnumerator en{levels_, max_arity, max_weight, {}, {}, {}};
    en.emit = [&](const Key& k, int a, int d, int w) { push(k, a, d, w, composite_label(levels_, k)); };
    en.run();
    finish();
}

Cotensor::Cotensor(GradedSpace x, std::vector<Seq> levels, int max_arity, int max_weight)
    : x_(std::move(x)), levels_(std::move(levels)), max_arity_(max_arity), max_weight_(max_weight)
{
    std::vector<int> xs_by_weight(x_.dim());
    std::iota(xs_by_weight.begin(), xs_by_weight.end(), 0);
    std::stable_sort(xs_by_weight.begin(), xs_by_weight.end(),
                     [&](int a, int b) { return x_.weight(a) < x_.weight(b); });
    CompositeEnumerator en{levels_, max_arity, max_weight, {}, {}, {}};
    en.emit = [&](const Key& shape, int arity, int d, int w) {
        Key k = shape;
        std::function<void(int, int, int)> rec = [&](int pos, int weight, int degree) {
            if (pos == arity) {
                std::string label = "[";
                for (int i = 0; i < arity; ++i) {
                    int xi = k[shape.size() + i];
                    if (i) label += ",";
                    label += xi < static_cast<int>(x_.labels.size()) ? x_.labels[xi] : "x" + std::to_string(xi);
                }
                label += " ; " + composite_label(levels_, shape) + "]";
                push(k, arity, degree - d, weight, std::move(label));
                return;
            }
            for (int xi : xs_by_weight) {
                if (weight + x_.weight(xi) > max_weight) break;
                k.push_back(xi);
                rec(pos + 1, weight + x_.weight(xi), degree + x_.deg[xi]);
                k.pop_back();
            }
        };
        rec(0, w, 0);
    };
    en.run();
    finish();
}

int Cotensor::shape_length(const Key& k) const
{
    // Level offsets only read the shape prefix.
    return level_offsets(levels_, k).back();
}

Key Cotensor::shape(const Key& k) const { return Key(k.begin(), k.begin() + shape_length(k)); }

Key Cotensor::word(const Key& k) const { return Key(k.begin() + shape_length(k), k.end()); }

namespace {

// Multiply out a list of per-position alternatives into a Comb over concatenated keys.
struct Product {
    std::vector<std::pair<Key, Rational>> terms{{Key{}, Rational(1)}};

    void extend(const std::vector<std::pair<Key, Rational>>& options)
    {
        std::vector<std::pair<Key, Rational>> next;
        next.reserve(terms.size() * options.size());
        for (const auto& [k, v] : terms)
            for (const auto& [o, c] : options) {
                Key nk = k;
                nk.insert(nk.end(), o.begin(), o.end());
                next.emplace_back(std::move(nk), v * c);
            }
        terms = std::move(next);
    }
};

std::vector<std::pair<Key, Rational>> options_of(const SVec& v, const Rational& sign)
{
    std::vector<std::pair<Key, Rational>> o;
    for (const auto& [i, c] : v.entries()) o.push_back({Key{i}, sign * c});
    return o;
}

}  // namespace

ElemMap identity_elem()
{
    return [](int i) { return SVec::unit(i); };
}

Comb apply_at_level(const std::vector<Seq>& levels, const Key& key, int level, const ElemMap& f, int p)
{
    auto off = level_offsets(levels, key);
    auto degs = key_degrees(levels, key, off);
    Product prod;
    int before = 0;
    for (int j = 0; j < off[level]; ++j) before += degs[j];
    for (int j = off[level]; j < off[level + 1]; ++j) {
        prod.extend(options_of(f(key[j]), koszul_sign({{p, before}})));
        before += degs[j];
    }
    Comb out;
    Key prefix(key.begin(), key.begin() + off[level]);
    Key suffix(key.begin() + off[level + 1], key.end());
    for (auto& [mid, v] : prod.terms) {
        Key k = prefix;
        k.insert(k.end(), mid.begin(), mid.end());
        k.insert(k.end(), suffix.begin(), suffix.end());
        add_term(out, k, v);
    }
    return out;
}

Comb shuffle_at_level(const std::vector<Seq>& levels, const Key& key, int level, const ElemMap& f,
                      const ElemMap& g, int p)
{
    auto off = level_offsets(levels, key);
    auto degs = key_degrees(levels, key, off);
    Key prefix(key.begin(), key.begin() + off[level]);
    Key suffix(key.begin() + off[level + 1], key.end());
    int before0 = 0;
    for (int j = 0; j < off[level]; ++j) before0 += degs[j];
    Comb out;
    for (int special = off[level]; special < off[level + 1]; ++special) {
        Product prod;
        int before = before0;
        for (int j = off[level]; j < off[level + 1]; ++j) {
            if (j == special)
                prod.extend(options_of(g(key[j]), koszul_sign({{p, before}})));
            else
                prod.extend(options_of(f(key[j]), 1));
            before += degs[j];
        }
        for (auto& [mid, v] : prod.terms) {
            Key k = prefix;
            k.insert(k.end(), mid.begin(), mid.end());
            k.insert(k.end(), suffix.begin(), suffix.end());
            add_term(out, k, v);
        }
    }
    return out;
}

Comb collapse_levels(const std::vector<Seq>& levels, const Key& key, int level, const TwoLevelMap& m)
{
    auto off = level_offsets(levels, key);
    auto degs = key_degrees(levels, key, off);
    const Seq& lo = levels[level];
    std::vector<Key> groups;
    std::vector<int> group_deg, top_deg;
    int pos = off[level + 1];
    for (int j = off[level]; j < off[level + 1]; ++j) {
        Key g{key[j]};
        int d = 0;
        for (int c = 0; c < lo.ar[key[j]]; ++c, ++pos) {
            g.push_back(key[pos]);
            d += degs[pos];
        }
        groups.push_back(std::move(g));
        group_deg.push_back(d);
        top_deg.push_back(degs[j]);
    }
    std::vector<std::pair<int, int>> swaps;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) swaps.emplace_back(top_deg[i], group_deg[j]);
    Rational sign = koszul_sign(swaps);
    Product prod;
    for (const Key& g : groups) prod.extend(options_of(m(g), 1));
    Key prefix(key.begin(), key.begin() + off[level]);
    Key suffix(key.begin() + off[level + 2], key.end());
    Comb out;
    for (auto& [mid, v] : prod.terms) {
        Key k = prefix;
        k.insert(k.end(), mid.begin(), mid.end());
        k.insert(k.end(), suffix.begin(), suffix.end());
        add_term(out, k, v * sign);
    }
    return out;
}

Comb expand_level(const std::vector<Seq>& levels, const Key& key, int level, const SplitMap& w,
                  const Seq& lower, const Seq& upper)
{
    auto off = level_offsets(levels, key);
    Key prefix(key.begin(), key.begin() + off[level]);
    Key suffix(key.begin() + off[level + 1], key.end());
    // Each term: chosen [a; B] per element.
    std::vector<std::pair<std::vector<Key>, Rational>> terms{{{}, Rational(1)}};
    for (int j = off[level]; j < off[level + 1]; ++j) {
        Comb split = w(key[j]);
        std::vector<std::pair<std::vector<Key>, Rational>> next;
        for (const auto& [ks, v] : terms)
            for (const auto& [g, c] : split) {
                auto nk = ks;
                nk.push_back(g);
                next.emplace_back(std::move(nk), v * c);
            }
        terms = std::move(next);
    }
    Comb out;
    for (const auto& [groups, v] : terms) {
        Key k = prefix;
        std::vector<int> a_deg, b_deg;
        for (const Key& g : groups) {
            k.push_back(g[0]);
            a_deg.push_back(lower.deg[g[0]]);
            int d = 0;
            for (std::size_t c = 1; c < g.size(); ++c) d += upper.deg[g[c]];
            b_deg.push_back(d);
        }
        for (const Key& g : groups) k.insert(k.end(), g.begin() + 1, g.end());
        k.insert(k.end(), suffix.begin(), suffix.end());
        std::vector<std::pair<int, int>> swaps;
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) swaps.emplace_back(a_deg[i], b_deg[j]);
        add_term(out, k, v * koszul_sign(swaps));
    }
    return out;
}

namespace {

int word_degree(const GradedSpace& x, const Key& xs)
{
    int d = 0;
    for (int i : xs) d += x.deg[i];
    return d;
}

Key concat(Key a, const Key& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

GradedMap cotensor_contra(const Cotensor& xn, const Cotensor& xm, int p, const KeyMap& f)
{
    std::vector<std::tuple<int, int, Rational>> trip;
    for (int t = 0; t < xm.size(); ++t) {
        const Key& k = xm.key(t);
        Key a = xm.shape(k);
        Key xs = xm.word(k);
        int xdeg = word_degree(xm.base(), xs);
        for (const auto& [b, c] : f(a)) {
            int s = xn.find(concat(b, xs));
            if (s < 0) continue;
            int phi = xdeg - key_degree(xn.levels(), b);
            trip.emplace_back(t, s, c * koszul_sign({{p, phi}}));
        }
    }
    return {xn.space(), xm.space(), p, Matrix::from_triplets(xm.size(), xn.size(), trip)};
}

GradedMap cotensor_cov(const Cotensor& xm, const Cotensor& ym, int p, const KeyMap& g)
{
    std::vector<std::tuple<int, int, Rational>> trip;
    for (int s = 0; s < xm.size(); ++s) {
        const Key& k = xm.key(s);
        Key a = xm.shape(k);
        for (const auto& [ys, c] : g(xm.word(k))) {
            int t = ym.find(concat(a, ys));
            if (t >= 0) trip.emplace_back(t, s, c);
        }
    }
    return {xm.space(), ym.space(), p, Matrix::from_triplets(ym.size(), xm.size(), trip)};
}

GradedMap tensor_power(const Cotensor& xm, const Cotensor& ym, const ElemMap& f)
{
    KeyMap word_map = [&](const Key& xs) {
        Product prod;
        for (int x : xs) prod.extend(options_of(f(x), 1));
        Comb out;
        for (auto& [k, v] : prod.terms) add_term(out, k, v);
        return out;
    };
    return cotensor_cov(xm, ym, 0, word_map);
}

GradedMap shuffle_power(const Cotensor& xm, const Cotensor& ym, const ElemMap& f, const ElemMap& g, int p)
{
    const GradedSpace& x = xm.base();
    KeyMap word_map = [&](const Key& xs) {
        Comb out;
        int before = 0;
        for (std::size_t special = 0; special < xs.size(); ++special) {
            Product prod;
            for (std::size_t j = 0; j < xs.size(); ++j)
                prod.extend(options_of(j == special ? g(xs[j]) : f(xs[j]), j == special ? koszul_sign({{p, before}}) : 1));
            before += x.deg[xs[special]];
            for (auto& [k, v] : prod.terms) add_term(out, k, v);
        }
        return out;
    };
    return cotensor_cov(xm, ym, p, word_map);
}

GradedMap lax_map(const Cotensor& outer, const Cotensor& inner, const Cotensor& target)
{
    if (outer.base().deg != inner.space().deg) throw std::invalid_argument("lax map: base mismatch");
    const auto& mlev = inner.levels();
    std::vector<std::tuple<int, int, Rational>> trip;
    for (int s = 0; s < outer.size(); ++s) {
        const Key& k = outer.key(s);
        Key nu = outer.shape(k);
        Key psis = outer.word(k);
        std::vector<std::pair<int, int>> swaps;
        std::vector<Key> mus;
        Key xs;
        std::vector<int> mu_deg;
        for (int psi : psis) {
            const Key& ik = inner.key(psi);
            mus.push_back(inner.shape(ik));
            Key w = inner.word(ik);
            xs.insert(xs.end(), w.begin(), w.end());
            mu_deg.push_back(key_degree(mlev, mus.back()));
        }
        for (std::size_t i = 0; i < psis.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) swaps.emplace_back(inner.deg(psis[i]), mu_deg[j]);
        int sign = koszul_sign(swaps);
        Key comp = nu;
        if (mlev.size() == 1) {
            for (const Key& m : mus) comp.insert(comp.end(), m.begin(), m.end());
        } else {
            // Interleave the levels of the inner composites.
            std::vector<int> degs;
            std::vector<std::vector<int>> offs;
            std::vector<std::pair<int, int>> flat;  // (mu index, position)
            for (const Key& m : mus) offs.push_back(level_offsets(mlev, m));
            std::vector<int> grouped_deg;
            for (std::size_t i = 0; i < mus.size(); ++i) {
                auto d = key_degrees(mlev, mus[i], offs[i]);
                grouped_deg.insert(grouped_deg.end(), d.begin(), d.end());
            }
            std::vector<int> start(mus.size(), 0);
            for (std::size_t i = 1; i < mus.size(); ++i) start[i] = start[i - 1] + static_cast<int>(mus[i - 1].size());
            std::vector<int> perm;
            for (std::size_t l = 0; l < mlev.size(); ++l)
                for (std::size_t i = 0; i < mus.size(); ++i)
                    for (int j = offs[i][l]; j < offs[i][l + 1]; ++j) {
                        perm.push_back(start[i] + j);
                        comp.push_back(mus[i][j]);
                    }
            sign *= permutation_sign(grouped_deg, perm);
        }
        int t = target.find(concat(comp, xs));
        if (t >= 0) trip.emplace_back(t, s, Rational(sign));
    }
    return {outer.space(), target.space(), 0, Matrix::from_triplets(target.size(), outer.size(), trip)};
}

GradedMap cotensor_from_unit(const Cotensor& xm, int p, const std::function<Rational(const Key&)>& u)
{
    const GradedSpace& x = xm.base();
    std::vector<std::tuple<int, int, Rational>> trip;
    for (int t = 0; t < xm.size(); ++t) {
        if (xm.arity(t) != 1) continue;
        const Key& k = xm.key(t);
        Rational c = u(xm.shape(k));
        if (c == 0) continue;
        int xi = k.back();
        trip.emplace_back(t, xi, c * koszul_sign({{p, x.deg[xi]}}));
    }
    return {x, xm.space(), p, Matrix::from_triplets(xm.size(), x.dim(), trip)};
}

GradedMap cotensor_to_unit(const Cotensor& xm, int p, const Comb& c)
{
    const GradedSpace& x = xm.base();
    std::vector<std::tuple<int, int, Rational>> trip;
    for (int s = 0; s < xm.size(); ++s) {
        if (xm.arity(s) != 1) continue;
        const Key& k = xm.key(s);
        auto it = c.find(xm.shape(k));
        if (it == c.end()) continue;
        trip.emplace_back(k.back(), s, it->second * koszul_sign({{p, xm.deg(s)}}));
    }
    return {xm.space(), x, p, Matrix::from_triplets(x.dim(), xm.size(), trip)};
}

Subspace shuffle_subobject(const Cotensor& ym, const Subspace& x)
{
    std::set<Key> seen;
    std::vector<SVec> gens;
    for (int t = 0; t < ym.size(); ++t) {
        if (ym.arity(t) == 0) continue;
        const Key& k = ym.key(t);
        int start = ym.shape_length(k);
        for (int j = start; j < static_cast<int>(k.size()); ++j)
            for (std::size_t v = 0; v < x.dim(); ++v) {
                Key tag = k;
                tag[j] = -1 - static_cast<int>(v);
                if (!seen.insert(tag).second) continue;
                std::vector<SVec::Entry> e;
                for (const auto& [yi, c] : x.basis.col(v).entries()) {
                    Key kk = k;
                    kk[j] = yi;
                    int idx = ym.find(kk);
                    if (idx >= 0) e.emplace_back(idx, c);
                }
                if (!e.empty()) gens.emplace_back(std::move(e));
            }
    }
    Matrix g = Matrix::from_columns(ym.size(), std::move(gens));
    return {static_cast<std::size_t>(ym.size()), image_basis(g).basis};
}

CoxeterReport validate_actions(const SymSeq& m)
{
    CoxeterReport r;
    if (m.planar) {
        if (!m.actions.empty()) {
            r.ok = false;
            r.failure = "planar sequence carries group actions";
        }
        return r;
    }
    for (const auto& [n, gens] : m.actions) {
        auto comp = m.seq.in_arity(n);
        std::size_t d = comp.size();
        auto fail = [&](const std::string& what) {
            if (r.ok) {
                r.ok = false;
                r.failure = what + " fails in arity " + std::to_string(n);
            }
        };
        if (static_cast<int>(gens.size()) != std::max(0, n - 1)) fail("generator count");
        Matrix id = Matrix::identity(d);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            const Matrix& s = gens[i];
            if (s.rows() != d || s.cols() != d) {
                fail("shape of sigma_" + std::to_string(i + 1));
                continue;
            }
            for (const auto& [a, b, v] : s.entries())
                if (m.seq.deg[comp[a]] != m.seq.deg[comp[b]]) fail("grading of sigma_" + std::to_string(i + 1));
            if (s * s != id) fail("Coxeter relation sigma_" + std::to_string(i + 1) + "^2 = id");
            for (std::size_t j = i + 2; j < gens.size(); ++j)
                if (s * gens[j] != gens[j] * s)
                    fail("Coxeter relation sigma_" + std::to_string(i + 1) + " sigma_" + std::to_string(j + 1) +
                         " commute");
            if (i + 1 < gens.size()) {
                const Matrix& t = gens[i + 1];
                if (s * t * s != t * s * t)
                    fail("Coxeter braid relation sigma_" + std::to_string(i + 1) + " sigma_" + std::to_string(i + 2));
            }
        }
    }
    return r;
}

namespace {

std::string matrix_fingerprint(const Matrix& m)
{
    std::string s;
    for (const auto& [i, j, v] : m.entries()) s += std::to_string(i) + "," + std::to_string(j) + "," + to_string(v) + ";";
    return s;
}

}  // namespace

Matrix averaging_idempotent(const std::vector<Matrix>& generators)
{
    if (generators.empty()) throw std::invalid_argument("averaging needs the ambient dimension");
    std::size_t n = generators.front().rows();
    std::map<std::string, Matrix> group;
    std::queue<Matrix> todo;
    Matrix id = Matrix::identity(n);
    group.emplace(matrix_fingerprint(id), id);
    todo.push(id);
    while (!todo.empty()) {
        Matrix g = todo.front();
        todo.pop();
        for (const Matrix& s : generators) {
            Matrix h = s * g;
            auto fp = matrix_fingerprint(h);
            if (group.count(fp)) continue;
            if (group.size() > 40320) throw std::runtime_error("averaging: group too large");
            group.emplace(fp, h);
            todo.push(h);
        }
    }
    Matrix sum = Matrix::zero(n, n);
    for (const auto& [fp, g] : group) sum = sum + g;
    return sum.scaled(Rational(1, static_cast<long>(group.size())));
}

Matrix tensor_swap(const GradedSpace& x, int n, int i)
{
    std::size_t d = x.dim();
    std::size_t total = 1;
    for (int k = 0; k < n; ++k) total *= d;
    std::vector<std::tuple<int, int, Rational>> trip;
    std::vector<int> idx(n, 0);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t rem = c;
        for (int k = n - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(rem % d);
            rem /= d;
        }
        auto sw = idx;
        std::swap(sw[i - 1], sw[i]);
        std::size_t r = 0;
        for (int k = 0; k < n; ++k) r = r * d + sw[k];
        trip.emplace_back(static_cast<int>(r), static_cast<int>(c),
                          Rational(koszul_sign({{x.deg[idx[i - 1]], x.deg[idx[i]]}})));
    }
    return Matrix::from_triplets(total, total, trip);
}

std::size_t SymCotensor::dim() const
{
    std::size_t d = 0;
    for (const auto& [n, s] : invariants) d += s.dim();
    return d;
}

SymCotensor cotensor_symmetric(const GradedSpace& x, const SymSeq& m, int max_arity)
{
    SymCotensor out;
    for (int n = 1; n <= max_arity; ++n) {
        auto comp = m.seq.in_arity(n);
        if (comp.empty()) continue;
        GradedSpace mn;
        for (int e : comp) mn.deg.push_back(m.seq.deg[e]);
        GradedSpace xn = GradedSpace::from_degrees({0});
        for (int k = 0; k < n; ++k) xn = tensor_space(xn, x);
        GradedSpace hom = hom_space(mn, xn);
        Matrix e = Matrix::identity(hom.dim());
        if (!m.planar && n >= 2) {
            std::vector<Matrix> gens;
            for (int i = 1; i < n; ++i) {
                GradedMap sm(mn, mn, 0, m.action(n, i));
                GradedMap sx(xn, xn, 0, tensor_swap(x, n, i));
                gens.push_back(hom_pairing(sm, sx).mat);
            }
            e = averaging_idempotent(gens);
        }
        out.idempotent.emplace(n, e);
        out.invariants.emplace(n, Subspace{hom.dim(), image_basis(e).basis});
    }
    return out;
}

namespace {

std::vector<std::vector<int>> all_permutations(int n)
{
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

void compositions(int n, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (k == 0) {
        if (n == 0) out.push_back(cur);
        return;
    }
    for (int first = 1; first <= n - (k - 1); ++first) {
        cur.push_back(first);
        compositions(n - first, k - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

SymSeq compose_product(const SymSeq& m, const SymSeq& n, const Truncation& t)
{
    if (m.planar != n.planar) throw std::invalid_argument("compose_product: mixed planar and symmetric inputs");
    if (m.seq.max_arity() > t.max_arity || n.seq.max_arity() > t.max_arity)
        throw std::invalid_argument("compose_product: truncation mismatch");
    SymSeq out;
    out.planar = m.planar;
    out.cert = ExactnessCert::full(t);
    if (m.planar) {
        Composite c({m.seq, n.seq}, t.max_arity, t.max_weight);
        for (int i = 0; i < c.size(); ++i) out.seq.add(c.arity(i), c.deg(i), c.wt(i), c.space().labels[i]);
        return out;
    }
    for (int e = 0; e < n.seq.size(); ++e)
        if (n.seq.ar[e] == 0) throw std::invalid_argument("compose_product: symmetric arity-zero input unsupported");

    auto local = [](const Seq& s) {
        std::vector<int> pos(s.size());
        std::map<int, int> counter;
        for (int i = 0; i < s.size(); ++i) pos[i] = counter[s.ar[i]]++;
        return pos;
    };
    auto mloc = local(m.seq);
    auto nloc = local(n.seq);

    for (int nn = 1; nn <= t.max_arity; ++nn) {
        auto perms = all_permutations(nn);
        std::map<std::vector<int>, int> perm_index;
        for (std::size_t i = 0; i < perms.size(); ++i) perm_index[perms[i]] = static_cast<int>(i);
        // Ambient element: [k, m, b_1..b_k, perm].
        std::vector<Key> amb;
        std::vector<int> amb_deg, amb_wt;
        std::map<Key, int> amb_index;
        for (int k = 1; k <= nn; ++k) {
            auto ms = m.seq.in_arity(k);
            if (ms.empty()) continue;
            std::vector<std::vector<int>> comps;
            std::vector<int> cur;
            compositions(nn, k, cur, comps);
            for (const auto& comp : comps)
                for (int me : ms) {
                    std::function<void(int, Key&, int, int)> rec = [&](int pos, Key& bs, int d, int w) {
                        if (w > t.max_weight) return;
                        if (pos == k) {
                            for (std::size_t pi = 0; pi < perms.size(); ++pi) {
                                Key key{k, me};
                                key.insert(key.end(), bs.begin(), bs.end());
                                key.push_back(static_cast<int>(pi));
                                amb_index[key] = static_cast<int>(amb.size());
                                amb.push_back(key);
                                amb_deg.push_back(d);
                                amb_wt.push_back(w);
                            }
                            return;
                        }
                        for (int be : n.seq.in_arity(comp[pos])) {
                            bs.push_back(be);
                            rec(pos + 1, bs, d + n.seq.deg[be], w + n.seq.wt[be]);
                            bs.pop_back();
                        }
                    };
                    Key bs;
                    rec(0, bs, m.seq.deg[me], m.seq.wt[me]);
                }
        }
        if (amb.empty()) continue;
        auto compose_perm = [&](const std::vector<int>& pi, const std::vector<int>& beta) {
            std::vector<int> r(pi.size());
            for (std::size_t x = 0; x < pi.size(); ++x) r[x] = pi[beta[x]];
            return r;
        };
        std::vector<SVec> rel;
        for (std::size_t a = 0; a < amb.size(); ++a) {
            const Key& key = amb[a];
            int k = key[0];
            int me = key[1];
            std::vector<int> bs(key.begin() + 2, key.begin() + 2 + k);
            const auto& pi = perms[key.back()];
            std::vector<int> sizes, offs;
            int o = 0;
            for (int b : bs) {
                offs.push_back(o);
                sizes.push_back(n.seq.ar[b]);
                o += n.seq.ar[b];
            }
            auto emit = [&](std::vector<SVec::Entry> img) {
                img.emplace_back(static_cast<int>(a), Rational(-1));
                rel.emplace_back(std::move(img));
            };
            // Block swaps.
            for (int j = 0; j + 1 < k; ++j) {
                Matrix sm = m.action(k, j + 1);
                std::vector<int> nb = bs;
                std::swap(nb[j], nb[j + 1]);
                std::vector<int> beta(nn);
                std::iota(beta.begin(), beta.end(), 0);
                int pos = offs[j];
                for (int x = 0; x < sizes[j + 1]; ++x) beta[pos++] = offs[j + 1] + x;
                for (int x = 0; x < sizes[j]; ++x) beta[pos++] = offs[j] + x;
                auto np = compose_perm(pi, beta);
                int sign = koszul_sign({{n.seq.deg[bs[j]], n.seq.deg[bs[j + 1]]}});
                std::vector<SVec::Entry> img;
                for (const auto& [ml, v] : sm.col(mloc[me]).entries()) {
                    int me2 = m.seq.in_arity(k)[ml];
                    Key nk{k, me2};
                    nk.insert(nk.end(), nb.begin(), nb.end());
                    nk.push_back(perm_index[np]);
                    auto it = amb_index.find(nk);
                    if (it != amb_index.end()) img.emplace_back(it->second, v * sign);
                }
                emit(std::move(img));
            }
            // Transpositions inside a block.
            for (int j = 0; j < k; ++j)
                for (int tt = 1; tt < sizes[j]; ++tt) {
                    Matrix sn = n.action(sizes[j], tt);
                    std::vector<int> beta(nn);
                    std::iota(beta.begin(), beta.end(), 0);
                    std::swap(beta[offs[j] + tt - 1], beta[offs[j] + tt]);
                    auto np = compose_perm(pi, beta);
                    std::vector<SVec::Entry> img;
                    for (const auto& [bl, v] : sn.col(nloc[bs[j]]).entries()) {
                        Key nk = key;
                        nk[2 + j] = n.seq.in_arity(sizes[j])[bl];
                        nk.back() = perm_index[np];
                        auto it = amb_index.find(nk);
                        if (it != amb_index.end()) img.emplace_back(it->second, v);
                    }
                    emit(std::move(img));
                }
        }
        Subspace relations = image_basis(Matrix::from_columns(amb.size(), std::move(rel)));
        auto [proj, sec] = quotient(amb.size(), relations);
        std::vector<int> reps;
        for (std::size_t c = 0; c < sec.cols(); ++c) reps.push_back(sec.col(c).entries().front().first);
        for (int r : reps) {
            const Key& key = amb[r];
            std::string label = m.seq.name[key[1]] + "(";
            for (int j = 0; j < key[0]; ++j) label += (j ? "," : "") + n.seq.name[key[2 + j]];
            label += ")";
            for (int x : perms[key.back()]) label += std::to_string(x + 1);
            out.seq.add(nn, amb_deg[r], amb_wt[r], label);
        }
        std::vector<Matrix> acts;
        for (int i = 1; i < nn; ++i) {
            std::vector<std::tuple<int, int, Rational>> trip;
            for (std::size_t a = 0; a < amb.size(); ++a) {
                Key nk = amb[a];
                auto p = perms[nk.back()];
                std::vector<int> q(p.size());
                for (std::size_t x = 0; x < p.size(); ++x) {
                    int v = p[x];
                    q[x] = v == i - 1 ? i : (v == i ? i - 1 : v);
                }
                nk.back() = perm_index[q];
                trip.emplace_back(amb_index[nk], static_cast<int>(a), Rational(1));
            }
            Matrix left = Matrix::from_triplets(amb.size(), amb.size(), trip);
            acts.push_back(proj * left * sec);
        }
        if (nn >= 2) out.actions[nn] = std::move(acts);
    }
    return out;
}

}  // namespace operadia
