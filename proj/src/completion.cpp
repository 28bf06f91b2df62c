#include "operadia/completion.hpp"

#include <random>
#include <stdexcept>

namespace operadia {

Subspace ideal_generated(const QAlgebra& a, const Subspace& x)
{
    Subspace gens = action_closure_generators(a, x);
    Subspace out = image_basis(a.action.mat * gens.basis);
    out.ambient_dim = a.space.dim();
    return out;
}

Subspace topology_stage(const QAlgebra& a, const Filtration& f, int n)
{
    Subspace ann = annihilator(a.lq, f.at(static_cast<std::size_t>(n)));
    Subspace out = image_basis(a.action.mat * ann.basis);
    out.ambient_dim = a.space.dim();
    return out;
}

std::vector<Subspace> canonical_topology(const QAlgebra& a, const Filtration& f, int max_n)
{
    std::vector<Subspace> out;
    out.push_back({a.space.dim(), Matrix::identity(a.space.dim())});
    for (int n = 1; n <= max_n; ++n) out.push_back(topology_stage(a, f, n));
    return out;
}

Subquotient subquotient(const GradedSpace& x, const Matrix& d, const Subspace& i, const Subspace& j)
{
    Subquotient s;
    s.top = i;
    auto jc = solve(i.basis, j.basis);
    if (!jc) throw std::invalid_argument("subquotient: J is not inside I");
    auto [proj, sec] = quotient(i.dim(), Subspace{i.dim(), *jc});
    for (std::size_t c = 0; c < sec.cols(); ++c) {
        SVec v = i.basis * sec.col(c);
        int deg = 0, wt = 0;
        bool first = true, mixed_wt = false;
        for (const auto& [k, val] : v.entries()) {
            if (first) {
                deg = x.deg[k];
                wt = x.weight(k);
                first = false;
            } else if (x.deg[k] != deg) {
                throw std::invalid_argument("subquotient: basis is not homogeneous");
            } else if (x.weight(k) != wt) {
                mixed_wt = true;
            }
        }
        s.space.deg.push_back(deg);
        s.space.wt.push_back(mixed_wt ? 0 : wt);
        s.space.labels.push_back("g" + std::to_string(c));
    }
    s.d = proj * restrict_map(d, i, i) * sec;
    s.proj = std::move(proj);
    s.section = std::move(sec);
    return s;
}

RadicalCofiltration radical_cofiltration(const QAlgebra& a, int max_n)
{
    RadicalCofiltration r;
    Filtration f = coradical_filtration(a.q, max_n + 1);
    r.ideals = canonical_topology(a, f, max_n + 1);
    std::vector<Subspace> head(r.ideals.begin(), r.ideals.begin() + max_n + 1);
    r.quotients = tower_from_ideals(a, head);
    for (int n = 0; n <= max_n; ++n) r.graded.push_back(subquotient(a.space, a.d.mat, r.ideals[n], r.ideals[n + 1]));
    return r;
}

Completion complete(const QAlgebra& a, int max_stage)
{
    int w = max_stage >= 0 ? max_stage : std::max(1, a.q.trunc.max_weight - 1);
    Filtration f = coradical_filtration(a.q, w);
    Completion c;
    c.infinity_ideal = {a.space.dim(), Matrix::identity(a.space.dim())};
    for (int n = 1; n <= w; ++n) c.infinity_ideal = intersection(c.infinity_ideal, topology_stage(a, f, n));
    c.hat = quotient_algebra(a, c.infinity_ideal);
    c.phi = c.hat.proj;
    std::size_t r = rank(c.phi);
    c.phi_surjective = r == c.hat.algebra.space.dim();
    c.phi_injective = r == a.space.dim();
    return c;
}

bool is_continuous(const QAlgebra& src, const QAlgebra& tgt, const Matrix& f, int max_n)
{
    auto is = canonical_topology(src, coradical_filtration(src.q, max_n), max_n);
    auto it = canonical_topology(tgt, coradical_filtration(tgt.q, max_n), max_n);
    for (int n = 0; n <= max_n; ++n)
        if (!contains(it[n], span(f * is[n].basis))) return false;
    return true;
}

bool devissage_check(const QAlgebra& src, const QAlgebra& tgt, const Matrix& f, int max_n, int lo, int hi)
{
    auto is = canonical_topology(src, coradical_filtration(src.q, max_n + 1), max_n + 1);
    auto it = canonical_topology(tgt, coradical_filtration(tgt.q, max_n + 1), max_n + 1);
    for (int n = 0; n <= max_n; ++n) {
        Subquotient gs = subquotient(src.space, src.d.mat, is[n], is[n + 1]);
        Subquotient gt = subquotient(tgt.space, tgt.d.mat, it[n], it[n + 1]);
        if (!gs.square_zero() || !gt.square_zero()) return false;
        auto coords = solve(it[n].basis, f * is[n].basis * gs.section);
        if (!coords) return false;
        GradedMap g(gs.space, gt.space, 0, gt.proj * *coords);
        ChainComplex cs(gs.space, GradedMap(gs.space, gs.space, -1, gs.d));
        ChainComplex ct(gt.space, GradedMap(gt.space, gt.space, -1, gt.d));
        if (!is_chain_map(g, cs, ct) || !is_quasi_iso(g, cs, ct, lo, hi)) return false;
    }
    return true;
}

CounterexampleModel::CounterexampleModel(int n) : n_(n), dim_(n * (n + 1) / 2 + 1)
{
    if (n < 2) throw std::invalid_argument("counterexample size must be at least 2");
}

SVec CounterexampleModel::shift(const SVec& v, int k) const
{
    std::vector<SVec::Entry> out;
    for (int i = 0; i < n_; ++i)
        for (int j = k; j <= i; ++j) {
            Rational x = v.get(entry(i, j - k));
            if (x != 0) out.emplace_back(entry(i, j), x);
        }
    return SVec(std::move(out));
}

Rational CounterexampleModel::total(const SVec& v) const
{
    Rational s = 0;
    for (const auto& [i, x] : v.entries())
        if (i != scalar()) s += x;
    return s;
}

SVec CounterexampleModel::sum(const std::vector<SVec>& seq) const
{
    SVec t;
    SVec tail;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        t.axpy(1, shift(seq[k], static_cast<int>(k)));
        if (k > 0) tail.axpy(1, shift(seq[k], static_cast<int>(k) - 1));
    }
    Rational lambda = total(tail);
    if (!seq.empty()) lambda += seq[0].get(scalar());
    t.axpy(1, SVec::unit(scalar(), lambda));
    return t;
}

Matrix CounterexampleModel::epsilon() const
{
    return matrix_of(dim_, dim_, [&](int b) { return sum({SVec(), SVec::unit(b)}); });
}

QAlgebra CounterexampleModel::algebra(int w) const
{
    QAlgebra a;
    a.q = qx_coperad({1, w});
    a.space = GradedSpace::from_degrees(std::vector<int>(dim_, 0));
    a.lq = a.cotensor({a.q.seq});
    a.action = GradedMap(a.lq.space(), a.space, 0, matrix_of(a.lq.size(), dim_, [&](int c) {
                             const Key& k = a.lq.key(c);
                             std::vector<SVec> seq(static_cast<std::size_t>(a.q.seq.wt[k[0]]) + 1);
                             seq.back() = SVec::unit(k[1]);
                             return sum(seq);
                         }));
    a.d = GradedMap::zero(a.space, a.space, -1);
    return a;
}

std::vector<Rational> characteristic_polynomial(const Matrix& m)
{
    std::size_t n = m.rows();
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    Matrix mk = Matrix::zero(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk + Matrix::identity(n).scaled(c[n - k + 1]);
        Matrix am = m * mk;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am.at(i, i);
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

bool CounterexampleReport::ok() const
{
    bool wit = !witnesses.empty();
    for (bool b : witnesses) wit = wit && b;
    return unit_ok && associativity_ok && presentation_ok && char_poly_monomial && wit && line_in_intersection &&
           limit_in_ker_plus_line && !phi_injective && nilpotent_when_untruncated;
}

CounterexampleReport counterexample_run(int n, unsigned seed, int instances)
{
    CounterexampleModel model(n);
    CounterexampleReport r;
    r.size = n;
    r.dim = model.dim();
    r.instances = instances;
    std::mt19937 rng(seed);
    std::bernoulli_distribution keep(0.3);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> width(1, 4);
    auto random_elem = [&] {
        std::vector<SVec::Entry> e;
        for (int i = 0; i < model.dim(); ++i)
            if (keep(rng))
                if (int c = coeff(rng)) e.emplace_back(i, Rational(c));
        return SVec(std::move(e));
    };

    r.unit_ok = true;
    r.associativity_ok = true;
    for (int t = 0; t < instances; ++t) {
        SVec a = random_elem();
        r.unit_ok = r.unit_ok && model.sum({a}) == a;
        int rows = width(rng), cols = width(rng);
        std::vector<std::vector<SVec>> m(rows, std::vector<SVec>(cols));
        for (auto& row : m)
            for (auto& x : row) x = random_elem();
        std::vector<SVec> outer;
        for (const auto& row : m) outer.push_back(model.sum(row));
        std::vector<SVec> diag(static_cast<std::size_t>(rows + cols - 1));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) diag[i + j].axpy(1, m[i][j]);
        r.associativity_ok = r.associativity_ok && model.sum(outer) == model.sum(diag);
    }
    r.presentation_ok = validate_qalgebra(model.algebra(n - 1)).ok();

    Matrix eps = model.epsilon();
    r.char_poly = characteristic_polynomial(eps);
    r.char_poly_monomial = true;
    for (int k = 0; k < model.dim(); ++k) r.char_poly_monomial = r.char_poly_monomial && r.char_poly[k] == 0;
    Matrix power = Matrix::identity(model.dim());
    std::vector<Matrix> powers{power};
    while (!power.is_zero()) {
        power = eps * power;
        powers.push_back(power);
        ++r.nilpotency_index;
    }

    SVec line = SVec::unit(model.scalar());
    r.column_witness_exact = true;
    for (int k = 1; k < n; ++k) {
        const Matrix& ek = k < static_cast<int>(powers.size()) ? powers[k] : powers.back();
        r.witnesses.push_back(ek * SVec::unit(model.entry(k, 1)) == line);
        r.column_witness_exact = r.column_witness_exact && ek * SVec::unit(model.entry(k, 0)) == line;
    }
    Subspace inter{static_cast<std::size_t>(model.dim()), Matrix::identity(model.dim())};
    for (int k = 1; k < n; ++k) inter = intersection(inter, image_basis(k < static_cast<int>(powers.size()) ? powers[k] : powers.back()));
    r.intersection_dim = inter.dim();
    r.line_in_intersection = contains(inter, line);
    Subspace ker_line = subspace_sum(kernel_basis(eps), span(Matrix::from_columns(model.dim(), {line})));
    r.intersection_in_ker_plus_line = contains(ker_line, inter);
    Subspace limit = intersection(inter, image_basis(n < static_cast<int>(powers.size()) ? powers[n] : powers.back()));
    r.limit_in_ker_plus_line = contains(ker_line, limit);

    Completion c = complete(model.algebra(n));
    r.infinity_ideal_dim = c.infinity_ideal.dim();
    r.phi_injective = c.phi_injective;
    Completion full = complete(model.algebra(n + 1));
    r.nilpotent_when_untruncated = full.phi_injective && full.phi_surjective;
    return r;
}

}  // namespace operadia
