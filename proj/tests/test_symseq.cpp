#include "operadia/symseq.hpp"
#include "random_objects.hpp"

#include <gtest/gtest.h>

using namespace operadia;
using namespace testing_util;

namespace {

Seq one_per_arity(std::initializer_list<int> arities)
{
    Seq s;
    for (int a : arities) s.add(a, 0, a - 1, "m" + std::to_string(a));
    return s;
}

Seq random_seq(std::mt19937& rng, int size)
{
    Seq s;
    for (int i = 0; i < size; ++i)
        s.add(1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 5) - 2, 0, "e" + std::to_string(i));
    return s;
}

// Random arity-preserving map of degree p from the elements of a to those of b.
KeyMap random_elem_map(std::mt19937& rng, const Seq& a, const Seq& b, int p)
{
    std::vector<Comb> img(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j)
            if (b.ar[j] == a.ar[i] && b.deg[j] == a.deg[i] + p) add_term(img[i], {j}, small_rational(rng));
    return [img](const Key& k) { return img[k.at(0)]; };
}

KeyMap compose_elem(const KeyMap& g, const KeyMap& f)
{
    return [g, f](const Key& k) { return operadia::apply(g, f(k)); };
}

ElemMap elem_of(const Matrix& m)
{
    return [m](int i) { return m.col(i); };
}

SymSeq trivial_sym(std::initializer_list<int> arities)
{
    SymSeq m;
    m.seq = one_per_arity(arities);
    m.planar = false;
    for (int a : arities)
        if (a >= 2) m.actions[a] = std::vector<Matrix>(a - 1, Matrix::identity(1));
    return m;
}

}  // namespace

TEST(Composite, UnitLaws)
{
    Seq m = one_per_arity({1, 2, 3});
    Composite alone({m}, 3, 4);
    EXPECT_EQ(Composite({unit_seq(), m}, 3, 4).size(), alone.size());
    EXPECT_EQ(Composite({m, unit_seq()}, 3, 4).size(), alone.size());
}

TEST(Composite, PlanarArityTwo)
{
    Composite c({one_per_arity({1, 2}), one_per_arity({1, 2})}, 2, 10);
    int arity_two = 0;
    for (int i = 0; i < c.size(); ++i) arity_two += c.arity(i) == 2;
    EXPECT_EQ(arity_two, 2);
}

TEST(Composite, SymmetricArityTwo)
{
    SymSeq m = trivial_sym({1, 2});
    SymSeq mm = compose_product(m, m, {2, 10});
    EXPECT_EQ(mm.seq.in_arity(2).size(), 2u);
    EXPECT_TRUE(validate_actions(mm).ok);
}

TEST(Composite, MixedInputsRejected)
{
    SymSeq planar;
    planar.seq = one_per_arity({1});
    EXPECT_THROW(compose_product(planar, trivial_sym({1}), {2, 2}), std::invalid_argument);
}

TEST(Cotensor, SmallDims)
{
    GradedSpace x = GradedSpace::from_degrees({0, 0});
    SymSeq m = trivial_sym({2});
    EXPECT_EQ(cotensor_symmetric(x, m, 2).dim(), 3u);
    EXPECT_EQ(Cotensor(x, {m.seq}, 2, 10).size(), 4);
    EXPECT_EQ(cotensor_symmetric(GradedSpace::from_degrees({0}), unit_symseq({1, 1}), 1).dim(), 1u);
}

TEST(Cotensor, OddVariablesAntisymmetrize)
{
    GradedSpace x = GradedSpace::from_degrees({1, 1});
    EXPECT_EQ(cotensor_symmetric(x, trivial_sym({2}), 2).dim(), 1u);
}

TEST(Cotensor, UnitIsIdentity)
{
    std::mt19937 rng(21);
    GradedSpace x = random_space(rng, -2, 2, 3);
    Cotensor c(x, {unit_seq()}, 1, 10);
    ASSERT_EQ(static_cast<std::size_t>(c.size()), x.dim());
    auto dx = x.dims();
    EXPECT_EQ(c.space().dims(), dx);
    GradedMap from = cotensor_from_unit(c, 0, [](const Key&) { return Rational(1); });
    GradedMap to = cotensor_to_unit(c, 0, single({0}));
    EXPECT_EQ(compose(to, from), GradedMap::identity(x));
    EXPECT_EQ(compose(from, to), GradedMap::identity(c.space()));
}

TEST(Cotensor, ContravariantSignRule)
{
    std::mt19937 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        GradedSpace x = random_space(rng, -1, 1, 2);
        Seq m = random_seq(rng, 4), n = random_seq(rng, 4), l = random_seq(rng, 4);
        int p = static_cast<int>(rng() % 3) - 1, q = static_cast<int>(rng() % 3) - 1;
        KeyMap f = random_elem_map(rng, m, n, p), g = random_elem_map(rng, n, l, q);
        Cotensor xm(x, {m}, 2, 10), xn(x, {n}, 2, 10), xl(x, {l}, 2, 10);
        GradedMap lhs = compose(cotensor_contra(xn, xm, p, f), cotensor_contra(xl, xn, q, g));
        GradedMap rhs = cotensor_contra(xl, xm, p + q, compose_elem(g, f));
        EXPECT_EQ(lhs, scale(rhs, koszul_sign({{p, q}})));
    }
}

TEST(Cotensor, ShuffleCommutesWithContra)
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        GradedSpace x = random_space(rng, -1, 1, 2);
        Seq m = random_seq(rng, 3), n = random_seq(rng, 3);
        int p = static_cast<int>(rng() % 3) - 1, q = static_cast<int>(rng() % 3) - 1;
        KeyMap h = random_elem_map(rng, m, n, p);
        GradedMap g = random_map(rng, x, x, q);
        Cotensor xm(x, {m}, 2, 10), xn(x, {n}, 2, 10);
        GradedMap sn = shuffle_power(xn, xn, identity_elem(), elem_of(g.mat), q);
        GradedMap sm = shuffle_power(xm, xm, identity_elem(), elem_of(g.mat), q);
        GradedMap lhs = compose(cotensor_contra(xn, xm, p, h), sn);
        GradedMap rhs = compose(sm, cotensor_contra(xn, xm, p, h));
        EXPECT_EQ(lhs, scale(rhs, koszul_sign({{p, q}})));
    }
}

TEST(Cotensor, ShuffleIsDerivationOnWords)
{
    // Σ(Id, [a,b]) = [Σ(Id,a), Σ(Id,b)] on X^M.
    std::mt19937 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        GradedSpace x = random_space(rng, -1, 1, 2);
        Seq m = random_seq(rng, 3);
        int p = static_cast<int>(rng() % 3) - 1, q = static_cast<int>(rng() % 3) - 1;
        GradedMap a = random_map(rng, x, x, p), b = random_map(rng, x, x, q);
        Cotensor xm(x, {m}, 2, 10);
        auto sh = [&](const GradedMap& f) { return shuffle_power(xm, xm, identity_elem(), elem_of(f.mat), f.degree); };
        EXPECT_EQ(sh(bracket(a, b)), bracket(sh(a), sh(b)));
    }
}

TEST(LaxMap, InjectiveAndBijectiveWhenUntruncated)
{
    std::mt19937 rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        GradedSpace x = random_space(rng, -1, 1, 2);
        Seq m = random_seq(rng, 3), n = random_seq(rng, 3);
        Cotensor inner(x, {m}, 2, 10);
        Cotensor outer(inner.space(), {n}, 2, 10);
        Cotensor target(x, {n, m}, 4, 10);
        GradedMap l = lax_map(outer, inner, target);
        EXPECT_EQ(rank(l.mat), static_cast<std::size_t>(outer.size()));
        EXPECT_EQ(outer.size(), target.size());
        EXPECT_EQ(l.src.dims(), l.tgt.dims());
    }
}

TEST(LaxMap, NaturalInOuterSequence)
{
    std::mt19937 rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        GradedSpace x = random_space(rng, -1, 1, 2);
        Seq m = random_seq(rng, 3), n = random_seq(rng, 3), n2 = random_seq(rng, 3);
        int p = static_cast<int>(rng() % 3) - 1;
        KeyMap h = random_elem_map(rng, n, n2, p);
        Cotensor inner(x, {m}, 2, 10);
        Cotensor o1(inner.space(), {n}, 2, 10), o2(inner.space(), {n2}, 2, 10);
        Cotensor t1(x, {n, m}, 4, 10), t2(x, {n2, m}, 4, 10);
        KeyMap hm = [&](const Key& k) {
            Key top(k.begin(), k.begin() + 1), rest(k.begin() + 1, k.end());
            Comb out;
            for (const auto& [b, c] : h(top)) {
                Key nk = b;
                nk.insert(nk.end(), rest.begin(), rest.end());
                add_term(out, nk, c);
            }
            return out;
        };
        GradedMap lhs = compose(lax_map(o1, inner, t1), cotensor_contra(o2, o1, p, h));
        GradedMap rhs = compose(cotensor_contra(t2, t1, p, hm), lax_map(o2, inner, t2));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(ShuffleSubobject, KernelOfQuotientPower)
{
    std::mt19937 rng(27);
    for (int trial = 0; trial < 10; ++trial) {
        GradedSpace y = GradedSpace::from_degrees({0, 0, 0});
        Subspace xsub = image_basis(random_matrix(rng, 3, 1 + rng() % 2, 0.8));
        if (xsub.dim() == 0) continue;
        auto [proj, sec] = quotient(3, xsub);
        GradedSpace q = GradedSpace::from_degrees(std::vector<int>(proj.rows(), 0));
        Seq m = one_per_arity({1, 2});
        Cotensor ym(y, {m}, 2, 10), qm(q, {m}, 2, 10);
        GradedMap p = shuffle_power(ym, qm, elem_of(proj), elem_of(proj), 0);
        // shuffle_power with f = g sums arity-many copies; rescale per arity.
        std::vector<std::tuple<int, int, Rational>> t;
        for (int i = 0; i < ym.size(); ++i) t.emplace_back(i, i, Rational(1) / ym.arity(i));
        Matrix unscale = Matrix::from_triplets(ym.size(), ym.size(), t);
        Subspace ker = kernel_basis(p.mat * unscale);
        EXPECT_TRUE(same_subspace(ker, shuffle_subobject(ym, xsub)));
    }
}

TEST(Actions, AveragingIsIdempotent)
{
    GradedSpace x = GradedSpace::from_degrees({0, 1});
    std::vector<Matrix> gens{tensor_swap(x, 3, 1), tensor_swap(x, 3, 2)};
    Matrix e = averaging_idempotent(gens);
    EXPECT_EQ(e * e, e);
    for (const Matrix& g : gens) {
        EXPECT_EQ(g * e, e);
        EXPECT_EQ(e * g, e);
    }
}

TEST(Actions, CoxeterValidation)
{
    GradedSpace x = GradedSpace::from_degrees({0, 1});
    SymSeq m;
    m.planar = false;
    for (int i = 0; i < 8; ++i) m.seq.add(3, 0, 0, "t" + std::to_string(i));
    m.actions[3] = {tensor_swap(x, 3, 1), tensor_swap(x, 3, 2)};
    EXPECT_TRUE(validate_actions(m).ok);

    SymSeq bad = m;
    bad.actions[3][0] = bad.actions[3][0].scaled(2);
    auto r = validate_actions(bad);
    EXPECT_FALSE(r.ok);
    EXPECT_NE(r.failure.find("sigma_1^2"), std::string::npos);

    SymSeq braid;
    braid.planar = false;
    for (int i = 0; i < 2; ++i) braid.seq.add(3, 0, 0, "b" + std::to_string(i));
    Matrix s1 = Matrix::from_dense({{0, 1}, {1, 0}});
    Matrix s2 = Matrix::from_dense({{1, 0}, {0, -1}});
    braid.actions[3] = {s1, s2};
    auto rb = validate_actions(braid);
    EXPECT_FALSE(rb.ok);
    EXPECT_NE(rb.failure.find("braid"), std::string::npos);
}
