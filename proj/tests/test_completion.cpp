#include "operadia/completion.hpp"

#include <gtest/gtest.h>

using namespace operadia;

namespace {

ChainComplex complex_of(std::vector<int> degrees)
{
    GradedSpace x = GradedSpace::from_degrees(std::move(degrees));
    return ChainComplex(x, GradedMap::zero(x, x, -1));
}

// Iterate J <- J + a(Σ(Λ, J)^Q) until stable.
Subspace closure_oracle(const QAlgebra& a, const Subspace& x)
{
    Subspace j = x;
    for (;;) {
        Subspace gens = shuffle_subobject(a.lq, j);
        Subspace next = subspace_sum(j, Subspace{a.space.dim(), image_basis(a.action.mat * gens.basis).basis});
        if (next.dim() == j.dim()) return j;
        j = next;
    }
}

Subspace whole(std::size_t n) { return {n, Matrix::identity(n)}; }

}  // namespace

TEST(Ideals, GeneratedMatchesClosure)
{
    FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 3}), complex_of({0, 0}));
    const QAlgebra& a = f.algebra;
    std::size_t n = a.space.dim();
    EXPECT_EQ(ideal_generated(a, Subspace{n, Matrix::zero(n, 0)}).dim(), 0u);
    EXPECT_EQ(ideal_generated(a, whole(n)).dim(), n);
    for (std::size_t i = 0; i < n; ++i) {
        Subspace x{n, Matrix::from_columns(n, {SVec::unit(static_cast<int>(i))})};
        Subspace g = ideal_generated(a, x);
        EXPECT_TRUE(same_subspace(g, closure_oracle(a, x))) << i;
        EXPECT_TRUE(contains(g, x));
        EXPECT_TRUE(is_ideal(a, g));
    }
}

TEST(Ideals, SumAndIntersection)
{
    FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 3}), complex_of({0, 1}));
    const QAlgebra& a = f.algebra;
    std::size_t n = a.space.dim();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Subspace x = ideal_generated(a, {n, Matrix::from_columns(n, {SVec::unit(static_cast<int>(i))})});
        Subspace y = ideal_generated(a, {n, Matrix::from_columns(n, {SVec::unit(static_cast<int>(i + 1))})});
        EXPECT_TRUE(is_ideal(a, subspace_sum(x, y)));
        EXPECT_TRUE(is_ideal(a, intersection(x, y)));
    }
}

TEST(Topology, FreeAlgebraStages)
{
    for (std::vector<int> degs : {std::vector<int>{0}, std::vector<int>{0, -1}}) {
        ChainComplex x = complex_of(degs);
        FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 4}), x);
        RadicalCofiltration r = radical_cofiltration(f.algebra, 4);
        std::size_t dx = degs.size();
        EXPECT_EQ(r.ideals[0].dim(), f.algebra.space.dim());
        EXPECT_EQ(r.quotients.levels[0].space.dim(), 0u);
        for (std::size_t n = 1; n <= 4; ++n) {
            EXPECT_EQ(r.ideals[n].dim(), dx * (4 - n));  // X^{Q/F_nQ}
            EXPECT_EQ(r.quotients.levels[n].space.dim(), dx * (n + 1));  // X^{F_nQ}
            EXPECT_TRUE(contains(r.ideals[n - 1], r.ideals[n]));
            EXPECT_TRUE(is_ideal(f.algebra, r.ideals[n]));
            EXPECT_TRUE(is_d_stable(f.algebra, r.ideals[n]));
        }
        for (const Subquotient& g : r.graded) EXPECT_TRUE(g.square_zero());
        Completion c = complete(f.algebra, 4);
        EXPECT_TRUE(c.phi_injective);
        EXPECT_TRUE(c.phi_surjective);
        // The certified stages cannot see past the top weight.
        EXPECT_FALSE(complete(f.algebra).phi_injective);
    }
}

TEST(Topology, FormulaAtZeroDiffersFromFiat)
{
    FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 3}), complex_of({0}));
    Filtration fil = coradical_filtration(f.algebra.q, 3);
    EXPECT_EQ(topology_stage(f.algebra, fil, 0).dim(), 3u);
    EXPECT_EQ(canonical_topology(f.algebra, fil, 3)[0].dim(), 4u);
}

TEST(Topology, NilpotentLevel)
{
    FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 4}), complex_of({0}));
    AlgebraTower t = free_tower(f, 3);
    for (std::size_t n = 1; n < t.levels.size(); ++n) {
        const QAlgebra& lv = t.levels[n];
        Filtration fil = coradical_filtration(lv.q, static_cast<int>(n));
        Subspace in = topology_stage(lv, fil, static_cast<int>(n));
        EXPECT_EQ(in.dim(), 0u) << n;
        Completion c = complete(lv);
        EXPECT_TRUE(c.phi_injective);
    }
}

TEST(Topology, TransitionMapsAreContinuous)
{
    FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 3}), complex_of({0, 0}));
    RadicalCofiltration r = radical_cofiltration(f.algebra, 3);
    for (std::size_t n = 1; n < r.quotients.levels.size(); ++n) {
        QAlgebra head = f.algebra;
        EXPECT_TRUE(is_continuous(head, r.quotients.levels[n], r.quotients.from_head[n], 3));
    }
}

TEST(Devissage, IdentityCompletionAndCollapse)
{
    FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 2}), complex_of({0}));
    const QAlgebra& a = f.algebra;
    std::size_t n = a.space.dim();
    EXPECT_TRUE(devissage_check(a, a, Matrix::identity(n), 1, -2, 2));
    Completion c = complete(a);
    EXPECT_FALSE(c.phi_injective);
    EXPECT_TRUE(c.phi_surjective);
    EXPECT_TRUE(devissage_check(a, c.hat.algebra, c.phi, 0, -2, 2));

    RadicalCofiltration r = radical_cofiltration(a, 1);
    ASSERT_EQ(r.graded[1].space.dim(), 1u);
    // Kill I^1 and keep a complement.
    Subspace i1 = r.ideals[1];
    auto [proj, sec] = quotient(n, i1);
    Matrix collapse = sec * proj;
    EXPECT_FALSE(devissage_check(a, a, collapse, 1, -2, 2));
}

TEST(Counterexample, SmallCase)
{
    CounterexampleModel m(2);
    EXPECT_EQ(m.dim(), 4);
    Matrix eps = m.epsilon();
    // im ε reaches every (·, λ).
    EXPECT_TRUE(contains(image_basis(eps), SVec::unit(m.scalar())));
    CounterexampleReport r = counterexample_run(2, 3, 20);
    EXPECT_EQ(r.nilpotency_index, 3);
    EXPECT_TRUE(r.ok());
}

TEST(Counterexample, SizeEight)
{
    CounterexampleReport r = counterexample_run(8);
    EXPECT_TRUE(r.unit_ok);
    EXPECT_TRUE(r.associativity_ok);
    EXPECT_TRUE(r.presentation_ok);
    EXPECT_TRUE(r.char_poly_monomial);
    EXPECT_EQ(r.char_poly.size(), 38u);
    for (bool w : r.witnesses) EXPECT_TRUE(w);
    EXPECT_FALSE(r.column_witness_exact);
    EXPECT_TRUE(r.line_in_intersection);
    EXPECT_FALSE(r.intersection_in_ker_plus_line);
    EXPECT_TRUE(r.limit_in_ker_plus_line);
    EXPECT_EQ(r.infinity_ideal_dim, 1u);
    EXPECT_FALSE(r.phi_injective);
    EXPECT_TRUE(r.nilpotent_when_untruncated);
    EXPECT_TRUE(r.ok());
}

TEST(Counterexample, TopologyIsImageOfEpsilonPowers)
{
    CounterexampleModel m(4);
    QAlgebra a = m.algebra(3);
    Filtration fil = coradical_filtration(a.q, 3);
    Matrix eps = m.epsilon();
    Matrix power = eps;
    for (int n = 1; n < 3; ++n) {
        power = eps * power;  // ε^{n+1}
        EXPECT_TRUE(same_subspace(topology_stage(a, fil, n), image_basis(power))) << n;
    }
    EXPECT_EQ(topology_stage(a, fil, 3).dim(), 0u);
}

TEST(CharPoly, KnownMatrix)
{
    Matrix m = Matrix::from_dense({{Rational(2), Rational(1)}, {Rational(0), Rational(3)}});
    auto c = characteristic_polynomial(m);
    EXPECT_EQ(c, (std::vector<Rational>{6, -5, 1}));
}

TEST(Topology, StageZeroMatchesFreeAlgebraLevelZero)
{
    for (std::vector<int> degs : {std::vector<int>{0}, std::vector<int>{0, -1}}) {
        FreeQAlgebra f = free_algebra_coperad(qx_coperad({1, 5}), complex_of(degs));
        Filtration fil = coradical_filtration(f.algebra.q, 5);
        Subspace i0 = topology_stage(f.algebra, fil, 0);
        EXPECT_TRUE(same_subspace(i0, annihilator(f.xq, fil.at(0))));
        QuotientAlgebra f0 = quotient_algebra(f.algebra, i0);
        EXPECT_EQ(f0.algebra.space.dims(), f.generators.dims());
    }
}
