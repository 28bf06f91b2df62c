#include "operadia/cobar.hpp"

#include <gtest/gtest.h>

using namespace operadia;

namespace {

struct Fixture {
    Coperad q;
    Operad p;
};

Fixture qx_fixture(int w)
{
    Truncation t{1, w};
    Fixture s{qx_coperad(t), {}};
    s.p = bar_dual(s.q, t);
    return s;
}

// Arity-one count of V^{P⋄Q}: trees over s⁻¹X^k of weight a are compositions of a.
std::size_t arity_one_dim(int w, std::size_t dim_v)
{
    std::size_t n = 0;
    for (int a = 0; a <= w; ++a) {
        std::size_t trees = a == 0 ? 1 : (std::size_t{1} << (a - 1));
        n += trees * static_cast<std::size_t>(w - a + 1);
    }
    return n * dim_v;
}

ChainComplex two_cell()
{
    GradedSpace x = GradedSpace::from_degrees({0, 1});
    return ChainComplex(x, GradedMap(x, x, -1, Matrix::from_triplets(2, 2, {{0, 1, Rational(1)}})));
}

}  // namespace

TEST(Cobar, CurvatureVanishesAtEveryLevel)
{
    Fixture s = qx_fixture(4);
    TwistingMorphism a = canonical_alpha(s.q, s.p);
    for (const auto& v : {onedim_cogebra(s.p), twodim_cogebra(s.p)}) {
        CobarAlgebra c = cobar(v, s.q, a, 4);
        ASSERT_EQ(c.tower.levels.size(), 5u);
        for (const SquareZeroReport& rep : cobar_curvature(c)) {
            EXPECT_TRUE(rep.generator_ok());
            EXPECT_TRUE(rep.square_ok());
        }
        EXPECT_TRUE(validate_tower(c.tower, coradical_filtration(s.q, 4)).ok());
    }
}

TEST(Cobar, RejectsNonTwisting)
{
    Fixture s = qx_fixture(3);
    TwistingMorphism a = canonical_alpha(s.q, s.p);
    a.alpha = scale(a.alpha, 2);
    EXPECT_THROW(cobar(onedim_cogebra(s.p), s.q, a, 2), std::invalid_argument);
}

TEST(CobarDual, SquareZeroOnEveryLevel)
{
    Fixture s = qx_fixture(3);
    TwistingMorphism a = canonical_alpha(s.q, s.p);
    CobarAlgebra c = cobar(twodim_cogebra(s.p), s.q, a, 3);
    for (const QAlgebra& lv : c.tower.levels) {
        CobarDual d = cobar_dual(lv, s.p, a);
        SquareZeroReport rep = cobar_dual_square_zero(d);
        EXPECT_TRUE(rep.generator_ok());
        EXPECT_TRUE(rep.square_ok());
        EXPECT_EQ(d.cogebra.lax_rank_defect, 0u);
        EXPECT_TRUE(validate_cogebra(d.cogebra.cogebra).ok());
    }
}

TEST(Resolution, DimensionsMatchCount)
{
    for (int w : {2, 3, 4}) {
        Fixture s = qx_fixture(w);
        for (const auto& v : {onedim_cogebra(s.p), twodim_cogebra(s.p)}) {
            CobarResolution r = unit_resolution(v, s.q);
            EXPECT_EQ(static_cast<std::size_t>(r.vpq.size()), arity_one_dim(w, v.space.dim()));
            EXPECT_EQ(r.carrier.dim(), static_cast<std::size_t>(r.vpq.size()));
            EXPECT_EQ(r.kernel.dim(), r.vpq.size() - v.space.dim());
        }
    }
}

TEST(Resolution, SixTermDifferentialMatchesCobarDual)
{
    Fixture s = qx_fixture(4);
    for (const auto& v : {onedim_cogebra(s.p), twodim_cogebra(s.p)}) {
        CobarResolution r = unit_resolution(v, s.q);
        EXPECT_TRUE(transported_differential_agrees(r));
        EXPECT_TRUE((r.d.mat * r.d.mat).is_zero());
        for (bool b : kernel_stability(r)) EXPECT_TRUE(b);
    }
}

TEST(Resolution, SignErrorInFifthTermIsDetected)
{
    Fixture s = qx_fixture(3);
    CobarResolution r = unit_resolution(twodim_cogebra(s.p), s.q);
    ASSERT_FALSE(r.parts[4].is_zero());
    r.d = add(r.d, scale(r.parts[4], -2));
    EXPECT_FALSE(transported_differential_agrees(r));
}

TEST(Resolution, HomotopyIdentities)
{
    for (int w : {3, 4}) {
        Fixture s = qx_fixture(w);
        for (const auto& v : {onedim_cogebra(s.p), twodim_cogebra(s.p)}) {
            CobarResolution r = unit_resolution(v, s.q);
            HomotopyReport rep = verify_homotopy_identities(r, trust_window(s.p.trunc, -10, 10));
            EXPECT_TRUE(rep.first_residual.is_zero());
            EXPECT_TRUE(rep.second_residual.is_zero());
            EXPECT_TRUE(rep.h_square_zero);
            EXPECT_TRUE(rep.h_zero_on_unit_tree);
            EXPECT_TRUE(rep.ok());
        }
    }
}

TEST(Resolution, OppositeSignOnRestrictedDerivationBreaksHomotopy)
{
    Fixture s = qx_fixture(3);
    CobarResolution r = unit_resolution(onedim_cogebra(s.p), s.q);
    r.d2u = scale(r.d2u, -1);
    EXPECT_FALSE(verify_homotopy_identities(r, {-10, 10}).first_residual.is_zero());
}

TEST(Resolution, KernelIsAcyclicAndUnitIsQuasiIso)
{
    Fixture s = qx_fixture(4);
    std::vector<std::map<int, std::size_t>> expected{{{0, 1}}, {}};
    std::vector<CogebraOverOperad> vs{onedim_cogebra(s.p), twodim_cogebra(s.p)};
    for (std::size_t i = 0; i < vs.size(); ++i) {
        CobarResolution r = unit_resolution(vs[i], s.q);
        AcyclicityReport rep = verify_acyclicity(r, trust_window(s.p.trunc, -2, 2));
        EXPECT_TRUE(rep.ok());
        EXPECT_FALSE(rep.kernel_homology.empty());
        std::map<int, std::size_t> nonzero;
        for (const auto& [d, n] : homology(restricted_complex(r.vpq.space(), r.d.mat, r.carrier)))
            if (n) nonzero[d] = n;
        EXPECT_EQ(nonzero, expected[i]);
    }
}

TEST(Resolution, FreeCogebraInput)
{
    Fixture s = qx_fixture(3);
    FreeCogebra f = free_cogebra_operad(s.p, two_cell());
    ASSERT_TRUE(validate_cogebra(f.cogebra).ok());
    CobarResolution r = unit_resolution(f.cogebra, s.q);
    EXPECT_TRUE(transported_differential_agrees(r));
    EXPECT_TRUE(verify_homotopy_identities(r, {-10, 10}).ok());
    EXPECT_TRUE(verify_acyclicity(r, {-10, 10}).ok());
}

TEST(Resolution, RequiresDualOperad)
{
    Fixture s = qx_fixture(2);
    CogebraOverOperad v = onedim_cogebra(s.p);
    v.p.trees.reset();
    EXPECT_THROW(unit_resolution(v, s.q), std::invalid_argument);
}

TEST(TrustWindow, ShrinksByTwo)
{
    Truncation t{1, 3, -3, 5};
    TrustWindow w = trust_window(t, -10, 10);
    EXPECT_EQ(w.lo, -1);
    EXPECT_EQ(w.hi, 3);
    EXPECT_FALSE(w.contains(4));
    TrustWindow n = trust_window(t, 0, 1);
    EXPECT_EQ(n.lo, 0);
    EXPECT_EQ(n.hi, 1);
}

TEST(Cobar, ZeroCogebraGivesZero)
{
    Fixture s = qx_fixture(3);
    CogebraOverOperad v;
    v.p = s.p;
    v.d = GradedMap::zero(v.space, v.space, -1);
    v.vp = v.cotensor({s.p.seq});
    v.coaction = GradedMap::zero(v.space, v.vp.space(), 0);
    CobarAlgebra c = cobar(v, s.q, canonical_alpha(s.q, s.p), 2);
    EXPECT_EQ(c.algebra.algebra.space.dim(), 0u);
    CobarResolution r = unit_resolution(v, s.q);
    EXPECT_EQ(r.kernel.dim(), 0u);
    EXPECT_TRUE(verify_acyclicity(r, {-2, 2}).ok());
}

TEST(Cobar, TrivialCoactionGivesCoperadDifferentialOnly)
{
    Fixture s = qx_fixture(3);
    CobarAlgebra c = cobar(onedim_cogebra(s.p), s.q, canonical_alpha(s.q, s.p), -1);
    GradedMap dc = scale(cotensor_contra(c.algebra.xq, c.algebra.xq, -1, single_level([&s](int e) {
                             return s.q.d.mat.col(static_cast<std::size_t>(e));
                         })),
                         -1);
    EXPECT_EQ(c.algebra.algebra.d.mat, dc.mat);
}

TEST(Resolution, UnitCoperadHasZeroKernel)
{
    Truncation t{1, 3};
    Coperad q = unit_coperad(t);
    Operad p = bar_dual(q, t);
    CobarResolution r = unit_resolution(onedim_cogebra(p), q);
    EXPECT_EQ(r.kernel.dim(), 0u);
    EXPECT_TRUE(verify_acyclicity(r, {-2, 2}).ok());
}

TEST(Functoriality, MorphismsGoToMorphisms)
{
    Fixture s = qx_fixture(3);
    TwistingMorphism a = canonical_alpha(s.q, s.p);
    CogebraOverOperad v = twodim_cogebra(s.p);
    CogebraOverOperad w = onedim_cogebra(s.p);
    GradedMap phi(v.space, w.space, 0, Matrix::from_triplets(1, 2, {{0, 0, Rational(1)}}));
    ASSERT_EQ(compose(w.d, phi), compose(phi, v.d));
    ASSERT_EQ(compose(w.coaction, phi), compose(tensor_power(v.vp, w.vp, [&phi](int i) {
                                                    return phi.mat.col(static_cast<std::size_t>(i));
                                                }),
                                                v.coaction));

    CobarAlgebra cv = cobar(v, s.q, a, -1);
    CobarAlgebra cw = cobar(w, s.q, a, -1);
    GradedMap f = cobar_map(cv, cw, phi);
    const QAlgebra& lv = cv.algebra.algebra;
    const QAlgebra& lw = cw.algebra.algebra;
    EXPECT_EQ(compose(lw.d, f), compose(f, lv.d));
    GradedMap fq = tensor_power(lv.lq, lw.lq, [&f](int i) { return f.mat.col(static_cast<std::size_t>(i)); });
    EXPECT_EQ(compose(lw.action, fq), compose(f, lv.action));

    CobarDual dv = cobar_dual(lv, s.p, a);
    CobarDual dw = cobar_dual(lw, s.p, a);
    GradedMap g = cobar_dual_map(dv, dw, f);
    const CogebraOverOperad& gv = dv.cogebra.cogebra;
    const CogebraOverOperad& gw = dw.cogebra.cogebra;
    EXPECT_EQ(compose(gw.d, g), compose(g, gv.d));
    GradedMap gp = tensor_power(gv.vp, gw.vp, [&g](int i) { return g.mat.col(static_cast<std::size_t>(i)); });
    EXPECT_EQ(compose(gw.coaction, g), compose(gp, gv.coaction));
}
