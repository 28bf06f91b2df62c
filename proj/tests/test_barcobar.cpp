#include "operadia/barcobar.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace operadia;

namespace {

using Counts = std::map<std::pair<int, int>, long>;  // (arity, weight) -> count

// Number of planar trees with labels of the given (arity, weight) profile, by the recursion
// T = leaf + Σ_l y^{w_l} T^{a_l}, truncated at arity A and weight W.
Counts tree_counts(const std::vector<std::pair<int, int>>& labels, int A, int W)
{
    Counts memo;
    std::function<long(int, int)> count = [&](int a, int w) -> long {
        if (a < 1 || w < 0) return 0;
        auto key = std::make_pair(a, w);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        long total = (a == 1 && w == 0) ? 1 : 0;
        for (auto [la, lw] : labels) {
            if (lw > w) continue;
            // Distribute arity a and weight w - lw over la ordered children.
            std::function<long(int, int, int)> dist = [&](int k, int ra, int rw) -> long {
                if (k == 0) return ra == 0 && rw == 0 ? 1 : 0;
                long s = 0;
                for (int ca = 1; ca <= ra - (k - 1); ++ca)
                    for (int cw = 0; cw <= rw; ++cw) {
                        long c = count(ca, cw);
                        if (c) s += c * dist(k - 1, ra - ca, rw - cw);
                    }
                return s;
            };
            total += dist(la, a, w - lw);
        }
        memo[key] = total;
        return total;
    };
    Counts out;
    for (int a = 1; a <= A; ++a)
        for (int w = 0; w <= W; ++w)
            if (long c = count(a, w)) out[{a, w}] = c;
    return out;
}

std::map<int, std::size_t> arity_one_degree_dims(const Coperad& q)
{
    std::map<int, std::size_t> dims;
    for (int e : q.seq.in_arity(1)) ++dims[q.seq.deg[e]];
    return dims;
}

}  // namespace

TEST(Bar, UnitOperadWords)
{
    Coperad b = bar(unit_operad({1, 3}), {1, 3});
    auto dims = arity_one_degree_dims(b);
    EXPECT_EQ(dims[0], 1u);
    EXPECT_EQ(dims[1], 1u);
    EXPECT_EQ(dims[2], 2u);
    EXPECT_EQ(dims[3], 3u);
    Report r = validate_curved_coperad(b);
    EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(Bar, AssociativeValidates)
{
    Coperad b = bar(as_planar({4, 4}), {4, 4});
    Report r = validate_curved_coperad(b);
    EXPECT_TRUE(r.ok()) << r.summary();
    for (const auto& [e, v] : b.theta.entries()) EXPECT_EQ(b.seq.wt[e], 1);
}

TEST(Bar, PerturbedCurvatureFails)
{
    Coperad b = bar(as_planar({3, 3}), {3, 3});
    b.theta = b.theta.scaled(2);
    EXPECT_FALSE(validate_curved_coperad(b).find("curvature")->ok);
}

TEST(Bar, DifferentialLowersWeightByAtMostOne)
{
    Coperad b = bar(as_planar({3, 3}), {3, 3});
    for (const auto& [r, c, v] : b.d.mat.entries()) {
        int drop = b.seq.wt[c] - b.seq.wt[r];
        EXPECT_TRUE(drop == 0 || drop == 1);
    }
}

TEST(Bar, FiltrationFollowsWordLength)
{
    Coperad b = bar(unit_operad({1, 4}), {1, 4});
    Filtration f = coradical_filtration(b, 5);
    for (std::size_t n = 0; n <= 4; ++n) {
        std::size_t expect = 0;
        for (int e = 0; e < b.seq.size(); ++e) expect += b.seq.wt[e] <= static_cast<int>(n);
        EXPECT_EQ(f.at(n).dim(), expect);
    }
}

TEST(BarDual, UnitCoperadGivesUnitOperad)
{
    Operad p = bar_dual(unit_coperad({3, 3}), {3, 3});
    EXPECT_EQ(p.seq.size(), 1);
    EXPECT_TRUE(validate_operad(p).ok());
}

TEST(BarDual, PolynomialSquareZero)
{
    Operad p = bar_dual(qx_coperad({1, 4}), {1, 4});
    EXPECT_TRUE((p.d.mat * p.d.mat).is_zero());
    Report r = validate_operad(p);
    EXPECT_TRUE(r.ok()) << r.summary();
}

TEST(BarDual, BarAssociativeSquareZero)
{
    Coperad b = bar(as_planar({3, 3}), {3, 3});
    Operad p = bar_dual(b, {3, 3});
    EXPECT_FALSE(p.d.is_zero());
    EXPECT_TRUE((p.d.mat * p.d.mat).is_zero());
}

TEST(BarDual, BarAssociativeDimsMatchTreeOracle)
{
    Coperad b = bar(as_planar({3, 3}), {3, 3});
    Operad p = bar_dual(b, {3, 3});
    std::vector<std::pair<int, int>> bar_labels{{1, 1}, {2, 1}, {3, 1}, {1, 1}};
    Counts bar_counts = tree_counts(bar_labels, 3, 3);
    std::vector<std::pair<int, int>> gens;
    for (auto [aw, c] : bar_counts)
        if (aw.second > 0)
            for (long k = 0; k < c; ++k) gens.push_back(aw);
    Counts free_counts = tree_counts(gens, 3, 3);
    for (int w = 0; w <= 3; ++w) {
        long got = 0;
        for (int e : p.seq.in_arity(2)) got += p.seq.wt[e] == w;
        auto it = free_counts.find({2, w});
        EXPECT_EQ(got, it == free_counts.end() ? 0 : it->second) << "weight " << w;
    }
}

TEST(BarDual, NotCogmentedRejected)
{
    Coperad q = qx_coperad({1, 2});
    q.iota = SVec::unit(1);
    EXPECT_THROW(bar_dual(q, {1, 2}), std::invalid_argument);
}

TEST(Twisting, CanonicalIsTwisting)
{
    for (const Coperad& q : {qx_coperad({1, 4}), bar(as_planar({3, 3}), {3, 3})}) {
        Truncation t{q.seq.max_arity(), q.trunc.max_weight};
        Operad p = bar_dual(q, t);
        TwistingMorphism tw = canonical_alpha(q, p);
        EXPECT_TRUE(check_twisting(tw.alpha, q, p).is_zero());
        EXPECT_TRUE((tw.alpha.mat * q.iota).empty());
        Matrix ba = tw.beta.mat * tw.alpha.mat;
        for (int r : q.reduced_basis()) EXPECT_EQ(ba.col(r), SVec::unit(r));
    }
}

TEST(Twisting, PerturbationDetected)
{
    Coperad q = qx_coperad({1, 3});
    Operad p = bar_dual(q, {1, 3});
    TwistingMorphism tw = canonical_alpha(q, p);
    Matrix a = tw.alpha.mat;
    a.add_to(p.trees->single(0), 1, 1);
    GradedMap bad(q.space(), p.space(), -1, a);
    EXPECT_FALSE(check_twisting(bad, q, p).is_zero());
    Coperad flat = unit_coperad({1, 1});
    Operad pu = unit_operad({1, 1});
    EXPECT_TRUE(check_twisting(GradedMap::zero(flat.space(), pu.space(), -1), flat, pu).is_zero());
}
