#pragma once

#include "operadia/opcop.hpp"

namespace operadia {

// Bar(P) = T(sP ⊕ s²𝟙) truncated by tree arity and vertex count.
Coperad bar(const Operad& p, const Truncation& t);

// Bar†(Q) = T(s⁻¹Q̄); label l is s⁻¹ of the l-th element of q.reduced_basis().
Operad bar_dual(const Coperad& q, const Truncation& t);

// Summands of w₂ on a basis element: coeff · q' ⊗ (ι,..,q'' at slot,..,ι).
struct W2Term {
    int top;
    int slot;
    int sub;
    Rational coeff;
};
std::vector<W2Term> w2_terms(const Coperad& q, int e);

// Generator values of d_w, d_Q and d_θ on p = bar_dual(q); the Bar† derivation is their sum.
struct BarDualDerivations {
    std::vector<SVec> w;
    std::vector<SVec> q;
    std::vector<SVec> theta;
};
BarDualDerivations bar_dual_derivations(const Coperad& q, const Operad& p);

struct TwistingMorphism {
    GradedMap alpha;  // Q -> P of degree -1, i.e. s⁻¹Q -> P of degree 0
    GradedMap beta;   // P -> Q of degree +1, projection onto generators
};

// ∂α + m∘(α⊗α)∘w₂ − ι∘θ as a degree -2 map Q -> P.
GradedMap check_twisting(const GradedMap& alpha, const Coperad& q, const Operad& p);

// Canonical twisting morphism into p = bar_dual(q).
TwistingMorphism canonical_alpha(const Coperad& q, const Operad& p);

}  // namespace operadia
