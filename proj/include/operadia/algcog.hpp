#pragma once

#include "operadia/barcobar.hpp"

namespace operadia {

// Algebra over a planar operad; the domain P⋄Λ carries Λ as an arity-zero level.
struct AlgebraOverOperad {
    Operad p;
    ChainComplex carrier;
    Composite domain;
    GradedMap action;  // P⋄Λ -> Λ
};

// P⋄X with action m⋄Id and differential d_P⋄Id + Id⋄'d_X.
AlgebraOverOperad free_algebra_operad(const Operad& p, const ChainComplex& x);
Report validate_algebra(const AlgebraOverOperad& a);

// Cogebra over a coperad with coaction into Q⋄V.
struct CogebraOverCoperad {
    Coperad q;
    GradedSpace space;
    GradedMap d;
    Composite codomain;
    GradedMap coaction;  // V -> Q⋄V
};

// Q⋄X with coaction w⋄Id.
CogebraOverCoperad free_cogebra_coperad(const Coperad& q, const ChainComplex& x);
Report validate_cogebra(const CogebraOverCoperad& c);

// Finite-dimensional algebra over a truncated coperad; d may be curved.
struct QAlgebra {
    Coperad q;
    GradedSpace space;
    GradedMap d;
    Cotensor lq;       // Λ^Q
    GradedMap action;  // Λ^Q -> Λ

    Cotensor cotensor(const std::vector<Seq>& levels) const;
    GradedMap unit_map(const SVec& u, int degree) const;  // Λ -> Λ^Q for u : Q -> 𝟙
};

// Associativity, unit, derivation and curvature d² + a∘Λ^θ = 0.
Report validate_qalgebra(const QAlgebra& a);

struct FreeQAlgebra {
    QAlgebra algebra;  // X^Q with a = X^w∘l(Q,Q,X)
    GradedSpace generators;
    Cotensor xq;
    GradedMap inclusion;  // i = X^τ : X -> X^Q
};

// X^Q truncated at the weight of q, with derivation Σ(Id,d_X)^Q − X^{d_Q}.
FreeQAlgebra free_algebra_coperad(const Coperad& q, const ChainComplex& x);

// d_f = −X^{d_Q} + a∘Σ(i,f)^Q for f : X -> X^Q of degree −1.
GradedMap extend_derivation_qalg(const FreeQAlgebra& f, const GradedMap& gen);
// d∘i.
GradedMap restrict_derivation_qalg(const FreeQAlgebra& f, const GradedMap& d);

struct SquareZeroReport {
    Matrix generator_residual;
    Matrix square_residual;

    bool generator_ok() const { return generator_residual.is_zero(); }
    bool square_ok() const { return square_residual.is_zero(); }
    bool equivalent() const { return generator_ok() == square_ok(); }
};

// d_f∘f + X^θ and d_f² + a∘(X^Q)^θ.
SquareZeroReport check_square_zero_qalg(const FreeQAlgebra& f, const GradedMap& d, const GradedMap& gen);

// Ideals.
Subspace action_closure_generators(const QAlgebra& a, const Subspace& x);  // Σ(Λ, X)^Q
bool is_ideal(const QAlgebra& a, const Subspace& i);
bool is_d_stable(const QAlgebra& a, const Subspace& i);
// Elements of X^Q that vanish on the subsequence fq ⊆ Q.
Subspace annihilator(const Cotensor& xq, const Subspace& fq);

struct QuotientAlgebra {
    QAlgebra algebra;
    Matrix proj;     // Λ -> Λ/I
    Matrix section;  // Λ/I -> Λ on basis coordinates
};
QuotientAlgebra quotient_algebra(const QAlgebra& a, const Subspace& ideal);

// Levels Λ/I_n of a head algebra for a decreasing family of ideals.
struct AlgebraTower {
    std::vector<QAlgebra> levels;
    std::vector<Subspace> ideals;
    std::vector<Matrix> from_head;
    std::vector<Matrix> section;
    std::vector<Matrix> transition;  // level n -> level n-1; empty at n = 0
};
AlgebraTower tower_from_ideals(const QAlgebra& head, const std::vector<Subspace>& ideals);

// Levels X^{F_nQ} for n <= max_level, as quotients of X^Q by the annihilators of F_nQ.
AlgebraTower free_tower(const FreeQAlgebra& f, int max_level);

// Each level valid, a_n factoring through F_nQ, transitions compatible with action and derivation.
Report validate_tower(const AlgebraTower& t, const Filtration& f);

// Cogebra over a planar operad with coaction V -> V^P.
struct CogebraOverOperad {
    Operad p;
    GradedSpace space;
    GradedMap d;
    Cotensor vp;         // V^P
    GradedMap coaction;  // V -> V^P

    Cotensor cotensor(const std::vector<Seq>& levels) const;
};

// Counit, coassociativity V^m∘a = l(P,P,V)∘a^P∘a, coderivation and d² = 0.
Report validate_cogebra(const CogebraOverOperad& c);

// L₁^P X = {v ∈ X^P : X^m v ∈ im l(P,P,X)} with its own basis and δ = l⁻¹∘X^m.
struct FreeCogebra {
    CogebraOverOperad cogebra;
    GradedSpace generators;
    Cotensor xp;
    Subspace carrier;     // inside X^P
    GradedMap inclusion;  // L -> X^P
    GradedMap projection; // π = X^η restricted to L
    std::size_t lax_rank_defect = 0;  // dim L^P − rank of l(P,P,X) restricted to L^P
};

FreeCogebra free_cogebra_operad(const Operad& p, const ChainComplex& x);
// Same carrier with d = 0, for a base that is not a complex.
FreeCogebra free_cogebra_operad(const Operad& p, const GradedSpace& x);

// d_f = −X^{d_P} + Σ(π,f)^P∘a for f : L -> X of degree −1.
GradedMap extend_coderivation_pcog(const FreeCogebra& f, const GradedMap& gen);
// π∘d.
GradedMap restrict_coderivation_pcog(const FreeCogebra& f, const GradedMap& d);
// f∘d_f and d_f².
SquareZeroReport check_square_zero_pcog(const FreeCogebra& f, const GradedMap& d, const GradedMap& gen);

// Built-in cogebras over P = Bar†(ℚ[X]); elements of V have weight 0.
CogebraOverOperad onedim_cogebra(const Operad& p);
CogebraOverOperad twodim_cogebra(const Operad& p);

// Key maps shared with the cobar module.
KeyMap single_level(const std::function<SVec(int)>& f);  // [a] -> f(a) as single-element keys
KeyMap coproduct_map(const Coperad& q);                  // [a] -> w(a)
KeyMap composition_map(const Operad& p);                 // [a; b...] -> m
Comb to_comb(const SVec& v);
SVec from_comb(const KeyBasis& b, const Comb& c);

}  // namespace operadia
