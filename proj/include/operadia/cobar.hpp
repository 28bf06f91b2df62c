#pragma once

#include "operadia/completion.hpp"

#include <array>

namespace operadia {

// Cobar V = V^Q with the derivation generated by b = i∘d_V − V^α∘a_V.
struct CobarAlgebra {
    CogebraOverOperad v;
    FreeQAlgebra algebra;
    GradedMap b;
    AlgebraTower tower;  // V^{F_nQ}, n <= max_level
};
CobarAlgebra cobar(const CogebraOverOperad& v, const Coperad& q, const TwistingMorphism& alpha, int max_level);
// Per level: d_b∘b + V^θ and d_b² + a∘Λ^θ, projected to the level.
std::vector<SquareZeroReport> cobar_curvature(const CobarAlgebra& c);

// Cobar†Λ = L^PΛ with the coderivation generated by b = d_Λ∘π + a_Λ∘Λ^α.
struct CobarDual {
    QAlgebra lambda;
    FreeCogebra cogebra;
    GradedMap b;
};
CobarDual cobar_dual(const QAlgebra& lambda, const Operad& p, const TwistingMorphism& alpha);
// b∘d_b and d_b².
SquareZeroReport cobar_dual_square_zero(const CobarDual& c);

// φ^Q : Cobar V -> Cobar W for a cogebra morphism φ : V -> W.
GradedMap cobar_map(const CobarAlgebra& src, const CobarAlgebra& tgt, const GradedMap& phi);
// L^P g : Cobar†Λ -> Cobar†Λ' for an algebra morphism g; throws if the image leaves the carrier.
GradedMap cobar_dual_map(const CobarDual& src, const CobarDual& tgt, const GradedMap& g);

struct TrustWindow {
    int lo = 0;
    int hi = -1;
    bool contains(int d) const { return lo <= d && d <= hi; }
};
// Requested window shrunk so that two steps of D or H stay inside the certified degrees.
TrustWindow trust_window(const Truncation& t, int lo, int hi);

// C†C V inside V^{P⋄Q} for P = Bar†Q.
struct CobarResolution {
    Coperad q;
    Operad p;
    TwistingMorphism alpha;
    CogebraOverOperad v;
    CobarAlgebra cobar;
    CobarDual dual;        // C†C V with its own basis
    Cotensor vpq;          // V^{P⋄Q}
    GradedMap embed;       // l(P,Q,V) restricted to L^P V^Q
    Subspace carrier;      // image of embed
    std::array<GradedMap, 6> parts;  // D₁ .. D₆ on V^{P⋄Q}
    GradedMap d;
    GradedMap d2u;         // D_{2,u}
    GradedMap h;           // H = −V^h, planar only
    GradedMap j;           // V -> V^{P⋄Q}
    GradedMap proj;        // q = V^{η⋄ι}
    Subspace kernel;       // K = ker q ∩ carrier

    GradedMap d2d() const { return add(parts[1], scale(d2u, -1)); }
};
CobarResolution unit_resolution(const CogebraOverOperad& v, const Coperad& q);

// D·l = l·d_b on L^P V^Q, comparing the six-term formula with the Cobar† coderivation.
bool transported_differential_agrees(const CobarResolution& r);
// Dᵢ(K) ⊆ K for i = 1..6.
std::array<bool, 6> kernel_stability(const CobarResolution& r);

struct HomotopyReport {
    TrustWindow window;
    Matrix first_residual;   // (D₁+D_{2,u})H + H(D₁+D_{2,u}) − Id on K, trusted columns
    Matrix second_residual;  // (D₃+D₄)H + H(D₃+D₄) on K, trusted columns
    bool h_square_zero = false;
    bool h_zero_on_unit_tree = false;  // h vanishes on [1; q]

    bool ok() const { return first_residual.is_zero() && second_residual.is_zero() && h_square_zero && h_zero_on_unit_tree; }
};
HomotopyReport verify_homotopy_identities(const CobarResolution& r, const TrustWindow& w);

struct AcyclicityReport {
    TrustWindow window;
    std::map<int, std::size_t> kernel_homology;  // trusted degrees
    std::map<int, std::size_t> kernel_dims;
    std::map<int, std::size_t> dh_ranks;         // rank of DH + HD on K per degree
    bool d_square_zero = false;
    bool q_left_inverse = false;
    bool unit_quasi_iso = false;

    bool ok() const;
};
AcyclicityReport verify_acyclicity(const CobarResolution& r, const TrustWindow& w);

// Restriction of f (preserving s) to s, with s given by a homogeneous basis.
ChainComplex restricted_complex(const GradedSpace& ambient, const Matrix& d, const Subspace& s);

}  // namespace operadia
