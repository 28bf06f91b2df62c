#pragma once

#include "operadia/algcog.hpp"

namespace operadia {

// a(Σ(Λ, X)^Q), the smallest ideal containing x.
Subspace ideal_generated(const QAlgebra& a, const Subspace& x);

// im(a∘Λ^{q_n}) for q_n : Q -> Q/F_nQ.
Subspace topology_stage(const QAlgebra& a, const Filtration& f, int n);
// I^0 = Λ, then I^n = topology_stage(n) for 1 <= n <= max_n.
std::vector<Subspace> canonical_topology(const QAlgebra& a, const Filtration& f, int max_n);

// Subquotient I/J of Λ with the induced differential, J ⊆ I both d-stable.
struct Subquotient {
    Subspace top;
    Matrix proj;     // coordinates in top -> I/J
    Matrix section;  // I/J -> coordinates in top
    GradedSpace space;
    Matrix d;
    bool square_zero() const { return (d * d).is_zero(); }
};
Subquotient subquotient(const GradedSpace& x, const Matrix& d, const Subspace& i, const Subspace& j);

struct RadicalCofiltration {
    std::vector<Subspace> ideals;     // I^0 .. I^{max_n+1}
    AlgebraTower quotients;           // F^n = Λ/I^n for n <= max_n
    std::vector<Subquotient> graded;  // gr^n = I^n/I^{n+1}
};
RadicalCofiltration radical_cofiltration(const QAlgebra& a, int max_n);

// Λ̂ = Λ/I^∞ with I^∞ the intersection of I^n for 1 <= n <= max_stage. The default W − 1 skips
// the stage I^W, which vanishes for every algebra over F_WQ.
struct Completion {
    Subspace infinity_ideal;
    QuotientAlgebra hat;
    Matrix phi;  // Λ -> Λ̂
    bool phi_surjective = false;
    bool phi_injective = false;
};
Completion complete(const QAlgebra& a, int max_stage = -1);

// f(I^nΛ) ⊆ I^nΓ for n <= max_n.
bool is_continuous(const QAlgebra& src, const QAlgebra& tgt, const Matrix& f, int max_n);
// gr^n(f) is a quasi-isomorphism in degrees [lo, hi] for every n <= max_n.
bool devissage_check(const QAlgebra& src, const QAlgebra& tgt, const Matrix& f, int max_n, int lo, int hi);

// Λ_N = T_N ⊕ ℚ with T_N the lower-triangular N×N matrices, as an algebra over ℚ[X] up to weight W.
class CounterexampleModel {
public:
    explicit CounterexampleModel(int n);

    int size() const { return n_; }
    int dim() const { return dim_; }
    int entry(int i, int j) const { return i * (i + 1) / 2 + j; }
    int scalar() const { return dim_ - 1; }

    SVec shift(const SVec& v, int k = 1) const;  // [−k] on the T part
    Rational total(const SVec& v) const;          // Σ̄ of the T part
    SVec sum(const std::vector<SVec>& seq) const; // S on a finite sequence
    Matrix epsilon() const;

    // Presentation as a Q-algebra over qx_coperad truncated at weight w.
    QAlgebra algebra(int w) const;

private:
    int n_;
    int dim_;
};

struct CounterexampleReport {
    int size = 0;
    int dim = 0;
    int instances = 0;
    bool unit_ok = false;
    bool associativity_ok = false;
    bool presentation_ok = false;
    std::vector<Rational> char_poly;  // coefficients of t^0 .. t^dim
    bool char_poly_monomial = false;
    int nilpotency_index = 0;
    std::vector<bool> witnesses;             // ε^n(e_{(n,1)}, 0) = (0, 1) for 1 <= n < N
    bool column_witness_exact = false;        // the same claim for e_{(n,0)}
    std::size_t intersection_dim = 0;        // ∩_{n<N} im ε^n
    bool line_in_intersection = false;
    bool intersection_in_ker_plus_line = false;  // n < N
    bool limit_in_ker_plus_line = false;         // ∩_{n<=N} im ε^n
    std::size_t infinity_ideal_dim = 0;          // complete() at W = N
    bool phi_injective = true;
    bool nilpotent_when_untruncated = false;     // complete() at W = N + 1 is an isomorphism

    bool ok() const;
};
CounterexampleReport counterexample_run(int n, unsigned seed = 1, int instances = 100);

// Coefficients of det(t·Id − m), lowest degree first.
std::vector<Rational> characteristic_polynomial(const Matrix& m);

}  // namespace operadia
