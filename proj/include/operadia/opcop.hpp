#pragma once

#include "operadia/symseq.hpp"

#include <memory>
#include <string>
#include <vector>

namespace operadia {

// Planar rooted tree in preorder: label indices, -1 for a leaf.
using Tree = std::vector<int>;

// Weight of a label inside a tree; arity-one weight-zero labels still count once.
int label_weight(const Seq& labels, int l);
int tree_arity(const Tree& t);
int tree_degree(const Seq& labels, const Tree& t);
int tree_weight(const Seq& labels, const Tree& t);
std::string tree_name(const Seq& labels, const Tree& t);

// One past the end of the subtree starting at each position.
std::vector<int> subtree_ends(const Seq& labels, const Tree& t);

// t1 ∘_i t2 (i from 1) and the sign of moving the labels of t2 past the labels of t1 after leaf i.
std::pair<Tree, int> graft(const Seq& labels, const Tree& t1, int i, const Tree& t2);

// Cut of a tree into a root-closed top part and the subtrees hanging below its leaves.
struct Cut {
    Tree top;
    std::vector<Tree> bottoms;
    int sign = 1;
};
std::vector<Cut> cuts(const Seq& labels, const Tree& t);

struct TreeBasis {
    Seq labels;
    std::vector<Tree> trees;
    Seq seq;
    int trivial = -1;
    std::map<Tree, int> index;

    int find(const Tree& t) const;
    int single(int label) const { return find(single_vertex(label)); }
    Tree single_vertex(int label) const;
};

// Trees with at most max_arity leaves and weight at most max_weight, ordered by (arity, tree).
std::shared_ptr<const TreeBasis> enumerate_trees(const Seq& labels, int max_arity, int max_weight);

struct AxiomCheck {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct Report {
    std::vector<AxiomCheck> checks;

    bool ok() const;
    const AxiomCheck* find(const std::string& name) const;
    std::string summary() const;
};

using PartialComp = std::function<SVec(int a, int i, int b)>;

struct Operad {
    Seq seq;
    int unit = -1;
    PartialComp partial;
    GradedMap d;
    bool planar = true;
    Truncation trunc;
    std::shared_ptr<const TreeBasis> trees;

    GradedSpace space() const { return seq.space(); }
    SVec compose(const SVec& a, int i, const SVec& b) const;
    // m on a two-level key [a; b_1..b_k], by iterated partial compositions from the left.
    SVec compose_full(const Key& key) const;
};

Operad unit_operad(const Truncation& t);
Operad as_planar(const Truncation& t);
// Planar free operad on arity >= 1 generators with grafting; d = 0.
Operad free_operad(const Seq& gens, const Truncation& t);
// Component dims of the symmetric free operad, from T = 𝟙 ⊕ E⋄T.
std::map<int, std::size_t> free_symmetric_dims(const SymSeq& gens, const Truncation& t);

// Unique derivation of a free operad with the given values on generators.
GradedMap extend_derivation(const Operad& p, const std::function<SVec(int label)>& gen_values, int degree);
// Checked generator values, and the derivation applied to tree e only at vertices selected by `at`.
std::vector<SVec> derivation_values(const Operad& p, const std::function<SVec(int label)>& gen_values, int degree);
SVec derive_tree(const Operad& p, const std::vector<SVec>& values, int degree, int e,
                 const std::function<bool(int pos)>& at);
SVec restrict_to_generator(const Operad& p, const GradedMap& d, int label);

Report validate_operad(const Operad& p);

struct Coperad {
    Seq seq;
    std::vector<Comb> w;  // per element, keys [a; b_1..b_k] over {seq, seq}
    SVec tau;
    SVec iota;
    SVec theta;
    GradedMap d;
    bool planar = true;
    Truncation trunc;
    std::shared_ptr<const TreeBasis> trees;

    GradedSpace space() const { return seq.space(); }
    std::vector<Seq> levels(int n) const { return std::vector<Seq>(n, seq); }
    // Index of the cogmentation element when ι is a basis vector and τ its dual coordinate, else -1.
    int adapted_unit() const;
    // Basis indices of Q̄ in an adapted basis.
    std::vector<int> reduced_basis() const;
    // w applied at one level of combinations of n-level keys.
    Comb decompose(const Comb& c, int n, int level) const;
};

Coperad unit_coperad(const Truncation& t);
// Arity-one deconcatenation coperad ℚ[X]: X^n in degree 0 and weight n, n <= max_weight.
Coperad qx_coperad(const Truncation& t);
// Planar cofree conilpotent coperad on labels, w by cuts, d = 0, θ = 0.
Coperad cofree_coperad(const Seq& labels, const Truncation& t);

// Unique coderivation of a cofree coperad with the given projection onto cogenerators.
GradedMap extend_coderivation(const Coperad& q, const std::function<SVec(int tree)>& proj_values, int degree);
SVec project_to_cogenerators(const Coperad& q, const SVec& v);

Report validate_curved_coperad(const Coperad& q);

// w̄ = (w − (ιτ)⋄Id − Id⋄(ιτ)) on an element.
Comb reduced_decomposition(const Coperad& q, int e);

struct Filtration {
    std::vector<Subspace> stages;  // F_0 Q ⊆ F_1 Q ⊆ ... inside Q
    bool stabilized = false;

    const Subspace& at(std::size_t n) const { return stages[std::min(n, stages.size() - 1)]; }
};

// Stages up to max_stage, or until two consecutive stages agree.
Filtration coradical_filtration(const Coperad& q, int max_stage);
bool is_locally_conilpotent(const Coperad& q);

// Matrix of a map given on basis elements.
Matrix matrix_of(std::size_t src_dim, std::size_t tgt_dim, const std::function<SVec(int)>& f);

}  // namespace operadia
