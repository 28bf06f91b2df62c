#pragma once

#include "operadia/graded.hpp"

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace operadia {

// Flat basis key of a composite or cotensor element: element indices in level order.
using Key = std::vector<int>;

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
};

// Sparse linear combination of keys; iteration order is the key order.
using Comb = std::map<Key, Rational>;

void add_term(Comb& c, const Key& k, const Rational& v);
void add_comb(Comb& c, const Comb& d, const Rational& scale = 1);
Comb single(const Key& k, const Rational& v = 1);

using KeyMap = std::function<Comb(const Key&)>;

// Linear extension of a key map.
Comb apply(const KeyMap& f, const Comb& c);

struct Truncation {
    int max_arity = 4;
    int max_weight = 4;
    int degree_lo = -1000;
    int degree_hi = 1000;
};

struct Range {
    int lo = 0;
    int hi = -1;
    bool contains(int v) const { return lo <= v && v <= hi; }
};

struct ExactnessCert {
    Range arities;
    Range degrees;
    Range weights;

    static ExactnessCert full(const Truncation& t);
};

// Planar graded sequence: a basis in which every element has an arity, a degree and a weight.
struct Seq {
    std::vector<int> ar;
    std::vector<int> deg;
    std::vector<int> wt;
    std::vector<std::string> name;

    int size() const { return static_cast<int>(ar.size()); }
    int add(int arity, int degree, int weight, std::string label);
    std::vector<int> in_arity(int n) const;
    int max_arity() const;
    GradedSpace space() const;
    int find(const std::string& label) const;
};

// Arity-zero sequence on the basis of a graded space.
Seq seq_of_space(const GradedSpace& x);

struct SymSeq {
    Seq seq;
    // Adjacent transpositions sigma_1..sigma_{n-1} on the arity-n component, in local basis order.
    std::map<int, std::vector<Matrix>> actions;
    bool planar = true;
    ExactnessCert cert;

    Matrix action(int n, int i) const;
};

Seq unit_seq();
SymSeq unit_symseq(const Truncation& t);

// Offsets of the levels inside a flat key; result has levels.size()+1 entries.
std::vector<int> level_offsets(const std::vector<Seq>& levels, const Key& key);
int key_degree(const std::vector<Seq>& levels, const Key& key);
int key_weight(const std::vector<Seq>& levels, const Key& key);
int key_arity(const std::vector<Seq>& levels, const Key& key);

// Enumerated basis with a key index.
class KeyBasis {
public:
    int size() const { return static_cast<int>(keys_.size()); }
    const Key& key(int i) const { return keys_[i]; }
    const std::vector<Key>& keys() const { return keys_; }
    int find(const Key& k) const;
    int deg(int i) const { return deg_[i]; }
    int wt(int i) const { return wt_[i]; }
    int arity(int i) const { return ar_[i]; }
    GradedSpace space() const;
    SVec to_svec(const Comb& c) const;  // keys outside the basis are dropped

protected:
    void push(Key k, int arity, int degree, int weight, std::string label);
    void finish();

    std::vector<Key> keys_;
    std::vector<int> deg_, wt_, ar_;
    std::vector<std::string> labels_;
    std::unordered_map<Key, int, KeyHash> index_;
};

// Planar composite M_0 ⋄ M_1 ⋄ ... truncated by layer width and total weight.
class Composite : public KeyBasis {
public:
    Composite() = default;
    Composite(std::vector<Seq> levels, int max_arity, int max_weight);
    const std::vector<Seq>& levels() const { return levels_; }

private:
    std::vector<Seq> levels_;
};

// Cotensor X^M for a planar composite M: basis e_{xs,a} keyed by a ++ xs,
// degree |xs| - |a|, weight wt(a) + wt(xs); truncation keeps weight <= max_weight.
class Cotensor : public KeyBasis {
public:
    Cotensor() = default;
    Cotensor(GradedSpace x, std::vector<Seq> levels, int max_arity, int max_weight);
    const GradedSpace& base() const { return x_; }
    const std::vector<Seq>& levels() const { return levels_; }
    int max_arity() const { return max_arity_; }
    int max_weight() const { return max_weight_; }
    // Length of the composite part of key i.
    int shape_length(const Key& k) const;
    Key shape(const Key& k) const;
    Key word(const Key& k) const;

private:
    GradedSpace x_;
    std::vector<Seq> levels_;
    int max_arity_ = 0;
    int max_weight_ = 0;
};

// Maps on composite keys.
using ElemMap = std::function<SVec(int)>;
using TwoLevelMap = std::function<SVec(const Key&)>;  // [a; b_1..b_k] -> element combination
using SplitMap = std::function<Comb(int)>;            // element -> Comb of [a; b_1..b_k]

// Apply f (degree p) at every element of the given level.
Comb apply_at_level(const std::vector<Seq>& levels, const Key& key, int level, const ElemMap& f, int p);
// Σ(f, g) at a level: g (degree p) at one element, f (degree 0) at all others.
Comb shuffle_at_level(const std::vector<Seq>& levels, const Key& key, int level, const ElemMap& f,
                      const ElemMap& g, int p);
// Merge levels `level` and `level+1` through m.
Comb collapse_levels(const std::vector<Seq>& levels, const Key& key, int level, const TwoLevelMap& m);
// Split the elements of `level` through w into two levels.
Comb expand_level(const std::vector<Seq>& levels, const Key& key, int level, const SplitMap& w,
                  const Seq& lower, const Seq& upper);

ElemMap identity_elem();

// X^f : X^N -> X^M for f : M -> N of degree p given on keys of M.
GradedMap cotensor_contra(const Cotensor& xn, const Cotensor& xm, int p, const KeyMap& f);

// [Id, g] : X^M -> Y^M for g of degree p given on words of X.
GradedMap cotensor_cov(const Cotensor& xm, const Cotensor& ym, int p, const KeyMap& g);

// [Id, f^{⊗k}] : X^M -> Y^M for f : X -> Y of degree 0.
GradedMap tensor_power(const Cotensor& xm, const Cotensor& ym, const ElemMap& f);

// Σ(f, g)^M : X^M -> Y^M with f of degree 0 and g of degree p given on basis elements of X.
GradedMap shuffle_power(const Cotensor& xm, const Cotensor& ym, const ElemMap& f, const ElemMap& g, int p);

// l(N, M, X) : (X^M)^N -> X^{N⋄M}; outer.base() must be inner.space().
GradedMap lax_map(const Cotensor& outer, const Cotensor& inner, const Cotensor& target);

// X -> X^M, x |-> (-1)^{p|x|} Σ_a u(a) e_{x,a}, for u : M -> 𝟙 of degree p on arity-one keys.
GradedMap cotensor_from_unit(const Cotensor& xm, int p, const std::function<Rational(const Key&)>& u);

// X^M -> X, e_{x,a} |-> c(a) x for a map 𝟙 -> M of degree p sending 1 to Σ c(a) a.
GradedMap cotensor_to_unit(const Cotensor& xm, int p, const Comb& c);

// Σ(Y, X)^M for a subspace X of Y; zero arity-zero component.
Subspace shuffle_subobject(const Cotensor& ym, const Subspace& x);

// Symmetric side.
struct CoxeterReport {
    bool ok = true;
    std::string failure;
};
CoxeterReport validate_actions(const SymSeq& m);
Matrix averaging_idempotent(const std::vector<Matrix>& generators);
// Invariants [M(n), X^{⊗n}]^{S_n}, n <= max_arity; returns dims and the idempotents per arity.
struct SymCotensor {
    std::map<int, Subspace> invariants;
    std::map<int, Matrix> idempotent;
    std::size_t dim() const;
};
SymCotensor cotensor_symmetric(const GradedSpace& x, const SymSeq& m, int max_arity);
SymSeq compose_product(const SymSeq& m, const SymSeq& n, const Truncation& t);

// Permutation action of an adjacent transposition on X^{⊗n} with Koszul signs.
Matrix tensor_swap(const GradedSpace& x, int n, int i);

}  // namespace operadia
