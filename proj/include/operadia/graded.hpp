#pragma once

#include "operadia/qlinalg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace operadia {

// The sign oracle: product of (-1)^{a*b} over the listed transpositions of
// homogeneous elements of degrees a and b.
int koszul_sign(const std::vector<std::pair<int, int>>& swaps);

// Sign of reordering graded elements: position k of the result holds old element perm[k].
int permutation_sign(const std::vector<int>& degrees, const std::vector<int>& perm);

class SignAccumulator {
public:
    void pass(int a, int b) { swaps_.emplace_back(a, b); }
    void pass_all(int a, const std::vector<int>& bs)
    {
        for (int b : bs) swaps_.emplace_back(a, b);
    }
    int value() const { return koszul_sign(swaps_); }

private:
    std::vector<std::pair<int, int>> swaps_;
};

struct GradedSpace {
    std::vector<int> deg;
    std::vector<int> wt;
    std::vector<std::string> labels;

    static GradedSpace from_dims(const std::map<int, std::size_t>& dims);
    static GradedSpace from_degrees(std::vector<int> degrees);

    std::size_t dim() const { return deg.size(); }
    std::map<int, std::size_t> dims() const;
    std::vector<int> indices_in_degree(int d) const;
    int weight(std::size_t i) const { return wt.empty() ? 0 : wt[i]; }
    bool same_shape(const GradedSpace& o) const { return deg == o.deg; }
};

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b);
GradedSpace tensor_space(const GradedSpace& a, const GradedSpace& b);
GradedSpace shift(const GradedSpace& x, int p);

// Hom space [X, Y]: basis e_{y,x} at index x*dim(Y)+y of degree |y|-|x|.
GradedSpace hom_space(const GradedSpace& x, const GradedSpace& y);

struct GradedMap {
    GradedSpace src;
    GradedSpace tgt;
    int degree = 0;
    Matrix mat;

    GradedMap() = default;
    GradedMap(GradedSpace s, GradedSpace t, int p, Matrix m);

    static GradedMap identity(const GradedSpace& x);
    static GradedMap zero(const GradedSpace& s, const GradedSpace& t, int p);

    // Per-degree block from source degree d to target degree d+degree.
    Matrix block(int d) const;
    std::map<int, Matrix> blocks() const;
    static GradedMap from_blocks(GradedSpace s, GradedSpace t, int p, const std::map<int, Matrix>& blocks);

    bool is_zero() const { return mat.is_zero(); }
};

bool operator==(const GradedMap& a, const GradedMap& b);

GradedMap compose(const GradedMap& g, const GradedMap& f);
GradedMap add(const GradedMap& a, const GradedMap& b);
GradedMap scale(const GradedMap& a, const Rational& c);
GradedMap tensor_map(const GradedMap& f, const GradedMap& g);
GradedMap hom_pairing(const GradedMap& f, const GradedMap& g);
GradedMap curry(const GradedSpace& a, const GradedSpace& b, const GradedSpace& c);
GradedMap shift_map(const GradedMap& f, int p);

// [d, d'] = d d' - (-1)^{|d||d'|} d' d on endomorphisms.
GradedMap bracket(const GradedMap& a, const GradedMap& b);

// Grading of a subspace with a homogeneous basis; throws if a basis vector mixes degrees or weights.
GradedSpace subspace_grading(const GradedSpace& x, const Subspace& s);
// f restricted to s and corestricted to t, in basis coordinates; throws if f(s) is not inside t.
Matrix restrict_map(const Matrix& f, const Subspace& s, const Subspace& t);

struct ChainComplex {
    GradedSpace space;
    GradedMap d;

    ChainComplex() = default;
    ChainComplex(GradedSpace s, GradedMap differential);
};

ChainComplex shift(const ChainComplex& c, int p);
ChainComplex complex_sum(const ChainComplex& a, const ChainComplex& b);
std::map<int, std::size_t> homology(const ChainComplex& c);
bool is_chain_map(const GradedMap& f, const ChainComplex& a, const ChainComplex& b);
bool is_quasi_iso(const GradedMap& f, const ChainComplex& a, const ChainComplex& b, int lo, int hi);

}  // namespace operadia
