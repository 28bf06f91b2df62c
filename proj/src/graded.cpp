#include "operadia/graded.hpp"

#include <stdexcept>

namespace operadia {

int koszul_sign(const std::vector<std::pair<int, int>>& swaps)
{
    int odd = 0;
    for (const auto& [a, b] : swaps) odd ^= (a & b & 1);
    return odd ? -1 : 1;
}

int permutation_sign(const std::vector<int>& degrees, const std::vector<int>& perm)
{
    std::vector<std::pair<int, int>> swaps;
    for (std::size_t k = 0; k < perm.size(); ++k)
        for (std::size_t l = k + 1; l < perm.size(); ++l)
            if (perm[k] > perm[l]) swaps.emplace_back(degrees[perm[k]], degrees[perm[l]]);
    return koszul_sign(swaps);
}

GradedSpace GradedSpace::from_dims(const std::map<int, std::size_t>& dims)
{
    GradedSpace s;
    for (const auto& [d, n] : dims) s.deg.insert(s.deg.end(), n, d);
    return s;
}

GradedSpace GradedSpace::from_degrees(std::vector<int> degrees)
{
    GradedSpace s;
    s.deg = std::move(degrees);
    return s;
}

std::map<int, std::size_t> GradedSpace::dims() const
{
    std::map<int, std::size_t> m;
    for (int d : deg) ++m[d];
    return m;
}

std::vector<int> GradedSpace::indices_in_degree(int d) const
{
    std::vector<int> r;
    for (std::size_t i = 0; i < deg.size(); ++i)
        if (deg[i] == d) r.push_back(static_cast<int>(i));
    return r;
}

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b)
{
    GradedSpace s;
    s.deg = a.deg;
    s.deg.insert(s.deg.end(), b.deg.begin(), b.deg.end());
    if (!a.wt.empty() || !b.wt.empty())
        for (std::size_t i = 0; i < s.deg.size(); ++i)
            s.wt.push_back(i < a.dim() ? a.weight(i) : b.weight(i - a.dim()));
    return s;
}

GradedSpace tensor_space(const GradedSpace& a, const GradedSpace& b)
{
    GradedSpace s;
    bool w = !a.wt.empty() || !b.wt.empty();
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) {
            s.deg.push_back(a.deg[i] + b.deg[j]);
            if (w) s.wt.push_back(a.weight(i) + b.weight(j));
        }
    return s;
}

GradedSpace shift(const GradedSpace& x, int p)
{
    GradedSpace s = x;
    for (int& d : s.deg) d += p;
    return s;
}

GradedSpace hom_space(const GradedSpace& x, const GradedSpace& y)
{
    GradedSpace s;
    for (std::size_t i = 0; i < x.dim(); ++i)
        for (std::size_t j = 0; j < y.dim(); ++j) s.deg.push_back(y.deg[j] - x.deg[i]);
    return s;
}

GradedMap::GradedMap(GradedSpace s, GradedSpace t, int p, Matrix m)
    : src(std::move(s)), tgt(std::move(t)), degree(p), mat(std::move(m))
{
    if (mat.rows() != tgt.dim() || mat.cols() != src.dim())
        throw std::invalid_argument("graded map: matrix shape does not match spaces");
    for (std::size_t j = 0; j < mat.cols(); ++j)
        for (const auto& [i, v] : mat.col(j).entries())
            if (tgt.deg[i] != src.deg[j] + degree)
                throw std::invalid_argument("graded map: entry breaks homogeneity");
}

GradedMap GradedMap::identity(const GradedSpace& x) { return {x, x, 0, Matrix::identity(x.dim())}; }

GradedMap GradedMap::zero(const GradedSpace& s, const GradedSpace& t, int p)
{
    return {s, t, p, Matrix::zero(t.dim(), s.dim())};
}

Matrix GradedMap::block(int d) const
{
    return mat.select_columns(src.indices_in_degree(d)).select_rows(tgt.indices_in_degree(d + degree));
}

std::map<int, Matrix> GradedMap::blocks() const
{
    std::map<int, Matrix> b;
    for (const auto& [d, n] : src.dims()) {
        Matrix m = block(d);
        if (!m.is_zero()) b.emplace(d, std::move(m));
    }
    return b;
}

GradedMap GradedMap::from_blocks(GradedSpace s, GradedSpace t, int p, const std::map<int, Matrix>& blocks)
{
    std::vector<std::tuple<int, int, Rational>> trip;
    for (const auto& [d, m] : blocks) {
        auto cs = s.indices_in_degree(d);
        auto rs = t.indices_in_degree(d + p);
        if (m.rows() != rs.size() || m.cols() != cs.size())
            throw std::invalid_argument("graded map: block shape mismatch at degree " + std::to_string(d));
        for (const auto& [i, j, v] : m.entries()) trip.emplace_back(rs[i], cs[j], v);
    }
    Matrix mat = Matrix::from_triplets(t.dim(), s.dim(), trip);
    return {std::move(s), std::move(t), p, std::move(mat)};
}

bool operator==(const GradedMap& a, const GradedMap& b)
{
    return a.degree == b.degree && a.src.deg == b.src.deg && a.tgt.deg == b.tgt.deg && a.mat == b.mat;
}

GradedMap compose(const GradedMap& g, const GradedMap& f)
{
    if (f.tgt.deg != g.src.deg) throw std::invalid_argument("compose: shape mismatch");
    return {f.src, g.tgt, f.degree + g.degree, g.mat * f.mat};
}

GradedMap add(const GradedMap& a, const GradedMap& b)
{
    if (a.degree != b.degree || a.src.deg != b.src.deg || a.tgt.deg != b.tgt.deg)
        throw std::invalid_argument("add: shape mismatch");
    return {a.src, a.tgt, a.degree, a.mat + b.mat};
}

GradedMap scale(const GradedMap& a, const Rational& c) { return {a.src, a.tgt, a.degree, a.mat.scaled(c)}; }

GradedMap tensor_map(const GradedMap& f, const GradedMap& g)
{
    Matrix k = kronecker(f.mat, g.mat);
    std::size_t ny = g.src.dim();
    for (std::size_t j = 0; j < k.cols(); ++j) {
        int x_deg = f.src.deg[j / ny];
        if (koszul_sign({{g.degree, x_deg}}) < 0) k.set_col(j, k.col(j).scaled(-1));
    }
    return {tensor_space(f.src, g.src), tensor_space(f.tgt, g.tgt), f.degree + g.degree, std::move(k)};
}

// f : X' -> X, g : Y -> Y'; [f,g](phi) = (-1)^{|f||phi|} g phi f.
GradedMap hom_pairing(const GradedMap& f, const GradedMap& g)
{
    const GradedSpace& x = f.tgt;
    const GradedSpace& xp = f.src;
    const GradedSpace& y = g.src;
    const GradedSpace& yp = g.tgt;
    GradedSpace s = hom_space(x, y);
    GradedSpace t = hom_space(xp, yp);
    Matrix ft = f.mat.transpose();
    std::vector<SVec> cols(s.dim());
    for (std::size_t xi = 0; xi < x.dim(); ++xi)
        for (std::size_t yi = 0; yi < y.dim(); ++yi) {
            int phi_deg = y.deg[yi] - x.deg[xi];
            int sign = koszul_sign({{f.degree, phi_deg}});
            std::vector<SVec::Entry> out;
            for (const auto& [xpi, fv] : ft.col(xi).entries())
                for (const auto& [ypi, gv] : g.mat.col(yi).entries())
                    out.emplace_back(static_cast<int>(xpi * yp.dim() + ypi), sign * fv * gv);
            cols[xi * y.dim() + yi] = SVec(std::move(out));
        }
    return {s, t, f.degree + g.degree, Matrix::from_columns(t.dim(), std::move(cols))};
}

// [A (x) B, C] -> [A, [B, C]], e_{c, a(x)b} -> e_{e_{c,b}, a}.
GradedMap curry(const GradedSpace& a, const GradedSpace& b, const GradedSpace& c)
{
    GradedSpace s = hom_space(tensor_space(a, b), c);
    GradedSpace bc = hom_space(b, c);
    GradedSpace t = hom_space(a, bc);
    std::vector<std::tuple<int, int, Rational>> trip;
    for (std::size_t ai = 0; ai < a.dim(); ++ai)
        for (std::size_t bi = 0; bi < b.dim(); ++bi)
            for (std::size_t ci = 0; ci < c.dim(); ++ci) {
                std::size_t src = (ai * b.dim() + bi) * c.dim() + ci;
                std::size_t inner = bi * c.dim() + ci;
                std::size_t tgt = ai * bc.dim() + inner;
                trip.emplace_back(static_cast<int>(tgt), static_cast<int>(src), Rational(1));
            }
    return {s, t, 0, Matrix::from_triplets(t.dim(), s.dim(), trip)};
}

GradedMap shift_map(const GradedMap& f, int p)
{
    return {shift(f.src, p), shift(f.tgt, p), f.degree, f.mat.scaled(koszul_sign({{p, f.degree}}))};
}

GradedMap bracket(const GradedMap& a, const GradedMap& b)
{
    GradedMap ab = compose(a, b);
    GradedMap ba = compose(b, a);
    return add(ab, scale(ba, -koszul_sign({{a.degree, b.degree}})));
}

GradedSpace subspace_grading(const GradedSpace& x, const Subspace& s)
{
    GradedSpace g;
    for (std::size_t j = 0; j < s.dim(); ++j) {
        const auto& e = s.basis.col(j).entries();
        if (e.empty()) throw std::invalid_argument("subspace basis has a zero vector");
        int d = x.deg[e[0].first];
        int w = x.weight(e[0].first);
        for (const auto& [i, v] : e)
            if (x.deg[i] != d || x.weight(i) != w) throw std::invalid_argument("subspace basis is not homogeneous");
        g.deg.push_back(d);
        g.wt.push_back(w);
        g.labels.push_back(x.labels.empty() ? "b" + std::to_string(j) : x.labels[e[0].first]);
    }
    return g;
}

Matrix restrict_map(const Matrix& f, const Subspace& s, const Subspace& t)
{
    auto r = solve(t.basis, f * s.basis);
    if (!r) throw std::invalid_argument("map does not preserve the subspace");
    return *r;
}

ChainComplex::ChainComplex(GradedSpace s, GradedMap differential) : space(std::move(s)), d(std::move(differential))
{
    if (d.degree != -1) throw std::invalid_argument("differential must have degree -1");
    if (d.src.deg != space.deg || d.tgt.deg != space.deg)
        throw std::invalid_argument("differential does not act on the space");
    if (!(d.mat * d.mat).is_zero()) throw std::invalid_argument("differential does not square to zero");
}

ChainComplex shift(const ChainComplex& c, int p)
{
    GradedSpace s = shift(c.space, p);
    return {s, GradedMap(s, s, -1, c.d.mat.scaled(p % 2 ? -1 : 1))};
}

ChainComplex complex_sum(const ChainComplex& a, const ChainComplex& b)
{
    GradedSpace s = direct_sum(a.space, b.space);
    std::vector<SVec> cols;
    for (std::size_t j = 0; j < a.space.dim(); ++j) cols.push_back(a.d.mat.col(j));
    for (std::size_t j = 0; j < b.space.dim(); ++j) {
        std::vector<SVec::Entry> e;
        for (const auto& [i, v] : b.d.mat.col(j).entries()) e.emplace_back(i + static_cast<int>(a.space.dim()), v);
        cols.emplace_back(std::move(e));
    }
    return {s, GradedMap(s, s, -1, Matrix::from_columns(s.dim(), std::move(cols)))};
}

std::map<int, std::size_t> homology(const ChainComplex& c)
{
    std::map<int, std::size_t> h;
    for (const auto& [deg, n] : c.space.dims()) {
        std::size_t z = n - rank(c.d.block(deg));
        std::size_t b = rank(c.d.block(deg + 1));
        h[deg] = z - b;
    }
    return h;
}

bool is_chain_map(const GradedMap& f, const ChainComplex& a, const ChainComplex& b)
{
    if (f.degree != 0 || f.src.deg != a.space.deg || f.tgt.deg != b.space.deg) return false;
    return (b.d.mat * f.mat - f.mat * a.d.mat).is_zero();
}

bool is_quasi_iso(const GradedMap& f, const ChainComplex& a, const ChainComplex& b, int lo, int hi)
{
    if (!is_chain_map(f, a, b)) throw std::invalid_argument("is_quasi_iso: not a chain map");
    for (int d = lo; d <= hi; ++d) {
        Matrix za = kernel_basis(a.d.block(d)).basis;
        Matrix zb = kernel_basis(b.d.block(d)).basis;
        Matrix bb = image_basis(b.d.block(d + 1)).basis;
        std::size_t ha = za.cols() - rank(a.d.block(d + 1));
        std::size_t hb = zb.cols() - bb.cols();
        if (ha != hb) return false;
        Matrix fz = f.block(d) * za;
        std::size_t induced = rank(fz.hstack(bb)) - bb.cols();
        if (induced != ha) return false;
    }
    return true;
}

}  // namespace operadia
