#include "operadia/qlinalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace operadia {

std::string to_string(const Rational& r)
{
    Rational q = r;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s)
{
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

SVec::SVec(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& [i, v] : entries) {
        if (!e_.empty() && e_.back().first == i)
            e_.back().second += v;
        else
            e_.emplace_back(i, std::move(v));
    }
    std::erase_if(e_, [](const Entry& x) { return x.second == 0; });
}

SVec SVec::unit(int i, const Rational& v)
{
    SVec r;
    if (v != 0) r.e_.emplace_back(i, v);
    return r;
}

Rational SVec::get(int i) const
{
    auto it = std::lower_bound(e_.begin(), e_.end(), i,
                               [](const Entry& a, int k) { return a.first < k; });
    if (it != e_.end() && it->first == i) return it->second;
    return 0;
}

void SVec::axpy(const Rational& a, const SVec& x)
{
    if (a == 0 || x.e_.empty()) return;
    std::vector<Entry> out;
    out.reserve(e_.size() + x.e_.size());
    auto p = e_.begin();
    auto q = x.e_.begin();
    while (p != e_.end() || q != x.e_.end()) {
        if (q == x.e_.end() || (p != e_.end() && p->first < q->first)) {
            out.push_back(std::move(*p++));
        } else if (p == e_.end() || q->first < p->first) {
            out.emplace_back(q->first, a * q->second);
            ++q;
        } else {
            Rational v = p->second + a * q->second;
            if (v != 0) out.emplace_back(p->first, std::move(v));
            ++p;
            ++q;
        }
    }
    e_ = std::move(out);
}

SVec SVec::scaled(const Rational& a) const
{
    SVec r;
    if (a == 0) return r;
    r.e_.reserve(e_.size());
    for (const auto& [i, v] : e_) r.e_.emplace_back(i, a * v);
    return r;
}

Rational SVec::dot(const SVec& o) const
{
    Rational s = 0;
    auto p = e_.begin();
    auto q = o.e_.begin();
    while (p != e_.end() && q != o.e_.end()) {
        if (p->first < q->first)
            ++p;
        else if (q->first < p->first)
            ++q;
        else
            s += (p++)->second * (q++)->second;
    }
    return s;
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.cols_[i] = SVec::unit(static_cast<int>(i));
    return m;
}

Matrix Matrix::from_dense(const std::vector<std::vector<Rational>>& rows)
{
    std::size_t r = rows.size();
    std::size_t c = r ? rows[0].size() : 0;
    std::vector<std::tuple<int, int, Rational>> t;
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("ragged dense matrix");
        for (std::size_t j = 0; j < c; ++j)
            if (rows[i][j] != 0) t.emplace_back(static_cast<int>(i), static_cast<int>(j), rows[i][j]);
    }
    return from_triplets(r, c, t);
}

Matrix Matrix::from_triplets(std::size_t rows, std::size_t cols,
                             const std::vector<std::tuple<int, int, Rational>>& t)
{
    std::vector<std::vector<SVec::Entry>> buckets(cols);
    for (const auto& [i, j, v] : t) {
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= rows || static_cast<std::size_t>(j) >= cols)
            throw std::out_of_range("matrix entry out of range");
        buckets[j].emplace_back(i, v);
    }
    Matrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) m.cols_[j] = SVec(std::move(buckets[j]));
    return m;
}

Matrix Matrix::from_columns(std::size_t rows, std::vector<SVec> cols)
{
    Matrix m;
    m.rows_ = rows;
    for (const auto& c : cols)
        if (!c.empty() && static_cast<std::size_t>(c.entries().back().first) >= rows)
            throw std::out_of_range("column entry out of range");
    m.cols_ = std::move(cols);
    return m;
}

void Matrix::set_col(std::size_t j, SVec v)
{
    if (!v.empty() && static_cast<std::size_t>(v.entries().back().first) >= rows_)
        throw std::out_of_range("column entry out of range");
    cols_.at(j) = std::move(v);
}

void Matrix::add_to(std::size_t i, std::size_t j, const Rational& v)
{
    if (i >= rows_ || j >= cols_.size()) throw std::out_of_range("matrix entry out of range");
    cols_[j].axpy(1, SVec::unit(static_cast<int>(i), v));
}

std::size_t Matrix::nnz() const
{
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.nnz();
    return n;
}

bool Matrix::is_zero() const
{
    return std::all_of(cols_.begin(), cols_.end(), [](const SVec& c) { return c.empty(); });
}

SVec Matrix::operator*(const SVec& v) const
{
    std::unordered_map<int, Rational> acc;
    for (const auto& [k, b] : v.entries()) {
        if (static_cast<std::size_t>(k) >= cols_.size()) throw std::out_of_range("vector too long");
        for (const auto& [i, a] : cols_[k].entries()) acc[i] += a * b;
    }
    std::vector<SVec::Entry> out(acc.begin(), acc.end());
    return SVec(std::move(out));
}

Matrix Matrix::operator*(const Matrix& b) const
{
    if (cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    Matrix r(rows_, b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) r.cols_[j] = (*this) * b.cols_[j];
    return r;
}

Matrix Matrix::operator+(const Matrix& b) const
{
    if (rows_ != b.rows_ || cols() != b.cols()) throw std::invalid_argument("matrix sum shape mismatch");
    Matrix r = *this;
    for (std::size_t j = 0; j < cols(); ++j) r.cols_[j].axpy(1, b.cols_[j]);
    return r;
}

Matrix Matrix::operator-(const Matrix& b) const
{
    if (rows_ != b.rows_ || cols() != b.cols()) throw std::invalid_argument("matrix difference shape mismatch");
    Matrix r = *this;
    for (std::size_t j = 0; j < cols(); ++j) r.cols_[j].axpy(-1, b.cols_[j]);
    return r;
}

Matrix Matrix::operator-() const { return scaled(-1); }

Matrix Matrix::scaled(const Rational& a) const
{
    Matrix r(rows_, cols());
    for (std::size_t j = 0; j < cols(); ++j) r.cols_[j] = cols_[j].scaled(a);
    return r;
}

Matrix Matrix::transpose() const
{
    std::vector<std::vector<SVec::Entry>> buckets(rows_);
    for (std::size_t j = 0; j < cols(); ++j)
        for (const auto& [i, v] : cols_[j].entries()) buckets[i].emplace_back(static_cast<int>(j), v);
    Matrix r(cols(), rows_);
    for (std::size_t i = 0; i < rows_; ++i) r.cols_[i] = SVec(std::move(buckets[i]));
    return r;
}

Matrix Matrix::select_columns(const std::vector<int>& idx) const
{
    Matrix r(rows_, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r.cols_[k] = cols_.at(idx[k]);
    return r;
}

Matrix Matrix::select_rows(const std::vector<int>& idx) const
{
    std::unordered_map<int, std::vector<int>> where;
    for (std::size_t k = 0; k < idx.size(); ++k) where[idx[k]].push_back(static_cast<int>(k));
    Matrix r(idx.size(), cols());
    for (std::size_t j = 0; j < cols(); ++j) {
        std::vector<SVec::Entry> out;
        for (const auto& [i, v] : cols_[j].entries()) {
            auto it = where.find(i);
            if (it == where.end()) continue;
            for (int k : it->second) out.emplace_back(k, v);
        }
        r.cols_[j] = SVec(std::move(out));
    }
    return r;
}

Matrix Matrix::hstack(const Matrix& b) const
{
    if (rows_ != b.rows_) throw std::invalid_argument("hstack row mismatch");
    Matrix r = *this;
    r.cols_.insert(r.cols_.end(), b.cols_.begin(), b.cols_.end());
    return r;
}

Matrix Matrix::vstack(const Matrix& b) const
{
    if (cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
    Matrix r(rows_ + b.rows_, cols());
    for (std::size_t j = 0; j < cols(); ++j) {
        std::vector<SVec::Entry> out = cols_[j].entries();
        for (const auto& [i, v] : b.cols_[j].entries()) out.emplace_back(i + static_cast<int>(rows_), v);
        r.cols_[j] = SVec(std::move(out));
    }
    return r;
}

std::vector<std::tuple<int, int, Rational>> Matrix::entries() const
{
    std::vector<std::tuple<int, int, Rational>> out;
    for (std::size_t j = 0; j < cols(); ++j)
        for (const auto& [i, v] : cols_[j].entries()) out.emplace_back(i, static_cast<int>(j), v);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    return out;
}

std::vector<std::vector<Rational>> Matrix::dense() const
{
    std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols(), 0));
    for (std::size_t j = 0; j < cols(); ++j)
        for (const auto& [i, v] : cols_[j].entries()) d[i][j] = v;
    return d;
}

namespace {

using IRow = std::vector<std::pair<int, mpz_class>>;

IRow primitive(const SVec& v)
{
    mpz_class l = 1;
    for (const auto& [i, q] : v.entries()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    IRow r;
    r.reserve(v.nnz());
    mpz_class g = 0;
    for (const auto& [i, q] : v.entries()) {
        mpz_class x = q.get_num() * (l / q.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        r.emplace_back(i, std::move(x));
    }
    if (g > 1)
        for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
    return r;
}

void make_primitive(IRow& r)
{
    mpz_class g = 0;
    for (const auto& e : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) return;
    }
    if (g > 1)
        for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

const mpz_class* entry_at(const IRow& r, int col)
{
    auto it = std::lower_bound(r.begin(), r.end(), col,
                               [](const auto& a, int k) { return a.first < k; });
    if (it != r.end() && it->first == col) return &it->second;
    return nullptr;
}

// r <- p*r - a*piv where p = piv[col], a = r[col]; clears column col of r.
void eliminate(IRow& r, const IRow& piv, int col)
{
    const mpz_class* ap = entry_at(r, col);
    if (!ap) return;
    mpz_class a = *ap;
    mpz_class p = *entry_at(piv, col);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    a /= g;
    p /= g;
    IRow out;
    out.reserve(r.size() + piv.size());
    auto x = r.begin();
    auto y = piv.begin();
    while (x != r.end() || y != piv.end()) {
        if (y == piv.end() || (x != r.end() && x->first < y->first)) {
            out.emplace_back(x->first, p * x->second);
            ++x;
        } else if (x == r.end() || y->first < x->first) {
            out.emplace_back(y->first, -a * y->second);
            ++y;
        } else {
            mpz_class v = p * x->second - a * y->second;
            if (v != 0) out.emplace_back(x->first, std::move(v));
            ++x;
            ++y;
        }
    }
    make_primitive(out);
    r = std::move(out);
}

}  // namespace

RowEchelon rref(const Matrix& m)
{
    Matrix t = m.transpose();
    std::vector<IRow> rows(t.cols());
    std::map<int, std::set<int>> by_lead;
    for (std::size_t i = 0; i < t.cols(); ++i) {
        rows[i] = primitive(t.col(i));
        if (!rows[i].empty()) by_lead[rows[i].front().first].insert(static_cast<int>(i));
    }
    std::vector<int> piv_rows;
    std::vector<int> piv_cols;
    while (!by_lead.empty()) {
        auto node = by_lead.extract(by_lead.begin());
        int col = node.key();
        std::set<int>& members = node.mapped();
        int pr = *members.begin();
        for (auto it = std::next(members.begin()); it != members.end(); ++it) {
            int r = *it;
            eliminate(rows[r], rows[pr], col);
            if (!rows[r].empty()) by_lead[rows[r].front().first].insert(r);
        }
        piv_rows.push_back(pr);
        piv_cols.push_back(col);
    }
    for (std::size_t k = piv_rows.size(); k-- > 0;)
        for (std::size_t l = 0; l < k; ++l) eliminate(rows[piv_rows[l]], rows[piv_rows[k]], piv_cols[k]);

    RowEchelon e;
    e.cols = m.cols();
    e.pivots = piv_cols;
    for (std::size_t k = 0; k < piv_rows.size(); ++k) {
        const IRow& r = rows[piv_rows[k]];
        Rational lead(*entry_at(r, piv_cols[k]));
        std::vector<SVec::Entry> out;
        out.reserve(r.size());
        for (const auto& [j, v] : r) {
            Rational q(v);
            q /= lead;
            out.emplace_back(j, std::move(q));
        }
        e.rows.emplace_back(std::move(out));
    }
    return e;
}

std::size_t rank(const Matrix& m)
{
    if (m.rows() == 0 || m.cols() == 0) return 0;
    return rref(m).pivots.size();
}

Subspace kernel_basis(const Matrix& m)
{
    RowEchelon e = rref(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (int p : e.pivots) is_pivot[p] = 1;
    std::vector<std::vector<SVec::Entry>> cols;
    std::vector<int> free_index(m.cols(), -1);
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) {
            free_index[j] = static_cast<int>(cols.size());
            cols.push_back({{static_cast<int>(j), Rational(1)}});
        }
    for (std::size_t k = 0; k < e.rows.size(); ++k)
        for (const auto& [j, v] : e.rows[k].entries())
            if (free_index[j] >= 0) cols[free_index[j]].emplace_back(e.pivots[k], -v);
    std::vector<SVec> basis;
    basis.reserve(cols.size());
    for (auto& c : cols) basis.emplace_back(std::move(c));
    return {m.cols(), Matrix::from_columns(m.cols(), std::move(basis))};
}

Subspace image_basis(const Matrix& m)
{
    RowEchelon e = rref(m);
    return {m.rows(), m.select_columns(e.pivots)};
}

std::pair<Matrix, Matrix> quotient(std::size_t ambient_dim, const Subspace& sub)
{
    if (sub.ambient_dim != ambient_dim || sub.basis.rows() != ambient_dim)
        throw std::invalid_argument("quotient: ambient dimension mismatch");
    RowEchelon e = rref(sub.basis.transpose());
    if (e.pivots.size() != sub.basis.cols()) throw std::invalid_argument("quotient: dependent basis");
    std::vector<char> is_pivot(ambient_dim, 0);
    for (int p : e.pivots) is_pivot[p] = 1;
    std::vector<int> free_index(ambient_dim, -1);
    std::vector<SVec> section;
    for (std::size_t j = 0; j < ambient_dim; ++j)
        if (!is_pivot[j]) {
            free_index[j] = static_cast<int>(section.size());
            section.push_back(SVec::unit(static_cast<int>(j)));
        }
    std::size_t qdim = section.size();
    std::vector<std::tuple<int, int, Rational>> t;
    for (std::size_t j = 0; j < ambient_dim; ++j)
        if (free_index[j] >= 0) t.emplace_back(free_index[j], static_cast<int>(j), Rational(1));
    for (std::size_t k = 0; k < e.rows.size(); ++k)
        for (const auto& [j, v] : e.rows[k].entries())
            if (free_index[j] >= 0) t.emplace_back(free_index[j], e.pivots[k], -v);
    return {Matrix::from_triplets(qdim, ambient_dim, t), Matrix::from_columns(ambient_dim, std::move(section))};
}

Matrix kronecker(const Matrix& a, const Matrix& b)
{
    std::size_t br = b.rows();
    std::size_t bc = b.cols();
    Matrix r(a.rows() * br, a.cols() * bc);
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t jb = 0; jb < bc; ++jb) {
            std::vector<SVec::Entry> out;
            for (const auto& [ia, va] : a.col(ja).entries())
                for (const auto& [ib, vb] : b.col(jb).entries())
                    out.emplace_back(static_cast<int>(ia * br + ib), va * vb);
            r.set_col(ja * bc + jb, SVec(std::move(out)));
        }
    return r;
}

std::optional<Matrix> solve(const Matrix& m, const Matrix& rhs)
{
    if (m.rows() != rhs.rows()) throw std::invalid_argument("solve: row mismatch");
    std::size_t n = m.cols();
    RowEchelon e = rref(m.hstack(rhs));
    std::vector<std::vector<SVec::Entry>> sol(rhs.cols());
    for (std::size_t k = 0; k < e.rows.size(); ++k) {
        int p = e.pivots[k];
        if (static_cast<std::size_t>(p) >= n) return std::nullopt;
        for (const auto& [j, v] : e.rows[k].entries())
            if (static_cast<std::size_t>(j) >= n) sol[j - n].emplace_back(p, v);
    }
    std::vector<SVec> cols;
    cols.reserve(sol.size());
    for (auto& s : sol) cols.emplace_back(std::move(s));
    return Matrix::from_columns(n, std::move(cols));
}

Subspace span(const Matrix& generators) { return image_basis(generators); }

Subspace subspace_sum(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim != b.ambient_dim) throw std::invalid_argument("sum: ambient mismatch");
    return {a.ambient_dim, image_basis(a.basis.hstack(b.basis)).basis};
}

Subspace intersection(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim != b.ambient_dim) throw std::invalid_argument("intersection: ambient mismatch");
    Subspace k = kernel_basis(a.basis.hstack(-b.basis));
    std::vector<int> top(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) top[i] = static_cast<int>(i);
    Matrix coeffs = k.basis.select_rows(top);
    return {a.ambient_dim, image_basis(a.basis * coeffs).basis};
}

bool contains(const Subspace& big, const Subspace& small)
{
    if (small.dim() == 0) return true;
    return solve(big.basis, small.basis).has_value();
}

bool contains(const Subspace& big, const SVec& v)
{
    return solve(big.basis, Matrix::from_columns(big.ambient_dim, {v})).has_value();
}

bool same_subspace(const Subspace& a, const Subspace& b)
{
    return a.dim() == b.dim() && contains(a, b);
}

}  // namespace operadia
