#include "operadia/io.hpp"

#include <sstream>
#include <tuple>

namespace operadia::io {

namespace {

template <class T>
T get(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput(std::string("field \"") + key + "\": " + e.what());
    }
}

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

Json key_json(const Key& k) { return Json(std::vector<int>(k.begin(), k.end())); }

Key key_from_json(const Json& j)
{
    if (!j.is_array()) throw MalformedInput("key must be an array");
    return j.get<Key>();
}

Json comb_json(const Comb& c)
{
    Json out = Json::array();
    for (const auto& [k, v] : c) out.push_back({key_json(k), to_json(v)});
    return out;
}

Comb comb_from_json(const Json& j)
{
    Comb c;
    for (const Json& e : j) add_term(c, key_from_json(e.at(0)), rational_from_json(e.at(1)));
    return c;
}

// Columns indexed by `src` keys or plain indices, rows by plain indices or `tgt` keys.
Json keyed_entries(const Matrix& m, const KeyBasis* src, const KeyBasis* tgt)
{
    Json out = Json::array();
    for (const auto& [i, j, v] : m.entries()) {
        Json row = tgt ? key_json(tgt->key(i)) : Json(i);
        Json col = src ? key_json(src->key(j)) : Json(j);
        out.push_back({col, row, to_json(v)});
    }
    return out;
}

int locate(const KeyBasis* b, const Json& j, std::size_t bound)
{
    int i = b ? b->find(key_from_json(j)) : j.get<int>();
    if (i < 0 || static_cast<std::size_t>(i) >= bound) throw MalformedInput("entry outside the basis: " + j.dump());
    return i;
}

Matrix keyed_matrix(const Json& j, std::size_t rows, std::size_t cols, const KeyBasis* src, const KeyBasis* tgt)
{
    std::vector<std::tuple<int, int, Rational>> t;
    for (const Json& e : j) t.emplace_back(locate(tgt, e.at(1), rows), locate(src, e.at(0), cols), rational_from_json(e.at(2)));
    return Matrix::from_triplets(rows, cols, t);
}

Json trees_json(const TreeBasis& tb)
{
    Json ts = Json::array();
    for (const Tree& t : tb.trees) ts.push_back(t);
    return {{"labels", to_json(tb.labels)}, {"trees", ts}};
}

std::shared_ptr<const TreeBasis> trees_from_json(const Json& j, const Seq& seq)
{
    auto tb = std::make_shared<TreeBasis>();
    tb->labels = seq_from_json(field(j, "labels"));
    for (const Json& t : field(j, "trees")) tb->trees.push_back(t.get<Tree>());
    if (static_cast<int>(tb->trees.size()) != seq.size()) throw MalformedInput("tree list does not match the sequence");
    tb->seq = seq;
    for (std::size_t i = 0; i < tb->trees.size(); ++i) tb->index[tb->trees[i]] = static_cast<int>(i);
    tb->trivial = tb->find(Tree{-1});
    return tb;
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Matrix& m)
{
    Json e = Json::array();
    for (const auto& [i, j, v] : m.entries()) e.push_back({i, j, to_json(v)});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

Json to_json(const SVec& v)
{
    Json e = Json::array();
    for (const auto& [i, x] : v.entries()) e.push_back({i, to_json(x)});
    return e;
}

Json to_json(const GradedSpace& x)
{
    Json dims = Json::object();
    for (const auto& [d, n] : x.dims()) dims[std::to_string(d)] = n;
    Json wts = Json::array();
    for (std::size_t i = 0; i < x.dim(); ++i) wts.push_back(x.weight(i));
    Json labels = Json::array();
    for (std::size_t i = 0; i < x.dim(); ++i) labels.push_back(i < x.labels.size() ? x.labels[i] : "");
    return {{"dims", dims}, {"degrees", x.deg}, {"weights", wts}, {"labels", labels}};
}

Json to_json(const GradedMap& f)
{
    Json blocks = Json::object();
    for (const auto& [d, m] : f.blocks()) blocks[std::to_string(d)] = to_json(m);
    return {{"degree", f.degree}, {"source", to_json(f.src)}, {"target", to_json(f.tgt)}, {"blocks", blocks}};
}

Json to_json(const ChainComplex& c) { return {{"space", to_json(c.space)}, {"differential", to_json(c.d)}}; }

Json to_json(const Truncation& t)
{
    return {{"max_arity", t.max_arity}, {"max_weight", t.max_weight}, {"degree_lo", t.degree_lo}, {"degree_hi", t.degree_hi}};
}

Json to_json(const Seq& s)
{
    Json e = Json::array();
    for (int i = 0; i < s.size(); ++i)
        e.push_back({{"arity", s.ar[i]}, {"degree", s.deg[i]}, {"weight", s.wt[i]}, {"label", s.name[i]}});
    return {{"elements", e}};
}

Json to_json(const SymSeq& s)
{
    Json comps = Json::object();
    for (int n = 0; n <= s.seq.max_arity(); ++n) {
        auto idx = s.seq.in_arity(n);
        if (idx.empty()) continue;
        std::vector<int> degs;
        for (int i : idx) degs.push_back(s.seq.deg[i]);
        comps[std::to_string(n)] = to_json(GradedSpace::from_degrees(degs));
    }
    Json acts = Json::object();
    for (const auto& [n, ms] : s.actions) {
        Json a = Json::array();
        for (const Matrix& m : ms) a.push_back(to_json(m));
        acts[std::to_string(n)] = a;
    }
    return {{"max_arity", s.seq.max_arity()}, {"planar", s.planar}, {"seq", to_json(s.seq)}, {"components", comps},
            {"actions", acts}};
}

Json to_json(const Operad& p)
{
    Json partial = Json::object();
    for (int a = 0; a < p.seq.size(); ++a)
        for (int i = 1; i <= p.seq.ar[a]; ++i)
            for (int b = 0; b < p.seq.size(); ++b) {
                SVec v = p.partial(a, i, b);
                if (!v.empty())
                    partial[std::to_string(a) + "," + std::to_string(i) + "," + std::to_string(b)] = to_json(v);
            }
    Json out{{"seq", to_json(p.seq)}, {"unit", p.unit}, {"partial", partial}, {"differential", to_json(p.d)},
             {"truncation", to_json(p.trunc)}, {"planar", p.planar}};
    if (p.trees) out["trees"] = trees_json(*p.trees);
    return out;
}

Json to_json(const Coperad& q)
{
    Json w = Json::array();
    for (const Comb& c : q.w) w.push_back(comb_json(c));
    Json out{{"seq", to_json(q.seq)},   {"w", w},
             {"tau", to_json(q.tau)},   {"iota", to_json(q.iota)},
             {"theta", to_json(q.theta)}, {"differential", to_json(q.d)},
             {"truncation", to_json(q.trunc)}, {"planar", q.planar}};
    if (q.trees) out["trees"] = trees_json(*q.trees);
    return out;
}

Json to_json(const CogebraOverOperad& v)
{
    return {{"operad", to_json(v.p)},
            {"space", to_json(v.space)},
            {"differential", to_json(v.d)},
            {"coaction", keyed_entries(v.coaction.mat, nullptr, &v.vp)}};
}

Json to_json(const QAlgebra& a)
{
    return {{"coperad", to_json(a.q)},
            {"space", to_json(a.space)},
            {"differential", to_json(a.d)},
            {"action", keyed_entries(a.action.mat, &a.lq, nullptr)}};
}

Json to_json(const Report& r)
{
    Json checks = Json::array();
    for (const AxiomCheck& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    return {{"ok", r.ok()}, {"checks", checks}};
}

Json to_json(const CounterexampleReport& r)
{
    Json cp = Json::array();
    for (const Rational& c : r.char_poly) cp.push_back(to_json(c));
    Json wit = Json::array();
    for (std::size_t n = 0; n < r.witnesses.size(); ++n) wit.push_back({{"n", n + 1}, {"exact", bool(r.witnesses[n])}});
    return {{"size", r.size},
            {"dim", r.dim},
            {"instances", r.instances},
            {"unit", r.unit_ok},
            {"associativity", r.associativity_ok},
            {"presentation", r.presentation_ok},
            {"char_poly", cp},
            {"char_poly_monomial", r.char_poly_monomial},
            {"nilpotency_index", r.nilpotency_index},
            {"witnesses", wit},
            {"column_witness_exact", r.column_witness_exact},
            {"intersection_dim", r.intersection_dim},
            {"line_in_intersection", r.line_in_intersection},
            {"intersection_in_ker_plus_line", r.intersection_in_ker_plus_line},
            {"limit_in_ker_plus_line", r.limit_in_ker_plus_line},
            {"infinity_ideal_dim", r.infinity_ideal_dim},
            {"phi_injective", r.phi_injective},
            {"nilpotent_when_untruncated", r.nilpotent_when_untruncated},
            {"ok", r.ok()}};
}

Rational rational_from_json(const Json& j)
{
    try {
        if (j.is_number_integer()) return Rational(j.get<long>());
        return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        throw MalformedInput(std::string("bad rational: ") + e.what());
    }
}

Matrix matrix_from_json(const Json& j)
{
    auto rows = get<std::size_t>(j, "rows");
    auto cols = get<std::size_t>(j, "cols");
    std::vector<std::tuple<int, int, Rational>> t;
    for (const Json& e : field(j, "entries")) {
        int r = e.at(0).get<int>(), c = e.at(1).get<int>();
        if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= rows || static_cast<std::size_t>(c) >= cols)
            throw MalformedInput("matrix entry out of range");
        t.emplace_back(r, c, rational_from_json(e.at(2)));
    }
    return Matrix::from_triplets(rows, cols, t);
}

SVec svec_from_json(const Json& j)
{
    std::vector<SVec::Entry> e;
    for (const Json& x : j) e.emplace_back(x.at(0).get<int>(), rational_from_json(x.at(1)));
    return SVec(std::move(e));
}

GradedSpace space_from_json(const Json& j)
{
    if (j.contains("degrees")) {
        GradedSpace x = GradedSpace::from_degrees(get<std::vector<int>>(j, "degrees"));
        if (j.contains("weights")) x.wt = get<std::vector<int>>(j, "weights");
        if (j.contains("labels")) x.labels = get<std::vector<std::string>>(j, "labels");
        if ((!x.wt.empty() && x.wt.size() != x.dim()) || (!x.labels.empty() && x.labels.size() != x.dim()))
            throw MalformedInput("graded space fields disagree in length");
        return x;
    }
    std::map<int, std::size_t> dims;
    for (const auto& [d, n] : field(j, "dims").items()) dims[std::stoi(d)] = n.get<std::size_t>();
    return GradedSpace::from_dims(dims);
}

GradedMap map_from_json(const Json& j)
{
    GradedSpace s = space_from_json(field(j, "source"));
    GradedSpace t = space_from_json(field(j, "target"));
    int p = get<int>(j, "degree");
    std::map<int, Matrix> blocks;
    for (const auto& [d, m] : field(j, "blocks").items()) {
        int deg = std::stoi(d);
        Matrix b = matrix_from_json(m);
        if (b.cols() != s.indices_in_degree(deg).size() || b.rows() != t.indices_in_degree(deg + p).size())
            throw MalformedInput("block " + d + " has the wrong shape");
        blocks.emplace(deg, std::move(b));
    }
    return GradedMap::from_blocks(s, t, p, blocks);
}

ChainComplex complex_from_json(const Json& j)
{
    GradedSpace x = space_from_json(field(j, "space"));
    GradedMap d = map_from_json(field(j, "differential"));
    if (d.src.deg != x.deg || d.tgt.deg != x.deg) throw MalformedInput("differential does not act on the space");
    d.src = x;
    d.tgt = x;
    return ChainComplex(x, d);
}

Truncation truncation_from_json(const Json& j)
{
    Truncation t;
    t.max_arity = get<int>(j, "max_arity");
    t.max_weight = get<int>(j, "max_weight");
    if (j.contains("degree_lo")) t.degree_lo = get<int>(j, "degree_lo");
    if (j.contains("degree_hi")) t.degree_hi = get<int>(j, "degree_hi");
    return t;
}

Seq seq_from_json(const Json& j)
{
    Seq s;
    for (const Json& e : field(j, "elements"))
        s.add(get<int>(e, "arity"), get<int>(e, "degree"), get<int>(e, "weight"), get<std::string>(e, "label"));
    return s;
}

SymSeq symseq_from_json(const Json& j)
{
    SymSeq s;
    s.seq = seq_from_json(field(j, "seq"));
    s.planar = get<bool>(j, "planar");
    for (const auto& [n, ms] : field(j, "actions").items())
        for (const Json& m : ms) s.actions[std::stoi(n)].push_back(matrix_from_json(m));
    Truncation t;
    t.max_arity = get<int>(j, "max_arity");
    s.cert = ExactnessCert::full(t);
    return s;
}

Operad operad_from_json(const Json& j)
{
    Operad p;
    p.seq = seq_from_json(field(j, "seq"));
    p.unit = get<int>(j, "unit");
    p.planar = get<bool>(j, "planar");
    p.trunc = truncation_from_json(field(j, "truncation"));
    if (p.unit < 0 || p.unit >= p.seq.size()) throw MalformedInput("unit outside the basis");
    auto table = std::make_shared<std::map<std::tuple<int, int, int>, SVec>>();
    for (const auto& [k, v] : field(j, "partial").items()) {
        int a, i, b;
        char c1, c2;
        std::istringstream in(k);
        if (!(in >> a >> c1 >> i >> c2 >> b) || c1 != ',' || c2 != ',') throw MalformedInput("bad partial key " + k);
        (*table)[{a, i, b}] = svec_from_json(v);
    }
    p.partial = [table](int a, int i, int b) {
        auto it = table->find({a, i, b});
        return it == table->end() ? SVec() : it->second;
    };
    p.d = map_from_json(field(j, "differential"));
    p.d.src = p.d.tgt = p.space();
    if (j.contains("trees")) p.trees = trees_from_json(j.at("trees"), p.seq);
    return p;
}

Coperad coperad_from_json(const Json& j)
{
    Coperad q;
    q.seq = seq_from_json(field(j, "seq"));
    for (const Json& c : field(j, "w")) q.w.push_back(comb_from_json(c));
    if (static_cast<int>(q.w.size()) != q.seq.size()) throw MalformedInput("w must have one entry per element");
    q.tau = svec_from_json(field(j, "tau"));
    q.iota = svec_from_json(field(j, "iota"));
    q.theta = svec_from_json(field(j, "theta"));
    q.planar = get<bool>(j, "planar");
    q.trunc = truncation_from_json(field(j, "truncation"));
    q.d = map_from_json(field(j, "differential"));
    q.d.src = q.d.tgt = q.space();
    if (j.contains("trees")) q.trees = trees_from_json(j.at("trees"), q.seq);
    return q;
}

CogebraOverOperad cogebra_from_json(const Json& j)
{
    CogebraOverOperad v;
    v.p = operad_from_json(field(j, "operad"));
    v.space = space_from_json(field(j, "space"));
    v.d = map_from_json(field(j, "differential"));
    v.d.src = v.d.tgt = v.space;
    v.vp = v.cotensor({v.p.seq});
    Matrix m = keyed_matrix(field(j, "coaction"), v.vp.size(), v.space.dim(), nullptr, &v.vp);
    v.coaction = GradedMap(v.space, v.vp.space(), 0, m);
    return v;
}

QAlgebra qalgebra_from_json(const Json& j)
{
    QAlgebra a;
    a.q = coperad_from_json(field(j, "coperad"));
    a.space = space_from_json(field(j, "space"));
    a.d = map_from_json(field(j, "differential"));
    a.d.src = a.d.tgt = a.space;
    a.lq = a.cotensor({a.q.seq});
    Matrix m = keyed_matrix(field(j, "action"), a.space.dim(), a.lq.size(), &a.lq, nullptr);
    a.action = GradedMap(a.lq.space(), a.space, 0, m);
    return a;
}

Json tagged(const std::string& type, Json body)
{
    body["type"] = type;
    return body;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

bool is_scalar_array(const Json& j)
{
    if (!j.is_array()) return false;
    for (const Json& e : j)
        if (e.is_object()) return false;
    return true;
}

void render(const Json& j, int indent, std::ostringstream& out)
{
    std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() && !v.empty()) {
                out << pad << k << ":\n";
                render(v, indent + 2, out);
            } else if (v.is_array() && !is_scalar_array(v)) {
                out << pad << k << ":\n";
                render(v, indent + 2, out);
            } else {
                out << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
    } else if (j.is_array() && !is_scalar_array(j)) {
        for (const Json& e : j) {
            out << pad << "-\n";
            render(e, indent + 2, out);
        }
    } else {
        out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

}  // namespace

std::string render_text(const Json& j)
{
    std::ostringstream out;
    render(j, 0, out);
    return out.str();
}

}  // namespace operadia::io
