#include "operadia/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

using namespace operadia;
using io::Json;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::optional<int> max_arity;
    std::optional<int> max_weight;
    std::string degree_window;
    bool planar = false;
    std::string out;
    std::string format = "json";
};

std::pair<int, int> parse_window(const std::string& s)
{
    auto colon = s.find(':', s.empty() ? 0 : 1);
    if (colon == std::string::npos) throw InputError("window must be a:b, got " + s);
    try {
        int a = std::stoi(s.substr(0, colon));
        int b = std::stoi(s.substr(colon + 1));
        if (a > b) throw InputError("empty window " + s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw InputError("window must be a:b, got " + s);
    }
}

Truncation truncation(const Options& o, int default_arity)
{
    Truncation t;
    t.max_arity = o.max_arity.value_or(default_arity);
    t.max_weight = o.max_weight.value_or(4);
    if (!o.degree_window.empty()) std::tie(t.degree_lo, t.degree_hi) = parse_window(o.degree_window);
    if (t.max_arity < 1 || t.max_weight < 0) throw InputError("truncation must have arity >= 1 and weight >= 0");
    return t;
}

void check_truncation(const Options& o, const Truncation& t)
{
    if ((o.max_arity && *o.max_arity != t.max_arity) || (o.max_weight && *o.max_weight != t.max_weight))
        throw InputError("flags disagree with the truncation stored in the input");
    if (!o.degree_window.empty()) {
        auto [lo, hi] = parse_window(o.degree_window);
        if (lo != t.degree_lo || hi != t.degree_hi) throw InputError("degree window disagrees with the input");
    }
}

void guard_cells(std::size_t cells)
{
    std::size_t cap = 1000000;
    if (const char* env = std::getenv("OPERADIA_MAX_CELLS")) cap = std::strtoull(env, nullptr, 10);
    if (cells > cap)
        throw InputError("basis size " + std::to_string(cells) + " exceeds OPERADIA_MAX_CELLS=" + std::to_string(cap));
}

using Object = std::variant<Operad, Coperad, CogebraOverOperad, QAlgebra, SymSeq, ChainComplex>;

const char* type_name(const Object& x)
{
    static const char* names[] = {"operad", "coperad", "cogebra", "algebra", "symseq", "complex"};
    return names[x.index()];
}

Operad qx_dual(const Options& o)
{
    Truncation t = truncation(o, 1);
    t.max_arity = 1;
    return bar_dual(qx_coperad(t), t);
}

Object builtin(const std::string& name, const Options& o)
{
    if (name == "unit-operad") {
        Truncation t = truncation(o, 1);
        return unit_operad(t);
    }
    if (name == "as-planar") return as_planar(truncation(o, 4));
    if (name == "qx-coperad") {
        Truncation t = truncation(o, 1);
        t.max_arity = 1;
        return qx_coperad(t);
    }
    if (name == "bar-as") {
        Truncation t = truncation(o, 3);
        return bar(as_planar(t), t);
    }
    if (name == "onedim-cogebra") return onedim_cogebra(qx_dual(o));
    if (name == "twodim-cogebra-with-differential" || name == "twodim-cogebra") return twodim_cogebra(qx_dual(o));
    throw InputError("unknown builtin " + name);
}

std::string line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Object from_payload(const Json& j)
{
    std::string type = j.value("type", "");
    if (type == "operad") return io::operad_from_json(j);
    if (type == "coperad") return io::coperad_from_json(j);
    if (type == "cogebra") return io::cogebra_from_json(j);
    if (type == "algebra") return io::qalgebra_from_json(j);
    if (type == "symseq") return io::symseq_from_json(j);
    if (type == "complex") return io::complex_from_json(j);
    throw InputError("unknown object type \"" + type + "\"");
}

void check_object(const Options& o, const Object& x)
{
    std::visit(
        [&o](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Operad> || std::is_same_v<T, Coperad>) check_truncation(o, v.trunc);
            if constexpr (std::is_same_v<T, CogebraOverOperad>) check_truncation(o, v.p.trunc);
            if constexpr (std::is_same_v<T, QAlgebra>) check_truncation(o, v.q.trunc);
        },
        x);
}

// builtin:name, file.json, or file.json#name for a manifest entry.
Object load(const std::string& src, const Options& o)
{
    if (src.rfind("builtin:", 0) == 0) return builtin(src.substr(8), o);
    std::string path = src, entry;
    if (auto hash = src.find('#'); hash != std::string::npos) {
        path = src.substr(0, hash);
        entry = src.substr(hash + 1);
    }
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": parse error at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    Object x;
    if (j.contains("objects")) {
        if (j.value("format_version", "") != "1") throw InputError("manifest format_version must be \"1\"");
        const Json& objs = j.at("objects");
        if (objs.empty()) throw InputError("manifest has no objects");
        if (!entry.empty() && !objs.contains(entry)) throw InputError("manifest has no object " + entry);
        x = from_payload(entry.empty() ? objs.begin().value() : objs.at(entry));
        if (j.contains("truncation")) {
            Truncation t = io::truncation_from_json(j.at("truncation"));
            Options m;
            m.max_arity = t.max_arity;
            m.max_weight = t.max_weight;
            check_object(m, x);
        }
    } else {
        x = from_payload(j);
    }
    check_object(o, x);
    return x;
}

template <class T>
T expect(Object x, const std::string& what)
{
    if (auto* v = std::get_if<T>(&x)) return std::move(*v);
    throw InputError(what + " expected, got " + type_name(x));
}

void require_planar(const Options& o, bool planar)
{
    if (o.planar && !planar) throw InputError("--planar given for a symmetric input");
    if (!planar) throw InputError("this command supports planar inputs only");
}

Json dims_json(const GradedSpace& x)
{
    Json d = Json::object();
    for (const auto& [deg, n] : x.dims()) d[std::to_string(deg)] = n;
    return d;
}

Json homology_json(const std::map<int, std::size_t>& h)
{
    Json out = Json::object();
    for (const auto& [d, n] : h) out[std::to_string(d)] = n;
    return out;
}

int emit(const Options& o, const Json& j, bool ok)
{
    std::string text = o.format == "text" ? io::render_text(j) : io::dump(j);
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) throw InputError("cannot write " + o.out);
        f << text;
    }
    return ok ? 0 : 1;
}

int cmd_validate(const Options& o, const std::string& src)
{
    Object x = load(src, o);
    Report r;
    if (auto* p = std::get_if<Operad>(&x)) {
        guard_cells(static_cast<std::size_t>(p->seq.size()));
        r = validate_operad(*p);
    } else if (auto* q = std::get_if<Coperad>(&x)) {
        guard_cells(static_cast<std::size_t>(q->seq.size()));
        r = validate_curved_coperad(*q);
    } else if (auto* v = std::get_if<CogebraOverOperad>(&x)) {
        r = validate_cogebra(*v);
    } else if (auto* a = std::get_if<QAlgebra>(&x)) {
        r = validate_qalgebra(*a);
    } else if (auto* s = std::get_if<SymSeq>(&x)) {
        CoxeterReport c = validate_actions(*s);
        r.checks.push_back({"coxeter relations", c.ok, c.failure});
    } else {
        const auto& c = std::get<ChainComplex>(x);
        r.checks.push_back({"square-zero", (c.d.mat * c.d.mat).is_zero(), ""});
    }
    Json out = io::to_json(r);
    out["type"] = type_name(x);
    return emit(o, out, r.ok());
}

int cmd_bar(const Options& o, const std::string& src)
{
    Operad p = expect<Operad>(load(src, o), "operad");
    require_planar(o, p.planar);
    Truncation t = src.rfind("builtin:", 0) == 0 ? truncation(o, p.trunc.max_arity) : p.trunc;
    guard_cells(enumerate_trees(p.seq, t.max_arity, t.max_weight)->trees.size());
    Coperad b = bar(p, t);
    Report r = validate_curved_coperad(b);
    Json out{{"coperad", io::tagged("coperad", io::to_json(b))}, {"dims", dims_json(b.space())},
             {"validation", io::to_json(r)}};
    return emit(o, out, r.ok());
}

int cmd_bardual(const Options& o, const std::string& src)
{
    Coperad q = expect<Coperad>(load(src, o), "coperad");
    require_planar(o, q.planar);
    guard_cells(static_cast<std::size_t>(q.seq.size()));
    Operad p = bar_dual(q, q.trunc);
    bool sq = (p.d.mat * p.d.mat).is_zero();
    Json out{{"operad", io::tagged("operad", io::to_json(p))}, {"dims", dims_json(p.space())}, {"square_zero", sq}};
    return emit(o, out, sq);
}

struct Pair {
    CogebraOverOperad v;
    Coperad q;
};

Pair load_pair(const Options& o, const std::string& src, const std::string& coperad)
{
    if (coperad.empty()) throw InputError("--coperad is required");
    Pair r{expect<CogebraOverOperad>(load(src, o), "cogebra"), expect<Coperad>(load(coperad, o), "coperad")};
    require_planar(o, r.v.p.planar && r.q.planar);
    if (r.v.p.trunc.max_weight != r.q.trunc.max_weight)
        throw InputError("cogebra and coperad truncations disagree");
    return r;
}

int cmd_cobar(const Options& o, const std::string& src, const std::string& coperad)
{
    Pair in = load_pair(o, src, coperad);
    guard_cells(in.v.vp.size());
    TwistingMorphism a = canonical_alpha(in.q, in.v.p);
    CobarAlgebra c = cobar(in.v, in.q, a, in.q.trunc.max_weight);
    auto curv = cobar_curvature(c);
    Json levels = Json::array();
    bool ok = true;
    for (std::size_t n = 0; n < curv.size(); ++n) {
        const QAlgebra& lv = c.tower.levels[n];
        SquareZeroReport dual = cobar_dual_square_zero(cobar_dual(lv, in.v.p, a));
        bool l_ok = curv[n].generator_ok() && curv[n].square_ok() && dual.generator_ok() && dual.square_ok();
        ok = ok && l_ok;
        levels.push_back({{"level", n},
                          {"dims", dims_json(lv.space)},
                          {"curvature", curv[n].generator_ok()},
                          {"square_zero", curv[n].square_ok()},
                          {"cobar_dual_b_d", dual.generator_ok()},
                          {"cobar_dual_square_zero", dual.square_ok()}});
    }
    Json out{{"levels", levels}, {"algebra", io::tagged("algebra", io::to_json(c.algebra.algebra))}, {"ok", ok}};
    return emit(o, out, ok);
}

int cmd_resolve(const Options& o, const std::string& src, const std::string& coperad, bool acyclic,
                const std::string& window)
{
    Pair in = load_pair(o, src, coperad);
    int a = std::max({1, in.v.p.trunc.max_arity, in.q.seq.max_arity()});
    guard_cells(Cotensor(in.v.space, {in.v.p.seq, in.q.seq}, a * a, in.q.trunc.max_weight).size());
    auto [lo, hi] = parse_window(window.empty() ? "-2:2" : window);
    TrustWindow w = trust_window(in.v.p.trunc, lo, hi);
    CobarResolution r = unit_resolution(in.v, in.q);
    HomotopyReport h = verify_homotopy_identities(r, w);
    bool transported = transported_differential_agrees(r);
    Json stable = Json::array();
    bool all_stable = true;
    for (bool s : kernel_stability(r)) {
        stable.push_back(s);
        all_stable = all_stable && s;
    }
    bool ok = h.ok() && transported && all_stable;
    Json out{{"identities", h.ok() ? "pass" : "fail"},
             {"trust_window", {w.lo, w.hi}},
             {"transported_differential", transported},
             {"kernel_stable", stable},
             {"dims", {{"resolution", r.carrier.dim()}, {"kernel", r.kernel.dim()}, {"cogebra", in.v.space.dim()}}}};
    if (acyclic) {
        AcyclicityReport ar = verify_acyclicity(r, w);
        Json ranks = Json::object();
        for (const auto& [d, n] : ar.dh_ranks) ranks[std::to_string(d)] = n;
        out["homology"] = homology_json(ar.kernel_homology);
        out["homotopy_ranks"] = ranks;
        out["unit_quasi_iso"] = ar.unit_quasi_iso;
        out["left_inverse"] = ar.q_left_inverse;
        ok = ok && ar.ok();
    }
    out["ok"] = ok;
    return emit(o, out, ok);
}

int cmd_coradical(const Options& o, const std::string& src)
{
    Coperad q = expect<Coperad>(load(src, o), "coperad");
    guard_cells(static_cast<std::size_t>(q.seq.size()));
    Filtration f = coradical_filtration(q, q.trunc.max_weight);
    Json dims = Json::array();
    for (int n = 0; n <= q.trunc.max_weight; ++n) dims.push_back(f.at(static_cast<std::size_t>(n)).dim());
    Json out{{"dims", dims}, {"stabilized", f.stabilized}, {"locally_conilpotent", is_locally_conilpotent(q)}};
    return emit(o, out, true);
}

int cmd_homology(const Options& o, const std::string& src)
{
    Object x = load(src, o);
    ChainComplex c;
    if (auto* cc = std::get_if<ChainComplex>(&x)) c = *cc;
    else if (auto* v = std::get_if<CogebraOverOperad>(&x)) c = ChainComplex(v->space, v->d);
    else throw InputError(std::string("homology expects a complex or a cogebra, got ") + type_name(x));
    Json out{{"homology", homology_json(homology(c))}, {"dims", dims_json(c.space)}};
    return emit(o, out, true);
}

int cmd_export(const Options& o, const std::string& src)
{
    Object x = load(src, o);
    Json out = std::visit([](const auto& v) { return io::to_json(v); }, x);
    return emit(o, io::tagged(type_name(x), out), true);
}

int cmd_counterexample(const Options& o, int size, unsigned seed, int instances)
{
    if (size < 2) throw InputError("--size must be at least 2");
    guard_cells(static_cast<std::size_t>(size) * static_cast<std::size_t>(size + 1) / 2 + 1);
    CounterexampleReport r = counterexample_run(size, seed, instances);
    return emit(o, io::to_json(r), r.ok());
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact computations with operads, coperads and their (co)algebras"};
    app.require_subcommand(1);
    Options o;
    auto common = [&o](CLI::App* c) {
        c->add_option("--max-arity", o.max_arity, "Arity bound");
        c->add_option("--max-weight", o.max_weight, "Weight bound");
        c->add_option("--degree-window", o.degree_window, "Certified degrees a:b");
        c->add_flag("--planar", o.planar, "Require planar inputs");
        c->add_option("--out", o.out, "Write the report to a file");
        c->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    };
    std::string src, coperad, window;
    bool acyclic = false;
    int size = 8, instances = 100;
    unsigned seed = 1;

    auto* validate = app.add_subcommand("validate", "Run the validator for the input type");
    auto* barc = app.add_subcommand("bar", "Bar construction of an operad");
    auto* bardual = app.add_subcommand("bardual", "Bar† construction of a coperad");
    auto* cobarc = app.add_subcommand("cobar", "Cobar tower of a cogebra with curvature checks");
    auto* resolve = app.add_subcommand("resolve", "Cobar resolution with homotopy and acyclicity checks");
    auto* coradical = app.add_subcommand("coradical", "Dimensions of the coradical filtration");
    auto* homologyc = app.add_subcommand("homology", "Homology of a complex");
    auto* counter = app.add_subcommand("counterexample", "Non-complete algebra at finite size");
    auto* exportc = app.add_subcommand("export", "Write an object as JSON");
    for (auto* c : {exportc, validate, barc, bardual, cobarc, resolve, coradical, homologyc}) {
        common(c);
        c->add_option("input", src, "builtin:name, file.json or file.json#object")->required();
    }
    common(counter);
    for (auto* c : {cobarc, resolve}) c->add_option("--coperad", coperad, "Coperad Q with P = Bar†Q");
    resolve->add_flag("--check-acyclic", acyclic, "Compute H_*(K) and test the unit");
    resolve->add_option("--window", window, "Requested degrees a:b");
    counter->add_option("--size", size, "Matrix size N");
    counter->add_option("--seed", seed, "Random seed");
    counter->add_option("--instances", instances, "Random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*validate) return cmd_validate(o, src);
        if (*barc) return cmd_bar(o, src);
        if (*bardual) return cmd_bardual(o, src);
        if (*cobarc) return cmd_cobar(o, src, coperad);
        if (*resolve) return cmd_resolve(o, src, coperad, acyclic, window);
        if (*coradical) return cmd_coradical(o, src);
        if (*homologyc) return cmd_homology(o, src);
        if (*exportc) return cmd_export(o, src);
        if (*counter) return cmd_counterexample(o, size, seed, instances);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io::MalformedInput& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
