#include "operadia/cobar.hpp"
#include "random_objects.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

using namespace operadia;
using namespace testing_util;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;
};

// Each check runs once; a pass needs both the verdict and the time limit.
bool criterion(int n, const std::string& name, double limit_s, const std::function<Outcome()>& body)
{
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.ok && s < limit_s;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", s, limit_s);
    std::cout << (pass ? "PASS" : "FAIL") << " " << n << " " << name << " (" << timing << ")";
    if (!o.note.empty()) std::cout << " " << o.note;
    std::cout << std::endl;
    return pass;
}

Outcome fail_if(bool bad, std::string note, Outcome o)
{
    if (bad && o.ok) return {false, std::move(note)};
    return o;
}

KeyMap random_elem_map(std::mt19937& rng, const Seq& a, const Seq& b, int p)
{
    std::vector<Comb> img(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j)
            if (b.ar[j] == a.ar[i] && b.deg[j] == a.deg[i] + p) add_term(img[i], {j}, small_rational(rng));
    return [img](const Key& k) { return img[k.at(0)]; };
}

Seq random_seq(std::mt19937& rng, int size)
{
    Seq s;
    for (int i = 0; i < size; ++i)
        s.add(1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 5) - 2, 0, "e" + std::to_string(i));
    return s;
}

Outcome sign_rules()
{
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> deg(-3, 3);
    int instances = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto sp = [&] { return random_space(rng, -3, 3, 3); };
        int p = deg(rng), q = deg(rng), r = deg(rng), s = deg(rng);
        GradedSpace x0 = sp(), x1 = sp(), x2 = sp(), y0 = sp(), y1 = sp(), y2 = sp();

        GradedMap f = random_map(rng, x1, x2, p), fp = random_map(rng, x0, x1, r);
        GradedMap g = random_map(rng, y1, y2, q), gp = random_map(rng, y0, y1, s);
        if (!(compose(tensor_map(f, g), tensor_map(fp, gp)) ==
              scale(tensor_map(compose(f, fp), compose(g, gp)), koszul_sign({{q, r}}))))
            return {false, "tensor interchange"};

        GradedMap hf = random_map(rng, x0, x1, p), hfp = random_map(rng, x1, x2, r);
        GradedMap hg = random_map(rng, y1, y2, q), hgp = random_map(rng, y0, y1, s);
        if (!(compose(hom_pairing(hf, hg), hom_pairing(hfp, hgp)) ==
              scale(hom_pairing(compose(hfp, hf), compose(hg, hgp)), koszul_sign({{p, r}, {p, s}}))))
            return {false, "hom interchange"};

        GradedSpace a = sp(), ap = sp(), b = sp(), bp = sp(), c = sp(), cp = sp();
        GradedMap ff = random_map(rng, a, ap, p), gg = random_map(rng, b, bp, q), hh = random_map(rng, c, cp, r);
        GradedMap left = compose(hom_pairing(ff, hom_pairing(gg, hh)), curry(ap, bp, c));
        GradedMap right = compose(curry(a, b, cp), hom_pairing(tensor_map(ff, gg), hh));
        if (!(left == scale(right, koszul_sign({{p, q}})))) return {false, "currying"};

        GradedSpace x = random_space(rng, -1, 1, 2);
        Seq m = random_seq(rng, 4), n = random_seq(rng, 4), l = random_seq(rng, 4);
        int pc = static_cast<int>(rng() % 3) - 1, qc = static_cast<int>(rng() % 3) - 1;
        KeyMap fm = random_elem_map(rng, m, n, pc), gm = random_elem_map(rng, n, l, qc);
        KeyMap gf = [gm, fm](const Key& k) { return operadia::apply(gm, fm(k)); };
        Cotensor xm(x, {m}, 2, 10), xn(x, {n}, 2, 10), xl(x, {l}, 2, 10);
        GradedMap lhs = compose(cotensor_contra(xn, xm, pc, fm), cotensor_contra(xl, xn, qc, gm));
        if (!(lhs == scale(cotensor_contra(xl, xm, pc + qc, gf), koszul_sign({{pc, qc}}))))
            return {false, "X^f X^g"};
        ++instances;
    }
    return {instances >= 50, std::to_string(instances) + " instances"};
}

Outcome coradical()
{
    Coperad q = qx_coperad({1, 8});
    Filtration f = coradical_filtration(q, 8);
    std::string dims;
    for (std::size_t n = 0; n <= 8; ++n) {
        dims += (n ? "," : "") + std::to_string(f.at(n).dim());
        if (f.at(n).dim() != n + 1) return {false, "dims " + dims};
    }
    return {true, "dims " + dims};
}

Outcome bar_curvature()
{
    Coperad b = bar(as_planar({4, 4}), {4, 4});
    Report r = validate_curved_coperad(b);
    return {r.ok(), std::to_string(b.seq.size()) + " trees, " + std::to_string(r.checks.size()) + " checks"};
}

Outcome bar_dual_square_zero()
{
    Truncation t1{1, 4}, t2{3, 3};
    Operad a = bar_dual(qx_coperad(t1), t1);
    Operad b = bar_dual(bar(as_planar(t2), t2), t2);
    bool ok = (a.d.mat * a.d.mat).is_zero() && (b.d.mat * b.d.mat).is_zero();
    return {ok, "dims " + std::to_string(a.seq.size()) + ", " + std::to_string(b.seq.size())};
}

Outcome twisting()
{
    Truncation t1{1, 3}, t2{3, 3};
    Coperad q1 = qx_coperad(t1), q2 = bar(as_planar(t2), t2);
    Operad p1 = bar_dual(q1, t1), p2 = bar_dual(q2, t2);
    bool ok = check_twisting(canonical_alpha(q1, p1).alpha, q1, p1).is_zero() &&
              check_twisting(canonical_alpha(q2, p2).alpha, q2, p2).is_zero();
    return {ok, ""};
}

Outcome cobar_levels()
{
    Truncation t{1, 4};
    Coperad q = qx_coperad(t);
    Operad p = bar_dual(q, t);
    TwistingMorphism a = canonical_alpha(q, p);
    int levels = 0;
    for (const auto& v : {onedim_cogebra(p), twodim_cogebra(p)}) {
        CobarAlgebra c = cobar(v, q, a, 4);
        std::vector<SquareZeroReport> curv = cobar_curvature(c);
        for (std::size_t n = 0; n < curv.size(); ++n) {
            if (!curv[n].generator_ok()) return {false, "d_b∘b + V^θ at level " + std::to_string(n)};
            if (!curv[n].square_ok()) return {false, "curvature at level " + std::to_string(n)};
            SquareZeroReport d = cobar_dual_square_zero(cobar_dual(c.tower.levels[n], p, a));
            if (!d.generator_ok() || !d.square_ok()) return {false, "b∘d_b at level " + std::to_string(n)};
            ++levels;
        }
    }
    return {levels == 10, std::to_string(levels) + " levels"};
}

ChainComplex complex_of(std::vector<int> degs, bool differential)
{
    GradedSpace x = GradedSpace::from_degrees(std::move(degs));
    Matrix d(x.dim(), x.dim());
    if (differential) d.add_to(1, 0, 1);
    return ChainComplex(x, GradedMap(x, x, -1, d));
}

Outcome free_completeness()
{
    int compared = 0;
    for (const ChainComplex& x : {complex_of({0}, false), complex_of({0, 0}, false), complex_of({0, -1}, true)}) {
        Coperad q = qx_coperad({1, 5});
        FreeQAlgebra f = free_algebra_coperad(q, x);
        Filtration fil = coradical_filtration(q, 5);
        RadicalCofiltration r = radical_cofiltration(f.algebra, 4);
        AlgebraTower tower = free_tower(f, 4);
        for (int n = 0; n <= 4; ++n) {
            Subspace in = n == 0 ? topology_stage(f.algebra, fil, 0) : r.ideals[static_cast<std::size_t>(n)];
            Subspace ann = annihilator(f.xq, fil.at(static_cast<std::size_t>(n)));
            if (subspace_grading(f.algebra.space, in).dims() != subspace_grading(f.algebra.space, ann).dims())
                return {false, "I^" + std::to_string(n) + " dims"};
            if (!same_subspace(in, ann)) return {false, "I^" + std::to_string(n) + " differs from X^{Q/F_nQ}"};
            QuotientAlgebra fn = quotient_algebra(f.algebra, in);
            if (fn.algebra.space.dims() != tower.levels[static_cast<std::size_t>(n)].space.dims())
                return {false, "F^" + std::to_string(n) + " dims"};
            if (n > 0 && r.quotients.levels[static_cast<std::size_t>(n)].space.dims() != fn.algebra.space.dims())
                return {false, "radical cofiltration level " + std::to_string(n)};
            ++compared;
        }
    }
    return {compared == 15, std::to_string(compared) + " stages"};
}

Outcome counterexample()
{
    CounterexampleReport r = counterexample_run(8, 1, 100);
    bool ok = r.unit_ok && r.associativity_ok && r.char_poly_monomial && r.line_in_intersection && !r.phi_injective;
    return {ok, "dim " + std::to_string(r.dim) + ", I^∞ dim " + std::to_string(r.infinity_ideal_dim)};
}

Outcome homotopy_identities()
{
    Truncation t{1, 3};
    Coperad q = qx_coperad(t);
    Operad p = bar_dual(q, t);
    CobarResolution r = unit_resolution(onedim_cogebra(p), q);
    TrustWindow w = trust_window(p.trunc, -1000, 1000);
    HomotopyReport h = verify_homotopy_identities(r, w);
    Outcome o{h.ok(), "K dim " + std::to_string(r.kernel.dim())};
    o = fail_if(!h.first_residual.is_zero(), "(D₁+D_{2,u})H + H(D₁+D_{2,u}) ≠ Id_K", o);
    return fail_if(!h.second_residual.is_zero(), "(D₃+D₄)H + H(D₃+D₄) ≠ 0", o);
}

Outcome acyclicity()
{
    Truncation t{1, 4};
    Coperad q = qx_coperad(t);
    Operad p = bar_dual(q, t);
    std::string note;
    for (const auto& v : {onedim_cogebra(p), twodim_cogebra(p)}) {
        CobarResolution r = unit_resolution(v, q);
        AcyclicityReport a = verify_acyclicity(r, trust_window(p.trunc, -2, 2));
        if (!a.unit_quasi_iso) return {false, "j is not a quasi-isomorphism"};
        if (!a.ok()) return {false, "H_*(K) ≠ 0"};
        note += (note.empty() ? "K dims " : ", ") + std::to_string(r.kernel.dim());
    }
    return {true, note};
}

std::string run_cli(const std::string& args)
{
    std::string cmd = std::string(OPERADIA_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + cmd);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int rc = pclose(pipe);
    return std::to_string(rc) + "\n" + out;
}

Outcome determinism()
{
    std::vector<std::string> commands{
        "validate builtin:bar-as",
        "bar builtin:as-planar --max-arity 3 --max-weight 3",
        "bardual builtin:qx-coperad",
        "cobar builtin:twodim-cogebra-with-differential --coperad builtin:qx-coperad",
        "resolve builtin:onedim-cogebra --coperad builtin:qx-coperad --planar --check-acyclic --window -2:2",
        "coradical builtin:qx-coperad --max-weight 5",
        "homology builtin:twodim-cogebra-with-differential",
        "counterexample --size 8",
        "export builtin:bar-as --format text",
    };
    for (const std::string& c : commands) {
        std::string a = run_cli(c), b = run_cli(c);
        if (a != b) return {false, "differs: " + c};
        if (a.rfind("0\n", 0) != 0) return {false, "nonzero exit: " + c};
    }
    return {true, std::to_string(commands.size()) + " commands"};
}

}  // namespace

int main()
{
    int failed = 0;
    failed += !criterion(1, "sign rules", 10, sign_rules);
    failed += !criterion(2, "coradical filtration of Q[X]", 1, coradical);
    failed += !criterion(3, "bar curvature", 60, bar_curvature);
    failed += !criterion(4, "bar-dual square zero", 60, bar_dual_square_zero);
    failed += !criterion(5, "twisting residual", 30, twisting);
    failed += !criterion(6, "cobar curvature and cobar-dual square zero", 60, cobar_levels);
    failed += !criterion(7, "free-algebra completeness", 10, free_completeness);
    failed += !criterion(8, "counterexample N=8", 10, counterexample);
    failed += !criterion(9, "homotopy identities", 120, homotopy_identities);
    failed += !criterion(10, "acyclicity and unit quasi-isomorphism", 300, acyclicity);
    failed += !criterion(11, "CLI determinism", 120, determinism);
    return failed == 0 ? 0 : 1;
}
