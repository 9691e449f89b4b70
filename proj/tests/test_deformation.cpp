#include "oracles.hpp"

#include "mhs/fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mhs;
namespace fx = mhs::fixtures;

namespace {

DeformationFamily family(int n, std::optional<Gauss> lambda, std::optional<Gauss> c = std::nullopt, int truncation = 6)
{
    auto fix = fx::h1_orbit();
    FamilyParams p;
    p.n = n;
    p.lambda = lambda;
    p.C = c;
    p.truncation = truncation;
    return build_family(fix.orbit, fix.u, fix.a, p);
}

ParamElement constant(const DeformationFamily& f, Gauss g) { return ParamElement::constant(f.ring, g); }

ParamElement lam_t(const DeformationFamily& f) { return f.Lam() * t_product(f.ring); }

ParamVector pv(const DeformationFamily& f, std::initializer_list<ParamElement> xs)
{
    (void)f;
    return ParamVector(xs);
}

bool every_term_has_lambda_and_t(const ParamElement& x)
{
    const auto& r = x.ring();
    for (const auto& [ex, c] : x.terms()) {
        bool lam = ex[r.slot({VarKind::Lambda, 0})] > 0 || ex[r.slot({VarKind::LambdaBar, 0})] > 0;
        bool t = false;
        for (int k = 1; k <= r.n; ++k)
            t = t || ex[r.slot({VarKind::T, k})] > 0 || ex[r.slot({VarKind::TBar, k})] > 0;
        if (!lam || !t)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("horizontal sections in the Deligne frame")
{
    auto fix = fx::h1_orbit();
    ParamRing ring{3, 6};
    auto fam = NilpotentFamily::pullback(fix.orbit.family.N[0], 3);
    auto u2 = horizontal_to_deligne(ring, fam, fix.u[1]);
    ParamElement zsum(ring);
    for (int k = 1; k <= 3; ++k)
        zsum += ParamElement::variable(ring, {VarKind::Z, k});
    CHECK(u2[1] == ParamElement::constant(ring, Gauss(1)));
    CHECK(u2[2] == Gauss(-1) * zsum);
    CHECK(u2[0].is_zero());
    CHECK(u2[3].is_zero());

    for (int j : {0, 2, 3}) {
        auto v = horizontal_to_deligne(ring, fam, fix.u[static_cast<std::size_t>(j)]);
        CHECK(v == constant_vector(ring, fix.u[static_cast<std::size_t>(j)]));
    }
}

TEST_CASE("xi of a transported vector is minus the transported N v")
{
    std::mt19937_64 rng(oracle::kDefaultSeed);
    auto fix = fx::h1_orbit();
    ParamRing ring{2, 6};
    auto fam = NilpotentFamily::pullback(fix.orbit.family.N[0], 2);
    for (int trial = 0; trial < 20; ++trial) {
        GVec v;
        for (int i = 0; i < 4; ++i)
            v.push_back(Gauss(oracle::random_rational(rng), oracle::random_rational(rng)));
        auto tv = horizontal_to_deligne(ring, fam, v);
        for (int k = 1; k <= 2; ++k) {
            ParamVector lhs;
            for (const auto& x : tv)
                lhs.push_back(x.xi(k));
            auto nv = horizontal_to_deligne(ring, fam, fam.N[static_cast<std::size_t>(k - 1)] * v);
            ParamVector rhs;
            for (const auto& x : nv)
                rhs.push_back(Gauss(-1) * x);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("frame at lambda = 0")
{
    auto f = family(1, Gauss(0));
    Gauss a = f.a;
    CHECK(a == fx::h1_orbit().a + Gauss(1));
    CHECK(f.w[0] == pv(f, {constant(f, 1), constant(f, 0), constant(f, 0), constant(f, 0)}));
    CHECK(f.w[1] == pv(f, {constant(f, 0), constant(f, 1), constant(f, a - Gauss(1)), constant(f, 0)}));
    CHECK(f.w[2] == pv(f, {constant(f, 0), constant(f, 0), constant(f, -1), constant(f, 0)}));
    CHECK(f.w[3] == pv(f, {constant(f, 0), constant(f, 0), constant(f, 0), constant(f, 1)}));
}

TEST_CASE("two-variable frame carries lambda t_1 t_2")
{
    auto f = family(2, std::nullopt);
    CHECK(f.w[2] == pv(f, {constant(f, 0), constant(f, 0), constant(f, -1), lam_t(f)}));
    CHECK(lam_t(f).str() == "t1*t2*lam");
}

TEST_CASE("conjugate frame in u-coordinates")
{
    auto f = family(1, std::nullopt);
    const auto& R = f.ring;
    auto lb_tb = ParamElement::variable(R, {VarKind::LambdaBar, 0}) * ParamElement::variable(R, {VarKind::TBar, 1});
    // conj w_3 = u_3 + conj(lam t) u_1
    auto w3b = f.conj_u(f.to_u(f.w[2]));
    CHECK(w3b == pv(f, {lb_tb, constant(f, 0), constant(f, 1), constant(f, 0)}));
    // conj w_4 = u_1
    CHECK(f.conj_u(f.to_u(f.w[3])) == pv(f, {constant(f, 1), constant(f, 0), constant(f, 0), constant(f, 0)}));
    // conjugation is an involution on the frame
    for (const auto& w : f.w)
        CHECK(f.conj_u(f.conj_u(f.to_u(w))) == f.to_u(w));
}

TEST_CASE("transversality identities hold exactly")
{
    for (int n : {1, 2, 3}) {
        INFO("n = " << n);
        CHECK(check_transversality(family(n, std::nullopt)).ok);
        CHECK(check_transversality(family(n, Gauss(Rational(1, 100)))).ok);
    }
}

TEST_CASE("dropping the lambda t term of w_3 breaks transversality")
{
    auto f = family(2, std::nullopt);
    f.w[2][3] = ParamElement(f.ring);
    auto v = check_transversality(f);
    CHECK_FALSE(v.ok);
    // the identity xi_k w_3 = lam T w_4 itself fails
    for (int k = 1; k <= 2; ++k) {
        auto c = f.frame_coordinates(f.xi(k, f.w[2]));
        CHECK_FALSE(c[3] == lam_t(f));
    }
}

TEST_CASE("orthogonality with the matched constant")
{
    auto f = family(1, std::nullopt);
    CHECK(check_orthogonality(f).ok);
    CHECK(check_orthogonality(family(3, std::nullopt)).ok);
}

TEST_CASE("orthogonality fails for a mismatched constant with a lambda t witness")
{
    auto f0 = family(1, std::nullopt);
    auto f = family(1, std::nullopt, f0.C + Gauss(1));
    auto v = check_orthogonality(f);
    CHECK_FALSE(v.ok);
    auto p12 = f.pair(f.to_u(f.w[0]), f.to_u(f.w[1]));
    CHECK_FALSE(p12.is_zero());
    CHECK(every_term_has_lambda_and_t(p12));
    // at lambda = 0 the cross terms vanish regardless of C
    CHECK(check_orthogonality(family(1, Gauss(0), f0.C + Gauss(1))).ok);
}

TEST_CASE("frame determinant at lambda = 0 is -1")
{
    auto f = family(1, Gauss(0));
    auto v = check_frame_independence(f, default_samples(1, {0.0}));
    CHECK(v.ok);
    CHECK(v.symbolic == constant(f, -1));
    for (auto d : v.values)
        CHECK(std::abs(d - std::complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("frame is independent for small lambda")
{
    auto f = family(1, Gauss(Rational(1, 1000)));
    auto v = check_frame_independence(f, default_samples(1, {0.0}, {1e-2}));
    CHECK(v.ok);
    for (auto d : v.values)
        CHECK(std::abs(d) > 1e-3);
    auto sym = family(2, std::nullopt);
    CHECK(check_frame_independence(sym, default_samples(2)).ok);
}

TEST_CASE("symbolic determinant agrees with cofactor expansion")
{
    for (int n : {1, 2}) {
        auto f = family(n, std::nullopt, std::nullopt, 4);
        auto rows = independence_rows(f);
        auto leibniz = determinant(rows, f.ring);
        auto laplace = oracle::laplace_det(std::vector<ParamVector>(rows.begin(), rows.end()), f.ring);
        CHECK(leibniz == laplace);
        CHECK(leibniz.substitute_lambda(Gauss(0)) == constant(f, -1));
    }
}

TEST_CASE("positivity at lambda = 0 matches the pure polarization")
{
    auto f = family(1, Gauss(0));
    Sample s;
    s.at.t = {{1e-2, 0.0}};
    s.label = "t=1e-2";
    auto v = check_positivity(f, {s});
    REQUIRE(v.ok);
    const auto& vals = v.samples.at(0).values;
    for (auto x : vals)
        CHECK(x.real() > 0);
    // p = 1: i^{-3} <u_1, conj u_1> = i <u_1, u_4>
    auto q14 = fx::h1_orbit().orbit.pairing->form(0, 3).to_complex();
    CHECK(std::abs(vals[0] - std::complex<double>(0, 1) * q14) < 1e-9);
    CHECK(std::abs(vals[0] - vals[3]) < 1e-9);
}

TEST_CASE("positivity on the default sample grid")
{
    auto f = family(1, std::nullopt);
    auto samples = default_samples(1);
    auto v = check_positivity(f, samples);
    CHECK(v.ok);
    CHECK(v.samples.size() == samples.size());
    auto f2 = family(2, std::nullopt);
    CHECK(check_positivity(f2, default_samples(2, {1e-3})).ok);
}

TEST_CASE("flipping the pairing sign fails every sample")
{
    auto f = family(1, std::nullopt);
    f.form4 = Gauss(-1) * f.form4;
    auto v = check_positivity(f, default_samples(1));
    CHECK_FALSE(v.ok);
    for (const auto& s : v.samples)
        CHECK_FALSE(s.ok);
}

TEST_CASE("limit fiber is lambda-free and recovers the fixture")
{
    auto fix = fx::h1_orbit();
    auto sym = limit_fiber(family(1, std::nullopt));
    CHECK(sym.lambda_free);
    CHECK(sym.verdict.ok);
    Gauss a = fix.a + Gauss(1);
    CHECK(sym.frame[0] == fx::vec({1, 0, 0, 0}));
    CHECK(sym.frame[1] == fx::vec({0, 1, a - Gauss(1), 0}));
    CHECK(sym.frame[2] == fx::vec({0, 0, -1, 0}));
    CHECK(sym.frame[3] == fx::vec({0, 0, 0, 1}));
    CHECK(sym.structure.F == fix.orbit.limit.F);
    CHECK(sym.structure.W == fix.orbit.limit.W);
    auto l0 = limit_fiber(family(1, Gauss(0)));
    auto lh = limit_fiber(family(1, Gauss(Rational(1, 2))));
    CHECK(l0.frame == lh.frame);
    CHECK(l0.structure.F == lh.structure.F);
}

TEST_CASE("vector field stability of F^-1")
{
    CHECK(check_theorem15_hypothesis(family(1, Gauss(0))).holds);
    CHECK(check_theorem15_hypothesis(family(3, Gauss(0))).holds);
    auto v = check_theorem15_hypothesis(family(2, std::nullopt));
    CHECK_FALSE(v.holds);
    CHECK(v.witness == "xi_1 w_3 = t1*t2*lam w_4 mod F^-1");
    auto degenerate = family(2, std::nullopt);
    degenerate.rank_override[-1] = 4;
    CHECK(check_theorem15_hypothesis(degenerate).holds);
}

TEST_CASE("obstruction certificate")
{
    auto fix = fx::h1_orbit();
    FamilyParams p;
    p.n = 2;
    auto sym = theorem23_certificate(fix.orbit, fix.u, fix.a, p, std::nullopt, 2);
    CHECK(sym.target_dim == 1);
    CHECK(sym.identity == "λ(c_1−c_2)=0");
    CHECK(sym.identity_verified);
    CHECK_FALSE(sym.feasible.has_value());
    CHECK(sym.equation == "(t1*t2*lam)*h3 + xi_k(h4) - (t1*t2*lam)*c_k = 0");

    p.lambda = Gauss(Rational(1, 100));
    auto num = theorem23_certificate(fix.orbit, fix.u, fix.a, p, std::vector<Rational>{1, 0}, 3);
    REQUIRE(num.feasible.has_value());
    CHECK_FALSE(*num.feasible);
    CHECK(num.unknowns > 0);
    CHECK(num.equations > 0);

    auto equal = theorem23_certificate(fix.orbit, fix.u, fix.a, p, std::vector<Rational>{1, 1}, 3);
    CHECK(equal.feasible.value_or(false));

    p.lambda = Gauss(0);
    auto zero = theorem23_certificate(fix.orbit, fix.u, fix.a, p, std::vector<Rational>{1, 0}, 3);
    CHECK(zero.feasible.value_or(false));

    FamilyParams p3;
    p3.n = 3;
    auto three = theorem23_certificate(fix.orbit, fix.u, fix.a, p3, std::nullopt, 1);
    CHECK(three.target_dim == 2);
    CHECK(three.identity == "λ(c_1−c_2)=0, λ(c_2−c_3)=0");
    CHECK(three.identity_verified);

    FamilyParams p1;
    p1.n = 1;
    CHECK_THROWS_AS(theorem23_certificate(fix.orbit, fix.u, fix.a, p1, std::nullopt, 2), std::invalid_argument);
    p.n = 2;
    CHECK_THROWS_AS(theorem23_certificate(fix.orbit, fix.u, fix.a, p, std::vector<Rational>{1, 0, 0}, 2),
                    std::invalid_argument);
}

TEST_CASE("family rejects an invalid basis")
{
    auto fix = fx::h1_orbit();
    auto u = fix.u;
    std::swap(u[0], u[3]);
    CHECK_THROWS_AS(build_family(fix.orbit, u, fix.a, FamilyParams{}), std::invalid_argument);
}
