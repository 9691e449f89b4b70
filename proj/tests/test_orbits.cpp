#include "oracles.hpp"

#include "mhs/fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mhs;
namespace fx = mhs::fixtures;


TEST_CASE("monodromy filtration of random nilpotents satisfies both defining properties")
{
    std::mt19937_64 rng(oracle::kDefaultSeed);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::uniform_int_distribution<int> center(-2, 2);
    for (int trial = 0; trial < 100; ++trial) {
        auto n = oracle::random_nilpotent(rng, dim(rng));
        int c = center(rng);
        auto m = monodromy_filtration(n, c);
        INFO("trial " << trial << " N = " << matrix_to_string(n));
        CHECK(oracle::is_monodromy_filtration(n, m, c));
        CHECK(verify_monodromy_filtration(n, m, c).ok);
        // a different center never works unless N = 0 on a zero space
        if (n.rows() > 0)
            CHECK_FALSE(oracle::is_monodromy_filtration(n, m, c + 1));
    }
}

TEST_CASE("monodromy filtration of N = 0 is a single jump")
{
    GMatrix z(3, 3);
    auto m = monodromy_filtration(z, -1);
    CHECK(m.at(-1).is_full());
    CHECK(m.at(-2).is_zero());
}

TEST_CASE("fixture monodromy filtration is Im N, Ker N, H")
{
    auto o = fx::h1_orbit().orbit;
    const auto& n = o.family.N[0];
    auto m = monodromy_filtration(n, -1);
    CHECK(m.at(-3).is_zero());
    CHECK(m.at(-2) == image(n));
    CHECK(m.at(-1) == kernel(n));
    CHECK(m.at(0).is_full());
    CHECK(m == o.limit.W);
}

TEST_CASE("2x2 Jordan block: brute force over candidate filtrations")
{
    GMatrix n(2, 2);
    n(1, 0) = 1;
    // candidate pieces: 0, a selection of lines, everything
    std::vector<GSpace> pieces{GSpace::zero(2), GSpace::full(2)};
    for (int x = -2; x <= 2; ++x)
        pieces.push_back(GSpace::span(2, {fx::vec({1, x})}));
    pieces.push_back(GSpace::span(2, {fx::vec({0, 1})}));
    std::vector<IncreasingFiltration> winners;
    for (const auto& a : pieces)
        for (const auto& b : pieces)
            for (const auto& c : pieces) {
                if (!b.contains(a) || !c.contains(b))
                    continue;
                IncreasingFiltration cand(2, -1, {a, b, c});
                if (!c.is_full())
                    continue;
                if (oracle::is_monodromy_filtration(n, cand, 0))
                    winners.push_back(cand.normalized());
            }
    REQUIRE(winners.size() >= 1);
    for (const auto& w : winners)
        CHECK(w == winners.front());
    auto m = monodromy_filtration(n, 0);
    CHECK(m == winners.front());
    CHECK(m.at(-1) == image(n));
    CHECK(m.at(-1) == kernel(n));
    CHECK(m.at(0) == m.at(-1));
    CHECK(m.at(1).is_full());
}

TEST_CASE("relative filtration reduces to the absolute one for a trivial W'")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto n = oracle::random_nilpotent(rng, 4);
        auto wp = IncreasingFiltration::trivial(4, 1);
        auto m = relative_monodromy_filtration(n, wp);
        REQUIRE(m.has_value());
        CHECK(*m == monodromy_filtration(n, 1));
    }
}

TEST_CASE("relative filtration of N = 0 is W'")
{
    auto wp = IncreasingFiltration(3, -1, {GSpace::span(3, {fx::e(3, 0)}), GSpace::span(3, {fx::e(3, 0), fx::e(3, 1)}),
                                           GSpace::full(3)});
    auto m = relative_monodromy_filtration(GMatrix(3, 3), wp);
    REQUIRE(m.has_value());
    CHECK(m->normalized() == wp.normalized());
}

TEST_CASE("relative filtration of a coupling conjugate to a split one exists and is recomputed")
{
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 3);
        std::size_t p = dim(rng), q = dim(rng);
        auto n1 = oracle::random_nilpotent(rng, p), n2 = oracle::random_nilpotent(rng, q);
        auto y = oracle::random_rect(rng, p, q);
        GMatrix x = y * n2 - n1 * y;
        GMatrix n = oracle::block_upper(n1, x, n2);
        std::vector<GVec> lowv;
        for (std::size_t i = 0; i < p; ++i)
            lowv.push_back(unit_vector<Gauss>(p + q, i));
        IncreasingFiltration wp(p + q, -1, {GSpace::span(p + q, lowv), GSpace::full(p + q)});
        auto m = relative_monodromy_filtration(n, wp);
        INFO("trial " << trial);
        REQUIRE(m.has_value());
        CHECK(oracle::induces_monodromy_on_graded(n, wp, *m));
        CHECK(verify_relative_filtration(n, wp, *m).ok);
    }
}

TEST_CASE("relative filtration can fail to exist")
{
    // N maps the weight-1 line onto the weight-0 line; both graded operators vanish
    GMatrix n(2, 2);
    n(0, 1) = 1;
    IncreasingFiltration wp(2, 0, {GSpace::span(2, {fx::e(2, 0)}), GSpace::full(2)});
    CHECK_FALSE(relative_monodromy_filtration(n, wp).has_value());
    // and N must preserve W'
    GMatrix bad(2, 2);
    bad(1, 0) = 1;
    CHECK_THROWS_AS(relative_monodromy_filtration(bad, wp), std::invalid_argument);
}

TEST_CASE("fixture orbit passes every clause")
{
    auto o = fx::h1_orbit().orbit;
    CHECK(check_pure_nilpotent_orbit(o).ok);
    for (int n = 1; n <= 4; ++n)
        CHECK(check_pure_nilpotent_orbit(fx::h1_pullback(n)).ok);
    NilpotentOrbit empty;
    empty.limit.dim = 0;
    CHECK(check_pure_nilpotent_orbit(empty).ok);
}

TEST_CASE("fixture orbit mutations fail the expected clause")
{
    auto o = fx::h1_orbit().orbit;
    SECTION("F^1 enlarged to two dimensions")
    {
        std::vector<GSpace> pieces;
        for (int p = o.limit.F.lo(); p <= o.limit.F.hi(); ++p)
            pieces.push_back(o.limit.F.at(p));
        pieces[3] = GSpace::span(4, {fx::e(4, 0), fx::vec({0, 1, Rational(1, 2), 0})});
        o.limit.F = DecreasingFiltration(4, o.limit.F.lo(), pieces);
        auto v = check_pure_nilpotent_orbit(o);
        CHECK_FALSE(v.ok);
        CHECK((v.clause == 'a' || v.clause == 'b'));
    }
    SECTION("transversality broken")
    {
        GMatrix n(4, 4);
        n(2, 1) = 1;
        n(2, 0) = 1; // N u_1 = u_3 leaves F^0
        o.family.N = {n};
        auto v = check_pure_nilpotent_orbit(o);
        CHECK_FALSE(v.ok);
    }
    SECTION("weight filtration not the monodromy filtration")
    {
        o.family.N = {GMatrix(4, 4)};
        auto v = check_pure_nilpotent_orbit(o);
        CHECK_FALSE(v.ok);
        CHECK(v.clause == 'c');
    }
    SECTION("pairing not infinitesimally invariant")
    {
        o.pairing->form(1, 1) = Gauss(0, 1);
        auto v = check_pure_nilpotent_orbit(o);
        CHECK_FALSE(v.ok);
        CHECK(v.clause == 'd');
    }
}

TEST_CASE("random pure orbits with commuting families")
{
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<int> w(-2, 1), fam(1, 3);
        auto r = oracle::random_orbit(rng, 6, w(rng), fam(rng));
        INFO("trial " << trial);
        CHECK(r.orbit.family.problem(r.dim).empty());
        auto v = check_pure_nilpotent_orbit(r.orbit);
        INFO(v.clause << ": " << v.reason);
        CHECK(v.ok);
        // every nonempty partial sum has the same monodromy filtration
        const auto& fam_n = r.orbit.family;
        auto first = monodromy_filtration(fam_n.partial_sum(1), r.orbit.weight);
        for (unsigned mask = 1; mask < (1u << fam_n.size()); ++mask)
            CHECK(monodromy_filtration(fam_n.partial_sum(mask), r.orbit.weight) == first);
    }
}

TEST_CASE("basis validator on the fixture and its mutations")
{
    auto fix = fx::h1_orbit();
    const auto& h = fix.orbit.limit;
    const auto& n = fix.orbit.family.N[0];
    const auto& q = *fix.orbit.pairing;
    CHECK(validate_prop21_basis(h, n, q, fix.u, fix.a).ok());

    auto swapped = fix.u;
    std::swap(swapped[0], swapped[3]);
    auto v = validate_prop21_basis(h, n, q, swapped, fix.a);
    CHECK(v.violated == std::vector<int>{1, 3});

    auto q2 = q;
    q2.form(0, 1) = 1;
    q2.form(1, 0) = -1;
    CHECK(validate_prop21_basis(h, n, q2, fix.u, fix.a).violated == std::vector<int>{5});

    CHECK(validate_prop21_basis(h, n, q, fix.u, Gauss(0)).violated == std::vector<int>{4});
}

TEST_CASE("constructed basis validates")
{
    auto fix = fx::h1_orbit();
    auto b = construct_prop21_basis(fix.orbit);
    CHECK(validate_prop21_basis(fix.orbit.limit, fix.orbit.family.N[0], *fix.orbit.pairing, b.u, b.a).ok());
    CHECK(b.a == Gauss(Rational(1, 2)));
    CHECK(b.complement.dim() == 0);

    // the same orbit written in random rational coordinates
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = oracle::random_invertible(rng, 4);
        GMatrix pinv(4, 4);
        for (std::size_t i = 0; i < 4; ++i) {
            auto c = *solve(p, unit_vector<Gauss>(4, i));
            for (std::size_t r = 0; r < 4; ++r)
                pinv(r, i) = c[r];
        }
        NilpotentOrbit o = fix.orbit;
        o.limit = change_basis(fix.orbit.limit, p, pinv);
        o.family.N = {p * fix.orbit.family.N[0] * pinv};
        o.pairing->form = pinv.transpose() * fix.orbit.pairing->form * pinv;
        auto bb = construct_prop21_basis(o);
        CHECK(validate_prop21_basis(o.limit, o.family.N[0], *o.pairing, bb.u, bb.a).ok());
    }
}

TEST_CASE("basis construction rejects orbits outside its hypotheses")
{
    auto o = fx::h1_orbit().orbit;
    auto zero = o;
    zero.family.N = {GMatrix(4, 4)};
    CHECK_THROWS_AS(construct_prop21_basis(zero), std::invalid_argument);

    auto no_f1 = o;
    std::vector<GSpace> pieces;
    for (int p = o.limit.F.lo(); p <= o.limit.F.hi(); ++p)
        pieces.push_back(o.limit.F.at(p));
    pieces[3] = GSpace::zero(4);
    no_f1.limit.F = DecreasingFiltration(4, o.limit.F.lo(), pieces);
    CHECK_THROWS_AS(construct_prop21_basis(no_f1), std::invalid_argument);
}

TEST_CASE("mixed orbit check with a single W' jump")
{
    auto o = fx::h1_orbit().orbit;
    MixedNilpotentOrbit m;
    m.structure = o.limit;
    m.relative_to = IncreasingFiltration::trivial(4, -1);
    m.family = o.family;
    CHECK(check_mixed_nilpotent_orbit(m).ok);
}
