#include "oracles.hpp"

#include "mhs/fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mhs;
namespace fx = mhs::fixtures;

namespace {

MixedHodgeStructure pure_q(int twist_by)
{
    MixedHodgeStructure q;
    q.dim = 1;
    q.conj_matrix = GMatrix::identity(1);
    q.W = IncreasingFiltration(1, 0, {GSpace::full(1)});
    q.F = DecreasingFiltration(1, 0, {GSpace::full(1)});
    return tate_twist(q, twist_by);
}

} // namespace

TEST_CASE("fixture limit is a mixed Hodge structure")
{
    auto h = fx::h1_orbit().orbit.limit;
    CHECK(check_mhs(h).ok);
    CHECK(gr_W(h, -2).dim == 1);
    CHECK(gr_W(h, -1).dim == 2);
    CHECK(gr_W(h, 0).dim == 1);
}

TEST_CASE("graded pieces of the fixture carry the expected Hodge types")
{
    auto fix = fx::h1_orbit();
    auto h = fix.orbit.limit;
    const auto& u = fix.u;
    // Gr_{-1}: u_1 of type (1,-2), u_4 of type (-2,1)
    auto g = gr_W_with_projection(h, -1);
    auto img1 = g.projection.map * u[0], img4 = g.projection.map * u[3];
    CHECK(g.structure.F.at(1).contains(img1));
    CHECK_FALSE(g.structure.F.at(1).contains(img4));
    CHECK(g.structure.F.at(-2).contains(img4));
    CHECK_FALSE(g.structure.F.at(-1).contains(img4));
    // Gr_0 spanned by u_2, type (0,0)
    auto g0 = gr_W_with_projection(h, 0);
    CHECK(g0.structure.dim == 1);
    CHECK_FALSE(is_zero_vector(g0.projection.map * u[1]));
    CHECK(g0.structure.F.at(0).is_full());
    CHECK(g0.structure.F.at(1).is_zero());
    // no jump below the lowest weight
    CHECK(gr_W(h, -3).dim == 0);
    CHECK(gr_W(h, 5).dim == 0);
}

TEST_CASE("exchanging F^0 and F^1 breaks the structure")
{
    auto h = fx::h1_orbit().orbit.limit;
    std::vector<GSpace> pieces;
    for (int p = h.F.lo(); p <= h.F.hi(); ++p)
        pieces.push_back(h.F.at(p));
    std::swap(pieces[2], pieces[3]);
    h.F = DecreasingFiltration(4, h.F.lo(), pieces);
    auto v = check_mhs(h);
    REQUIRE_FALSE(v.ok);
    // the offending vector u_2 + u_3/2 lies in the new F^1 and first appears in W_0
    CHECK(v.level == 1);
    CHECK(v.weight == 0);
    CHECK(GSpace::span(4, {fx::vec({0, 1, Rational(1, 2), 0})}).contains(v.witness));
}

TEST_CASE("zero space is a mixed Hodge structure")
{
    MixedHodgeStructure z;
    CHECK(check_mhs(z).ok);
}

TEST_CASE("random split orbits give mixed Hodge structures")
{
    std::mt19937_64 rng(oracle::kDefaultSeed);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> w(-2, 2);
        auto r = oracle::random_orbit(rng, 7, w(rng));
        INFO("trial " << trial);
        CHECK(check_mhs(r.orbit.limit).ok);
        // shifting the Hodge filtration by one changes every graded weight
        auto bad = r.orbit.limit;
        bad.F = bad.F.shifted(1);
        CHECK_FALSE(check_mhs(bad).ok);
    }
}

TEST_CASE("Tate twist shifts weights and Hodge levels")
{
    auto h = fx::h1_orbit().orbit.limit;
    auto t = tate_twist(h, -1);
    CHECK(check_mhs(t).ok);
    CHECK(t.F.at(0) == h.F.at(-1));
    CHECK(t.W.at(0) == h.W.at(-2));
    auto same = tate_twist(h, 0);
    CHECK(same.F.at(-1) == h.F.at(-1));
    CHECK(same.conj_matrix == h.conj_matrix);
    auto back = tate_twist(t, 1);
    for (int p = -3; p <= 3; ++p) {
        CHECK(back.F.at(p) == h.F.at(p));
        CHECK(back.W.at(p) == h.W.at(p));
    }
    CHECK(back.conj_matrix == h.conj_matrix);
    CHECK(back.twist == h.twist);
}

TEST_CASE("Hodge classes of Tate structures")
{
    CHECK(hom_from_Q(pure_q(0)).dim() == 1);
    CHECK(hom_from_Q(pure_q(1)).dim() == 0);
    CHECK(hom_from_Q(pure_q(-1)).dim() == 0);
    CHECK(hom_from_Q(fx::h1_orbit().orbit.limit).dim() == 0);
    auto sum = direct_sum({pure_q(0), pure_q(0), pure_q(1)});
    CHECK(check_mhs(sum).ok);
    auto classes = hom_from_Q(sum);
    CHECK(classes.dim() == 2);
    for (const auto& b : classes.basis)
        CHECK(sum.is_real(b));
}

TEST_CASE("change of basis preserves the verdict")
{
    std::mt19937_64 rng(21);
    auto h = fx::h1_orbit().orbit.limit;
    for (int trial = 0; trial < 20; ++trial) {
        auto p = oracle::random_invertible(rng, 4);
        GMatrix pinv(4, 4);
        for (std::size_t i = 0; i < 4; ++i) {
            auto c = *solve(p, unit_vector<Gauss>(4, i));
            for (std::size_t r = 0; r < 4; ++r)
                pinv(r, i) = c[r];
        }
        auto g = change_basis(h, p, pinv);
        CHECK(check_mhs(g).ok);
        CHECK(g.conj_matrix * g.conj_matrix.conj() == GMatrix::identity(4));
    }
}

TEST_CASE("real basis spans and is real")
{
    auto h = fx::h1_orbit().orbit.limit;
    auto rb = real_basis(h, GSpace::full(4));
    CHECK(rb.size() == 4);
    for (const auto& v : rb)
        CHECK(h.is_real(v));
    CHECK(GSpace::span(4, rb).is_full());
}

TEST_CASE("pairing on the fixture")
{
    auto fix = fx::h1_orbit();
    auto q = *fix.orbit.pairing;
    CHECK(check_pairing(q, fix.orbit.limit).ok);
    auto asym = q;
    asym.form(0, 3) = Gauss(0, 2);
    CHECK_FALSE(check_pairing(asym, fix.orbit.limit).ok);
    auto unreal = q;
    unreal.form(1, 2) = Gauss(1);
    unreal.form(2, 1) = Gauss(-1);
    CHECK_FALSE(check_pairing(unreal, fix.orbit.limit).ok);
    // W_{-2} against W_{-1} must vanish at weight -1
    auto leak = q;
    leak.form(2, 0) = Gauss(0, 1);
    leak.form(0, 2) = Gauss(0, -1);
    CHECK_FALSE(check_pairing(leak, fix.orbit.limit).ok);
}
