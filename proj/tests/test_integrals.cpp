#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "magbill/algebra.hpp"
#include "magbill/boundary.hpp"
#include "magbill/dynamics.hpp"
#include "magbill/errors.hpp"
#include "magbill/geom.hpp"
#include "magbill/integrals.hpp"
#include "magbill/poly.hpp"
#include "magbill/rng.hpp"

using namespace magbill;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

BivarPoly random_poly(SplitMix64& rng, int deg) {
    BivarPoly p;
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j) p.add_coeff(i, j, rng.uniform(-1.0, 1.0));
    return p;
}

BivarPoly circle_poly(double rr) {
    BivarPoly f;
    f.add_coeff(2, 0, 1.0);
    f.add_coeff(0, 2, 1.0);
    f.add_coeff(0, 0, -rr * rr);
    return f;
}

}  // namespace

TEST_CASE("circle integral values") {
    VelocityPoly h = circle_integral(1.0 / 3.0);
    CHECK(h.eval({2, 0}, {0, 1}) == doctest::Approx(-8.0).epsilon(1e-12));
    PlanarVector c = larmor_center({2, 0}, {0, 1}, 3.0);
    CHECK(c.x == doctest::Approx(-1.0));
    CHECK(std::abs(c.y) < 1e-15);
    BivarPoly F = circle_poly(3.0);
    CHECK(F.eval(c) == doctest::Approx(-8.0).epsilon(1e-12));
    CHECK(h.eval({2, 0}, {0, 0}) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(h.N() == 1);
}

TEST_CASE("velocity expansion of a center polynomial") {
    SplitMix64 rng(101);
    BivarPoly F = circle_poly(3.0);
    VelocityPoly phi = phi_from_F(F, 3.0);
    VelocityPoly h = circle_integral(1.0 / 3.0);
    for (int i = 0; i < 100; ++i) {
        PlanarVector x{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
        double th = rng.uniform(0.0, two_pi);
        PlanarVector v{std::cos(th), std::sin(th)};
        CHECK(phi.eval(x, v) == doctest::Approx(h.eval(x, v)).epsilon(1e-12));
    }

    BivarPoly G = random_poly(rng, 4);
    VelocityPoly phig = phi_from_F(G, 2.0);
    for (int i = 0; i < 100; ++i) {
        PlanarVector x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        double th = rng.uniform(0.0, two_pi);
        PlanarVector v{std::cos(th), std::sin(th)};
        double got = phig.eval(x, v);
        double want = G.eval(larmor_center(x, v, 2.0));
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
    for (const auto& [kl, a] : phig.terms())
        CHECK(a.degree() <= 2 * phig.N() - (kl.first + kl.second));

    BivarPoly cnst = BivarPoly::constant(2.5);
    VelocityPoly phic = phi_from_F(cnst, 3.0);
    CHECK(phic.N() == 0);
    CHECK(phic.eval({1, 2}, {0, 1}) == doctest::Approx(2.5));

    BivarPoly xpoly = BivarPoly::var_x();
    VelocityPoly phix = phi_from_F(xpoly, 3.0);
    CHECK(phix.eval({1.5, 0.5}, {0.6, 0.8}) == doctest::Approx(1.5 - 3.0 * 0.8).epsilon(1e-13));
}

TEST_CASE("center polynomial recovery from a velocity polynomial") {
    PlanarVector lo{-5, -5}, hi{5, 5};
    PolyFit fit = F_from_phi(circle_integral(1.0 / 3.0), 3.0, lo, hi);
    CHECK(fit.residual < 1e-9);
    CHECK(!fit.rank_deficient);
    BivarPoly expected = circle_poly(3.0);
    BivarPoly diff = fit.F - expected;
    double c0 = diff.coeff(0, 0);
    diff.add_coeff(0, 0, -c0);
    CHECK(diff.max_abs_coeff() < 1e-8);

    VelocityPoly v1;
    v1.add_coeff(1, 0, 0, 0, 1.0);
    PolyFit bad = F_from_phi(v1, 3.0, lo, hi);
    CHECK(bad.residual > 0.1);

    VelocityPoly one;
    one.add_coeff(0, 0, 0, 0, 1.0);
    PolyFit triv = F_from_phi(one, 3.0, lo, hi);
    CHECK(triv.residual < 1e-12);
    CHECK(triv.F.degree() == 0);
    CHECK(triv.F.coeff(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("recovery round trip for random cubics") {
    SplitMix64 rng(55);
    PlanarVector lo{-4, -4}, hi{4, 4};
    for (int trial = 0; trial < 5; ++trial) {
        BivarPoly F = random_poly(rng, 3);
        VelocityPoly phi = phi_from_F(F, 1.5);
        PolyFit fit = F_from_phi(phi, 1.5, lo, hi, 10, 7 + trial);
        CHECK(fit.residual < 1e-8);
        BivarPoly diff = fit.F - F;
        double c0 = diff.coeff(0, 0);
        diff.add_coeff(0, 0, -c0);
        CHECK(diff.max_abs_coeff() < 1e-8);
    }
}

TEST_CASE("invariance residual on circles") {
    BivarPoly F;
    F.add_coeff(2, 0, 1.0);
    F.add_coeff(0, 2, 1.0);
    struct Pair {
        double d, beta;
    };
    for (Pair pr : {Pair{2.0, 1.0 / 3.0}, Pair{1.0, 0.5}, Pair{3.0, 0.25}}) {
        CircleBoundary circ(pr.d);
        double res = invariance_residual(F, circ, MagneticParams(pr.beta), 200, 3);
        CHECK(res < 1e-9);
    }

    BivarPoly cnst = BivarPoly::constant(4.0);
    CircleBoundary circ(2.0);
    CHECK(invariance_residual(cnst, circ, MagneticParams(1.0 / 3.0), 50, 3) == 0.0);
}

TEST_CASE("offset polynomial is not invariant under the center map") {
    EllipseBoundary ell(2.0, 1.0);
    BivarPoly f = ellipse_offset_poly(2.0, 1.0, 5.0);
    double res = invariance_residual(f, ell, MagneticParams(0.2), 200, 9);
    CHECK(res > 1e-3);
}

TEST_CASE("constancy along parallel curves") {
    CircleBoundary circ(2.0);
    MagneticParams params(1.0 / 3.0);
    BivarPoly F;
    F.add_coeff(2, 0, 1.0);
    F.add_coeff(0, 2, 1.0);
    CurveStats plus = boundary_constancy(F, circ, params, Side::plus, 256);
    CHECK(plus.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plus.max_dev < 1e-12);

    BivarPoly X = BivarPoly::var_x();
    CurveStats minus = boundary_constancy(X, circ, params, Side::minus, 256);
    CHECK(minus.max_dev == doctest::Approx(5.0).epsilon(1e-3));

    EllipseBoundary ell(2.0, 1.0);
    BivarPoly f = ellipse_offset_poly(2.0, 1.0, 5.0);
    CurveStats off = boundary_constancy(f, ell, MagneticParams(0.2), Side::plus, 256);
    double point_scale = 0.0;
    for (const PlanarVector& p : parallel_samples(ell, 5.0, Side::plus, 256)) {
        double m = std::max(1.0, std::max(std::abs(p.x), std::abs(p.y)));
        point_scale = std::max(point_scale, f.max_abs_coeff() * std::pow(m, 8));
    }
    CHECK(std::abs(off.mean) + off.max_dev < 1e-6 * point_scale);
}

TEST_CASE("integral normalization") {
    BivarPoly F;
    F.add_coeff(2, 0, 1.0);
    F.add_coeff(0, 2, 1.0);
    BivarPoly G = normalize_integral(F, 25.0, 1.0);
    BivarPoly expected = F * F - 26.0 * F + BivarPoly::constant(25.0);
    CHECK((G - expected).max_abs_coeff() < 1e-12);
    for (double t : {0.0, 1.0, 2.5, 4.0}) {
        PlanarVector in{std::cos(t), std::sin(t)};
        PlanarVector out{5.0 * std::cos(t), 5.0 * std::sin(t)};
        CHECK(std::abs(G.eval(in)) < 1e-10);
        CHECK(std::abs(G.eval(out)) < 1e-10);
    }

    BivarPoly sq = normalize_integral(F, 0.0, 0.0);
    CHECK((sq - F * F).max_abs_coeff() < 1e-12);

    BivarPoly c = BivarPoly::constant(7.0);
    BivarPoly z = normalize_integral(c, 7.0, 7.0);
    CHECK(std::abs(z.eval({0.3, -0.2})) < 1e-12);
}

TEST_CASE("grazing center construction") {
    CircleBoundary circ(2.0);
    MagneticParams params(1.0 / 3.0);
    double eps = 3e-2;
    GrazingPair pa = grazing_centers(circ, params, 0.0, eps, GrazingCase::a);
    CHECK(pa.p_minus.x == doctest::Approx(2.0 - 3.0 * std::cos(eps)).epsilon(1e-13));
    CHECK(pa.p_minus.y == doctest::Approx(3.0 * std::sin(eps)).epsilon(1e-13));
    CHECK(pa.p_plus.x == doctest::Approx(2.0 - 3.0 * std::cos(eps)).epsilon(1e-13));
    CHECK(pa.p_plus.y == doctest::Approx(-3.0 * std::sin(eps)).epsilon(1e-13));

    GrazingPair p0 = grazing_centers(circ, params, 0.0, 0.0, GrazingCase::a);
    CHECK((p0.p_minus - p0.p_plus).norm() < 1e-15);
    CHECK((p0.p_minus - PlanarVector{-1.0, 0.0}).norm() < 1e-13);

    GrazingPair pb = grazing_centers(circ, params, 0.0, 0.0, GrazingCase::b);
    CHECK((pb.p_minus - PlanarVector{5.0, 0.0}).norm() < 1e-13);
}

TEST_CASE("grazing midpoint property") {
    auto check_midpoint = [](const Boundary& b, const MagneticParams& params, double t,
                             GrazingCase gc, Side side) {
        double eps = 1e-2;
        PlanarVector q = b.eval(t);
        GrazingPair pair = grazing_centers(b, params, t, eps, gc);
        PlanarVector p0 = parallel_point(b, t, side, params.r);
        PlanarVector um = (pair.p_minus - q) / params.r;
        PlanarVector up = (pair.p_plus - q) / params.r;
        PlanarVector bis = (um + up).normalized();
        PlanarVector u0 = (p0 - q) / params.r;
        CHECK((bis - u0).norm() < 1e-10);
        CHECK(std::abs((pair.p_minus - q).norm() - params.r) < 1e-12);
        CHECK(std::abs((pair.p_plus - q).norm() - params.r) < 1e-12);
    };

    CircleBoundary circ(2.0);
    MagneticParams pc(1.0 / 3.0);
    EllipseBoundary ell(2.0, 1.0);
    MagneticParams pe(0.2);
    for (double t : {0.0, 0.9, 2.2, 3.8, 5.5}) {
        check_midpoint(circ, pc, t, GrazingCase::a, Side::plus);
        check_midpoint(circ, pc, t, GrazingCase::b, Side::minus);
        check_midpoint(ell, pe, t, GrazingCase::a, Side::plus);
        check_midpoint(ell, pe, t, GrazingCase::b, Side::minus);
    }
}

TEST_CASE("cubic curvature combination is constant on parallel circles") {
    CircleBoundary circ(2.0);
    BivarPoly F = circle_poly(3.0);
    auto inner = parallel_samples(circ, 3.0, Side::plus, 256);
    CurveStats si = rem3_residual(F, inner, 1.0 / 3.0);
    CHECK(si.mean == doctest::Approx(32.0 / 3.0).epsilon(1e-10));
    CHECK(si.max_dev < 1e-10);

    auto outer = parallel_samples(circ, 3.0, Side::minus, 256);
    CurveStats so = rem3_residual(F, outer, 1.0 / 3.0);
    CHECK(so.mean == doctest::Approx(1600.0 / 3.0).epsilon(1e-10));
    CHECK(so.max_dev < 1e-8);

    BivarPoly lin;
    lin.add_coeff(1, 0, 3.0);
    lin.add_coeff(0, 1, -4.0);
    lin.add_coeff(0, 0, 7.0);
    EllipseBoundary ell(2.0, 1.0);
    auto esamp = parallel_samples(ell, 5.0, Side::minus, 128);
    CurveStats sl = rem3_residual(lin, esamp, 0.2);
    CHECK(sl.mean == doctest::Approx(0.2 * 125.0).epsilon(1e-12));
    CHECK(sl.max_dev < 1e-10);
}

TEST_CASE("powered residual generalizes the cubic one") {
    CircleBoundary circ(2.0);
    BivarPoly F = circle_poly(3.0);
    BivarPoly one = BivarPoly::constant(1.0);
    auto inner = parallel_samples(circ, 3.0, Side::plus, 256);

    Rem5Stats k1 = rem5_residual(F, one, 1, 1.0 / 3.0, inner);
    CurveStats base = rem3_residual(F, inner, 1.0 / 3.0);
    CHECK(k1.mean == doctest::Approx(base.mean).epsilon(1e-12));
    CHECK(k1.nonzero);

    Rem5Stats k2 = rem5_residual(F, one, 2, 1.0 / 3.0, inner);
    CHECK(k2.mean == doctest::Approx(1024.0 / 9.0).epsilon(1e-9));
    CHECK(k2.max_dev < 1e-9);
    CHECK(k2.nonzero);
}

TEST_CASE("third order difference of grazing values") {
    CircleBoundary circ(2.0);
    MagneticParams params(1.0 / 3.0);
    std::vector<double> ladder{1e-2, 5e-3, 2.5e-3};

    BivarPoly cubic;
    cubic.add_coeff(3, 0, 1.0);
    cubic.add_coeff(0, 3, 1.0);
    SplitMix64 rng(21);
    for (int i = 0; i < 5; ++i) {
        double t = rng.uniform(0.0, two_pi);
        Rem1Result res = rem1_eps_check(cubic, circ, params, t, GrazingCase::a, ladder);
        REQUIRE(!res.degenerate);
        CHECK(res.ratio == doctest::Approx(1.0).epsilon(1e-5));
    }

    BivarPoly F = circle_poly(3.0);
    Rem1Result deg = rem1_eps_check(F, circ, params, 0.3, GrazingCase::a, ladder);
    CHECK(deg.degenerate);

    BivarPoly lin;
    lin.add_coeff(1, 0, 1.0);
    lin.add_coeff(0, 1, 2.0);
    Rem1Result degl = rem1_eps_check(lin, circ, params, 1.1, GrazingCase::b, ladder);
    CHECK(degl.degenerate);
}

TEST_CASE("third order ratio across random polynomials") {
    CircleBoundary circ(2.0);
    MagneticParams params(1.0 / 3.0);
    std::vector<double> ladder{1e-2, 5e-3, 2.5e-3};
    SplitMix64 rng(33);
    int accepted = 0, attempts = 0;
    while (accepted < 20) {
        REQUIRE(++attempts < 400);
        int deg = 3 + static_cast<int>(rng.next_u64() % 3);
        BivarPoly F = random_poly(rng, deg);
        double t = rng.uniform(0.0, two_pi);
        GrazingCase gc = (rng.next_u64() & 1) ? GrazingCase::a : GrazingCase::b;
        Rem1Result res;
        try {
            res = rem1_eps_check(F, circ, params, t, gc, ladder);
        } catch (const VanishingGradient&) {
            continue;
        }
        if (res.degenerate || std::abs(res.predicted) < 1e-4) continue;
        CHECK(res.ratio == doctest::Approx(1.0).epsilon(1e-5));
        ++accepted;
    }
}

TEST_CASE("velocity polynomial text round trip") {
    VelocityPoly h = circle_integral(0.25);
    std::ostringstream os;
    h.write(os);
    std::istringstream is(os.str());
    VelocityPoly back = VelocityPoly::read(is);
    SplitMix64 rng(77);
    for (int i = 0; i < 50; ++i) {
        PlanarVector x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        double th = rng.uniform(0.0, two_pi);
        PlanarVector v{std::cos(th), std::sin(th)};
        CHECK(back.eval(x, v) == doctest::Approx(h.eval(x, v)).epsilon(1e-14));
    }
}

TEST_CASE("check report serialization") {
    CheckReport rep;
    rep.check = "demo";
    rep.samples = 3;
    rep.mean = 0.5;
    rep.max_abs_residual = 0.25;
    rep.tolerance = 0.5;
    rep.pass = true;
    CHECK(check_report_json(rep) ==
          "{\"check\": \"demo\", \"samples\": 3, \"mean\": 0.5, "
          "\"max_abs_residual\": 0.25, \"tolerance\": 0.5, \"pass\": true}");
}
