#include <doctest.h>

#include "kerrsim/errors.hpp"
#include "kerrsim/moments.hpp"
#include "kerrsim/noise.hpp"
#include "kerrsim/phase_space.hpp"

#include <cmath>

using namespace kerrsim;

namespace {

PhasePoint point_from(cplx alpha, cplx beta, cplx omega) {
    PhasePoint p;
    p.log_alpha = std::log(alpha);
    p.log_beta = std::log(beta);
    p.log_omega = std::log(omega);
    return p;
}

Ensemble randomized_ensemble(std::size_t n, std::uint64_t seed) {
    Ensemble e = init_coherent(4.0, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [g1, g2] = gaussian_pair(seed, i, 0);
        const auto [g3, g4] = gaussian_pair(seed, i, 1);
        const auto [g5, g6] = gaussian_pair(seed, i, 2);
        e.points[i].log_alpha += cplx(0.2 * g1, 0.3 * g2);
        e.points[i].log_beta += cplx(0.2 * g3, 0.3 * g4);
        e.points[i].log_omega += cplx(0.5 * g5, 0.4 * g6);
    }
    return e;
}

} // namespace

TEST_CASE("init_coherent builds the delta-function ensemble") {
    const Ensemble e = init_coherent(100.0, 3);
    CHECK(e.points.size() == 3);
    CHECK(e.t == 0.0);
    CHECK(e.frame == Frame::lab);
    for (const PhasePoint& p : e.points) {
        CHECK(std::exp(p.log_alpha).real() == doctest::Approx(10.0).epsilon(1e-14));
        CHECK(std::exp(p.log_alpha).imag() == doctest::Approx(0.0));
        CHECK(p.log_beta == p.log_alpha);
        CHECK(p.log_omega == cplx(0.0, 0.0));
    }

    const Ensemble unit = init_coherent(1.0, 1);
    CHECK(std::exp(unit.points[0].log_alpha).real() == doctest::Approx(1.0));
}

TEST_CASE("init_coherent rejects bad arguments") {
    CHECK_THROWS_AS(init_coherent(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(init_coherent(-1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(init_coherent(10.0, 0), std::invalid_argument);
}

TEST_CASE("coherent ensemble estimates n_bar with zero sampling variance") {
    const Ensemble e = init_coherent(100.0, 100000);
    const MomentEstimate m = estimate_moment(e, 1, 1);
    CHECK(m.value.real() == doctest::Approx(100.0).epsilon(1e-13));
    CHECK(m.value.imag() == 0.0);
    CHECK(m.stderr_re == 0.0);  // every sample identical
    CHECK(m.stderr_im == 0.0);
    CHECK(m.excluded == 0);
}

TEST_CASE("single-point and two-point moment arithmetic") {
    Ensemble e = init_coherent(100.0, 1);
    CHECK(estimate_moment(e, 1, 1).value.real() == doctest::Approx(100.0).epsilon(1e-13));

    Ensemble two = init_coherent(1.0, 2);
    two.points[1] = point_from(cplx(3.0, 0.0), cplx(3.0, 0.0), cplx(1.0, 0.0));
    const MomentEstimate m = estimate_moment(two, 1, 1);
    CHECK(m.value.real() == doctest::Approx(5.0).epsilon(1e-13));  // (1 + 9) / 2
}

TEST_CASE("normalization identity holds exactly") {
    const Ensemble e = randomized_ensemble(4097, 99);
    const MomentEstimate m = estimate_moment(e, 0, 0);
    CHECK(m.value.real() == 1.0);
    CHECK(m.value.imag() == 0.0);
    CHECK(m.stderr_re == 0.0);
    CHECK(m.stderr_im == 0.0);
}

TEST_CASE("purely imaginary weight degenerates the normalization") {
    Ensemble e = init_coherent(1.0, 1);
    e.points[0].log_alpha = std::log(cplx(2.0, 0.0));
    e.points[0].log_beta = std::log(cplx(0.5, 0.0));
    e.points[0].log_omega = std::log(cplx(0.0, 1.0));  // Omega = i
    CHECK_THROWS_AS(estimate_moment(e, 1, 1), normalization_error);
}

TEST_CASE("hermiticity is bit-exact") {
    const Ensemble e = randomized_ensemble(513, 123);
    for (const auto [m, n] : {std::pair{0, 1}, {1, 2}, {2, 0}, {3, 1}}) {
        const MomentEstimate a = estimate_moment(e, m, n);
        const MomentEstimate b = estimate_moment(e, n, m);
        CHECK(a.value.real() == b.value.real());
        CHECK(a.value.imag() == -b.value.imag());
        CHECK(a.stderr_re == b.stderr_re);
        CHECK(a.stderr_im == b.stderr_im);
    }
}

TEST_CASE("diverged points are excluded and counted") {
    Ensemble e = init_coherent(9.0, 8);
    e.points[3].diverged = true;
    e.points[6].diverged = true;
    const MomentEstimate m = estimate_moment(e, 1, 1);
    CHECK(m.excluded == 2);
    CHECK(m.value.real() == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("log-domain evaluation survives weights of exp(+-300)") {
    Ensemble e = init_coherent(1.0, 2);
    e.points[0] = point_from(cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0));
    e.points[0].log_omega = cplx(300.0, 0.0);
    e.points[1] = point_from(cplx(2.0, 0.0), cplx(2.0, 0.0), cplx(1.0, 0.0));
    e.points[1].log_omega = cplx(-300.0, 0.0);
    const MomentEstimate m = estimate_moment(e, 1, 1);
    CHECK(std::isfinite(m.value.real()));
    // the exp(300) point dominates: <a^dag a> -> 1
    CHECK(m.value.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(m.norm));
}

TEST_CASE("quadratures of the initial state") {
    const Ensemble e = init_coherent(100.0, 64);
    const auto [x, y] = quadratures(e);
    CHECK(x.value.real() == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(y.value.real() == doctest::Approx(0.0));
}

TEST_CASE("phase-rotated initial state moves amplitude to Y") {
    // alpha -> i alpha with beta = alpha*
    const double n_bar = 49.0;
    Ensemble e = init_coherent(n_bar, 16);
    for (PhasePoint& p : e.points) {
        p.log_alpha += cplx(0.0, two_pi / 4.0);
        p.log_beta -= cplx(0.0, two_pi / 4.0);
    }
    const auto [x, y] = quadratures(e);
    CHECK(x.value.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(y.value.real() == doctest::Approx(std::sqrt(n_bar)).epsilon(1e-13));
}

TEST_CASE("to_lab_frame is the identity at t = 0 and after full turns") {
    Ensemble e = init_coherent(25.0, 4);
    e.frame = Frame::rotating;

    const Ensemble at0 = to_lab_frame(e);
    CHECK(at0.frame == Frame::lab);
    for (std::size_t i = 0; i < e.points.size(); ++i)
        CHECK(at0.points[i].log_alpha == e.points[i].log_alpha);

    // kappa n_bar t = 2 pi
    Ensemble turn = e;
    turn.kappa = 1.0;
    turn.t = two_pi / 25.0;
    turn.frame_phase = 25.0 * turn.t;  // = 2 pi
    const Ensemble lab = to_lab_frame(turn);
    const cplx a0 = std::exp(e.points[0].log_alpha);
    const cplx a1 = std::exp(lab.points[0].log_alpha);
    CHECK(a1.real() == doctest::Approx(a0.real()).epsilon(1e-12));
    CHECK(std::abs(a1.imag() - a0.imag()) < 1e-12);

    Ensemble labbed = init_coherent(25.0, 4);
    CHECK_THROWS_AS(to_lab_frame(labbed), std::logic_error);
}

TEST_CASE("tau derives from sqrt(n_bar) |kappa| t / 2 pi") {
    Ensemble e = init_coherent(100.0, 1);
    e.t = two_pi / 10.0;
    e.kappa = -1.0;  // reversal state does not change |tau|
    CHECK(e.tau() == doctest::Approx(1.0).epsilon(1e-14));
}
