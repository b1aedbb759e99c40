#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "bubbly/cloud.hpp"
#include "bubbly/foldy_lax.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/scattering.hpp"
#include "support.hpp"

using namespace bubbly;
using testutil::rel_err;

namespace {

constexpr double R = 5e-5;

ScatteringModel simplified_model() {
    return make_scattering_model(ScatteringVariant::simplified, testutil::water_air(), R);
}

std::function<std::complex<double>(const Eigen::Vector3d&)> plane_wave(double k) {
    return [k](const Eigen::Vector3d& p) { return std::polar(1.0, k * p.x()); };
}

}

TEST_CASE("kernel value at a frozen point") {
    const std::complex<double> g = greens_fn(0.02, 100.0);
    CHECK(rel_err(g, {1.6557956522133179, -3.6179795055012058}) < 1e-14);
    CHECK(std::abs(g.imag() - im_greens_fn(0.02, 100.0)) < 1e-14 * std::abs(g));
    CHECK(std::abs(im_greens_fn(0.0, 100.0) + 100.0 / (4.0 * std::numbers::pi)) < 1e-14);
    CHECK(std::abs(im_greens_fn(1e-12, 100.0) - im_greens_fn(0.0, 100.0)) < 1e-20);
    CHECK_THROWS_AS(greens_fn(0.0, 100.0), singular_evaluation_error);
    CHECK_THROWS_AS(im_greens_fn(-1.0, 100.0), invalid_input_error);
}

TEST_CASE("assembled system has unit diagonal and symmetric coupling") {
    const BubbleCloud cloud = place_bubbles(11, 12, 0.01, R);
    const ScatteringModel m = simplified_model();
    const std::complex<double> f = monopole_amplitude(m, 0.5 * m.omega_M);
    const double k = 0.5 * m.omega_M / m.c_w;
    const InteractionMatrix sys = assemble(cloud, f, k);
    REQUIRE(sys.size() == 12);
    for (Eigen::Index i = 0; i < sys.size(); ++i) {
        CHECK(sys.entries(i, i) == std::complex<double>(1.0, 0.0));
        for (Eigen::Index j = i + 1; j < sys.size(); ++j) {
            CHECK(sys.entries(i, j) == sys.entries(j, i));
            const double d = (cloud.centers[static_cast<std::size_t>(i)] -
                              cloud.centers[static_cast<std::size_t>(j)])
                                 .norm();
            CHECK(rel_err(sys.entries(i, j),
                          4.0 * std::numbers::pi * f * greens_fn(d, k)) < 1e-14);
        }
    }
}

TEST_CASE("coincident centers are rejected") {
    BubbleCloud cloud;
    cloud.radius = R;
    cloud.half_length = 0.005;
    cloud.centers = {{0.001, 0.0, 0.0}, {0.001, 0.0, 0.0}};
    CHECK_THROWS_AS(assemble(cloud, {1e-5, 0.0}, 100.0), invalid_input_error);
}

TEST_CASE("one bubble: total field is incident plus a monopole") {
    const ScatteringModel m = simplified_model();
    const double omega = 0.7 * m.omega_M;
    const std::complex<double> f = monopole_amplitude(m, omega);
    const double k = omega / m.c_w;

    BubbleCloud cloud;
    cloud.radius = R;
    cloud.half_length = 0.005;
    cloud.centers = {{0.0008, -0.0004, 0.001}};

    const InteractionMatrix sys = assemble(cloud, f, k);
    const auto incident = plane_wave(k);
    IncidentTrace trace;
    trace.values.resize(1);
    trace.values(0) = incident(cloud.centers[0]);
    const Eigen::VectorXcd v = solve_incident(sys, trace);

    for (const auto& x : {Eigen::Vector3d(0.004, 0.001, -0.002),
                          Eigen::Vector3d(-0.003, 0.002, 0.0),
                          Eigen::Vector3d(0.02, 0.0, 0.0)}) {
        const std::complex<double> total = total_field(x, cloud, f, k, v, incident);
        const std::complex<double> expected =
            incident(x) + monopole_field(x, cloud.centers[0], f, trace.values(0), k);
        CHECK(rel_err(total, expected) < 1e-12);
    }
}

TEST_CASE("two bubbles: solve agrees with the Neumann series") {
    const ScatteringModel m = simplified_model();
    const double omega = 0.5 * m.omega_M;
    const std::complex<double> f = monopole_amplitude(m, omega);
    const double k = omega / m.c_w;

    BubbleCloud cloud;
    cloud.radius = R;
    cloud.half_length = 0.005;
    cloud.centers = {{-0.001, 0.0, 0.0}, {0.0012, 0.0003, -0.0002}};

    const InteractionMatrix sys = assemble(cloud, f, k);
    const auto incident = plane_wave(k);
    Eigen::VectorXcd g(2);
    g(0) = incident(cloud.centers[0]);
    g(1) = incident(cloud.centers[1]);

    Eigen::MatrixXcd off = sys.entries;
    off.diagonal().setZero();
    Eigen::VectorXcd series = g;
    Eigen::VectorXcd term = g;
    for (int it = 0; it < 40; ++it) {
        term = -off * term;
        series += term;
    }

    const Eigen::VectorXcd solved = FoldySolver(sys).solve(g);
    CHECK((solved - series).norm() <= 1e-8 * series.norm());
}

TEST_CASE("solver leaves a small residual on a packed cloud") {
    const BubbleCloud cloud = place_bubbles(2, 100, 0.01, R);
    const ScatteringModel m = simplified_model();
    const double omega = 0.95 * m.omega_M;
    const std::complex<double> f = monopole_amplitude(m, omega);
    const double k = omega / m.c_w;
    const InteractionMatrix sys = assemble(cloud, f, k);
    const FoldySolver solver(sys);

    Eigen::VectorXcd g(cloud.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        g(i) = greens_fn(cloud.centers[static_cast<std::size_t>(i)].norm(), k);
    const Eigen::VectorXcd v = solver.solve(g);
    CHECK((sys.entries * v - g).norm() <= 1e-10 * g.norm());
    CHECK(solver.condition_estimate() >= 1.0);
    CHECK_FALSE(solver.ill_conditioned());
}

TEST_CASE("point-source field is reciprocal") {
    const BubbleCloud cloud = place_bubbles(3, 25, 0.01, R, {Eigen::Vector3d::Zero()}, 2.0 * R);
    const ScatteringModel m = simplified_model();
    const double omega = 0.9 * m.omega_M;
    const std::complex<double> f = monopole_amplitude(m, omega);
    const double k = omega / m.c_w;
    const InteractionMatrix sys = assemble(cloud, f, k);
    const FoldySolver solver(sys);

    const Eigen::Vector3d a(0.02, 0.0, 0.0);
    const Eigen::Vector3d b(-0.001, 0.015, 0.004);
    auto field = [&](const Eigen::Vector3d& src, const Eigen::Vector3d& at) {
        Eigen::VectorXcd g(cloud.size());
        for (Eigen::Index i = 0; i < g.size(); ++i)
            g(i) = greens_fn((cloud.centers[static_cast<std::size_t>(i)] - src).norm(), k);
        const Eigen::VectorXcd v = solver.solve(g);
        return total_field(at, cloud, f, k, v, [&](const Eigen::Vector3d& p) {
            return greens_fn((p - src).norm(), k);
        });
    };
    CHECK(rel_err(field(a, b), field(b, a)) < 1e-10);
}

TEST_CASE("evaluation inside a bubble is rejected") {
    BubbleCloud cloud;
    cloud.radius = R;
    cloud.half_length = 0.005;
    cloud.centers = {{0.001, 0.0, 0.0}};
    Eigen::VectorXcd v(1);
    v(0) = 1.0;
    CHECK_THROWS_AS(total_field(Eigen::Vector3d(0.001 + 0.4 * R, 0.0, 0.0), cloud, {1e-5, 0.0},
                                100.0, v, plane_wave(100.0)),
                    near_field_error);
}

TEST_CASE("effective kernel reduces to free space without bubbles") {
    BubbleCloud empty;
    empty.radius = R;
    empty.half_length = 0.005;
    const ScatteringModel m = simplified_model();
    const double omega = 0.8 * m.omega_M;
    const Eigen::Vector3d x(0.007, -0.002, 0.001);
    const std::complex<double> g =
        effective_green(x, omega, empty, testutil::water_air(), m);
    CHECK(rel_err(g, greens_fn(x.norm(), omega / m.c_w)) < 1e-14);
}

TEST_CASE("effective kernel with one bubble has the closed form") {
    BubbleCloud cloud;
    cloud.radius = R;
    cloud.half_length = 0.005;
    cloud.centers = {{0.002, 0.001, -0.0015}};
    const ScatteringModel m = simplified_model();
    const double omega = 1.3 * m.omega_M;
    const double k = omega / m.c_w;
    const std::complex<double> f = monopole_amplitude(m, omega);
    const Eigen::Vector3d x(-0.006, 0.004, 0.002);
    const std::complex<double> expected =
        greens_fn(x.norm(), k) -
        4.0 * std::numbers::pi * f * greens_fn((x - cloud.centers[0]).norm(), k) *
            greens_fn(cloud.centers[0].norm(), k);
    CHECK(rel_err(effective_green(x, omega, cloud, testutil::water_air(), m), expected) < 1e-13);
}
