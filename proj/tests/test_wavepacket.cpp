#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "relwave/io.hpp"
#include "relwave/rng.hpp"
#include "relwave/wavepacket.hpp"

using namespace relwave;

TEST_CASE("dispersion") {
    CHECK(dispersion({0, 0, 0}, 1.3) == 1.3);
    CHECK(dispersion({0.7, 0, 0}, 0.0) == 0.7);
    CHECK(dispersion({3, 0, 0}, 4.0) == 5.0);  // pythagorean triple
    CHECK(dispersion({0, 3, 0}, 4.0) == 5.0);
    CHECK_THROWS_AS(dispersion({1, 0, 0}, -0.1), std::invalid_argument);
}

TEST_CASE("momentum grid invariants") {
    const MomentumGrid g = MomentumGrid::uniform_1d(2.0, 64);
    CHECK(g.size() == 64);
    CHECK(g.axes[0].min == -2.0);
    CHECK(g.axes[0].max() == Catch::Approx(2.0).margin(1e-14));

    MomentumGrid bad = g;
    bad.axes[0].min = -1.5;  // breaks the symmetry about k = 0
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK_THROWS_AS(MomentumGrid::uniform_1d(-1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(MomentumGrid::uniform_1d(1.0, 1), std::invalid_argument);
}

TEST_CASE("single-mode synthesis is a weighted plane wave") {
    MomentumGrid grid = MomentumGrid::uniform_1d(1.0, 2);
    const double k = grid.points[0].x;
    const double w0 = grid.weights[0];
    MomentumAmplitude amp(grid, {cdouble{1.0, 0.0}, cdouble{0.0, 0.0}}, 1.0);
    const double k0 = dispersion({k, 0, 0}, 1.0);
    const FourVector event{0.3, 0.8, 0.0, 0.0};
    const cdouble value = synthesize(amp, event);
    CHECK(std::abs(value) == Catch::Approx(w0 / k0).epsilon(1e-13));
    const cdouble expected = std::polar(w0 / k0, -(k0 * event.t - k * event.x));
    CHECK(std::abs(value - expected) < 1e-13);
}

TEST_CASE("synthesize matches a brute-force quadrature loop") {
    const MomentumAmplitude amp =
        gaussian_packet({0.1, 0, 0}, 0.3, 1.0, MomentumGrid::packet_default(0.1, 0.3, 512));
    for (double x : {-1.2, 0.0, 2.7}) {
        // independent direct summation
        cdouble direct{0, 0};
        for (std::size_t i = 0; i < amp.size(); ++i) {
            const double k = amp.grid.points[i].x;
            const double k0 = std::sqrt(k * k + 1.0);
            direct += amp.values[i] * amp.grid.weights[i] / k0 *
                      cdouble{std::cos(k * x), std::sin(k * x)};
        }
        CHECK(std::abs(synthesize(amp, {0.0, x, 0.0, 0.0}) - direct) < 1e-10);
    }
}

TEST_CASE("synthesize is linear in the amplitude") {
    const MomentumGrid grid = MomentumGrid::packet_default(0.0, 0.25, 256);
    const MomentumAmplitude a1 = gaussian_packet({0.0, 0, 0}, 0.25, 1.0, grid);
    const MomentumAmplitude a2 = gaussian_packet({0.3, 0, 0}, 0.25, 1.0, grid);
    const cdouble ca{0.7, -0.4}, cb{-0.2, 1.1};
    std::vector<cdouble> mixed(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) mixed[i] = ca * a1.values[i] + cb * a2.values[i];
    const MomentumAmplitude sum(grid, mixed, 1.0);
    const FourVector event{0.4, -1.1, 0.0, 0.0};
    const cdouble lhs = synthesize(sum, event);
    const cdouble rhs = ca * synthesize(a1, event) + cb * synthesize(a2, event);
    CHECK(std::abs(lhs - rhs) < 1e-12);

    // scaling by a complex constant scales the value
    std::vector<cdouble> scaled(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) scaled[i] = ca * a1.values[i];
    CHECK(std::abs(synthesize(MomentumAmplitude(grid, scaled, 1.0), event) - ca * synthesize(a1, event)) <
          1e-12);
}

TEST_CASE("evolve reproduces synthesize and conserves the norm") {
    const MomentumAmplitude amp =
        gaussian_packet({0.0, 0, 0}, 0.2, 1.0, MomentumGrid::uniform_1d(2.0, 1024));
    const SpatialGrid xgrid = SpatialGrid::conjugate_to(amp.grid);
    const PositionField at_zero = evolve(amp, 0.0, xgrid);
    CHECK(at_zero.time == 0.0);
    for (std::size_t j = 0; j < xgrid.size(); j += 97)
        CHECK(at_zero.values[j] == synthesize(amp, FourVector::from(0.0, xgrid.points[j])));

    // free evolution is a phase per mode: the momentum-space norm cannot move
    const double n0 = norm(amp);
    for (double t : {0.5, 2.0}) {
        const InversionResult inv = position_to_momentum(evolve(amp, t, xgrid), amp.mass);
        CHECK(std::abs(norm(inv.amplitude) - n0) < 1e-10 * n0);
    }
    CHECK_THROWS_AS(evolve(amp, std::numeric_limits<double>::quiet_NaN(), xgrid), std::invalid_argument);
}

TEST_CASE("norm basics and brute-force oracle") {
    const MomentumGrid grid = MomentumGrid::uniform_1d(1.5, 128);
    MomentumAmplitude zero(grid, std::vector<cdouble>(grid.size()), 1.0);
    CHECK(norm(zero) == 0.0);

    const MomentumAmplitude amp = gaussian_packet({0.0, 0, 0}, 0.2, 1.0, grid);
    std::vector<cdouble> doubled(amp.values);
    for (auto& v : doubled) v *= 2.0;
    CHECK(norm(MomentumAmplitude(grid, doubled, 1.0)) == Catch::Approx(4.0 * norm(amp)).epsilon(1e-13));

    double direct = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double k = amp.grid.points[i].x;
        direct += std::norm(amp.values[i]) * amp.grid.weights[i] / (2.0 * std::sqrt(k * k + 1.0));
    }
    CHECK(std::abs(norm(amp) - direct) < 1e-12);
}

TEST_CASE("nonrelativistic phases in the slow regime") {
    const double m = 1.0;
    const double sigma = 0.00125;
    const MomentumAmplitude amp =
        gaussian_packet({0, 0, 0}, sigma, m, MomentumGrid::packet_default(0.0, sigma, 512));
    const double t = 10.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double k = std::abs(amp.grid.points[i].x);
        REQUIRE(k <= 0.01 * m);
        const double kg = dispersion(amp.grid.points[i], m) * t;
        const double nr = (m + k * k / (2.0 * m)) * t;
        CHECK(std::abs(kg - nr) < 1e-4);
    }
}

TEST_CASE("round trip on a Gaussian packet") {
    const MomentumGrid grid = MomentumGrid::uniform_1d(2.0, 1024);
    const MomentumAmplitude amp = gaussian_packet({0.0, 0, 0}, 0.2, 1.0, grid);
    const SpatialGrid xgrid = SpatialGrid::conjugate_to(grid);
    const PositionField field = evolve(amp, 0.9, xgrid);
    const InversionResult inv = position_to_momentum(field, amp.mass);
    CHECK_FALSE(inv.aliasing_warning);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double meas = amp.grid.weights[i] / (2.0 * dispersion(amp.grid.points[i], amp.mass));
        num += std::norm(inv.amplitude.values[i] - amp.values[i]) * meas;
        den += std::norm(amp.values[i]) * meas;
    }
    CHECK(std::sqrt(num / den) < 1e-8);

    // and the reconstructed field matches the original one
    const PositionField back = evolve(inv.amplitude, field.time, xgrid);
    double fnum = 0.0, fden = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        fnum += std::norm(back.values[j] - field.values[j]);
        fden += std::norm(field.values[j]);
    }
    CHECK(std::sqrt(fnum / fden) < 1e-8);
}

TEST_CASE("plane-wave field inverts to a single dominated bin") {
    const MomentumGrid grid = MomentumGrid::uniform_1d(2.0, 256);
    const SpatialGrid xgrid = SpatialGrid::conjugate_to(grid);
    const std::size_t target_bin = 150;
    const double k_sel = grid.points[target_bin].x;

    PositionField field;
    field.grid = xgrid;
    field.time = 0.0;
    field.values.resize(xgrid.size());
    for (std::size_t j = 0; j < xgrid.size(); ++j)
        field.values[j] = std::polar(1.0, k_sel * xgrid.points[j].x);

    const InversionResult inv = position_to_momentum(field, 1.0);
    double total = 0.0, near = 0.0;
    std::size_t peak = 0;
    double peak_val = 0.0;
    for (std::size_t i = 0; i < inv.amplitude.size(); ++i) {
        const double contrib = std::norm(inv.amplitude.values[i]) * inv.amplitude.grid.weights[i] /
                               (2.0 * dispersion(inv.amplitude.grid.points[i], 1.0));
        total += contrib;
        if (i + 1 >= target_bin && i <= target_bin + 1) near += contrib;
        if (contrib > peak_val) {
            peak_val = contrib;
            peak = i;
        }
    }
    CHECK(peak == target_bin);
    CHECK(near >= 0.99 * total);
}

TEST_CASE("inversion edge cases") {
    const MomentumGrid grid = MomentumGrid::uniform_1d(2.0, 256);
    const SpatialGrid xgrid = SpatialGrid::conjugate_to(grid);

    // zero field -> zero amplitude, no warning
    PositionField zero;
    zero.grid = xgrid;
    zero.time = 0.0;
    zero.values.assign(xgrid.size(), cdouble{0.0, 0.0});
    const InversionResult zinv = position_to_momentum(zero, 1.0);
    CHECK_FALSE(zinv.aliasing_warning);
    for (const auto& v : zinv.amplitude.values) CHECK(std::abs(v) == 0.0);

    // content in the outermost band trips the aliasing warning
    const double k_edge = grid.points[250].x;
    PositionField hot = zero;
    for (std::size_t j = 0; j < xgrid.size(); ++j)
        hot.values[j] = std::polar(1.0, k_edge * xgrid.points[j].x);
    CHECK(position_to_momentum(hot, 1.0).aliasing_warning);
}

TEST_CASE("gaussian packet construction") {
    const MomentumAmplitude amp =
        gaussian_packet({0.0, 0, 0}, 0.2, 1.0, MomentumGrid::packet_default(0.0, 0.2));
    CHECK(norm(amp) == Catch::Approx(1.0).margin(1e-10));
    CHECK(std::abs(mean_momentum(amp).x) < 1e-12);

    // a grid that cuts the profile at 4 sigma truncates too much mass
    CHECK_THROWS_AS(gaussian_packet({0.0, 0, 0}, 0.5, 1.0, MomentumGrid::uniform_1d(2.0, 256)),
                    std::invalid_argument);
    CHECK_THROWS_AS(gaussian_packet({0.0, 0, 0}, -0.5, 1.0, MomentumGrid::uniform_1d(2.0, 256)),
                    std::invalid_argument);
}

TEST_CASE("position width scales inversely with momentum width") {
    // second-moment oracle over the synthesized field at t = 0
    const auto width = [](double sigma_k) {
        const MomentumAmplitude amp =
            gaussian_packet({0, 0, 0}, sigma_k, 1.0, MomentumGrid::packet_default(0.0, sigma_k, 2048));
        const double sx = 1.0 / (2.0 * sigma_k);
        const SpatialGrid xgrid = SpatialGrid::uniform_1d(-8.0 * sx, 8.0 * sx, 1025);
        const PositionField f = evolve(amp, 0.0, xgrid);
        double m0 = 0, m1 = 0, m2 = 0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double w = std::norm(f.values[j]) * f.grid.weights[j];
            m0 += w;
            m1 += w * f.grid.points[j].x;
        }
        const double mean = m1 / m0;
        for (std::size_t j = 0; j < f.size(); ++j)
            m2 += std::norm(f.values[j]) * f.grid.weights[j] * (f.grid.points[j].x - mean) *
                  (f.grid.points[j].x - mean);
        return std::sqrt(m2 / m0);
    };
    const double w1 = width(0.1);
    const double w2 = width(0.2);
    CHECK(w1 / w2 == Catch::Approx(2.0).epsilon(0.05));
}

TEST_CASE("3D packet: norm, mean and round trip") {
    const MomentumGrid grid = MomentumGrid::uniform_3d(2.0, 12);
    const MomentumAmplitude amp = gaussian_packet({0, 0, 0}, 0.25, 1.0, grid);
    CHECK(norm(amp) == Catch::Approx(1.0).margin(1e-10));
    const Vec3 mean = mean_momentum(amp);
    CHECK(std::abs(mean.x) < 1e-12);
    CHECK(std::abs(mean.y) < 1e-12);
    CHECK(std::abs(mean.z) < 1e-12);

    const SpatialGrid xgrid = SpatialGrid::conjugate_to(grid);
    const PositionField field = evolve(amp, 0.4, xgrid);
    const InversionResult inv = position_to_momentum(field, amp.mass);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double meas = amp.grid.weights[i] / (2.0 * dispersion(amp.grid.points[i], amp.mass));
        num += std::norm(inv.amplitude.values[i] - amp.values[i]) * meas;
        den += std::norm(amp.values[i]) * meas;
    }
    CHECK(std::sqrt(num / den) < 1e-8);
}

TEST_CASE("csv serialization layout") {
    const MomentumAmplitude amp =
        gaussian_packet({0, 0, 0}, 0.2, 1.0, MomentumGrid::uniform_1d(1.0, 16));
    std::ostringstream os;
    write_csv(os, amp);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "index,kx,re,im");
    std::size_t rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == amp.size());

    const PositionField field = evolve(amp, 0.0, SpatialGrid::uniform_1d(-1.0, 1.0, 8));
    std::ostringstream osf;
    write_csv(osf, field);
    CHECK(osf.str().substr(0, 13) == "index,x,re,im");
}
