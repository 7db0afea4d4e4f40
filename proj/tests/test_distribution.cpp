#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "volmix/distribution.hpp"

using namespace volmix;

namespace {

// Total probability accounted for by a density estimate: bin mass plus the
// out-of-range counts' share.
double total_mass(const Density& d) {
    double mass = 0.0;
    for (std::size_t i = 0; i < d.density.size(); ++i)
        mass += d.density[i] * (d.edges[i + 1] - d.edges[i]);
    const double n = static_cast<double>(d.total_count);
    return mass + static_cast<double>(d.underflow_count + d.overflow_count) / n;
}

}  // namespace

TEST_CASE("uniform bins on an evenly spread sample give unit density") {
    // 10^4 points spread evenly over [1,2] with explicit edges: each of the
    // ten bins holds exactly a tenth of the mass, so density == 1 everywhere.
    std::vector<double> xs;
    for (int i = 0; i < 10000; ++i) xs.push_back(1.0 + (i + 0.5) / 10000.0);
    DensityOptions opts;
    opts.scale = BinScale::uniform;
    opts.bin_count = 10;
    opts.lo = 1.0;
    opts.hi = 2.0;
    const Density d = empirical_density(xs, opts);
    REQUIRE(d.density.size() == 10);
    for (double v : d.density) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.underflow_count == 0);
    CHECK(d.overflow_count == 0);
    CHECK(total_mass(d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("logarithmic bins are geometric and span the absolute values") {
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(1e-3 * std::pow(10.0, 3.0 * i / 199.0));
    DensityOptions opts;
    opts.bin_count = 30;
    const Density d = empirical_density(xs, opts);
    REQUIRE(d.edges.size() == 31);
    CHECK(d.edges.front() == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(d.edges.back() == doctest::Approx(1.0).epsilon(1e-12));
    const double ratio = d.edges[1] / d.edges[0];
    for (std::size_t i = 1; i + 1 < d.edges.size(); ++i)
        CHECK(d.edges[i + 1] / d.edges[i] == doctest::Approx(ratio).epsilon(1e-10));
    // Geometric bin centers sit at the edge midpoints in log space.
    CHECK(d.centers[0] == doctest::Approx(std::sqrt(d.edges[0] * d.edges[1])).epsilon(1e-12));
}

TEST_CASE("signed data are folded to absolute value for log bins") {
    std::vector<double> xs;
    for (int i = 1; i <= 100; ++i) {
        xs.push_back(0.01 * i);
        xs.push_back(-0.01 * i);
    }
    const Density d = empirical_density(xs);
    CHECK(d.total_count == 200);
    std::size_t binned = d.underflow_count + d.overflow_count;
    for (std::size_t c : d.counts) binned += c;
    CHECK(binned == 200);
}

TEST_CASE("an explicit lower edge routes small values to the underflow bucket") {
    std::vector<double> xs;
    for (int i = 1; i <= 200; ++i) xs.push_back(0.01 * i);  // 0.01 .. 2.0
    DensityOptions opts;
    opts.lo = 0.1;
    opts.hi = 2.0;
    const Density d = empirical_density(xs, opts);
    CHECK(d.underflow_count == 9);  // 0.01 .. 0.09
    CHECK(d.total_count == 200);
    CHECK(total_mass(d) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("normalization holds on irregular data") {
    std::mt19937_64 rng(1234);
    std::lognormal_distribution<double> ln(0.0, 1.0);
    std::vector<double> xs;
    for (int i = 0; i < 5000; ++i) xs.push_back(ln(rng));
    const Density d = empirical_density(xs);
    CHECK(total_mass(d) == doctest::Approx(1.0).epsilon(1e-9));

    DensityOptions uni;
    uni.scale = BinScale::uniform;
    uni.bin_count = 37;
    const Density d2 = empirical_density(xs, uni);
    CHECK(total_mass(d2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("boundary values land in half-open bins with a closed top") {
    std::vector<double> xs;
    for (int i = 0; i < 100; ++i) xs.push_back(5.0);  // padding to pass the size gate
    xs.push_back(3.0);   // exactly an interior edge: belongs to [3,4)
    xs.push_back(10.0);  // exactly the top edge: belongs to the last bin
    DensityOptions opts;
    opts.scale = BinScale::uniform;
    opts.bin_count = 10;
    opts.lo = 0.0;
    opts.hi = 10.0;
    const Density d = empirical_density(xs, opts);
    CHECK(d.counts[3] == 1);
    CHECK(d.counts[9] == 1);
    CHECK(d.counts[5] == 100);
    CHECK(d.overflow_count == 0);
}

TEST_CASE("density estimation requires a minimum sample") {
    std::vector<double> xs(99, 1.0);
    CHECK_THROWS_AS((void)empirical_density(xs), std::invalid_argument);
}

TEST_CASE("all-zero data cannot seed logarithmic bins") {
    std::vector<double> xs(200, 0.0);
    CHECK_THROWS_AS((void)empirical_density(xs), std::invalid_argument);
}

TEST_CASE("rescaling divides by the square root of the scale") {
    const std::vector<double> r = {1.0, -2.0, 3.0};
    const std::vector<double> z = rescale_returns(r, 4);
    REQUIRE(z.size() == 3);
    CHECK(z[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(z[2] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("collapse of identical samples is zero and the matrix is symmetric") {
    std::vector<double> base;
    for (int i = 0; i < 1500; ++i) base.push_back(0.001 * i);
    const CollapseReport rep = collapse_metric({base, base, base}, {1, 2, 3});
    CHECK(rep.max_distance == 0.0);
    REQUIRE(rep.pairwise_distance.size() == 9);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rep.pairwise_distance[i * 3 + i] == 0.0);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(rep.pairwise_distance[i * 3 + j] == rep.pairwise_distance[j * 3 + i]);
    }
}

TEST_CASE("collapse detects a shifted sample") {
    std::vector<double> a, b;
    for (int i = 0; i < 2000; ++i) {
        const double u = (i + 0.5) / 2000.0;
        a.push_back(u);
        b.push_back(u + 0.1);
    }
    const CollapseReport rep = collapse_metric({a, b}, {5, 15});
    CHECK(rep.max_distance == doctest::Approx(0.1).epsilon(0.02));
    CHECK(rep.scales == std::vector<std::size_t>{5, 15});
}

TEST_CASE("collapse preconditions") {
    std::vector<double> big(1500, 1.0);
    std::vector<double> small(10, 1.0);
    CHECK_THROWS_AS((void)collapse_metric({big}, {5}), std::invalid_argument);
    CHECK_THROWS_AS((void)collapse_metric({big, small}, {5, 15}), std::invalid_argument);
}
