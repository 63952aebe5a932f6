#include <cmath>
#include <complex>

#include "doctest.h"
#include "sumrate/channel.hpp"
#include "sumrate/linalg.hpp"
#include "sumrate/rng.hpp"

using namespace sumrate;

TEST_CASE("sample_channel determinism and shape") {
    const ChannelEnsemble e{1, 1, 42, 0};
    const ComplexMatrix a = sample_channel(e);
    const ComplexMatrix b = sample_channel(e);
    CHECK(a(0, 0) == b(0, 0));

    const ComplexMatrix c = sample_channel({2, 3, 7, 5});
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 3);

    // different trial indices decorrelate
    const ComplexMatrix d = sample_channel({1, 1, 42, 1});
    CHECK(a(0, 0) != d(0, 0));

    CHECK_THROWS_AS(sample_channel({0, 4, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_channel({4, 0, 1, 0}), std::invalid_argument);
}

TEST_CASE("sample_channel per-entry moments over 1e5 trials") {
    const std::size_t k = 4, m = 4;
    double sum_sq = 0.0;
    std::complex<double> sum = 0.0;
    const std::uint64_t trials = 100000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ComplexMatrix h = sample_channel({k, m, 2024, t});
        for (const cplx& z : h.entries()) {
            sum += z;
            sum_sq += std::norm(z);
        }
    }
    const double n = static_cast<double>(trials * k * m);
    CHECK(std::abs(sum) / n < 3.0 / std::sqrt(n));  // zero mean
    CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.02));  // unit variance
}

TEST_CASE("adjoint is an involution") {
    const ComplexMatrix h = sample_channel({3, 5, 9, 0});
    const ComplexMatrix hh = h.adjoint().adjoint();
    REQUIRE(hh.rows() == h.rows());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) CHECK(hh(i, j) == h(i, j));
}

TEST_CASE("log_det_capacity on identity and zero channels") {
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    CHECK(log_det_capacity(eye, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

    ComplexMatrix zero(3, 3);
    CHECK(log_det_capacity(zero, 2.5) == doctest::Approx(0.0));

    CHECK_THROWS_AS(log_det_capacity(eye, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(log_det_capacity(ComplexMatrix{}, 1.0), std::invalid_argument);

    ComplexMatrix bad(1, 1);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(log_det_capacity(bad, 1.0), std::runtime_error);
}

TEST_CASE("log_det_capacity equals eigenvalue sum") {
    const ComplexMatrix h = sample_channel({4, 4, 11, 3});
    const double direct = log_det_capacity(h, 0.5);
    double viaeig = 0.0;
    for (double lam : gram_eigenvalues(h)) viaeig += std::log2(1.0 + 0.5 * lam);
    CHECK(direct == doctest::Approx(viaeig).epsilon(1e-8));
}

TEST_CASE("log_det_capacity vs eigenvalue oracle across shapes and scales") {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const std::size_t k = 1 + t % 6;
        const std::size_t m = 1 + (t * 7) % 9;
        const ComplexMatrix h = sample_channel({k, m, 1000 + t, t});
        for (double s : {1e-6, 0.1, 1.0, 37.0}) {
            const double direct = log_det_capacity(h, s);
            double viaeig = 0.0;
            for (double lam : gram_eigenvalues(h)) viaeig += std::log2(1.0 + s * lam);
            CHECK(direct == doctest::Approx(viaeig).epsilon(1e-8));
            CHECK(direct >= 0.0);
        }
    }
}

TEST_CASE("log_det_capacity strictly increasing in scale") {
    const ComplexMatrix h = sample_channel({3, 3, 5, 1});
    double prev = log_det_capacity(h, 0.01);
    for (double s : {0.1, 1.0, 10.0}) {
        const double cur = log_det_capacity(h, s);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("gram_eigenvalues on constructed matrices") {
    const auto ev_eye = gram_eigenvalues(ComplexMatrix::identity(3));
    REQUIRE(ev_eye.size() == 3);
    for (double v : ev_eye) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

    ComplexMatrix diag(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    const auto ev = gram_eigenvalues(diag);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ev[1] == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("gram eigenvalue trace identity at 8x8") {
    const ComplexMatrix h = sample_channel({8, 8, 77, 0});
    const ComplexMatrix g = h.gram();
    double trace = 0.0;
    for (std::size_t i = 0; i < 8; ++i) trace += g(i, i).real();
    double sum = 0.0;
    for (double lam : gram_eigenvalues(h)) sum += lam;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-9));
}

TEST_CASE("HH* and H*H share nonzero eigenvalues") {
    const ComplexMatrix h = sample_channel({3, 6, 13, 2});
    const auto small = gram_eigenvalues(h);             // 3 values
    const auto large = gram_eigenvalues(h.adjoint());   // 6 values, 3 zeros
    REQUIRE(large.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(large[i]) < 1e-8);
        CHECK(large[i + 3] == doctest::Approx(small[i]).epsilon(1e-8));
    }
    for (double v : small) CHECK(v > -1e-10);
}

TEST_CASE("trial rng gaussian pair is deterministic across instances") {
    TrialRng a(5, 17), b(5, 17);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
}
