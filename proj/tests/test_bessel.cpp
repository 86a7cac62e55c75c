#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cascade/bessel.hpp"

namespace {

// Independent oracle: ascending Maclaurin series of J1 in extended precision.
// Converges to ~1e-16 absolute for |x| <= 25 with 40 terms.
long double j1_series(long double x) {
    const long double half = x / 2.0L;
    long double term = half;  // k = 0: (x/2) / (0! 1!)
    long double sum = term;
    for (int k = 1; k <= 40; ++k) {
        term *= -half * half / (static_cast<long double>(k) * (k + 1));
        sum += term;
    }
    return sum;
}

// Second independent oracle: Hankel asymptotic expansion truncated at its
// smallest term, usable for x >~ 20.
long double j1_asymptotic(long double x) {
    const long double mu = 4.0L;  // 4 nu^2 with nu = 1
    long double pterm = 1.0L, p = 1.0L;
    long double qterm = (mu - 1.0L) / (8.0L * x), q = qterm;
    for (int k = 1; k < 30; ++k) {
        const long double a = 4.0L * k - 3.0L, b = 4.0L * k - 1.0L;
        const long double pnext =
            pterm * (-(mu - a * a) * (mu - b * b) /
                     ((2.0L * k - 1.0L) * (2.0L * k) * 64.0L * x * x));
        const long double c = 4.0L * k - 1.0L, d = 4.0L * k + 1.0L;
        const long double qnext =
            qterm * (-(mu - c * c) * (mu - d * d) /
                     ((2.0L * k) * (2.0L * k + 1.0L) * 64.0L * x * x));
        if (std::fabs(pnext) >= std::fabs(pterm) || std::fabs(qnext) >= std::fabs(qterm)) break;
        pterm = pnext;
        qterm = qnext;
        p += pterm;
        q += qterm;
    }
    const long double chi = x - 3.0L * 0.78539816339744830961566L;  // x - 3 pi / 4
    return std::sqrt(2.0L / (3.14159265358979323846L * x)) *
           (p * std::cos(chi) - q * std::sin(chi));
}

} // namespace

TEST_CASE("J1 at zero") { CHECK(cascade::bessel_j1(0.0) == 0.0); }

TEST_CASE("J1 against ascending series") {
    for (double x : {0.01, 0.1, 0.5, 1.0, 1.8411837813, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0}) {
        const double ref = static_cast<double>(j1_series(x));
        CHECK(std::fabs(cascade::bessel_j1(x) - ref) < 1e-12);
    }
}

TEST_CASE("J1 local maximum") {
    // location of the first maximum, from the derivative root; value frozen
    // from the 40-term series evaluated in extended precision
    const double x_star = 1.8411837813;
    CHECK(std::fabs(cascade::bessel_j1(x_star) - 0.5818652242815964) < 1e-12);
    // series oracle agrees
    CHECK(std::fabs(static_cast<double>(j1_series(x_star)) - 0.5818652242815964) < 1e-14);
}

TEST_CASE("J1 series and asymptotic oracles cross-check") {
    // window where both expansions hold full precision in long double
    for (double x : {20.0, 21.0, 22.0}) {
        CHECK(std::fabs(static_cast<double>(j1_series(x) - j1_asymptotic(x))) < 1e-10);
    }
}

TEST_CASE("J1 against asymptotic oracle to |x| = 1e4") {
    for (double x : {30.0, 100.0, 316.0, 1000.0, 3162.0, 10000.0}) {
        const double ref = static_cast<double>(j1_asymptotic(x));
        CHECK(std::fabs(cascade::bessel_j1(x) - ref) < 1e-10);
    }
}

TEST_CASE("J1 oddness") {
    for (double x : {0.3, 2.0, 17.0, 123.4}) {
        CHECK(cascade::bessel_j1(-x) == -cascade::bessel_j1(x));
    }
}

TEST_CASE("J1(x)/x continuous through zero") {
    CHECK(cascade::bessel_j1_over_z(0.0) == 0.5);
    // both sides of the series cutover agree with the extended-precision
    // reference at their own argument
    for (double z : {0.001, 0.01, 0.0399999, 0.0400001, 0.5, 2.0}) {
        const double ref = static_cast<double>(j1_series(z) / z);
        CHECK(std::fabs(cascade::bessel_j1_over_z(z) - ref) < 1e-13);
    }
}
