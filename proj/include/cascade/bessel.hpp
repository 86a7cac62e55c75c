#pragma once

#include <cmath>

namespace cascade {

namespace detail {

// Rational minimax coefficients for J1 (Cephes j1.c layout): an 8/8 rational
// approximation below x = 5 with the first two zeros factored out, and the
// usual P/Q modulus-phase asymptotic form above.
inline constexpr double j1_rp[4] = {
    -8.99971225705559398224e8,
    4.52228297998194034323e11,
    -7.27494245221818276015e13,
    3.68295732863852883286e15,
};
inline constexpr double j1_rq[8] = {
    6.20836478118054335476e2,
    2.56987256757748830383e5,
    8.35146791431949253037e7,
    2.21511595479792499675e10,
    4.74914122079991414898e12,
    7.84369607876235854894e14,
    8.95222336184627338078e16,
    5.32278620332680085395e18,
};
inline constexpr double j1_pp[7] = {
    7.62125616208173112003e-4,
    7.31397056940917570436e-2,
    1.12719608129684925192e0,
    5.11207951146807644818e0,
    8.42404590141772420927e0,
    5.21451598682361504063e0,
    1.00000000000000000254e0,
};
inline constexpr double j1_pq[7] = {
    5.71323128072548699714e-4,
    6.88455908754495404082e-2,
    1.10514232634061696926e0,
    5.07386386128601488557e0,
    8.39985554327604159757e0,
    5.20982848682361821619e0,
    9.99999999999999997461e-1,
};
inline constexpr double j1_qp[8] = {
    5.10862594750176621635e-2,
    4.98213872951233449420e0,
    7.58238284132545283818e1,
    3.66779609360150777800e2,
    7.10856304998926107277e2,
    5.97489612400613639965e2,
    2.11688757100572135698e2,
    2.52070205858023719784e1,
};
inline constexpr double j1_qq[7] = {
    7.42373277035675149943e1,
    1.05644886038262816351e3,
    4.98641058337653607651e3,
    9.56231892404756170795e3,
    7.99704160447350683650e3,
    2.82619278517639096600e3,
    3.36093607810698293419e2,
};

inline constexpr double j1_z1 = 1.46819706421238932572e1;  // first zero of J1, squared
inline constexpr double j1_z2 = 4.92184563216946036703e1;  // second zero of J1, squared
inline constexpr double three_pi_over_4 = 2.35619449019234492885;
inline constexpr double sqrt_two_over_pi = 0.79788456080286535588;

template <int N>
inline double polevl(double x, const double (&c)[N]) {
    double r = c[0];
    for (int i = 1; i < N; ++i) r = r * x + c[i];
    return r;
}

// polynomial with implicit leading coefficient 1
template <int N>
inline double p1evl(double x, const double (&c)[N]) {
    double r = x + c[0];
    for (int i = 1; i < N; ++i) r = r * x + c[i];
    return r;
}

} // namespace detail

// Bessel function of the first kind, order one. Absolute accuracy is a few
// parts in 1e15 on |x| <= 1e4, dominated by argument reduction of the
// asymptotic phase at the large end.
inline double bessel_j1(double x) {
    using namespace detail;
    const double w = std::fabs(x);
    if (w <= 5.0) {
        const double z = x * x;
        double v = polevl(z, j1_rp) / p1evl(z, j1_rq);
        return v * x * (z - j1_z1) * (z - j1_z2);
    }
    const double iw = 5.0 / w;
    const double z = iw * iw;
    const double p = polevl(z, j1_pp) / polevl(z, j1_pq);
    const double q = polevl(z, j1_qp) / p1evl(z, j1_qq);
    const double xn = w - three_pi_over_4;
    const double v = (p * std::cos(xn) - iw * q * std::sin(xn)) * sqrt_two_over_pi / std::sqrt(w);
    return x < 0 ? -v : v;
}

// J1(z)/z, continuous through z = 0 (value 1/2). Stable for small z.
inline double bessel_j1_over_z(double z) {
    const double az = std::fabs(z);
    if (az < 0.04) {
        const double z2 = z * z;
        // ascending series of J1(z)/z
        return 0.5 - z2 / 16.0 + z2 * z2 / 384.0 - z2 * z2 * z2 / 18432.0;
    }
    return bessel_j1(z) / z;
}

// sin(x)/x, continuous through x = 0.
inline double sinc(double x) {
    if (std::fabs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace cascade
