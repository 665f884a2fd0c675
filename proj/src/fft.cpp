#include "sdecomp/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace sdecomp {

Eigen::VectorXcd fft(const Eigen::VectorXd& x) {
    Eigen::FFT<double> engine;
    Eigen::VectorXcd out;
    engine.fwd(out, x);
    return out;
}

Eigen::VectorXcd fft(const Eigen::VectorXcd& x) {
    Eigen::FFT<double> engine;
    Eigen::VectorXcd out;
    engine.fwd(out, x);
    return out;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& X) {
    Eigen::FFT<double> engine;
    Eigen::VectorXcd out;
    engine.inv(out, X);
    return out;
}

Eigen::VectorXd irfft_half(const Eigen::VectorXcd& half, Eigen::Index n) {
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n);
    const Eigen::Index nh = std::min<Eigen::Index>(half.size(), n / 2 + 1);
    for (Eigen::Index k = 0; k < nh; ++k) full[k] = half[k];
    for (Eigen::Index k = 1; k < nh; ++k) {
        if (n - k != k) full[n - k] = std::conj(half[k]);
    }
    full[0] = full[0].real();
    if (n % 2 == 0 && nh > n / 2) full[n / 2] = full[n / 2].real();
    return ifft(full).real();
}

double dominant_frequency_hz(const Eigen::VectorXd& x, double sample_rate_hz) {
    const Eigen::VectorXcd X = fft(x);
    const Eigen::Index half = x.size() / 2;
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index k = 0; k <= half; ++k) {
        const double mag = std::abs(X[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    return static_cast<double>(best) * sample_rate_hz / static_cast<double>(x.size());
}

}  // namespace sdecomp
