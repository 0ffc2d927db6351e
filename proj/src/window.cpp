#include "sarforge/window.hpp"

#include <algorithm>
#include <cmath>

#include "sarforge/errors.hpp"

namespace sarforge {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> hamming(int n) {
    std::vector<double> w(n);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    for (int i = 0; i < n; ++i) {
        w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (n - 1));
    }
    return w;
}

// Classic Taylor taper: nbar near-in sidelobes held at the design level.
// Samples taken at (i - n/2 + 1/2)/n, matching the usual DSP convention.
std::vector<double> taylor(int n, int nbar, double sidelobe_db) {
    const double b = std::pow(10.0, sidelobe_db / 20.0);
    const double a = std::acosh(b) / kPi;
    const double s2 = static_cast<double>(nbar) * nbar /
                      (a * a + (nbar - 0.5) * (nbar - 0.5));

    std::vector<double> fm(static_cast<size_t>(nbar) - 1, 0.0);
    for (int m = 1; m < nbar; ++m) {
        double numer = (m % 2 == 1) ? 1.0 : -1.0;
        for (int k = 1; k < nbar; ++k) {
            numer *= 1.0 - static_cast<double>(m) * m /
                               (s2 * (a * a + (k - 0.5) * (k - 0.5)));
        }
        double denom = 2.0;
        for (int k = 1; k < nbar; ++k) {
            if (k == m) continue;
            denom *= 1.0 - static_cast<double>(m) * m / (static_cast<double>(k) * k);
        }
        fm[static_cast<size_t>(m) - 1] = numer / denom;
    }

    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        const double x = (i - 0.5 * n + 0.5) / n;
        double v = 1.0;
        for (int m = 1; m < nbar; ++m) {
            v += 2.0 * fm[static_cast<size_t>(m) - 1] * std::cos(2.0 * kPi * m * x);
        }
        w[i] = v;
    }
    return w;
}

}  // namespace

std::string window_kind_name(WindowKind kind) {
    switch (kind) {
        case WindowKind::rectangular: return "rectangular";
        case WindowKind::hamming: return "hamming";
        case WindowKind::taylor: return "taylor";
    }
    throw ConfigError("unknown window kind");
}

WindowKind window_kind_from_name(const std::string& name) {
    if (name == "rectangular") return WindowKind::rectangular;
    if (name == "hamming") return WindowKind::hamming;
    if (name == "taylor") return WindowKind::taylor;
    throw ConfigError("unknown window kind: " + name);
}

std::vector<double> make_window(const WindowSpec& spec, int length) {
    if (length < 1) throw ConfigError("window length must be >= 1");
    std::vector<double> w;
    switch (spec.kind) {
        case WindowKind::rectangular:
            return std::vector<double>(static_cast<size_t>(length), 1.0);
        case WindowKind::hamming:
            w = hamming(length);
            break;
        case WindowKind::taylor:
            if (spec.sidelobe_db <= 0.0) {
                throw ConfigError("taylor window: sidelobe_db must be > 0");
            }
            if (spec.nbar < 1) throw ConfigError("taylor window: nbar must be >= 1");
            w = taylor(length, spec.nbar, spec.sidelobe_db);
            break;
    }
    // Enforce exact mirror symmetry first; cos() rounding can differ across
    // the axis. Normalizing afterwards keeps the peak at exactly 1.
    for (int i = 0, j = length - 1; i < j; ++i, --j) {
        const double m = 0.5 * (w[i] + w[j]);
        w[i] = m;
        w[j] = m;
    }
    const double peak = *std::max_element(w.begin(), w.end());
    for (double& v : w) v /= peak;
    return w;
}

}  // namespace sarforge
