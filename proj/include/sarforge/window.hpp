#ifndef SARFORGE_WINDOW_HPP
#define SARFORGE_WINDOW_HPP

#include <string>
#include <vector>

namespace sarforge {

enum class WindowKind { rectangular, hamming, taylor };

struct WindowSpec {
    WindowKind kind = WindowKind::taylor;
    int nbar = 4;               // taylor only
    double sidelobe_db = 35.0;  // taylor only, must be > 0

    static WindowSpec rectangular() { return {WindowKind::rectangular, 0, 0.0}; }
    static WindowSpec hamming() { return {WindowKind::hamming, 0, 0.0}; }
    static WindowSpec taylor(int nbar = 4, double sidelobe_db = 35.0) {
        return {WindowKind::taylor, nbar, sidelobe_db};
    }
};

std::string window_kind_name(WindowKind kind);
WindowKind window_kind_from_name(const std::string& name);

/// Symmetric apodization weights of the given length, peak-normalized so the
/// maximum sample equals 1. Weights are in (0, 1].
std::vector<double> make_window(const WindowSpec& spec, int length);

}  // namespace sarforge

#endif  // SARFORGE_WINDOW_HPP
