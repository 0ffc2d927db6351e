#include "sarforge/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "sarforge/errors.hpp"

namespace sarforge {
namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
// FFTW_ESTIMATE keeps the algorithm choice independent of runtime timing,
// which the byte-identical reproducibility contract relies on.
std::mutex planner_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int width, int height, int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex);
    const auto key = std::make_tuple(width, height, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // Plan in-place on a scratch buffer; executions use the new-array API.
    fftw_complex* scratch =
        fftw_alloc_complex(static_cast<size_t>(width) * height);
    if (scratch == nullptr) throw IoError("fftw allocation failed");
    fftw_plan plan = fftw_plan_dft_2d(height, width, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw IoError("fftw planning failed");
    plan_cache.emplace(key, plan);
    return plan;
}

}  // namespace

void fft2d(std::vector<std::complex<double>>& data, int width, int height,
           bool inverse) {
    if (width < 1 || height < 1 ||
        data.size() != static_cast<size_t>(width) * height) {
        throw ConfigError("fft2d: buffer does not match dimensions");
    }
    const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
    fftw_plan plan = get_plan(width, height, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
    if (inverse) {
        const double scale = 1.0 / (static_cast<double>(width) * height);
        for (auto& z : data) z *= scale;
    }
}

}  // namespace sarforge
