#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "hsd/parallel.hpp"

namespace hsd::detail {

namespace {

std::mutex plan_mutex;

struct PlanCache {
    std::map<std::pair<int, int>, fftw_plan> plans;
    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

fftw_plan plan_for(int n, int sign) {
    std::lock_guard lock(plan_mutex);
    auto& plans = cache().plans;
    auto it = plans.find({n, sign});
    if (it != plans.end()) return it->second;
    std::vector<fftw_complex> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, a.data(), b.data(), sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(std::pair{n, sign}, p);
    return p;
}

// e^{i pi k / n} with k reduced exactly modulo 2n.
cplx unit_phase(long long k, int n) {
    const long long period = 2LL * n;
    k %= period;
    if (k < 0) k += period;
    const double a = std::numbers::pi * static_cast<double>(k) / n;
    return {std::cos(a), std::sin(a)};
}

struct Phases {
    std::vector<cplx> pre;
    std::vector<cplx> post;
};

Phases make_phases(int n, double xi_extent, Direction dir, int twice_offset) {
    const double dx = std::numbers::pi / xi_extent;
    const double dxi = 2.0 * xi_extent / n;
    const double parity = (n / 2) % 2 == 0 ? 1.0 : -1.0;
    Phases ph;
    ph.pre.resize(static_cast<std::size_t>(n));
    ph.post.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double alt = (k % 2 == 0) ? 1.0 : -1.0;
        const cplx offset_phase = unit_phase(static_cast<long long>(twice_offset) * (k - n / 2), n);
        if (dir == Direction::Forward) {
            ph.pre[static_cast<std::size_t>(k)] = alt;
            ph.post[static_cast<std::size_t>(k)] = dx * parity * alt * offset_phase;
        } else {
            ph.pre[static_cast<std::size_t>(k)] = parity * alt * std::conj(offset_phase);
            ph.post[static_cast<std::size_t>(k)] = dxi / (2.0 * std::numbers::pi) * alt;
        }
    }
    return ph;
}

const Phases& phases_for(int n, double xi_extent, Direction dir, int twice_offset) {
    using Key = std::tuple<int, double, int, int>;
    static std::map<Key, Phases> table;
    static std::mutex table_mutex;
    std::lock_guard lock(table_mutex);
    const Key key{n, xi_extent, dir == Direction::Forward ? 0 : 1, twice_offset};
    auto it = table.find(key);
    if (it == table.end()) it = table.emplace(key, make_phases(n, xi_extent, dir, twice_offset)).first;
    return it->second;
}

}  // namespace

void transform_line(const cplx* in, cplx* out, int n, double xi_extent, Direction dir, int twice_offset) {
    const Phases& ph = phases_for(n, xi_extent, dir, twice_offset);
    std::vector<cplx> buf(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) buf[static_cast<std::size_t>(k)] = in[k] * ph.pre[static_cast<std::size_t>(k)];
    std::vector<cplx> res(static_cast<std::size_t>(n));
    const int sign = dir == Direction::Forward ? FFTW_BACKWARD : FFTW_FORWARD;
    fftw_execute_dft(plan_for(n, sign), reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(res.data()));
    for (int k = 0; k < n; ++k) out[k] = res[static_cast<std::size_t>(k)] * ph.post[static_cast<std::size_t>(k)];
}

void transform_axis(cplx* data, const SpectralGrid& g, int axis, Direction dir, int twice_offset) {
    const std::size_t n = static_cast<std::size_t>(g.points());
    std::size_t stride = 1;
    for (int d = axis + 1; d < g.dim(); ++d) stride *= n;
    const std::size_t lines = g.size() / n;
    parallel_for(lines, [&](std::size_t line) {
        const std::size_t outer = line / stride;
        const std::size_t inner = line % stride;
        cplx* base = data + outer * stride * n + inner;
        std::vector<cplx> tmp(n);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = base[k * stride];
        transform_line(tmp.data(), tmp.data(), g.points(), g.xi_extent(), dir, twice_offset);
        for (std::size_t k = 0; k < n; ++k) base[k * stride] = tmp[k];
    });
}

}  // namespace hsd::detail
