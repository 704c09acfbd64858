#include "visco/spectral/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace visco {

namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(const Grid& g) {
    const auto key = std::make_tuple(g.n1, g.n2, g.n3);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<double> real(g.points());
    std::vector<Complex> spec(g.modes());
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    // FFTW is row-major (last index fastest); our storage is y1-fastest.
    p.r2c = fftw_plan_dft_r2c_3d(g.n3, g.n2, g.n1, real.data(), cplx, flags);
    p.c2r = fftw_plan_dft_c2r_3d(g.n3, g.n2, g.n1, cplx, real.data(), flags);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, PlanPair> plans_;
};

}  // namespace

Spectrum forward(const Field& f) {
  const Grid& g = f.grid();
  Spectrum s(g, f.comps());
  const PlanPair plan = PlanCache::instance().get(g);
  std::vector<double> in(g.points());
  const double scale = 1.0 / double(g.points());
  for (int c = 0; c < f.comps(); ++c) {
    auto src = f.comp(c);
    std::copy(src.begin(), src.end(), in.begin());
    auto out = s.comp(c);
    fftw_execute_dft_r2c(plan.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    for (auto& v : out) v *= scale;
  }
  return s;
}

Field backward(const Spectrum& s) {
  const Grid& g = s.grid();
  Field f(g, s.comps());
  const PlanPair plan = PlanCache::instance().get(g);
  std::vector<Complex> scratch(g.modes());
  for (int c = 0; c < s.comps(); ++c) {
    auto src = s.comp(c);
    std::copy(src.begin(), src.end(), scratch.begin());  // c2r overwrites its input
    fftw_execute_dft_c2r(plan.c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                         f.comp(c).data());
  }
  return f;
}

}  // namespace visco
