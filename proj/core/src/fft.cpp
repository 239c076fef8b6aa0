#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace nsbox::fft {
namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan get(const Grid& grid, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(grid.dim(), grid.n(), sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    // Scratch buffer only for planning; FFTW_UNALIGNED lets the plan run on
    // any caller buffer via fftw_execute_dft.
    std::vector<std::complex<double>> scratch(grid.modes());
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan;
    if (grid.dim() == 2) {
      plan = fftw_plan_dft_2d(grid.n(), grid.n(), p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
      plan = fftw_plan_dft_3d(grid.n(), grid.n(), grid.n(), p, p, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void forward(const Grid& grid, std::complex<double>* data) {
  fftw_plan plan = cache().get(grid, FFTW_FORWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

void backward(const Grid& grid, std::complex<double>* data) {
  fftw_plan plan = cache().get(grid, FFTW_BACKWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

}  // namespace nsbox::fft
