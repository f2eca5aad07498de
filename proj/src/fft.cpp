#include "fracspace/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "fracspace/types.hpp"

namespace fracspace {

namespace {

std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> g_plans;

fftw_plan plan_for(int n_dim, int N, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  const auto key = std::make_tuple(n_dim, N, sign);
  if (auto it = g_plans.find(key); it != g_plans.end()) return it->second;
  // FFTW_UNALIGNED lets the cached plan execute on any caller buffer.
  std::vector<std::complex<double>> scratch(n_dim == 1 ? static_cast<std::size_t>(N)
                                                       : static_cast<std::size_t>(N) * N);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = n_dim == 1 ? fftw_plan_dft_1d(N, p, p, sign, flags)
                              : fftw_plan_dft_2d(N, N, p, p, sign, flags);
  if (plan == nullptr) throw ResolutionError("fft: plan creation failed");
  g_plans.emplace(key, plan);
  return plan;
}

void run(std::complex<double>* data, int n_dim, int N, int sign) {
  if (n_dim != 1 && n_dim != 2) throw ConfigError("fft: dimension must be 1 or 2");
  if (N < 1) throw ConfigError("fft: size must be positive");
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan_for(n_dim, N, sign), p, p);
}

}  // namespace

void fft_forward(std::complex<double>* data, int n_dim, int N) {
  run(data, n_dim, N, FFTW_FORWARD);
}

void fft_backward(std::complex<double>* data, int n_dim, int N) {
  run(data, n_dim, N, FFTW_BACKWARD);
}

}  // namespace fracspace
