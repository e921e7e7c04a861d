#include "betaplane/fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <map>
#include <mutex>
#include <vector>

namespace betaplane::fft {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Plan2D::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Plan2D::Plan2D(int n) : n_(n), impl_(std::make_unique<Impl>()) {
  // FFTW_UNALIGNED lets the plans run on std::vector storage via the
  // new-array execute interface.
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  impl_->fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
  impl_->bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
}

Plan2D::~Plan2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->bwd);
}

const Plan2D& Plan2D::get(int n) {
  std::lock_guard lock(planner_mutex());
  static std::map<int, std::unique_ptr<Plan2D>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::unique_ptr<Plan2D>(new Plan2D(n))).first;
  }
  return *it->second;
}

void Plan2D::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  assert(in.size() == out.size() && in.size() == static_cast<std::size_t>(n_) * n_);
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(impl_->fwd, buf, buf);
}

void Plan2D::backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  assert(in.size() == out.size() && in.size() == static_cast<std::size_t>(n_) * n_);
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(impl_->bwd, buf, buf);
}

}  // namespace betaplane::fft
