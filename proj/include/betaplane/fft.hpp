#pragma once

#include <complex>
#include <memory>
#include <span>

namespace betaplane::fft {

/// Unnormalized 2D complex transforms of an n x n row-major array, backed by
/// FFTW. Plans are created once per size and shared; execution is reentrant.
class Plan2D {
 public:
  /// Returns the shared plan for size n (creates it on first use).
  static const Plan2D& get(int n);

  ~Plan2D();
  Plan2D(const Plan2D&) = delete;
  Plan2D& operator=(const Plan2D&) = delete;

  /// out[k] = sum_x in[x] exp(-2 pi i k.x / n). in and out may alias.
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// out[x] = sum_k in[k] exp(+2 pi i k.x / n). in and out may alias.
  void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

  int n() const { return n_; }

 private:
  explicit Plan2D(int n);
  struct Impl;
  int n_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace betaplane::fft
