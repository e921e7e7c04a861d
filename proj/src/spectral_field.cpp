#include "betaplane/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "betaplane/errors.hpp"
#include "betaplane/fft.hpp"

namespace betaplane {

namespace {
void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw PreconditionError("spectral field: grid mismatch");
}
}  // namespace

PhysicalField::PhysicalField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}

PhysicalField::PhysicalField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw PreconditionError("physical field: size does not match grid");
}

SpectralField::SpectralField(GridSpec grid) : grid_(grid), coeffs_(grid.size(), Complex{}) {}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw PreconditionError("spectral field: size does not match grid");
}

SpectralField SpectralField::from_physical(const PhysicalField& f) {
  const GridSpec& g = f.grid();
  std::vector<Complex> buf(g.size());
  std::ranges::transform(f.values(), buf.begin(), [](double v) { return Complex{v, 0.0}; });
  fft::Plan2D::get(g.n).forward(buf, buf);
  const double scale = g.dx() * g.dx() / (2.0 * std::numbers::pi);
  for (auto& c : buf) c *= scale;
  return SpectralField(g, std::move(buf));
}

PhysicalField SpectralField::to_physical() const {
  std::vector<Complex> buf(coeffs_);
  fft::Plan2D::get(grid_.n).backward(buf, buf);
  const double scale = 2.0 * std::numbers::pi / (grid_.l * grid_.l);
  std::vector<double> out(buf.size());
  std::ranges::transform(buf, out.begin(), [scale](Complex c) { return scale * c.real(); });
  return PhysicalField(grid_, std::move(out));
}

double SpectralField::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::conjugate_symmetry_defect() const {
  const double scale = max_abs_coeff();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < grid_.n; ++i) {
    for (int j = 0; j < grid_.n; ++j) {
      const Complex a = coeffs_[grid_.index(i, j)];
      const Complex b = coeffs_[grid_.conjugate_index(i, j)];
      worst = std::max(worst, std::abs(b - std::conj(a)));
    }
  }
  return worst / scale;
}

bool SpectralField::mean_zero(double tol) const {
  const double scale = max_abs_coeff();
  return std::abs(coeffs_[0]) <= tol * (scale > 0.0 ? scale : 1.0);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += s * o.coeffs_[k];
  return *this;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 64) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace betaplane
