#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace helm {

using cplx = std::complex<double>;

/// Thrown when inputs violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure fails (resonance, divergence, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Complex grid function on the interior nodes, x index fastest.
class Field {
 public:
  Field() = default;
  Field(int nx, int ny, cplx value = {}) : nx_(nx), ny_(ny), data_(std::size_t(nx) * ny, value) {
    if (nx < 1 || ny < 1) throw InvalidArgument("Field: dimensions must be positive");
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return data_.size(); }

  cplx& operator()(int i, int j) { return data_[std::size_t(j) * nx_ + i]; }
  const cplx& operator()(int i, int j) const { return data_[std::size_t(j) * nx_ + i]; }
  cplx& operator[](std::size_t k) { return data_[k]; }
  const cplx& operator[](std::size_t k) const { return data_[k]; }

  std::span<cplx> values() { return data_; }
  std::span<const cplx> values() const { return data_; }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  bool same_shape(const Field& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }
  void fill(cplx v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<cplx> data_;
};

inline void require_same_shape(const Field& a, const Field& b, const char* where) {
  if (!a.same_shape(b))
    throw InvalidArgument(std::string(where) + ": shape mismatch (" + std::to_string(a.nx()) + "x" +
                          std::to_string(a.ny()) + " vs " + std::to_string(b.nx()) + "x" +
                          std::to_string(b.ny()) + ")");
}

// Plain BLAS-1 helpers on fields. dot is the Hermitian inner product <a, b> = sum conj(a) b.
double norm2(std::span<const cplx> a);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx alpha, std::span<cplx> x);

inline double norm2(const Field& f) { return norm2(f.values()); }

}  // namespace helm
