#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace duvio {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

// Dense row-major float64 tensor. Value type; copies are deep.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Same data, new shape; element count must match.
  Tensor reshaped(Shape shape) const;
  void reshape(Shape shape);
  void fill(double value);

  static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

 private:
  Shape shape_;
  std::vector<double> data_;
};

bool all_finite(const Tensor& t);

}  // namespace duvio
