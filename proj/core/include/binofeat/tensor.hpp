#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace binofeat {

// Dense float32 tensor, row-major. Reductions elsewhere accumulate in double.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, float fill = 0.f);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int> shape, float value) {
    return Tensor(std::move(shape), value);
  }
  static Tensor from_data(std::vector<int> shape, std::vector<float> data);
  static Tensor scalar(float value) { return Tensor({1}, value); }

  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  float& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  float operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  // Indexed access for up to 3 dims, used by tests and glue code.
  float& at(int i0) { return data_[static_cast<std::size_t>(i0)]; }
  float& at(int i0, int i1) { return data_[static_cast<std::size_t>(i0) * shape_[1] + i1]; }
  float& at(int i0, int i1, int i2) {
    return data_[(static_cast<std::size_t>(i0) * shape_[1] + i1) * shape_[2] + i2];
  }
  float at(int i0) const { return data_[static_cast<std::size_t>(i0)]; }
  float at(int i0, int i1) const {
    return data_[static_cast<std::size_t>(i0) * shape_[1] + i1];
  }
  float at(int i0, int i1, int i2) const {
    return data_[(static_cast<std::size_t>(i0) * shape_[1] + i1) * shape_[2] + i2];
  }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  void fill(float value);

  static std::string shape_str(const std::vector<int>& shape);
  std::string shape_str() const { return shape_str(shape_); }

 private:
  std::vector<int> shape_;
  std::vector<float> data_;
};

}  // namespace binofeat
