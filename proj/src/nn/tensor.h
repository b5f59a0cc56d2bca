// Copyright 2026 The nasvad Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NASVAD_NN_TENSOR_H_
#define NASVAD_NN_TENSOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nasvad::nn {

using Shape = std::vector<int64_t>;

std::string shape_str(const Shape& shape);
int64_t shape_numel(const Shape& shape);

// Dense row-major double tensor. Activations use (batch, channel, time,
// feature); head outputs use (batch, time, offset).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty() && shape_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  double& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  // Rank-4 accessors.
  double& at(int64_t b, int64_t c, int64_t t, int64_t f) {
    return data_[static_cast<size_t>(((b * shape_[1] + c) * shape_[2] + t) * shape_[3] + f)];
  }
  double at(int64_t b, int64_t c, int64_t t, int64_t f) const {
    return data_[static_cast<size_t>(((b * shape_[1] + c) * shape_[2] + t) * shape_[3] + f)];
  }

  void fill(double v);
  void add_(const Tensor& other);
  void release();

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace nasvad::nn

#endif  // NASVAD_NN_TENSOR_H_
