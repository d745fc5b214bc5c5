// Copyright 2026 The ldpq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPQ_WEIGHTS_H_
#define LDPQ_WEIGHTS_H_

#include <cstdint>
#include <memory>
#include <vector>

namespace ldpq {

// Nonnegative weights w(1..K) with prefix sums W(i) = w(1) + ... + w(i),
// W(0) = 0. Ranges are 1-based and inclusive; an empty range (lo > hi) is a
// no-op.
class WeightVector {
 public:
  virtual ~WeightVector() = default;

  virtual int64_t size() const = 0;
  virtual double Total() const = 0;
  virtual double Prefix(int64_t i) const = 0;
  virtual double Weight(int64_t i) const = 0;

  // Smallest i with W(i) >= target; size() if no prefix reaches it.
  virtual int64_t FindPrefix(double target) const = 0;

  virtual void MultiplyRange(int64_t lo, int64_t hi, double factor) = 0;
  virtual void Set(int64_t i, double value) = 0;

  // Rescales so that Total() == 1 up to rounding.
  void Renormalize();
};

enum class WeightKind { kDense, kTree };

// Uniform weights 1/K over K >= 1 entries. kDense keeps a flat array with
// O(K) queries; kTree uses a lazy segment tree with O(log K) operations.
std::unique_ptr<WeightVector> MakeUniformWeights(int64_t size,
                                                 WeightKind kind);

class DenseWeights final : public WeightVector {
 public:
  explicit DenseWeights(int64_t size);

  int64_t size() const override { return static_cast<int64_t>(w_.size()); }
  double Total() const override { return Prefix(size()); }
  double Prefix(int64_t i) const override;
  double Weight(int64_t i) const override { return w_[i - 1]; }
  int64_t FindPrefix(double target) const override;
  void MultiplyRange(int64_t lo, int64_t hi, double factor) override;
  void Set(int64_t i, double value) override { w_[i - 1] = value; }

 private:
  std::vector<double> w_;
};

class WeightTree final : public WeightVector {
 public:
  explicit WeightTree(int64_t size);

  int64_t size() const override { return size_; }
  double Total() const override { return sum_[1]; }
  double Prefix(int64_t i) const override;
  double Weight(int64_t i) const override;
  int64_t FindPrefix(double target) const override;
  void MultiplyRange(int64_t lo, int64_t hi, double factor) override;
  void Set(int64_t i, double value) override;

 private:
  // Pending multipliers are pushed to children lazily; queries push too,
  // hence the mutable storage.
  void Push(int64_t node) const;
  void Multiply(int64_t node, int64_t nlo, int64_t nhi, int64_t lo, int64_t hi,
                double factor);
  void Assign(int64_t node, int64_t nlo, int64_t nhi, int64_t i, double value);
  double Sum(int64_t node, int64_t nlo, int64_t nhi, int64_t lo,
             int64_t hi) const;

  int64_t size_;
  int64_t leaves_;
  mutable std::vector<double> sum_;
  mutable std::vector<double> lazy_;
};

}  // namespace ldpq

#endif  // LDPQ_WEIGHTS_H_
