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

#include "ldpq/weights.h"

#include <algorithm>

namespace ldpq {

void WeightVector::Renormalize() {
  const double total = Total();
  if (total > 0.0) MultiplyRange(1, size(), 1.0 / total);
}

std::unique_ptr<WeightVector> MakeUniformWeights(int64_t size,
                                                 WeightKind kind) {
  if (kind == WeightKind::kDense) return std::make_unique<DenseWeights>(size);
  return std::make_unique<WeightTree>(size);
}

DenseWeights::DenseWeights(int64_t size)
    : w_(size, 1.0 / static_cast<double>(size)) {}

double DenseWeights::Prefix(int64_t i) const {
  double acc = 0.0;
  for (int64_t k = 0; k < i; ++k) acc += w_[k];
  return acc;
}

int64_t DenseWeights::FindPrefix(double target) const {
  double acc = 0.0;
  for (int64_t k = 0; k < size(); ++k) {
    acc += w_[k];
    if (acc >= target) return k + 1;
  }
  return size();
}

void DenseWeights::MultiplyRange(int64_t lo, int64_t hi, double factor) {
  for (int64_t k = std::max<int64_t>(lo, 1); k <= std::min(hi, size()); ++k) {
    w_[k - 1] *= factor;
  }
}

WeightTree::WeightTree(int64_t size) : size_(size), leaves_(1) {
  while (leaves_ < size_) leaves_ *= 2;
  sum_.assign(2 * leaves_, 0.0);
  lazy_.assign(2 * leaves_, 1.0);
  const double w = 1.0 / static_cast<double>(size_);
  for (int64_t k = 0; k < size_; ++k) sum_[leaves_ + k] = w;
  for (int64_t node = leaves_ - 1; node >= 1; --node) {
    sum_[node] = sum_[2 * node] + sum_[2 * node + 1];
  }
}

void WeightTree::Push(int64_t node) const {
  if (lazy_[node] == 1.0 || node >= leaves_) return;
  for (int64_t child : {2 * node, 2 * node + 1}) {
    sum_[child] *= lazy_[node];
    if (child < leaves_) lazy_[child] *= lazy_[node];
  }
  lazy_[node] = 1.0;
}

void WeightTree::Multiply(int64_t node, int64_t nlo, int64_t nhi, int64_t lo,
                          int64_t hi, double factor) {
  if (hi < nlo || nhi < lo) return;
  if (lo <= nlo && nhi <= hi) {
    sum_[node] *= factor;
    if (node < leaves_) lazy_[node] *= factor;
    return;
  }
  Push(node);
  const int64_t mid = (nlo + nhi) / 2;
  Multiply(2 * node, nlo, mid, lo, hi, factor);
  Multiply(2 * node + 1, mid + 1, nhi, lo, hi, factor);
  sum_[node] = sum_[2 * node] + sum_[2 * node + 1];
}

void WeightTree::Assign(int64_t node, int64_t nlo, int64_t nhi, int64_t i,
                        double value) {
  if (nlo == nhi) {
    sum_[node] = value;
    return;
  }
  Push(node);
  const int64_t mid = (nlo + nhi) / 2;
  if (i <= mid) {
    Assign(2 * node, nlo, mid, i, value);
  } else {
    Assign(2 * node + 1, mid + 1, nhi, i, value);
  }
  sum_[node] = sum_[2 * node] + sum_[2 * node + 1];
}

double WeightTree::Sum(int64_t node, int64_t nlo, int64_t nhi, int64_t lo,
                       int64_t hi) const {
  if (hi < nlo || nhi < lo) return 0.0;
  if (lo <= nlo && nhi <= hi) return sum_[node];
  Push(node);
  const int64_t mid = (nlo + nhi) / 2;
  return Sum(2 * node, nlo, mid, lo, hi) +
         Sum(2 * node + 1, mid + 1, nhi, lo, hi);
}

double WeightTree::Prefix(int64_t i) const {
  if (i <= 0) return 0.0;
  return Sum(1, 1, leaves_, 1, std::min(i, size_));
}

double WeightTree::Weight(int64_t i) const { return Sum(1, 1, leaves_, i, i); }

int64_t WeightTree::FindPrefix(double target) const {
  if (!(sum_[1] >= target)) return size_;
  int64_t node = 1;
  while (node < leaves_) {
    Push(node);
    if (sum_[2 * node] >= target) {
      node = 2 * node;
    } else {
      target -= sum_[2 * node];
      node = 2 * node + 1;
    }
  }
  return std::min(node - leaves_ + 1, size_);
}

void WeightTree::MultiplyRange(int64_t lo, int64_t hi, double factor) {
  lo = std::max<int64_t>(lo, 1);
  hi = std::min(hi, size_);
  if (lo > hi) return;
  Multiply(1, 1, leaves_, lo, hi, factor);
}

void WeightTree::Set(int64_t i, double value) {
  Assign(1, 1, leaves_, i, value);
}

}  // namespace ldpq
