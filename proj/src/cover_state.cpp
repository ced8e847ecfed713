// Copyright 2026 The evcs Authors
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

#include "evcs/cover_state.hpp"

#include <bit>

#include "evcs/error.hpp"

namespace evcs {

CoverState::CoverState(const CoverageTensor& coverage, const OutletSchedule& schedule)
    : coverage_(&coverage), schedule_(schedule) {
  if (schedule.num_stations() != coverage.num_stations() || schedule.horizon() != coverage.horizon()) {
    throw DomainError("schedule dimensions do not match the coverage tensor");
  }
  const int T = coverage.horizon();
  ge1_.resize(T);
  ge2_.resize(T);
  ge3_.resize(T);
  period_value_.assign(T, 0.0);
  for (int t = 0; t < T; ++t) rebuild(t);
}

double CoverState::total() const {
  double sum = 0.0;
  for (double v : period_value_) sum += v;
  return sum;
}

void CoverState::rebuild(int t) {
  const std::size_t W = coverage_->words();
  auto& a = ge1_[t];
  auto& b = ge2_[t];
  auto& c = ge3_[t];
  a.assign(W, 0);
  b.assign(W, 0);
  c.assign(W, 0);
  for (int j = 0; j < coverage_->num_stations(); ++j) {
    const int k = schedule_.at(t, j);
    if (k <= 0) continue;
    const auto row = coverage_->row(t, j, k);
    for (std::size_t w = 0; w < W; ++w) {
      const std::uint64_t x = row[w];
      c[w] |= b[w] & x;
      b[w] |= a[w] & x;
      a[w] |= x;
    }
  }
  scratch_.resize(W);
  const auto forced = coverage_->forced_row(t);
  for (std::size_t w = 0; w < W; ++w) scratch_[w] = a[w] | forced[w];
  period_value_[t] = weighted(t, scratch_);
}

double CoverState::weighted(int t, const std::vector<std::uint64_t>& words) const {
  double total = 0.0;
  for (int i = 0; i < coverage_->num_classes(); ++i) {
    const std::size_t off = coverage_->block_word_offset(i);
    std::size_t count = 0;
    for (std::size_t w = 0; w < coverage_->block_words(i); ++w) {
      count += static_cast<std::size_t>(std::popcount(words[off + w]));
    }
    total += coverage_->weight(t, i) * static_cast<double>(count);
  }
  return total;
}

double CoverState::period_value_with(int t, int j, int lj, int j2, int lj2) const {
  const std::size_t W = coverage_->words();
  const auto& a = ge1_[t];
  const auto& b = ge2_[t];
  const auto& c = ge3_[t];
  const auto forced = coverage_->forced_row(t);
  const int old_j = schedule_.at(t, j);
  const int old_j2 = j2 >= 0 ? schedule_.at(t, j2) : 0;
  const std::uint64_t* oj = old_j > 0 ? coverage_->row(t, j, old_j).data() : nullptr;
  const std::uint64_t* oj2 = old_j2 > 0 ? coverage_->row(t, j2, old_j2).data() : nullptr;
  const std::uint64_t* nj = lj > 0 ? coverage_->row(t, j, lj).data() : nullptr;
  const std::uint64_t* nj2 = (j2 >= 0 && lj2 > 0) ? coverage_->row(t, j2, lj2).data() : nullptr;
  scratch_.resize(W);
  for (std::size_t w = 0; w < W; ++w) {
    const std::uint64_t x = oj ? oj[w] : 0;
    const std::uint64_t y = oj2 ? oj2[w] : 0;
    // Triplets still covered by some station other than j and j2.
    const std::uint64_t others = c[w] | (b[w] & ~(x & y)) | (a[w] & ~(x | y));
    scratch_[w] = others | forced[w] | (nj ? nj[w] : 0) | (nj2 ? nj2[w] : 0);
  }
  return weighted(t, scratch_);
}

void CoverState::assign(const OutletSchedule& schedule) {
  if (schedule.num_stations() != schedule_.num_stations() || schedule.horizon() != schedule_.horizon()) {
    throw DomainError("schedule dimensions do not match the coverage tensor");
  }
  const OutletSchedule old = schedule_;
  schedule_ = schedule;
  for (int t = 0; t < schedule.horizon(); ++t) {
    bool changed = false;
    for (int j = 0; j < schedule.num_stations() && !changed; ++j) {
      changed = old.at(t, j) != schedule.at(t, j);
    }
    if (changed) rebuild(t);
  }
}

}  // namespace evcs
