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

#include "evcs/coverage_cache.hpp"

#include <cstring>
#include <fstream>
#include <string>

#include "evcs/instance_io.hpp"

namespace evcs {

namespace {

constexpr char kMagic[8] = {'E', 'V', 'C', 'S', 'C', 'O', 'V', '1'};
constexpr std::uint32_t kLayoutVersion = 1;

template <typename T>
void put(std::string& out, T value) {
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * b)) & 0xFF));
  }
}

class Reader {
 public:
  explicit Reader(const std::string& data) : data_(data) {}

  template <typename T>
  bool get(T& value) {
    if (pos_ + sizeof(T) > data_.size()) return false;
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
    }
    value = static_cast<T>(v);
    pos_ += sizeof(T);
    return true;
  }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  const std::string& data_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_coverage_cache(const Instance& instance, const CoverageTensor& coverage,
                         const std::filesystem::path& path) {
  std::string out(kMagic, kMagic + 8);
  put<std::uint32_t>(out, kLayoutVersion);
  put<std::uint64_t>(out, instance_content_hash(instance));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(coverage.horizon()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(coverage.num_stations()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(coverage.num_classes()));
  for (int j = 0; j < coverage.num_stations(); ++j) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(coverage.max_outlets(j)));
  }
  for (int i = 0; i < coverage.num_classes(); ++i) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(coverage.scenarios(i)));
  }
  for (int t = 0; t < coverage.horizon(); ++t) {
    for (int j = 0; j < coverage.num_stations(); ++j) {
      for (int i = 0; i < coverage.num_classes(); ++i) {
        for (int r = 0; r < coverage.scenarios(i); ++r) {
          out.push_back(static_cast<char>(coverage.min_k(t, j, i, r)));
        }
      }
    }
  }
  for (int t = 0; t < coverage.horizon(); ++t) {
    for (int i = 0; i < coverage.num_classes(); ++i) {
      for (int r = 0; r < coverage.scenarios(i); ++r) {
        out.push_back(coverage.forced(t, i, r) ? 1 : 0);
      }
    }
  }
  write_file_atomic(path, out);
}

std::optional<CoverageTensor> load_coverage_cache(const Instance& instance,
                                                  const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const std::string data = read_file(path);
  if (data.size() < 8 || std::memcmp(data.data(), kMagic, 8) != 0) return std::nullopt;
  Reader in(data);
  char skip;
  for (int b = 0; b < 8; ++b) in.get(skip);
  std::uint32_t version = 0, T = 0, M = 0, N = 0;
  std::uint64_t hash = 0;
  if (!in.get(version) || version != kLayoutVersion) return std::nullopt;
  if (!in.get(hash) || hash != instance_content_hash(instance)) return std::nullopt;
  if (!in.get(T) || !in.get(M) || !in.get(N)) return std::nullopt;
  CoverageTensor cov(instance);
  if (static_cast<int>(T) != cov.horizon() || static_cast<int>(M) != cov.num_stations() ||
      static_cast<int>(N) != cov.num_classes()) {
    return std::nullopt;
  }
  for (int j = 0; j < cov.num_stations(); ++j) {
    std::uint32_t m = 0;
    if (!in.get(m) || static_cast<int>(m) != cov.max_outlets(j)) return std::nullopt;
  }
  for (int i = 0; i < cov.num_classes(); ++i) {
    std::uint32_t r = 0;
    if (!in.get(r) || static_cast<int>(r) != cov.scenarios(i)) return std::nullopt;
  }
  for (int t = 0; t < cov.horizon(); ++t) {
    for (int j = 0; j < cov.num_stations(); ++j) {
      for (int i = 0; i < cov.num_classes(); ++i) {
        for (int r = 0; r < cov.scenarios(i); ++r) {
          std::uint8_t k = 0;
          if (!in.get(k)) return std::nullopt;
          if (k != CoverageTensor::kNever) {
            if (k < 1 || k > cov.max_outlets(j)) return std::nullopt;
            cov.set_min_k(t, j, i, r, k);
          }
        }
      }
    }
  }
  for (int t = 0; t < cov.horizon(); ++t) {
    for (int i = 0; i < cov.num_classes(); ++i) {
      for (int r = 0; r < cov.scenarios(i); ++r) {
        std::uint8_t f = 0;
        if (!in.get(f) || f > 1) return std::nullopt;
        if (f) cov.set_forced(t, i, r, true);
      }
    }
  }
  if (!in.at_end()) return std::nullopt;
  return cov;
}

CoverageTensor cached_coverage(const Instance& instance, const std::filesystem::path& path,
                               int threads) {
  if (auto cached = load_coverage_cache(instance, path)) return std::move(*cached);
  CoverageTensor cov = build_coverage(instance, threads);
  save_coverage_cache(instance, cov, path);
  return cov;
}

}  // namespace evcs
