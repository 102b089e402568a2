/*
 * Copyright 2026 The ilcml Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ILCML_COMMON_HPP_
#define ILCML_COMMON_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilcml {

// Error categories surfaced through the C API as integer codes.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kNotFound = 4,
  kConflict = 5,
  kFailedPrecondition = 6,
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Ingestion failure carrying the 1-based file row that failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& message)
      : Error(ErrorCode::kParse,
              "row " + std::to_string(row) + ": " + message),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

inline Error InvalidArgument(const std::string& m) {
  return Error(ErrorCode::kInvalidArgument, m);
}
inline Error FailedPrecondition(const std::string& m) {
  return Error(ErrorCode::kFailedPrecondition, m);
}

// Class id returned when no rule fires and the policy is to refuse.
constexpr int kRefuse = -1;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

// Deterministic generator. The standard distributions and std::shuffle are
// implementation-defined, so draws are done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform integer in [0, bound).
  std::uint64_t Below(std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }
  // Uniform real in [0, 1).
  double Unit() { return (engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Unit(); }
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ilcml

#endif  // ILCML_COMMON_HPP_
