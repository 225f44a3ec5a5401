#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gdm/linguistic.hpp"

namespace gdm {

// Dense row-major matrix. Rows are experts, columns alternatives, unless a
// type documents otherwise.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool same_shape(std::size_t rows, std::size_t cols) const noexcept {
    return rows_ == rows && cols_ == cols;
  }

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return cells_[r * cols_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return cells_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {cells_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {cells_.data() + r * cols_, cols_}; }

  const std::vector<T>& cells() const noexcept { return cells_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> cells_;
};

// Bits recorded when canonicalize() had to swap a raw interval.
enum SwapFlags : std::uint8_t {
  kNoSwap = 0,
  kJudgmentSwapped = 1,
  kReliabilitySwapped = 2,
};

// One interaction round: every expert's evaluation of every alternative.
// Entries are canonical; `swapped` remembers which raw intervals arrived
// reversed so the original document can be reproduced.
struct RoundMatrix {
  int index = 1;
  Grid<TwoDULV> entries;
  Grid<std::uint8_t> swapped;

  std::size_t experts() const noexcept { return entries.rows(); }
  std::size_t alternatives() const noexcept { return entries.cols(); }

  bool operator==(const RoundMatrix&) const = default;
};

// Builds a round from already-canonical entries.
inline RoundMatrix make_round(int index, Grid<TwoDULV> entries) {
  RoundMatrix round;
  round.index = index;
  round.swapped = Grid<std::uint8_t>(entries.rows(), entries.cols(), kNoSwap);
  round.entries = std::move(entries);
  return round;
}

}  // namespace gdm
