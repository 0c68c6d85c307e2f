#pragma once

#include <array>
#include <bitset>
#include <mutex>
#include <span>
#include <string_view>

namespace humanoid::hal {

/// 8×8 monochrome bitmap; cell (row, col) is bit row*8 + col.
class DotMatrixFrame {
 public:
  static constexpr std::size_t kSide = 8;
  static constexpr std::size_t kCells = kSide * kSide;

  DotMatrixFrame() = default;

  /// Eight strings of '#' (on) and '.' (off). Throws PreconditionViolation otherwise.
  static DotMatrixFrame from_rows(std::span<const std::string_view> rows);
  /// Exactly 64 entries, row-major; nonzero is on.
  static DotMatrixFrame from_bits(std::span<const int> bits);

  bool at(std::size_t row, std::size_t col) const { return cells_[row * kSide + col]; }
  void set(std::size_t row, std::size_t col, bool on) { cells_[row * kSide + col] = on; }
  std::size_t lit() const noexcept { return cells_.count(); }
  std::array<int, kCells> bits() const;

  friend bool operator==(const DotMatrixFrame&, const DotMatrixFrame&) = default;

 private:
  std::bitset<kCells> cells_;
};

namespace glyph {
DotMatrixFrame blank();
DotMatrixFrame smile();
DotMatrixFrame cross();
DotMatrixFrame idle();
}  // namespace glyph

/// The display shows whatever frame it was last given; readable from any thread.
class SimulatedDisplay {
 public:
  void show(const DotMatrixFrame& frame);
  DotMatrixFrame current() const;
  std::size_t frames_shown() const;

 private:
  mutable std::mutex mutex_;
  DotMatrixFrame frame_;
  std::size_t shown_ = 0;
};

}  // namespace humanoid::hal
