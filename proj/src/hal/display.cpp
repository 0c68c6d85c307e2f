#include "humanoid/hal/display.hpp"

#include <string>

#include "humanoid/error.hpp"

namespace humanoid::hal {

DotMatrixFrame DotMatrixFrame::from_rows(std::span<const std::string_view> rows) {
  if (rows.size() != kSide) {
    throw Error(Errc::PreconditionViolation, "a frame needs 8 rows, got " + std::to_string(rows.size()));
  }
  DotMatrixFrame frame;
  for (std::size_t r = 0; r < kSide; ++r) {
    if (rows[r].size() != kSide) throw Error(Errc::PreconditionViolation, "row " + std::to_string(r) + " is not 8 wide");
    for (std::size_t c = 0; c < kSide; ++c) {
      const char ch = rows[r][c];
      if (ch != '#' && ch != '.') throw Error(Errc::PreconditionViolation, "cells must be '#' or '.'");
      frame.set(r, c, ch == '#');
    }
  }
  return frame;
}

DotMatrixFrame DotMatrixFrame::from_bits(std::span<const int> bits) {
  if (bits.size() != kCells) {
    throw Error(Errc::PreconditionViolation, "a frame needs 64 cells, got " + std::to_string(bits.size()));
  }
  DotMatrixFrame frame;
  for (std::size_t i = 0; i < kCells; ++i) frame.cells_[i] = bits[i] != 0;
  return frame;
}

std::array<int, DotMatrixFrame::kCells> DotMatrixFrame::bits() const {
  std::array<int, kCells> out{};
  for (std::size_t i = 0; i < kCells; ++i) out[i] = cells_[i] ? 1 : 0;
  return out;
}

namespace glyph {

DotMatrixFrame blank() { return {}; }

DotMatrixFrame smile() {
  static constexpr std::array<std::string_view, 8> rows{
      "..####..", ".#....#.", "#.#..#.#", "#......#",
      "#.#..#.#", "#..##..#", ".#....#.", "..####.."};
  return DotMatrixFrame::from_rows(rows);
}

DotMatrixFrame cross() {
  static constexpr std::array<std::string_view, 8> rows{
      "#......#", ".#....#.", "..#..#..", "...##...",
      "...##...", "..#..#..", ".#....#.", "#......#"};
  return DotMatrixFrame::from_rows(rows);
}

DotMatrixFrame idle() {
  static constexpr std::array<std::string_view, 8> rows{
      "........", "........", ".##..##.", ".##..##.",
      "........", "........", "..####..", "........"};
  return DotMatrixFrame::from_rows(rows);
}

}  // namespace glyph

void SimulatedDisplay::show(const DotMatrixFrame& frame) {
  std::lock_guard lock(mutex_);
  frame_ = frame;
  ++shown_;
}

DotMatrixFrame SimulatedDisplay::current() const {
  std::lock_guard lock(mutex_);
  return frame_;
}

std::size_t SimulatedDisplay::frames_shown() const {
  std::lock_guard lock(mutex_);
  return shown_;
}

}  // namespace humanoid::hal
