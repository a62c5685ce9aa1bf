#pragma once

#include <optional>
#include <vector>

#include "rainweave/image.hpp"

namespace rainweave {

// Nonnegative per-pixel overlap error, rows x cols.
class ErrorMatrix {
public:
  ErrorMatrix() = default;
  // Throws DimensionError on a bad shape and FormatError on a negative or NaN entry.
  ErrorMatrix(int rows, int cols, std::vector<double> data);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int row, int col) const { return data_[static_cast<std::size_t>(row) * cols_ + col]; }
  const std::vector<double>& data() const { return data_; }

  ErrorMatrix transposed() const;
  ErrorMatrix scaled(double factor) const;

  bool operator==(const ErrorMatrix&) const = default;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// A minimum-error boundary cut. For a vertical cut `indices[i]` is the
// column crossed in row i; for a horizontal cut it is the row crossed in
// column i. Consecutive indices differ by at most one, and `cost` is the sum
// of the crossed entries taken in path order.
struct SeamPath {
  std::vector<int> indices;
  double cost = 0.0;

  bool operator==(const SeamPath&) const = default;
};

// Weight of the incoming block per pixel; the canvas keeps 1 - weight.
class BlendMask {
public:
  BlendMask() = default;
  BlendMask(int rows, int cols, double fill);
  BlendMask(int rows, int cols, std::vector<double> weights);

  int rows() const { return weights_.height(); }
  int cols() const { return weights_.width(); }
  double at(int row, int col) const { return weights_.at(row, col, 0); }
  double& at(int row, int col) { return weights_.at(row, col, 0); }

  bool operator==(const BlendMask&) const = default;

private:
  Raster<double> weights_;
};

// Widths of the already-committed strips a block overlaps: `left` columns
// on its left edge, `top` rows on its top edge. Zero means no strip.
struct OverlapStrips {
  int left = 0;
  int top = 0;
};

// E[i, j] = sum over channels of (existing - incoming)^2.
ErrorMatrix overlap_error_surface(const Field& existing, const Field& incoming);

// Top-to-bottom monotone path of least total error, by dynamic programming
// over C[i, j] = E[i, j] + min(C[i-1, j-1], C[i-1, j], C[i-1, j+1]).
// Ties go to the smallest column, both at the last row and while
// backtracking.
SeamPath min_cut_vertical(const ErrorMatrix& error);

// Left-to-right cut: min_cut_vertical on the transpose, indices are rows.
SeamPath min_cut_horizontal(const ErrorMatrix& error);

// Hard-cut mask for a square block. Inside the left strip the incoming block
// owns columns at or right of the vertical seam; inside the top strip it owns
// rows at or below the horizontal seam; in the corner both must grant it.
// Pixels outside the strips belong to the incoming block.
BlendMask seam_to_mask(int block_size, OverlapStrips strips, const std::optional<SeamPath>& vseam,
                       const std::optional<SeamPath>& hseam);
// Same strip width on both edges.
BlendMask seam_to_mask(int block_size, int overlap, const std::optional<SeamPath>& vseam,
                       const std::optional<SeamPath>& hseam);

// Box-smooths a mask with a (2 * feather + 1) separable window, replicating
// edge weights. feather == 0 returns the mask unchanged.
BlendMask feather_mask(const BlendMask& mask, int feather);

// mask * incoming + (1 - mask) * canvas per pixel after feathering; each
// output stays between its two inputs.
Field blend(const Field& canvas, const Field& incoming, const BlendMask& mask, int feather);

}  // namespace rainweave
