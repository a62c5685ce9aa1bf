#include "rainweave/quilting.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "rainweave/error.hpp"

namespace rainweave {

namespace {

std::string shape_of(const Field& f) {
  std::ostringstream s;
  s << f.height() << "x" << f.width() << "x" << f.channels();
  return s.str();
}

}  // namespace

ErrorMatrix::ErrorMatrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 1 || cols < 1 || data_.size() != static_cast<std::size_t>(rows) * cols) {
    std::ostringstream msg;
    msg << "error matrix " << rows << "x" << cols << " with " << data_.size() << " entries";
    throw DimensionError(msg.str());
  }
  for (double v : data_) {
    if (!(v >= 0.0)) throw FormatError("error matrix entry " + std::to_string(v) + " is negative");
  }
}

ErrorMatrix ErrorMatrix::transposed() const {
  std::vector<double> t(data_.size());
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t[static_cast<std::size_t>(j) * rows_ + i] = at(i, j);
  }
  return ErrorMatrix(cols_, rows_, std::move(t));
}

ErrorMatrix ErrorMatrix::scaled(double factor) const {
  std::vector<double> s(data_);
  for (auto& v : s) v *= factor;
  return ErrorMatrix(rows_, cols_, std::move(s));
}

BlendMask::BlendMask(int rows, int cols, double fill) : weights_(rows, cols, 1, fill) {}

BlendMask::BlendMask(int rows, int cols, std::vector<double> weights)
    : weights_(rows, cols, 1, std::move(weights)) {
  for (double w : weights_.data()) {
    if (!(w >= 0.0 && w <= 1.0)) throw FormatError("blend weight " + std::to_string(w) + " outside [0, 1]");
  }
}

ErrorMatrix overlap_error_surface(const Field& existing, const Field& incoming) {
  if (!existing.same_shape(incoming) || existing.empty()) {
    throw DimensionError("overlap regions differ in shape: " + shape_of(existing) + " vs " +
                         shape_of(incoming));
  }
  std::vector<double> err(static_cast<std::size_t>(existing.height()) * existing.width(), 0.0);
  for (int i = 0; i < existing.height(); ++i) {
    for (int j = 0; j < existing.width(); ++j) {
      double sum = 0.0;
      for (int c = 0; c < existing.channels(); ++c) {
        const double d = existing.at(i, j, c) - incoming.at(i, j, c);
        sum += d * d;
      }
      err[static_cast<std::size_t>(i) * existing.width() + j] = sum;
    }
  }
  return ErrorMatrix(existing.height(), existing.width(), std::move(err));
}

SeamPath min_cut_vertical(const ErrorMatrix& error) {
  const int rows = error.rows();
  const int cols = error.cols();
  std::vector<double> cumulative(error.data());
  auto cum = [&](int i, int j) -> double& {
    return cumulative[static_cast<std::size_t>(i) * cols + j];
  };

  for (int i = 1; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double best = cum(i - 1, j);
      if (j > 0) best = std::min(best, cum(i - 1, j - 1));
      if (j + 1 < cols) best = std::min(best, cum(i - 1, j + 1));
      cum(i, j) = error.at(i, j) + best;
    }
  }

  // Scanning candidates left to right with a strict comparison keeps the
  // smallest index on ties.
  auto argmin_in = [&](int row, int lo, int hi) {
    int arg = lo;
    for (int j = lo + 1; j <= hi; ++j) {
      if (cum(row, j) < cum(row, arg)) arg = j;
    }
    return arg;
  };

  SeamPath seam;
  seam.indices.resize(rows);
  seam.indices[rows - 1] = argmin_in(rows - 1, 0, cols - 1);
  for (int i = rows - 2; i >= 0; --i) {
    const int next = seam.indices[i + 1];
    seam.indices[i] = argmin_in(i, std::max(next - 1, 0), std::min(next + 1, cols - 1));
  }
  for (int i = 0; i < rows; ++i) seam.cost += error.at(i, seam.indices[i]);
  return seam;
}

SeamPath min_cut_horizontal(const ErrorMatrix& error) {
  return min_cut_vertical(error.transposed());
}

BlendMask seam_to_mask(int block_size, OverlapStrips strips, const std::optional<SeamPath>& vseam,
                       const std::optional<SeamPath>& hseam) {
  if (block_size < 1) throw DimensionError("block size must be positive");
  auto check = [&](const std::optional<SeamPath>& seam, int width, const char* name) {
    if (!seam) return;
    if (width < 1 || width > block_size) {
      throw DimensionError(std::string(name) + " strip width " + std::to_string(width) +
                           " invalid for block size " + std::to_string(block_size));
    }
    if (static_cast<int>(seam->indices.size()) != block_size) {
      throw DimensionError(std::string(name) + " seam has " + std::to_string(seam->indices.size()) +
                           " entries, block size is " + std::to_string(block_size));
    }
    for (int v : seam->indices) {
      if (v < 0 || v >= width) {
        throw DimensionError(std::string(name) + " seam index " + std::to_string(v) +
                             " outside strip of width " + std::to_string(width));
      }
    }
  };
  check(vseam, strips.left, "vertical");
  check(hseam, strips.top, "horizontal");

  BlendMask mask(block_size, block_size, 1.0);
  for (int r = 0; r < block_size; ++r) {
    for (int c = 0; c < block_size; ++c) {
      const bool left_grant = !vseam || c >= strips.left || c >= vseam->indices[r];
      const bool top_grant = !hseam || r >= strips.top || r >= hseam->indices[c];
      mask.at(r, c) = (left_grant && top_grant) ? 1.0 : 0.0;
    }
  }
  return mask;
}

BlendMask seam_to_mask(int block_size, int overlap, const std::optional<SeamPath>& vseam,
                       const std::optional<SeamPath>& hseam) {
  return seam_to_mask(block_size, OverlapStrips{overlap, overlap}, vseam, hseam);
}

BlendMask feather_mask(const BlendMask& mask, int feather) {
  if (feather < 0) throw ConfigError("feather must be nonnegative");
  if (feather == 0) return mask;
  const int rows = mask.rows();
  const int cols = mask.cols();
  const double width = 2.0 * feather + 1.0;

  BlendMask horizontal(rows, cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (int k = -feather; k <= feather; ++k) sum += mask.at(r, std::clamp(c + k, 0, cols - 1));
      horizontal.at(r, c) = std::clamp(sum / width, 0.0, 1.0);
    }
  }
  BlendMask out(rows, cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (int k = -feather; k <= feather; ++k) sum += horizontal.at(std::clamp(r + k, 0, rows - 1), c);
      out.at(r, c) = std::clamp(sum / width, 0.0, 1.0);
    }
  }
  return out;
}

Field blend(const Field& canvas, const Field& incoming, const BlendMask& mask, int feather) {
  if (!canvas.same_shape(incoming) || mask.rows() != canvas.height() ||
      mask.cols() != canvas.width()) {
    throw DimensionError("blend inputs differ in shape: canvas " + shape_of(canvas) +
                         ", incoming " + shape_of(incoming) + ", mask " +
                         std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()));
  }
  const BlendMask weights = feather_mask(mask, feather);
  Field out(canvas.height(), canvas.width(), canvas.channels());
  for (int r = 0; r < canvas.height(); ++r) {
    for (int c = 0; c < canvas.width(); ++c) {
      const double w = weights.at(r, c);
      for (int ch = 0; ch < canvas.channels(); ++ch) {
        const double a = incoming.at(r, c, ch);
        const double b = canvas.at(r, c, ch);
        const double mixed = w * a + (1.0 - w) * b;
        out.at(r, c, ch) = std::clamp(mixed, std::min(a, b), std::max(a, b));
      }
    }
  }
  return out;
}

}  // namespace rainweave
