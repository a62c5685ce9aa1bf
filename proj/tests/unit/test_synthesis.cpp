#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rainweave/error.hpp"
#include "rainweave/synthesis.hpp"

using namespace rainweave;
using namespace rainweave::testing;

namespace {

PatchBank random_bank(std::size_t n, int size, int channels, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  PatchBank bank;
  for (std::size_t k = 0; k < n; ++k) {
    bank.patches.push_back(residual_of(random_code_image(size, size, channels, gen)));
    bank.source_refs.push_back({0, 0, size});
  }
  return bank;
}

PatchBank zero_bank(std::size_t n, int size, int channels) {
  PatchBank bank;
  for (std::size_t k = 0; k < n; ++k) {
    bank.patches.push_back(residual_of(ImageBuffer(size, size, channels, 0.25f)));
    bank.source_refs.push_back({0, 0, size});
  }
  return bank;
}

TransferConfig small_config(int patch, int overlap, int feather) {
  TransferConfig cfg;
  cfg.patch_size = patch;
  cfg.overlap = overlap;
  cfg.feather = feather;
  return cfg;
}

// Block origins along one axis, written as a plain walk.
std::vector<int> walk_axis(int length, int patch, int step) {
  std::vector<int> out;
  for (int o = 0;; o += step) {
    if (o + patch >= length) {
      out.push_back(length - patch);
      break;
    }
    out.push_back(o);
  }
  return out;
}

Matrix strip_error(const Field& a, const Field& b, int r0, int c0, int rows, int cols) {
  Matrix m(rows, std::vector<double>(cols, 0.0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      for (int ch = 0; ch < a.channels(); ++ch) {
        const double d = a.at(r0 + r, c0 + c, ch) - b.at(r0 + r, c0 + c, ch);
        m[r][c] += d * d;
      }
  return m;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m[0].size(), std::vector<double>(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[0].size(); ++c) t[c][r] = m[r][c];
  return t;
}

// Box filter of half-width f with edge replication, rows then columns.
std::vector<std::vector<double>> box(const std::vector<std::vector<double>>& w, int f) {
  const int n = static_cast<int>(w.size());
  auto h = w;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int k = -f; k <= f; ++k) s += w[r][std::clamp(c + k, 0, n - 1)];
      h[r][c] = s / (2.0 * f + 1.0);
    }
  auto v = h;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int k = -f; k <= f; ++k) s += h[std::clamp(r + k, 0, n - 1)][c];
      v[r][c] = s / (2.0 * f + 1.0);
    }
  return v;
}

// Straight-line quilting: brute-force seams, explicit masks, same draws.
Field reference_layer(int height, int width, const PatchBank& bank, const TransferConfig& cfg,
                      std::uint64_t seed) {
  const int p = cfg.patch_size;
  const int ch = bank.channels();
  const auto rows = walk_axis(height, p, p - cfg.overlap);
  const auto cols = walk_axis(width, p, p - cfg.overlap);
  Rng rng(seed);
  Field canvas(height, width, ch, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const int r0 = rows[i], c0 = cols[j];
      const Field& inc = bank.patches[rng.pick(bank.size())].values();
      const int left = j > 0 ? cols[j - 1] + p - c0 : 0;
      const int top = i > 0 ? rows[i - 1] + p - r0 : 0;
      const Field before = canvas.crop(r0, c0, p, p);

      std::vector<int> vseam, hseam;
      if (left > 0) vseam = brute_force_vertical_argmin(strip_error(before, inc, 0, 0, p, left));
      if (top > 0) hseam = brute_force_vertical_argmin(transpose(strip_error(before, inc, 0, 0, top, p)));

      std::vector<std::vector<double>> w(p, std::vector<double>(p, 1.0));
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) {
          if (left > 0 && c < left && c < vseam[r]) w[r][c] = 0.0;
          if (top > 0 && r < top && r < hseam[c]) w[r][c] = 0.0;
        }
      if (cfg.feather > 0) w = box(w, cfg.feather);

      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c)
          for (int k = 0; k < ch; ++k) {
            const double a = inc.at(r, c, k), b = before.at(r, c, k);
            double v = a;
            if (r < top || c < left) {
              v = std::clamp(w[r][c] * a + (1.0 - w[r][c]) * b, std::min(a, b), std::max(a, b));
            }
            canvas.at(r0 + r, c0 + c, k) = v;
          }
    }
  }
  return canvas;
}

}  // namespace

TEST_CASE("compose_patch examples") {
  const ImageBuffer target(2, 2, 1, 0.9f);
  CHECK(compose_patch(residual_of(ImageBuffer(2, 2, 1, 0.4f)), target) == target);

  const ResidualPatch up = ResidualPatch::from_field(Field(1, 2, 1, std::vector<double>{0.3, -0.3}));
  const ImageBuffer hi = compose_patch(up, ImageBuffer(1, 2, 1, 0.9f));
  CHECK(hi.at(0, 0, 0) == 1.0f);
  CHECK(hi.at(0, 1, 0) == doctest::Approx(0.6).epsilon(1e-6));

  const ResidualPatch down = ResidualPatch::from_field(Field(1, 2, 1, std::vector<double>{-0.25, 0.25}));
  const ImageBuffer lo = compose_patch(down, ImageBuffer(1, 2, 1, 0.5f));
  CHECK(lo.at(0, 0, 0) == 0.25f);
  CHECK(lo.at(0, 1, 0) == 0.75f);

  CHECK_THROWS_AS(compose_patch(up, ImageBuffer(2, 1, 1, 0.5f)), DimensionError);
}

TEST_CASE("plan_grid examples") {
  const TransferConfig cfg = small_config(8, 2, 0);
  CHECK(plan_grid(8, 8, cfg) == std::vector<PatchRef>{{0, 0, 8}});

  const auto exact = plan_grid(8, 20, cfg);
  REQUIRE(exact.size() == 3);
  CHECK(exact[1] == PatchRef{0, 6, 8});
  CHECK(exact[2] == PatchRef{0, 12, 8});

  const auto shifted = plan_grid(8, 23, cfg);
  REQUIRE(shifted.size() == 4);
  CHECK(shifted[2] == PatchRef{0, 12, 8});
  CHECK(shifted[3] == PatchRef{0, 15, 8});

  const auto tall = plan_grid(14, 8, cfg);
  REQUIRE(tall.size() == 2);
  CHECK(tall[1] == PatchRef{6, 0, 8});

  CHECK_THROWS_AS(plan_grid(7, 20, cfg), DimensionError);
  CHECK_THROWS_AS(plan_grid(20, 20, small_config(8, 8, 0)), ConfigError);
  CHECK_THROWS_AS(plan_grid(20, 20, small_config(8, 0, 0)), ConfigError);
}

TEST_CASE("plan_grid covers the image with flush edges") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = std::uniform_int_distribution<int>(2, 24)(gen);
    const int o = std::uniform_int_distribution<int>(1, p - 1)(gen);
    const int h = std::uniform_int_distribution<int>(p, 90)(gen);
    const int w = std::uniform_int_distribution<int>(p, 90)(gen);
    const auto grid = plan_grid(h, w, small_config(p, o, 0));
    std::vector<int> hits(static_cast<std::size_t>(h) * w, 0);
    int max_row = 0, max_col = 0;
    for (const auto& ref : grid) {
      CHECK(ref.row + p <= h);
      CHECK(ref.col + p <= w);
      max_row = std::max(max_row, ref.row);
      max_col = std::max(max_col, ref.col);
      for (int r = ref.row; r < ref.row + p; ++r)
        for (int c = ref.col; c < ref.col + p; ++c) hits[static_cast<std::size_t>(r) * w + c] = 1;
    }
    CHECK(std::count(hits.begin(), hits.end(), 0) == 0);
    CHECK(max_row == h - p);
    CHECK(max_col == w - p);
    CHECK(grid.size() == walk_axis(h, p, p - o).size() * walk_axis(w, p, p - o).size());
  }
}

TEST_CASE("zero residuals leave the target unchanged") {
  std::mt19937_64 gen(4);
  const ImageBuffer target = random_code_image(30, 37, 3, gen);
  Rng rng(12);
  CHECK(transfer(target, zero_bank(5, 8, 3), small_config(8, 2, 1), rng) == target);
}

TEST_CASE("transfer is deterministic per seed") {
  const ImageBuffer target = make_target(40, 52, 3, 2);
  const PatchBank bank = random_bank(30, 10, 3, 8);
  const TransferConfig cfg = small_config(10, 3, 1);
  Rng a(77), b(77), c(78);
  const ImageBuffer first = transfer(target, bank, cfg, a);
  CHECK(transfer(target, bank, cfg, b) == first);
  CHECK_FALSE(transfer(target, bank, cfg, c) == first);
}

TEST_CASE("block events: first block owns its window, hard cuts partition") {
  const PatchBank bank = random_bank(20, 8, 3, 3);
  Rng rng(5);
  std::size_t seen = 0;
  const Field layer = build_rain_layer(
      22, 27, 3, bank, small_config(8, 3, 0), rng, [&](const BlockEvent& ev) {
        ++seen;
        CHECK(ev.incoming == bank.patches[ev.residual_index].values());
        if (ev.block_index == 0) {
          CHECK(ev.strips.left == 0);
          CHECK(ev.strips.top == 0);
          CHECK(ev.committed == ev.incoming);
        }
        for (int r = 0; r < 8; ++r)
          for (int c = 0; c < 8; ++c) {
            bool from_in = true, from_before = true;
            for (int ch = 0; ch < 3; ++ch) {
              from_in = from_in && ev.committed.at(r, c, ch) == ev.incoming.at(r, c, ch);
              from_before = from_before && ev.committed.at(r, c, ch) == ev.canvas_before.at(r, c, ch);
            }
            CHECK((from_in || from_before));
            if (r >= ev.strips.top && c >= ev.strips.left) CHECK(from_in);
          }
      });
  CHECK(seen == plan_grid(22, 27, small_config(8, 3, 0)).size());
  for (double v : layer.data()) CHECK(snap_to_quantum(v) == v);
}

TEST_CASE("quilting matches a straight-line reference") {
  const PatchBank bank = random_bank(12, 6, 3, 21);
  struct Case {
    int h, w, overlap, feather;
  };
  for (const Case& k : {Case{10, 10, 2, 0}, Case{10, 10, 2, 1}, Case{14, 17, 3, 0}, Case{17, 14, 2, 1}}) {
    const TransferConfig cfg = small_config(6, k.overlap, k.feather);
    Rng rng(99);
    const Field got = build_rain_layer(k.h, k.w, 3, bank, cfg, rng);
    const Field want = reference_layer(k.h, k.w, bank, cfg, 99);
    for (std::size_t n = 0; n < got.data().size(); ++n) {
      if (k.feather == 0) {
        CHECK(got.data()[n] == want.data()[n]);
      } else {
        CHECK(got.data()[n] == doctest::Approx(want.data()[n]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("transfer equals target plus its rain layer") {
  const ImageBuffer target = make_target(33, 41, 3, 6);
  const PatchBank bank = random_bank(15, 9, 3, 2);
  const TransferConfig cfg = small_config(9, 2, 1);
  Rng a(3), b(3);
  const Field layer = build_rain_layer(33, 41, 3, bank, cfg, a);
  CHECK(apply_rain_layer(target, layer) == transfer(target, bank, cfg, b));
}

TEST_CASE("transfer input errors") {
  const PatchBank bank = random_bank(3, 8, 3, 1);
  Rng rng(1);
  CHECK_THROWS_AS(transfer(ImageBuffer(7, 20, 3, 0.5f), bank, small_config(8, 2, 0), rng), DimensionError);
  CHECK_THROWS_AS(transfer(ImageBuffer(20, 20, 1, 0.5f), bank, small_config(8, 2, 0), rng), DimensionError);
  CHECK_THROWS_AS(transfer(ImageBuffer(20, 20, 3, 0.5f), bank, small_config(6, 2, 0), rng), DimensionError);
  CHECK_THROWS_AS(transfer(ImageBuffer(20, 20, 3, 0.5f), PatchBank{}, small_config(8, 2, 0), rng),
                  ExtractionError);
}

TEST_CASE("generate_pairs examples") {
  const std::vector<ImageBuffer> targets{make_target(20, 24, 3, 1)};
  Rng rng(2);
  CHECK(generate_pairs(targets, random_bank(4, 8, 3, 1), 0, small_config(8, 2, 0), rng).empty());

  const auto flat = generate_pairs(targets, zero_bank(4, 8, 3), 25, small_config(8, 2, 0), rng);
  REQUIRE(flat.size() == 25);
  for (const auto& rec : flat) CHECK(rec.synthetic_patch == rec.target_patch);

  try {
    generate_pairs({make_target(20, 24, 3, 1), make_target(7, 30, 3, 1)}, random_bank(4, 8, 3, 1), 3,
                   small_config(8, 2, 0), rng);
    FAIL("undersized target accepted");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("7x30") != std::string::npos);
  }
}

TEST_CASE("generate_pairs records can be recomputed from their draws") {
  const std::vector<ImageBuffer> targets{make_target(30, 40, 3, 1), make_target(25, 22, 3, 2),
                                         make_target(16, 16, 3, 3)};
  const PatchBank bank = random_bank(40, 12, 3, 7);
  const TransferConfig cfg = small_config(12, 2, 0);
  Rng rng(2024);
  const auto recs = generate_pairs(targets, bank, 500, cfg, rng);
  REQUIRE(recs.size() == 500);

  Rng replay(2024);
  std::set<std::size_t> used_targets;
  for (const auto& rec : recs) {
    const std::size_t t = replay.uniform_below(targets.size());
    const int row = static_cast<int>(replay.uniform_below(targets[t].height() - 12 + 1));
    const int col = static_cast<int>(replay.uniform_below(targets[t].width() - 12 + 1));
    const std::size_t res = replay.uniform_below(bank.size());
    REQUIRE(rec.target_index == t);
    CHECK(rec.target_ref == PatchRef{row, col, 12});
    CHECK(rec.residual_index == res);
    used_targets.insert(t);
    for (int r = 0; r < 12; ++r)
      for (int c = 0; c < 12; ++c)
        for (int ch = 0; ch < 3; ++ch) {
          const double clean = targets[t].at(row + r, col + c, ch);
          CHECK(rec.target_patch.at(r, c, ch) == clean);
          const double want = std::clamp(clean + bank.patches[res].at(r, c, ch), 0.0, 1.0);
          CHECK(rec.synthetic_patch.at(r, c, ch) == static_cast<float>(want));
        }
  }
  CHECK(used_targets.size() == 3);
}
