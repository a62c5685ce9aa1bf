#include "rainweave/app/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "rainweave/app/digest.hpp"
#include "rainweave/app/staging.hpp"
#include "rainweave/error.hpp"
#include "rainweave/extraction.hpp"
#include "rainweave/png_io.hpp"
#include "rainweave/rng.hpp"
#include "rainweave/synthesis.hpp"

namespace rainweave::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class StageTimer {
public:
  explicit StageTimer(RunManifest& manifest) : manifest_(manifest) {}

  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    manifest_.timing_ms.emplace_back(
        stage, std::chrono::duration<double, std::milli>(now - last_).count());
    last_ = now;
  }

private:
  RunManifest& manifest_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

TransferConfig config_for(const CommonArgs& args) {
  const ConfigOverrides file = args.config_file ? read_config_file(*args.config_file) : ConfigOverrides{};
  return resolve_config(args.flags, file, args.env_seed);
}

void record_inputs(RunManifest& m, const CommonArgs& args,
                   const std::vector<fs::path>& targets) {
  m.inputs.push_back({"exemplar", args.exemplar.string(), sha256_file(args.exemplar)});
  m.inputs.push_back({"mask", args.mask.string(), sha256_file(args.mask)});
  for (const auto& t : targets) m.inputs.push_back({"target", t.string(), sha256_file(t)});
  if (args.config_file) {
    m.inputs.push_back({"config", args.config_file->string(), sha256_file(*args.config_file)});
  }
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

std::vector<ImageBuffer> load_targets(const std::vector<fs::path>& paths) {
  if (paths.empty()) throw ConfigError("at least one --target is required");
  std::vector<ImageBuffer> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(load_image(p));
  return images;
}

PatchBank load_bank(const CommonArgs& args, const TransferConfig& cfg) {
  const ImageBuffer exemplar = load_image(args.exemplar);
  const RainMask mask = load_mask(args.mask);
  Rng rng = Rng::for_stream(cfg.seed, 0);
  return sample_rain_patches(exemplar, mask, cfg.patch_size, cfg.coverage_threshold,
                             cfg.bank_count, rng);
}

ImageBuffer layer_preview(const Field& layer) {
  std::vector<float> v(layer.size());
  auto src = layer.data();
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = static_cast<float>(std::clamp(0.5 + src[k], 0.0, 1.0));
  }
  return ImageBuffer(layer.height(), layer.width(), layer.channels(), std::move(v));
}

}  // namespace

RunManifest cmd_transfer(const TransferArgs& args) {
  RunManifest manifest;
  manifest.tool_version = tool_version();
  manifest.command = "transfer";
  StageTimer timer(manifest);

  const TransferConfig cfg = config_for(args);
  manifest.config = cfg;
  manifest.seed = cfg.seed;

  std::set<std::string> stems;
  for (const auto& t : args.targets) {
    if (!stems.insert(t.stem().string()).second) {
      throw ConfigError("two targets share the stem '" + t.stem().string() +
                        "'; their outputs would collide");
    }
  }
  const std::vector<ImageBuffer> targets = load_targets(args.targets);
  timer.lap("load");
  const PatchBank bank = load_bank(args, cfg);
  timer.lap("extract");

  StagingArea staging(args.out_dir);
  std::vector<std::pair<std::string, ImageBuffer>> results;
  std::vector<std::pair<std::string, ImageBuffer>> layers;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    Rng rng = Rng::for_stream(cfg.seed, k + 1);
    const ImageBuffer& target = targets[k];
    const Field layer =
        build_rain_layer(target.height(), target.width(), target.channels(), bank, cfg, rng);
    const std::string stem = args.targets[k].stem().string();
    results.emplace_back(stem + "_rain.png", apply_rain_layer(target, layer));
    if (args.write_layer) layers.emplace_back(stem + "_layer.png", layer_preview(layer));
  }
  timer.lap("transfer");

  for (const auto& [name, img] : results) {
    save_image(img, staging.path_for(name));
    manifest.outputs.push_back({"rain", name, sha256_file(staging.path_for(name))});
  }
  for (const auto& [name, img] : layers) {
    save_image(img, staging.path_for(name));
    manifest.outputs.push_back({"layer", name, sha256_file(staging.path_for(name))});
  }
  timer.lap("save");

  record_inputs(manifest, args, args.targets);
  timer.lap("digest");
  write_json(staging.path_for("manifest.json"), manifest.to_json());
  staging.commit();
  return manifest;
}

RunManifest cmd_pairs(const PairsArgs& args) {
  RunManifest manifest;
  manifest.tool_version = tool_version();
  manifest.command = "pairs";
  StageTimer timer(manifest);

  const TransferConfig cfg = config_for(args);
  manifest.config = cfg;
  manifest.seed = cfg.seed;

  const std::vector<ImageBuffer> targets = load_targets(args.targets);
  timer.lap("load");
  const PatchBank bank = load_bank(args, cfg);
  timer.lap("extract");

  Rng rng = Rng::for_stream(cfg.seed, 1);
  const std::vector<PairRecord> records = generate_pairs(targets, bank, args.count, cfg, rng);
  timer.lap("pairs");

  StagingArea staging(args.out_dir);
  fs::create_directories(staging.root() / "pairs");
  json listed = json::array();
  for (std::size_t k = 0; k < records.size(); ++k) {
    const PairRecord& rec = records[k];
    const std::string clean = "pairs/" + std::to_string(k) + "_clean.png";
    const std::string rain = "pairs/" + std::to_string(k) + "_rain.png";
    save_image(rec.target_patch, staging.path_for(clean));
    save_image(rec.synthetic_patch, staging.path_for(rain));
    const std::string clean_digest = sha256_file(staging.path_for(clean));
    const std::string rain_digest = sha256_file(staging.path_for(rain));
    const PatchRef& source = bank.source_refs[rec.residual_index];
    listed.push_back({{"index", k},
                      {"target", args.targets[rec.target_index].string()},
                      {"target_index", rec.target_index},
                      {"row", rec.target_ref.row},
                      {"col", rec.target_ref.col},
                      {"size", rec.target_ref.size},
                      {"residual_index", rec.residual_index},
                      {"residual_source", {{"row", source.row}, {"col", source.col}}},
                      {"clean", clean},
                      {"rain", rain},
                      {"clean_sha256", clean_digest},
                      {"rain_sha256", rain_digest}});
    manifest.outputs.push_back({"clean", clean, clean_digest});
    manifest.outputs.push_back({"rain", rain, rain_digest});
  }
  timer.lap("save");

  const json pairs_doc{{"tool_version", tool_version()},
                       {"exemplar", args.exemplar.string()},
                       {"mask", args.mask.string()},
                       {"seed", cfg.seed},
                       {"config", config_to_json(cfg)},
                       {"count", records.size()},
                       {"records", listed}};
  write_json(staging.path_for("pairs.json"), pairs_doc);
  manifest.outputs.push_back({"pairs", "pairs.json", sha256_file(staging.path_for("pairs.json"))});

  record_inputs(manifest, args, args.targets);
  timer.lap("digest");
  write_json(staging.path_for("manifest.json"), manifest.to_json());
  staging.commit();
  return manifest;
}

InspectReport cmd_inspect(const InspectArgs& args) {
  InspectReport report;
  report.config = config_for(args);
  const TransferConfig& cfg = report.config;

  const ImageBuffer exemplar = load_image(args.exemplar);
  const RainMask mask = load_mask(args.mask);
  if (exemplar.height() != mask.height() || exemplar.width() != mask.width()) {
    throw DimensionError("mask is " + std::to_string(mask.height()) + "x" +
                         std::to_string(mask.width()) + " but exemplar is " +
                         std::to_string(exemplar.height()) + "x" + std::to_string(exemplar.width()));
  }
  report.height = exemplar.height();
  report.width = exemplar.width();
  report.channels = exemplar.channels();
  report.mask_coverage = static_cast<double>(mask.count()) /
                         (static_cast<double>(mask.height()) * mask.width());
  report.valid_positions =
      enumerate_valid_positions(mask, cfg.patch_size, cfg.coverage_threshold).size();
  if (report.valid_positions == 0) return report;

  Rng rng = Rng::for_stream(cfg.seed, 0);
  const PatchBank bank = sample_rain_patches(exemplar, mask, cfg.patch_size,
                                             cfg.coverage_threshold, cfg.bank_count, rng);
  report.sampled_patches = bank.size();

  const int channels = bank.channels();
  report.residual_stats.assign(channels, ChannelStats{});
  std::vector<double> sum(channels, 0.0);
  std::vector<double> count(channels, 0.0);
  for (int ch = 0; ch < channels; ++ch) {
    report.residual_stats[ch].min = bank.patches.front().at(0, 0, ch);
    report.residual_stats[ch].max = report.residual_stats[ch].min;
  }
  for (const auto& p : bank.patches) {
    auto values = p.values().data();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto ch = static_cast<int>(k % channels);
      auto& st = report.residual_stats[ch];
      st.min = std::min(st.min, values[k]);
      st.max = std::max(st.max, values[k]);
      sum[ch] += values[k];
      count[ch] += 1.0;
    }
  }
  std::vector<double> sq(channels, 0.0);
  for (const auto& p : bank.patches) {
    auto values = p.values().data();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto ch = static_cast<int>(k % channels);
      const double d = values[k] - sum[ch] / count[ch];
      sq[ch] += d * d;
    }
  }
  for (int ch = 0; ch < channels; ++ch) {
    report.residual_stats[ch].stddev = std::sqrt(sq[ch] / count[ch]);
  }

  if (args.montage) {
    const std::size_t tiles = std::min<std::size_t>(bank.size(), 64);
    const int per_row = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(tiles))));
    const int tile_rows = static_cast<int>((tiles + per_row - 1) / per_row);
    const int gap = 2;
    const int p = cfg.patch_size;
    Raster<float> sheet(tile_rows * (p + gap) + gap, per_row * (p + gap) + gap, channels, 0.0f);
    for (std::size_t t = 0; t < tiles; ++t) {
      const int top = gap + static_cast<int>(t / per_row) * (p + gap);
      const int left = gap + static_cast<int>(t % per_row) * (p + gap);
      const Field& r = bank.patches[t].values();
      for (int y = 0; y < p; ++y) {
        for (int x = 0; x < p; ++x) {
          for (int ch = 0; ch < channels; ++ch) {
            sheet.at(top + y, left + x, ch) =
                static_cast<float>(std::clamp(0.5 + r.at(y, x, ch), 0.0, 1.0));
          }
        }
      }
    }
    const ImageBuffer montage(sheet.height(), sheet.width(), channels,
                              std::vector<float>(sheet.data().begin(), sheet.data().end()));
    fs::path tmp = *args.montage;
    tmp += ".partial";
    save_image(montage, tmp);
    std::error_code ec;
    fs::rename(tmp, *args.montage, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw IoError("cannot write montage " + args.montage->string());
    }
    report.montage_written = true;
  }
  return report;
}

void print_report(const InspectReport& report, std::ostream& out) {
  out << "exemplar: " << report.height << "x" << report.width << "x" << report.channels << '\n';
  out << "patch_size: " << report.config.patch_size << '\n';
  out << "coverage_threshold: " << report.config.coverage_threshold << '\n';
  out << "mask_coverage: " << std::setprecision(6) << report.mask_coverage << '\n';
  out << "valid_positions: " << report.valid_positions << '\n';
  out << "sampled_patches: " << report.sampled_patches << '\n';
  for (std::size_t ch = 0; ch < report.residual_stats.size(); ++ch) {
    const auto& st = report.residual_stats[ch];
    out << "residual[" << ch << "]: min=" << st.min << " max=" << st.max
        << " stddev=" << st.stddev << '\n';
  }
  if (report.montage_written) out << "montage: written\n";
}

int report_failure(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "rainweave: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "rainweave: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "rainweave: format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const DimensionError& e) {
    err << "rainweave: dimension error: " << e.what() << '\n';
    return kExitDimension;
  } catch (const ExtractionError& e) {
    err << "rainweave: extraction error: " << e.what() << '\n';
    return kExitExtraction;
  } catch (const fs::filesystem_error& e) {
    err << "rainweave: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "rainweave: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rainweave::app
