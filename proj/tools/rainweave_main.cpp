#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "rainweave/app/commands.hpp"

namespace app = rainweave::app;

namespace {

void add_common(CLI::App* cmd, app::CommonArgs& args) {
  cmd->add_option("--exemplar", args.exemplar, "Exemplar rain image (PNG)")->required();
  cmd->add_option("--mask", args.mask, "Rain mask for the exemplar (PNG)")->required();
  cmd->add_option("--patch", args.flags.patch_size, "Patch side in pixels (default 32)");
  cmd->add_option("--overlap", args.flags.overlap, "Overlap width (default round(patch/6), min 2)");
  cmd->add_option("--threshold", args.flags.coverage_threshold,
                  "Minimum rain coverage of an extracted window (default 0.6)");
  cmd->add_option("--bank", args.flags.bank_count, "Residual patches to sample (default 2000)");
  cmd->add_option("--feather", args.flags.feather, "Seam feather radius in pixels (default 1)");
  cmd->add_option("--seed", args.flags.seed, "Random seed (falls back to RAINWEAVE_SEED)");
  cmd->add_option("--config", args.config_file, "Flat JSON config; flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Exemplar-based rain structure transfer"};
  cli.set_version_flag("--version", app::tool_version());
  cli.require_subcommand(1);

  app::TransferArgs transfer;
  auto* transfer_cmd = cli.add_subcommand("transfer", "Quilt exemplar rain onto target images");
  add_common(transfer_cmd, transfer);
  transfer_cmd->add_option("--target", transfer.targets, "Target image(s) (PNG)")->required();
  transfer_cmd->add_option("--out", transfer.out_dir, "Output directory");
  transfer_cmd->add_flag("--layer", transfer.write_layer, "Also write <stem>_layer.png");

  app::PairsArgs pairs;
  auto* pairs_cmd = cli.add_subcommand("pairs", "Write blend-free clean/rain patch pairs");
  add_common(pairs_cmd, pairs);
  pairs_cmd->add_option("--target", pairs.targets, "Clean source image(s) (PNG)")->required();
  pairs_cmd->add_option("--out", pairs.out_dir, "Output directory");
  pairs_cmd->add_option("--count", pairs.count, "Number of pairs")->required();

  app::InspectArgs inspect;
  auto* inspect_cmd = cli.add_subcommand("inspect", "Report extraction statistics");
  add_common(inspect_cmd, inspect);
  inspect_cmd->add_option("--montage", inspect.montage, "Write a montage of sampled residuals");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kExitUsage;
  }

  try {
    const auto env_seed = app::parse_seed(std::getenv("RAINWEAVE_SEED"));
    transfer.env_seed = pairs.env_seed = inspect.env_seed = env_seed;
    if (*transfer_cmd) {
      const auto manifest = app::cmd_transfer(transfer);
      for (const auto& out : manifest.outputs) std::cout << out.path << "  " << out.sha256 << '\n';
    } else if (*pairs_cmd) {
      const auto manifest = app::cmd_pairs(pairs);
      std::cout << "wrote " << pairs.count << " pairs to " << pairs.out_dir.string() << '\n';
    } else if (*inspect_cmd) {
      app::print_report(app::cmd_inspect(inspect), std::cout);
    }
  } catch (...) {
    return app::report_failure(std::cerr);
  }
  return app::kExitOk;
}
