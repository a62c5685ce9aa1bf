#include "rainweave/app/staging.hpp"

#include <unistd.h>

#include <atomic>
#include <string>
#include <system_error>

#include "rainweave/error.hpp"

namespace rainweave::app {

namespace fs = std::filesystem;

namespace {

std::atomic<unsigned> staging_counter{0};

}  // namespace

StagingArea::StagingArea(const fs::path& out_dir)
    : out_dir_(fs::absolute(out_dir).lexically_normal()) {
  if (out_dir_.filename().empty()) out_dir_ = out_dir_.parent_path();
  const fs::path parent = out_dir_.parent_path();
  std::error_code ec;
  fs::create_directories(parent, ec);
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path candidate = parent / (".rainweave-staging-" + std::to_string(::getpid()) + "-" +
                                   std::to_string(staging_counter++));
    if (fs::create_directory(candidate, ec)) {
      root_ = std::move(candidate);
      return;
    }
  }
  throw IoError("cannot create a staging directory in " + parent.string() +
                (ec ? ": " + ec.message() : ""));
}

StagingArea::~StagingArea() {
  std::error_code ec;
  fs::remove_all(root_, ec);
}

fs::path StagingArea::path_for(const fs::path& relative) const {
  fs::path p = root_ / relative;
  fs::create_directories(p.parent_path());
  return p;
}

void StagingArea::commit() {
  if (committed_) return;
  std::error_code ec;
  fs::create_directories(out_dir_, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir_.string() + ": " + ec.message());
  for (auto it = fs::recursive_directory_iterator(root_); it != fs::recursive_directory_iterator();
       ++it) {
    const fs::path rel = fs::relative(it->path(), root_);
    const fs::path dest = out_dir_ / rel;
    if (it->is_directory()) {
      fs::create_directories(dest, ec);
    } else {
      fs::rename(it->path(), dest, ec);
    }
    if (ec) throw IoError("cannot move " + rel.string() + " into " + out_dir_.string() + ": " + ec.message());
  }
  committed_ = true;
}

}  // namespace rainweave::app
