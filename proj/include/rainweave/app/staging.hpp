#pragma once

#include <filesystem>

namespace rainweave::app {

// Scratch directory beside an output directory. Files are written here and
// moved into place by commit(); if commit() never runs, the destructor
// removes everything, so a failed run leaves the output directory untouched.
class StagingArea {
public:
  explicit StagingArea(const std::filesystem::path& out_dir);
  ~StagingArea();

  StagingArea(const StagingArea&) = delete;
  StagingArea& operator=(const StagingArea&) = delete;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path_for(const std::filesystem::path& relative) const;

  // Moves staged files into out_dir (creating it and subdirectories as
  // needed), replacing files of the same name.
  void commit();

private:
  std::filesystem::path out_dir_;
  std::filesystem::path root_;
  bool committed_ = false;
};

}  // namespace rainweave::app
