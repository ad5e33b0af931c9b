#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace vdp::cli {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Writes `bytes` to `path` through a temporary sibling and a rename, so a
/// reader never sees a partially written file.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Collects the files of one run and writes each one atomically as it arrives.
class OutputSet {
 public:
  using Progress = std::function<void(const std::string&)>;

  OutputSet(std::filesystem::path dir, Progress progress);

  void write(const std::string& name, std::string_view bytes);
  void progress(const std::string& line) const;

  /// Scalar results echoed into the manifest (n_c, fitted rates, ratios ...).
  Json& summary() noexcept { return summary_; }

  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }
  [[nodiscard]] const std::vector<OutputFile>& files() const noexcept { return files_; }
  [[nodiscard]] const Json& summary() const noexcept { return summary_; }

 private:
  std::filesystem::path dir_;
  Progress progress_;
  std::vector<OutputFile> files_;
  Json summary_ = Json::object();
};

}  // namespace vdp::cli
