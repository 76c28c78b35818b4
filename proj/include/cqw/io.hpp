#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cqw {

/// Shortest decimal that round-trips a double (17 significant digits max).
std::string format_double(double value);

std::string sha256_hex(std::string_view data);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Angle literal: decimal radians ("0.785"), or a multiple of pi such as
/// "pi", "-pi/3", "2pi/5", "3*pi/4", "0.25pi".
double parse_angle(std::string_view text);

/// Record of files written by one command, serialized as manifest.json.
class ArtifactLog {
 public:
  explicit ArtifactLog(std::filesystem::path out_dir);

  const std::filesystem::path& out_dir() const { return out_dir_; }
  std::filesystem::path write(const std::string& name, std::string_view content);
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::filesystem::path out_dir_;
  std::vector<std::pair<std::string, std::string>> files_;  // name, sha256
};

}  // namespace cqw
