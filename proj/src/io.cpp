#include "cqw/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "cqw/error.hpp"
#include "cqw/types.hpp"

namespace cqw {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) == 1,
          ErrorCode::kIo, "sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    require(!ec, ErrorCode::kIo, "cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

double parse_number(std::string_view text, std::string_view whole) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(v),
          ErrorCode::kParse, "invalid angle '" + std::string(whole) + "'");
  return v;
}

// "a" or "a/b"
double parse_ratio(std::string_view text, std::string_view whole) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text, whole);
  const double den = parse_number(text.substr(slash + 1), whole);
  require(den != 0.0, ErrorCode::kParse, "zero denominator in angle '" + std::string(whole) + "'");
  return parse_number(text.substr(0, slash), whole) / den;
}

}  // namespace

double parse_angle(std::string_view raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c)))
      text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  require(!text.empty(), ErrorCode::kParse, "empty angle");
  double sign = 1.0;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    sign = body.front() == '-' ? -1.0 : 1.0;
    body.remove_prefix(1);
  }
  require(!body.empty() && body.front() != '-' && body.front() != '+', ErrorCode::kParse,
          "invalid angle '" + std::string(raw) + "'");
  const auto pi_pos = body.find("pi");
  if (pi_pos == std::string_view::npos) return sign * parse_ratio(body, raw);

  std::string_view coef = body.substr(0, pi_pos);
  if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
  const double factor = coef.empty() ? 1.0 : parse_ratio(coef, raw);
  std::string_view rest = body.substr(pi_pos + 2);
  double divisor = 1.0;
  if (!rest.empty()) {
    require(rest.front() == '/', ErrorCode::kParse, "invalid angle '" + std::string(raw) + "'");
    divisor = parse_number(rest.substr(1), raw);
    require(divisor != 0.0, ErrorCode::kParse, "zero denominator in angle '" + std::string(raw) + "'");
  }
  return sign * factor * kPi / divisor;
}

ArtifactLog::ArtifactLog(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {}

std::filesystem::path ArtifactLog::write(const std::string& name, std::string_view content) {
  const auto path = out_dir_ / name;
  write_text_file(path, content);
  files_.emplace_back(name, sha256_hex(content));
  return path;
}

}  // namespace cqw
