#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "circlaw/circlaw.h"

namespace cli {

using nlohmann::json;

/// Exit codes shared by every subcommand.
enum Exit : int { kSuccess = 0, kFailure = 1, kConfigError = 2, kNumericalError = 3 };

/// A problem the user can fix in the config or on the command line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A library call failed while executing a valid config.
struct LibraryError : std::runtime_error {
  LibraryError(std::string context, circlaw_status status);
  circlaw_status status;
};

/// Throws LibraryError naming `context` unless status is CIRCLAW_OK.
void check(circlaw_status status, const std::string& context);

/// Typed, path-aware access to a JSON config node. Every error message
/// carries the dotted path of the offending field.
class Field {
 public:
  Field(const json& node, std::string path) : node_(&node), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *node_; }
  bool has(const std::string& key) const;
  Field at(const std::string& key) const;
  Field at(std::size_t index) const;
  std::size_t size() const;  // array length

  double number() const;
  double positive() const;
  std::uint64_t u64() const;
  std::size_t count(std::size_t min_value = 1) const;
  bool boolean() const;
  std::string string() const;
  /// [re, im] pair or a bare number.
  circlaw_complex complex() const;

  double number_or(const std::string& key, double fallback) const;
  std::size_t count_or(const std::string& key, std::size_t fallback, std::size_t min_value = 1) const;
  bool boolean_or(const std::string& key, bool fallback) const;

  [[noreturn]] void reject(const std::string& why) const;

 private:
  const json* node_;
  std::string path_;
};

/// Rejects keys of an object node that are not in `allowed`.
void only_keys(const Field& field, const std::vector<std::string>& allowed);

/// Formats a double so that it round-trips exactly.
std::string fmt(double value);

/// Accumulates CSV rows in memory; header first, '\n' line endings.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Minimal SVG canvas with a data-to-pixel transform.
class Svg {
 public:
  Svg(double x0, double x1, double y0, double y1, int width = 640, int height = 640);
  void circle(double x, double y, double radius_px, const std::string& fill);
  void ring(double cx, double cy, double radius, const std::string& stroke);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke);
  void text(double x, double y, const std::string& label);
  void axes();
  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;
  double x0_, x1_, y0_, y1_;
  int width_, height_;
  std::string body_;
};

/// Writes files into the output directory and records them for the
/// manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);
  void write(const std::string& name, const std::string& contents);
  const std::filesystem::path& root() const { return root_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path root_;
  std::vector<std::string> files_;
};

std::string sha256_file(const std::filesystem::path& path);

/// Writes manifest.json listing every file in `out` with its checksum.
void write_manifest(const OutputDir& out, const std::string& command, const json& config,
                    const json& effective, double wall_seconds);

/// Re-hashes every file in the manifest. Returns the list of problems.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace cli
