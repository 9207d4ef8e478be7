#include "cli_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

namespace cli {

LibraryError::LibraryError(std::string context, circlaw_status s)
    : std::runtime_error(context + ": " + circlaw_status_name(s) + ": " + circlaw_last_error()), status(s) {}

void check(circlaw_status status, const std::string& context) {
  if (status != CIRCLAW_OK) throw LibraryError(context, status);
}

bool Field::has(const std::string& key) const { return node_->is_object() && node_->contains(key); }

Field Field::at(const std::string& key) const {
  if (!node_->is_object()) reject("expected an object");
  auto it = node_->find(key);
  if (it == node_->end()) throw ConfigError(path_ + "." + key + ": required field missing");
  return Field(*it, path_ + "." + key);
}

Field Field::at(std::size_t index) const {
  if (!node_->is_array()) reject("expected an array");
  if (index >= node_->size()) reject("index " + std::to_string(index) + " out of range");
  return Field((*node_)[index], path_ + "[" + std::to_string(index) + "]");
}

std::size_t Field::size() const {
  if (!node_->is_array()) reject("expected an array");
  return node_->size();
}

void Field::reject(const std::string& why) const { throw ConfigError(path_ + ": " + why); }

double Field::number() const {
  if (!node_->is_number()) reject("expected a number");
  const double v = node_->get<double>();
  if (!std::isfinite(v)) reject("expected a finite number");
  return v;
}

double Field::positive() const {
  const double v = number();
  if (!(v > 0.0)) reject("expected a positive number");
  return v;
}

std::uint64_t Field::u64() const {
  if (!node_->is_number_unsigned() && !(node_->is_number_integer() && node_->get<std::int64_t>() >= 0))
    reject("expected a nonnegative integer");
  return node_->get<std::uint64_t>();
}

std::size_t Field::count(std::size_t min_value) const {
  const auto v = u64();
  if (v < min_value) reject("expected an integer >= " + std::to_string(min_value));
  return static_cast<std::size_t>(v);
}

bool Field::boolean() const {
  if (!node_->is_boolean()) reject("expected true or false");
  return node_->get<bool>();
}

std::string Field::string() const {
  if (!node_->is_string()) reject("expected a string");
  return node_->get<std::string>();
}

circlaw_complex Field::complex() const {
  if (node_->is_number()) return {number(), 0.0};
  if (!node_->is_array() || node_->size() != 2) reject("expected [re, im]");
  return {at(0).number(), at(1).number()};
}

double Field::number_or(const std::string& key, double fallback) const {
  return has(key) ? at(key).number() : fallback;
}

std::size_t Field::count_or(const std::string& key, std::size_t fallback, std::size_t min_value) const {
  return has(key) ? at(key).count(min_value) : fallback;
}

bool Field::boolean_or(const std::string& key, bool fallback) const {
  return has(key) ? at(key).boolean() : fallback;
}

void only_keys(const Field& field, const std::vector<std::string>& allowed) {
  if (!field.raw().is_object()) field.reject("expected an object");
  for (const auto& [key, value] : field.raw().items()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError(field.path() + "." + key + ": unknown field");
  }
}

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) { row(header); }

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("csv row has the wrong number of cells");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) text_ += ',';
    text_ += cells[k];
  }
  text_ += '\n';
  return *this;
}

Svg::Svg(double x0, double x1, double y0, double y1, int width, int height)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), width_(width), height_(height) {}

double Svg::px(double x) const { return (x - x0_) / (x1_ - x0_) * width_; }
double Svg::py(double y) const { return height_ - (y - y0_) / (y1_ - y0_) * height_; }

void Svg::circle(double x, double y, double radius_px, const std::string& fill) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\"/>\n", px(x), py(y),
                radius_px, fill.c_str());
  body_ += buf;
}

void Svg::ring(double cx, double cy, double radius, const std::string& stroke) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "<ellipse cx=\"%.2f\" cy=\"%.2f\" rx=\"%.2f\" ry=\"%.2f\" fill=\"none\" stroke=\"%s\"/>\n",
                px(cx), py(cy), radius / (x1_ - x0_) * width_, radius / (y1_ - y0_) * height_,
                stroke.c_str());
  body_ += buf;
}

void Svg::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" points=\"";
  char buf[48];
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
    body_ += buf;
  }
  body_ += "\"/>\n";
}

void Svg::text(double x, double y, const std::string& label) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">", px(x), py(y));
  body_ += buf + label + "</text>\n";
}

void Svg::axes() {
  if (x0_ <= 0.0 && x1_ >= 0.0) polyline({{0.0, y0_}, {0.0, y1_}}, "#bbbbbb");
  if (y0_ <= 0.0 && y1_ >= 0.0) polyline({{x0_, 0.0}, {x1_, 0.0}}, "#bbbbbb");
}

std::string Svg::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
     << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << body_ << "</svg>\n";
  return os.str();
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw ConfigError("--out: cannot create " + root_.string() + ": " + ec.message());
}

void OutputDir::write(const std::string& name, const std::string& contents) {
  std::ofstream f(root_ / name, std::ios::binary | std::ios::trunc);
  f << contents;
  if (!f) throw std::runtime_error("cannot write " + (root_ / name).string());
  files_.push_back(name);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof buf);
    if (f.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(f.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return os.str();
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_manifest(const OutputDir& out, const std::string& command, const json& config,
                    const json& effective, double wall_seconds) {
  json files = json::array();
  for (const auto& name : out.files()) {
    const auto path = out.root() / name;
    files.push_back({{"path", name},
                     {"bytes", std::filesystem::file_size(path)},
                     {"sha256", sha256_file(path)}});
  }
  json manifest = {{"tool", "circlaw"},
                   {"version", circlaw_version()},
                   {"command", command},
                   {"config", config},
                   {"effective", effective},
                   {"finished_utc", utc_now()},
                   {"wall_clock_seconds", wall_seconds},
                   {"files", files}};
  std::ofstream f(out.root() / "manifest.json", std::ios::binary | std::ios::trunc);
  f << manifest.dump(2) << '\n';
  if (!f) throw std::runtime_error("cannot write manifest.json");
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::vector<std::string> problems;
  std::ifstream f(dir / "manifest.json");
  if (!f) return {"manifest.json not found in " + dir.string()};
  json manifest;
  try {
    manifest = json::parse(f);
  } catch (const json::exception& e) {
    return {std::string("manifest.json: ") + e.what()};
  }
  if (!manifest.contains("files") || !manifest["files"].is_array()) return {"manifest.json: no file list"};
  for (const auto& entry : manifest["files"]) {
    const auto name = entry.value("path", std::string());
    const auto path = dir / name;
    if (name.empty() || !std::filesystem::exists(path)) {
      problems.push_back(name + ": missing");
      continue;
    }
    const auto actual = sha256_file(path);
    if (actual != entry.value("sha256", std::string()))
      problems.push_back(name + ": checksum mismatch (" + actual + ")");
  }
  return problems;
}

}  // namespace cli
