#include "sshchain/export.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sshchain/error.hpp"

namespace sshchain::io {

namespace {

std::string chars(double x, int precision, bool shortest) {
  char buf[64];
  const auto res = shortest ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general)
                            : std::to_chars(buf, buf + sizeof buf, x,
                                            std::chars_format::general, precision);
  return {buf, res.ptr};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json json_value(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    const std::string text = format_double(*d, precision);
    double y = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), y);
    return y;
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

std::string format_double(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  const std::string rounded = chars(x, precision, false);
  double y = 0.0;
  std::from_chars(rounded.data(), rounded.data() + rounded.size(), y);
  return chars(y, precision, true);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_csv(const Table& t, int precision) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(t.columns[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      const Cell& c = row[i];
      if (const auto* d = std::get_if<double>(&c)) out += format_double(*d, precision);
      else if (const auto* n = std::get_if<long long>(&c)) out += std::to_string(*n);
      else out += csv_field(std::get<std::string>(c));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t, int precision) {
  nlohmann::ordered_json doc;
  doc["metadata"] = t.metadata;
  doc["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(json_value(c, precision));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

nlohmann::ordered_json chain_to_json(const ChainParams& p) {
  nlohmann::ordered_json j;
  j["n_cells"] = p.n_cells;
  j["v"] = p.v;
  j["w"] = p.w;
  j["z"] = p.z;
  j["boundary"] = std::string(to_string(p.boundary));
  return j;
}

ChainParams chain_from_json(const nlohmann::json& j) {
  ChainParams p;
  p.n_cells = j.at("n_cells").get<std::size_t>();
  p.v = j.at("v").get<double>();
  p.w = j.at("w").get<double>();
  p.z = j.at("z").get<double>();
  p.boundary = parse_boundary(j.at("boundary").get<std::string>());
  return p;
}

nlohmann::ordered_json metadata_to_json(const ScanMetadata& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = m.tool_version;
  j["kernels"] = m.kernels;
  if (m.timestamp) j["timestamp"] = *m.timestamp;
  j["chain"] = chain_to_json(m.chain);
  auto axes = nlohmann::ordered_json::array();
  for (const auto& a : m.axes) {
    nlohmann::ordered_json ja;
    ja["name"] = a.name();
    ja["min"] = a.min;
    ja["max"] = a.max;
    ja["n_points"] = a.n_points;
    axes.push_back(std::move(ja));
  }
  j["axes"] = std::move(axes);
  j["states"] = m.states;
  j["observables"] = m.observables;
  return j;
}

ScanMetadata metadata_from_json(const nlohmann::json& j) {
  ScanMetadata m;
  try {
    m.tool_version = j.at("tool_version").get<std::string>();
    m.kernels = j.at("kernels").get<std::string>();
    if (j.contains("timestamp")) m.timestamp = j.at("timestamp").get<std::string>();
    m.chain = chain_from_json(j.at("chain"));
    for (const auto& ja : j.at("axes")) {
      Axis a;
      a.kind = parse_axis_kind(ja.at("name").get<std::string>());
      a.min = ja.at("min").get<double>();
      a.max = ja.at("max").get<double>();
      a.n_points = ja.at("n_points").get<std::size_t>();
      m.axes.push_back(a);
    }
    m.states = j.at("states").get<std::vector<std::string>>();
    m.observables = j.at("observables").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad scan metadata: ") + e.what());
  }
  return m;
}

ScanMetadata parse_scan_metadata(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("bad JSON: ") + e.what());
  }
  if (!doc.contains("metadata")) throw InvalidArgument("bad JSON: no metadata block");
  return metadata_from_json(doc["metadata"]);
}

Table scan_table(const PhaseScanResult& r) {
  Table t;
  t.metadata = metadata_to_json(r.metadata);
  for (const auto& a : r.metadata.axes) t.columns.push_back(a.name());
  t.columns.insert(t.columns.end(), r.columns.begin(), r.columns.end());
  t.columns.emplace_back("status");
  t.rows.reserve(r.records.size());
  for (const auto& rec : r.records) {
    std::vector<Cell> row;
    row.reserve(t.columns.size());
    for (double x : rec.axis_values) row.emplace_back(x);
    for (double x : rec.values) row.emplace_back(x);
    row.emplace_back(rec.status);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string matrix_csv(const PhaseScanResult& r, std::string_view column, int precision) {
  const auto& axes = r.metadata.axes;
  if (axes.size() != 2) throw InvalidArgument("matrix export needs a two-axis scan");
  const Eigen::MatrixXd m = r.matrix(column);
  std::string out = axes[0].name() + "\\" + axes[1].name();
  for (std::size_t j = 0; j < axes[1].n_points; ++j) {
    out += ',';
    out += format_double(axes[1].value(j), precision);
  }
  out += '\n';
  for (std::size_t i = 0; i < axes[0].n_points; ++i) {
    out += format_double(axes[0].value(i), precision);
    for (std::size_t j = 0; j < axes[1].n_points; ++j) {
      out += ',';
      out += format_double(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                           precision);
    }
    out += '\n';
  }
  return out;
}

std::string sibling_path(const std::string& path, std::string_view suffix) {
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path();
  out /= p.stem().string() + "_" + std::string(suffix) + p.extension().string();
  return out.string();
}

void write_files(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    const std::string tmp = path + ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      cleanup();
      throw IoError("cannot open '" + path + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      cleanup();
      throw IoError("write to '" + path + "' failed");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    std::filesystem::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot rename into '" + files[i].first + "': " + ec.message());
    }
  }
}

void write_output(const cli::OutputSpec& output, const std::string& content) {
  if (output.path.empty() || output.path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  write_files({{output.path, content}});
}

}  // namespace sshchain::io
