#include "ptqa/result_table.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ptqa {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == "error") throw std::invalid_argument("column name 'error' is reserved");
    for (std::size_t j = 0; j < i; ++j) {
      if (columns_[i] == columns_[j]) throw std::invalid_argument("duplicate column " + columns_[i]);
    }
  }
}

std::size_t ResultTable::column_index(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw std::out_of_range("no column named " + name);
  return static_cast<std::size_t>(it - columns_.begin());
}

bool ResultTable::has_column(const std::string& name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

void ResultTable::add_row(std::vector<double> values, std::string error) {
  if (values.size() != columns_.size()) {
    throw std::invalid_argument("row has " + std::to_string(values.size()) + " cells, table has " +
                                std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(values));
  errors_.push_back(std::move(error));
}

double ResultTable::at(std::size_t row, const std::string& column) const {
  return rows_.at(row)[column_index(column)];
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

std::size_t ResultTable::failed_rows() const {
  return static_cast<std::size_t>(
      std::count_if(errors_.begin(), errors_.end(), [](const std::string& e) { return !e.empty(); }));
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension();
  p += ".meta.json";
  return p;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::string text;
  for (const auto& c : table.columns()) text += csv_field(c) + ",";
  text += "error\r\n";
  for (std::size_t i = 0; i < table.row_count(); ++i) {
    for (double v : table.row(i)) text += format_real(v) + ",";
    text += csv_field(table.error(i)) + "\r\n";
  }
  write_file(path, text);

  nlohmann::json meta = table.metadata;
  meta["columns"] = table.columns();
  meta["rows"] = table.row_count();
  meta["failed_rows"] = table.failed_rows();
  write_file(metadata_path(path), meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// SVG heatmap
// ---------------------------------------------------------------------------

namespace {

struct Rgb {
  double r, g, b;
};

// Perceptually ordered anchors, dark blue through green to yellow.
constexpr std::array<Rgb, 5> kAnchors{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
                                       {253, 231, 37}}};

std::string colour(double f) {
  if (std::isnan(f)) return "#bbbbbb";
  f = std::clamp(f, 0.0, 1.0) * (kAnchors.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(f), kAnchors.size() - 2);
  const double t = f - static_cast<double>(i);
  const Rgb& a = kAnchors[i];
  const Rgb& b = kAnchors[i + 1];
  std::array<char, 8> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x",
                static_cast<int>(std::lround(a.r + t * (b.r - a.r))),
                static_cast<int>(std::lround(a.g + t * (b.g - a.g))),
                static_cast<int>(std::lround(a.b + t * (b.b - a.b))));
  return buf.data();
}

std::string label(double x) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.4g", x);
  return buf.data();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Sorted distinct values and each value's position.
std::map<double, std::size_t> index_values(const std::vector<double>& v) {
  std::map<double, std::size_t> idx;
  for (double x : v) {
    if (std::isnan(x)) throw std::invalid_argument("heatmap: coordinate column contains nan");
    idx.emplace(x, 0);
  }
  std::size_t i = 0;
  for (auto& [_, pos] : idx) pos = i++;
  return idx;
}

}  // namespace

std::string heatmap_svg(const ResultTable& table, const std::string& x_col, const std::string& y_col,
                        const std::string& z_col) {
  const auto xs = table.column(x_col);
  const auto ys = table.column(y_col);
  const auto zs = table.column(z_col);
  const auto xi = index_values(xs);
  const auto yi = index_values(ys);
  const std::size_t nx = xi.size(), ny = yi.size();
  if (nx * ny != table.row_count()) {
    throw std::invalid_argument("heatmap: table is not a complete " + x_col + " x " + y_col + " grid");
  }
  std::vector<char> seen(nx * ny, 0);
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    char& s = seen[yi.at(ys[r]) * nx + xi.at(xs[r])];
    if (s) throw std::invalid_argument("heatmap: repeated grid point");
    s = 1;
  }

  double zmin = std::numeric_limits<double>::infinity();
  double zmax = -zmin;
  for (double z : zs) {
    if (std::isfinite(z)) {
      zmin = std::min(zmin, z);
      zmax = std::max(zmax, z);
    }
  }
  const bool any = zmin <= zmax;
  const bool constant = !any || zmax - zmin <= 1e-15 * std::max(1.0, std::abs(zmax));

  const double left = 80, top = 40, width = 480, height = 360, bar_x = left + width + 30,
               bar_w = 20;
  const double cw = width / static_cast<double>(nx);
  const double ch = height / static_cast<double>(ny);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << bar_x + 110 << "\" height=\""
     << top + height + 60 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<title>" << xml_escape(z_col) << "</title>\n";
  os << "<text x=\"" << left + width / 2 << "\" y=\"" << top - 15
     << "\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(z_col) << "</text>\n";

  // cells in row order of the table; y grows upwards
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    const double x = left + static_cast<double>(xi.at(xs[r])) * cw;
    const double y = top + height - static_cast<double>(yi.at(ys[r]) + 1) * ch;
    const double f = !std::isfinite(zs[r]) ? std::nan("") : constant ? 0.5 : (zs[r] - zmin) / (zmax - zmin);
    os << "<rect class=\"cell\" x=\"" << label(x) << "\" y=\"" << label(y) << "\" width=\"" << label(cw)
       << "\" height=\"" << label(ch) << "\" fill=\"" << colour(f) << "\"/>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  // axis ticks at both ends of each axis, labels centred
  const double x_lo = xi.begin()->first, x_hi = xi.rbegin()->first;
  const double y_lo = yi.begin()->first, y_hi = yi.rbegin()->first;
  os << "<text x=\"" << left << "\" y=\"" << top + height + 16 << "\" text-anchor=\"start\">"
     << label(x_lo) << "</text>\n";
  os << "<text x=\"" << left + width << "\" y=\"" << top + height + 16 << "\" text-anchor=\"end\">"
     << label(x_hi) << "</text>\n";
  os << "<text x=\"" << left + width / 2 << "\" y=\"" << top + height + 40
     << "\" text-anchor=\"middle\">" << xml_escape(x_col) << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + height << "\" text-anchor=\"end\">"
     << label(y_lo) << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + 12 << "\" text-anchor=\"end\">" << label(y_hi)
     << "</text>\n";
  os << "<text x=\"" << left - 45 << "\" y=\"" << top + height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
     << left - 45 << " " << top + height / 2 << ")\">" << xml_escape(y_col) << "</text>\n";

  // colour bar
  if (constant) {
    os << "<rect x=\"" << bar_x << "\" y=\"" << top << "\" width=\"" << bar_w << "\" height=\""
       << height << "\" fill=\"" << colour(any ? 0.5 : std::nan("")) << "\"/>\n";
    os << "<text x=\"" << bar_x + bar_w + 6 << "\" y=\"" << top + height / 2 << "\">"
       << (any ? label(zmax) : std::string("nan")) << "</text>\n";
  } else {
    const int steps = 64;
    const double sh = height / steps;
    for (int i = 0; i < steps; ++i) {
      const double f = (i + 0.5) / steps;
      os << "<rect x=\"" << bar_x << "\" y=\"" << label(top + height - (i + 1) * sh) << "\" width=\""
         << bar_w << "\" height=\"" << label(sh) << "\" fill=\"" << colour(f) << "\"/>\n";
    }
    os << "<text x=\"" << bar_x + bar_w + 6 << "\" y=\"" << top + height << "\">" << label(zmin)
       << "</text>\n";
    os << "<text x=\"" << bar_x + bar_w + 6 << "\" y=\"" << top + 12 << "\">" << label(zmax)
       << "</text>\n";
  }
  os << "<rect x=\"" << bar_x << "\" y=\"" << top << "\" width=\"" << bar_w << "\" height=\"" << height
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "</svg>\n";
  return os.str();
}

void emit_heatmap_svg(const ResultTable& table, const std::string& x_col, const std::string& y_col,
                      const std::string& z_col, const std::filesystem::path& path) {
  write_file(path, heatmap_svg(table, x_col, y_col, z_col));
}

}  // namespace ptqa
