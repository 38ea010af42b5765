#pragma once

#include <json.hpp>

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace ptqa {

/// Rows of real-valued cells plus a trailing free-text error column.  Complex
/// quantities are stored as NAME_re / NAME_im pairs.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t column_index(const std::string& name) const;  ///< throws std::out_of_range
  bool has_column(const std::string& name) const;

  std::size_t row_count() const { return rows_.size(); }
  /// Appends a row; values.size() must equal the column count.
  void add_row(std::vector<double> values, std::string error = {});
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }
  const std::string& error(std::size_t i) const { return errors_[i]; }
  void set_error(std::size_t i, std::string message) { errors_[i] = std::move(message); }
  double at(std::size_t row, const std::string& column) const;
  std::vector<double> column(const std::string& name) const;

  std::size_t failed_rows() const;

  nlohmann::json metadata;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::string> errors_;
};

/// Complex column names for a base name.
inline std::string re_column(const std::string& base) { return base + "_re"; }
inline std::string im_column(const std::string& base) { return base + "_im"; }

/// %.17g, with nan / inf / -inf spelled out.
std::string format_real(double x);

/// RFC 4180 quoting: fields with a comma, quote, CR or LF are quoted and
/// embedded quotes doubled.
std::string csv_field(const std::string& text);

/// Sidecar path: same directory and stem, suffix .meta.json.
std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

/// Writes the CSV (CRLF line endings, header row, trailing `error` column) and
/// its metadata sidecar.  Throws std::runtime_error on I/O failure.
void emit_csv(const ResultTable& table, const std::filesystem::path& path);

/// Heatmap of z over the (x, y) grid.  Throws std::invalid_argument unless every
/// (x, y) pair occurs exactly once.
void emit_heatmap_svg(const ResultTable& table, const std::string& x_col, const std::string& y_col,
                      const std::string& z_col, const std::filesystem::path& path);

/// The SVG document as a string; emit_heatmap_svg writes exactly this.
std::string heatmap_svg(const ResultTable& table, const std::string& x_col, const std::string& y_col,
                        const std::string& z_col);

}  // namespace ptqa
