#include "fne/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fne/curve.hpp"
#include "fne/report.hpp"

namespace fne::io {

namespace {

std::string cell_text(const nlohmann::json& cell) {
  if (cell.is_null()) return {};
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_number_float()) return format_double(cell.get<double>());
  return cell.dump();
}

nlohmann::json parse_cell(const std::string& text) {
  if (text.empty()) return nullptr;
  const char* first = text.data();
  const char* last = first + text.size();
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc() && p == last) return i;
  double x = 0.0;
  if (auto [p, ec] = std::from_chars(first, last, x); ec == std::errc() && p == last) return x;
  if (text == "nan" || text == "inf" || text == "-inf") {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    return text == "inf" ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return text;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

nlohmann::json index_or_null(std::size_t n) { return n == 0 ? nlohmann::json(nullptr) : nlohmann::json(n); }

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::out_of_range("no column named " + name);
}

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& table) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.header[i]] = row[i];
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

void write(std::ostream& os, const Table& table, Format format) {
  if (format == Format::csv)
    write_csv(os, table);
  else
    write_json(os, table);
}

void write_file(const std::filesystem::path& path, const Table& table, Format format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(os, table, format);
  os.flush();
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

Table read_csv(std::istream& is) {
  Table table;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty CSV input");
  table.header = split(line);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != table.header.size())
      throw std::runtime_error("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(table.header.size()));
    std::vector<nlohmann::json> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_cell(f));
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table read_csv_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_csv(is);
}

Table mesh_table(const Mesh& mesh) {
  Table t{{"n", "d", "t", "block"}, {}};
  const BlockMeta* meta = mesh.block_meta();
  t.rows.reserve(mesh.size());
  for (std::size_t n = 1; n <= mesh.size(); ++n)
    t.rows.push_back({n, mesh.d(n), mesh.t(n), meta ? index_or_null(meta->block_of(n)) : nlohmann::json(nullptr)});
  return t;
}

Table block_meta_table(const BlockMeta& meta) {
  Table t{{"k", "w", "i", "Q", "block_end", "j_unit"}, {}};
  for (const Block& b : meta.blocks) t.rows.push_back({b.k, b.width, b.start, b.q, b.end, b.unit_end});
  return t;
}

Table orbit_table(const Orbit& orbit) {
  Table t{{"n", "t", "rho", "rho_recursive"}, {}};
  t.rows.reserve(orbit.size());
  for (std::size_t n = 1; n <= orbit.size(); ++n)
    t.rows.push_back({n, orbit.t(n), orbit.rho(n), orbit.rho_recursive(n)});
  return t;
}

Table trace_table(const Orbit& orbit, const CesaroTrace& trace) {
  Table t{{"n", "t", "rho", "y_norm"}, {}};
  t.rows.reserve(trace.upto());
  for (std::size_t n = 1; n <= trace.upto(); ++n) t.rows.push_back({n, orbit.t(n), orbit.rho(n), trace.norm_at(n)});
  return t;
}

Table block_summary_table(const BlockMeta& meta, const CesaroTrace& trace) {
  Table t{{"k", "i", "j_unit", "j_end", "Q", "w", "z_norm", "y_at_j_unit", "y_at_j_end"}, {}};
  for (const Block& b : meta.blocks) {
    if (!trace.has(b.end) || !trace.has(b.unit_end) || b.k > trace.z_norm.size()) continue;
    t.rows.push_back({b.k, b.start, b.unit_end, b.end, b.q, b.width, trace.z_norm[b.k - 1],
                      trace.norm_at(b.unit_end), trace.norm_at(b.end)});
  }
  return t;
}

Table coord_samples_table(std::span<const double> ts, std::size_t max_k) {
  Table t{{"t", "k", "u_k"}, {}};
  for (double s : ts)
    for (std::size_t k = 0; k <= max_k; ++k) t.rows.push_back({s, k, curve::coord_component(k, s)});
  return t;
}

Table l2_samples_table(std::span<const double> ts, std::span<const double> rs) {
  Table t{{"t", "r", "value"}, {}};
  for (double s : ts)
    for (double r : rs) t.rows.push_back({s, r, curve::l2_point_eval(s, r)});
  return t;
}

Table plot_table(const CesaroTrace& trace, const BlockMeta* meta) {
  if (trace.upto() == 0) throw std::invalid_argument("cannot export an empty Cesaro trace");
  Table t{{"n", "y_norm", "tag", "block"}, {}};
  t.rows.reserve(trace.upto() + (meta ? 2 * meta->count() : 0));
  for (std::size_t n = 1; n <= trace.upto(); ++n) {
    const nlohmann::json block = meta ? index_or_null(meta->block_of(n)) : nlohmann::json(nullptr);
    t.rows.push_back({n, trace.norm_at(n), nullptr, block});
  }
  if (meta) {
    for (const Block& b : meta->blocks) {
      if (trace.has(b.unit_end)) t.rows.push_back({b.unit_end, trace.norm_at(b.unit_end), "unit", b.k});
      if (trace.has(b.end)) t.rows.push_back({b.end, trace.norm_at(b.end), "end", b.k});
    }
  }
  return t;
}

void export_plot_data(const CesaroTrace& trace, const BlockMeta* meta, const std::filesystem::path& path,
                      Format format) {
  write_file(path, plot_table(trace, meta), format);
}

}  // namespace fne::io
