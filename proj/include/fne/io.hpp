#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fne/mesh.hpp"
#include "fne/orbit.hpp"

namespace fne::io {

enum class Format { csv, json };

// A rectangular table whose cells are numbers, strings or null (an empty
// CSV field). Integers stay integers; doubles are written in shortest
// round-trip form.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<nlohmann::json>> rows;

  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& os, const Table& table);
// Array of objects keyed by the header, in header order.
void write_json(std::ostream& os, const Table& table);
void write(std::ostream& os, const Table& table, Format format);
// Throws std::runtime_error when the file cannot be opened or written.
void write_file(const std::filesystem::path& path, const Table& table, Format format);

// Parses what write_csv produces. Fields that parse fully as an integer or
// a double become numbers, empty fields become null, anything else stays a
// string. Throws std::runtime_error on ragged rows.
Table read_csv(std::istream& is);
Table read_csv_file(const std::filesystem::path& path);

// n,d,t,block (block empty outside block meshes)
Table mesh_table(const Mesh& mesh);
// k,w,i,Q,block_end,j_unit
Table block_meta_table(const BlockMeta& meta);
// n,t,rho,rho_recursive for every orbit point
Table orbit_table(const Orbit& orbit);
// n,t,rho,y_norm for n = 1..trace.upto()
Table trace_table(const Orbit& orbit, const CesaroTrace& trace);
// k,i,j_unit,j_end,Q,w,z_norm,y_at_j_unit,y_at_j_end for blocks the trace covers
Table block_summary_table(const BlockMeta& meta, const CesaroTrace& trace);
// t,k,u_k
Table coord_samples_table(std::span<const double> ts, std::size_t max_k);
// t,r,value
Table l2_samples_table(std::span<const double> ts, std::span<const double> rs);

// n,y_norm,tag,block. One untagged row per streamed n, then for each block
// covered by the trace a `unit` row at j_unit(k) and an `end` row at
// j_end(k). Throws std::invalid_argument on an empty trace.
Table plot_table(const CesaroTrace& trace, const BlockMeta* meta);
void export_plot_data(const CesaroTrace& trace, const BlockMeta* meta, const std::filesystem::path& path,
                      Format format = Format::csv);

}  // namespace fne::io
