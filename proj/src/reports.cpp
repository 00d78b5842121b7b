#include "dabench/reports.hpp"

#include "dabench/dataset.hpp"
#include "dabench/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace dabench::cli {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out)
    throw Error("io-failure", "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("io-failure", "write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_percent_2dp(double v) {
  const long long cents = std::llround(std::abs(v) * 100.0);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", v < 0 ? "-" : "",
                cents / 100, cents % 100);
  return buf;
}

void write_results_csv(const protocol::ResultTable& table,
                       const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "method,layer,mean,stderr,n_splits\n";
  for (const auto& row : table.rows)
    out << row.method << ',' << row.layer << ','
        << data::format_double(row.mean) << ','
        << data::format_double(row.standard_error) << ',' << row.per_split.size()
        << '\n';
  finish(out, path);
}

void write_per_split_csv(const protocol::ResultTable& table,
                         const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "method,layer,split_id,accuracy\n";
  for (const auto& row : table.rows)
    for (std::size_t s = 0; s < row.per_split.size(); ++s)
      out << row.method << ',' << row.layer << ',' << s << ','
          << data::format_double(row.per_split[s]) << '\n';
  finish(out, path);
}

void write_results_markdown(const protocol::ResultTable& table,
                            const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "# " << table.source_domain << " to " << table.target_domain
      << " (" << table.layer << ")\n\n";
  out << "Accuracy (%) over " << table.splits.n_splits << " random splits, "
      << table.splits.train_per_class << " train / "
      << table.splits.test_per_class << " test per class.\n\n";
  out << "| method | " << table.layer << " |\n";
  out << "| --- | --- |\n";
  for (const auto& row : table.rows)
    out << "| " << row.method << " | " << format_percent_2dp(row.mean)
        << " \xc2\xb1 " << format_percent_2dp(row.standard_error) << " |\n";
  finish(out, path);
}

void write_sweep_csv(const std::vector<protocol::SweepPoint>& points,
                     const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "method,x,mean,stderr,status\n";
  for (const auto& p : points) {
    out << p.method << ',' << data::format_double(p.x) << ',';
    if (p.status == "ok")
      out << data::format_double(p.mean) << ','
          << data::format_double(p.standard_error);
    else
      out << ',';
    out << ',' << p.status << '\n';
  }
  finish(out, path);
}

}  // namespace dabench::cli
