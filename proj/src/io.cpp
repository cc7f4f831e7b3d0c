#include "chtx/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chtx {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

}  // namespace

std::string local_lp_column(double p) { return "local_lp_p" + fmt17(p); }

void write_trace(const DiagnosticsTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out << "t,sup_u,sup_v,sup_grad_v";
  for (double p : trace.p_list) out << "," << local_lp_column(p);
  out << ",weighted_energy,lyapunov\n";
  for (std::size_t i = 0; i < trace.records(); ++i) {
    out << fmt17(trace.times[i]) << "," << fmt17(trace.sup_u[i]) << ","
        << fmt17(trace.sup_v[i]) << "," << fmt17(trace.sup_grad_v[i]);
    for (const auto& series : trace.local_lp) out << "," << fmt17(series[i]);
    out << "," << fmt17(trace.weighted_energy[i]) << ","
        << fmt17(trace.lyapunov[i]) << "\n";
  }
  if (!out) io_fail(path, "write failed");
}

DiagnosticsTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) io_fail(path, "missing header");

  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 7) io_fail(path, "expected at least 7 columns");

  DiagnosticsTrace t;
  const std::string prefix = "local_lp_p";
  for (const auto& c : cols)
    if (c.rfind(prefix, 0) == 0) {
      t.p_list.push_back(std::stod(c.substr(prefix.size())));
      t.local_lp.emplace_back();
    }

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != cols.size()) io_fail(path, "ragged CSV row");
    std::size_t k = 0;
    t.times.push_back(row[k++]);
    t.sup_u.push_back(row[k++]);
    t.sup_v.push_back(row[k++]);
    t.sup_grad_v.push_back(row[k++]);
    for (auto& series : t.local_lp) series.push_back(row[k++]);
    t.weighted_energy.push_back(row[k++]);
    t.lyapunov.push_back(row[k++]);
  }
  return t;
}

void write_snapshot(const Field& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out.write("CHTX1", 5);
  const std::uint8_t dim = static_cast<std::uint8_t>(field.grid.dim);
  const std::uint64_t n = static_cast<std::uint64_t>(field.grid.points_per_dim);
  const double half_width = field.grid.half_width;
  out.write(reinterpret_cast<const char*>(&dim), 1);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&half_width), 8);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!out) io_fail(path, "write failed");
}

Field read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, "CHTX1", 5) != 0) io_fail(path, "bad magic");
  std::uint8_t dim = 0;
  std::uint64_t n = 0;
  double half_width = 0.0;
  in.read(reinterpret_cast<char*>(&dim), 1);
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&half_width), 8);
  if (!in) io_fail(path, "truncated header");
  const Grid g = Grid::make(dim, half_width, static_cast<int>(n));
  Field f(g);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in) io_fail(path, "truncated payload");
  return f;
}

void write_plot_script(const std::filesystem::path& path,
                       const std::vector<std::string>& csv_names) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out << "#!/usr/bin/env python3\n"
         "import csv, sys\n"
         "import matplotlib\n"
         "matplotlib.use('Agg')\n"
         "import matplotlib.pyplot as plt\n\n"
         "files = " ;
  out << "[";
  for (std::size_t i = 0; i < csv_names.size(); ++i)
    out << (i ? ", " : "") << "'" << csv_names[i] << "'";
  out << "]\n";
  out << "for name in files:\n"
         "    with open(name) as fh:\n"
         "        rows = list(csv.DictReader(fh))\n"
         "    if not rows:\n"
         "        continue\n"
         "    t = [float(r['t']) for r in rows]\n"
         "    fig, ax = plt.subplots()\n"
         "    for col in rows[0]:\n"
         "        if col == 't':\n"
         "            continue\n"
         "        ax.plot(t, [float(r[col]) for r in rows], label=col)\n"
         "    ax.set_xlabel('t')\n"
         "    ax.set_yscale('log')\n"
         "    ax.legend(fontsize=7)\n"
         "    fig.savefig(name + '.png', dpi=120)\n"
         "    print('wrote', name + '.png')\n";
}

}  // namespace chtx
