#include "rps/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "rps/error.hpp"

namespace rps {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

void write_header(std::ostream& out, const ConfigEntries& header) {
  for (const auto& [k, v] : header) out << "# " << k << " = " << v << '\n';
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

std::string num(double v) { return format_number(v); }

struct CsvTable {
  std::map<std::string, std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) t.header[strip(line.substr(1, eq - 1))] = strip(line.substr(eq + 1));
      continue;
    }
    auto cells = split(line);
    for (auto& c : cells) c = strip(c);
    if (t.columns.empty()) {
      t.columns = std::move(cells);
    } else {
      if (cells.size() != t.columns.size()) throw ConfigError("'" + path + "': ragged row '" + line + "'");
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

double parse_real(const std::string& s, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + path + "': bad number '" + s + "'");
  }
}

GridMeasure measure_from_table(const CsvTable& t, const std::string& path) {
  for (const char* key : {"grid.h", "grid.m", "grid.K"}) {
    if (!t.header.count(key)) throw ConfigError("'" + path + "' lacks the '# " + std::string(key) + " = ...' header");
  }
  GridSpec g;
  g.h = parse_real(t.header.at("grid.h"), path);
  g.m = static_cast<int>(parse_real(t.header.at("grid.m"), path));
  g.K = static_cast<int>(parse_real(t.header.at("grid.K"), path));
  GridMeasure mu(g);
  for (const auto& row : t.rows) {
    const int j = static_cast<int>(parse_real(row[0], path));
    const int k = static_cast<int>(parse_real(row[1], path));
    if (j < 0 || j >= g.m || k < 0 || k > g.K) throw ConfigError("'" + path + "': cell index out of range");
    mu(j, k) = parse_real(row[3], path);
  }
  return mu;
}

}  // namespace

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir + "'");
}

void write_measure_csv(const std::string& path, const GridMeasure& mu, const ConfigEntries& header) {
  const GridSpec& g = mu.spec();
  auto out = open_out(path);
  write_header(out, header);
  out << "# grid.h = " << num(g.h) << "\n# grid.m = " << g.m << "\n# grid.K = " << g.K << '\n';
  out << "j,k,y_mid,mass\n";
  for (int j = 0; j < g.m; ++j) {
    for (int k = 0; k <= g.K; ++k) out << j << ',' << k << ',' << num(g.midpoint(j, k)) << ',' << num(mu(j, k)) << '\n';
  }
  finish(out, path);
}

GridMeasure read_measure_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.columns != std::vector<std::string>{"j", "k", "y_mid", "mass"}) {
    throw ConfigError("'" + path + "' is not a measure CSV (expected j,k,y_mid,mass)");
  }
  return measure_from_table(t, path);
}

InitFile read_init_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  InitFile f;
  if (t.columns == std::vector<std::string>{"j", "k", "y_mid", "mass"}) {
    f.measure = measure_from_table(t, path);
  } else if (t.columns == std::vector<std::string>{"y", "f"}) {
    SampledDensity d;
    for (const auto& row : t.rows) {
      d.y.push_back(parse_real(row[0], path));
      d.f.push_back(parse_real(row[1], path));
    }
    if (d.y.size() < 2 || !std::is_sorted(d.y.begin(), d.y.end())) {
      throw ConfigError("'" + path + "': density samples need >= 2 ascending y values");
    }
    f.density = std::move(d);
  } else {
    throw ConfigError("'" + path + "': expected columns j,k,y_mid,mass or y,f");
  }
  return f;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, const HarrisEnvelope& env,
                          const ConfigEntries& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "# envelope.C = " << num(env.C) << "\n# envelope.lambda = " << num(env.lambda)
      << "\n# envelope.B0 = " << num(env.B0) << "\n# envelope.d0 = " << num(env.d0) << '\n';
  out << "t,B,theta,tv_dist,v_dist,envelope\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& d = traj.diagnostics[i];
    out << num(traj.times[i]) << ',' << num(traj.B[i]) << ',' << num(traj.theta[i]) << ',' << num(d.tv_dist) << ','
        << num(d.v_dist) << ',' << num(decay_envelope(traj.times[i], env)) << '\n';
  }
  finish(out, path);
}

void write_dual_csv(const std::string& path, const ClassFunction& f, const ConfigEntries& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "# offset = " << num(f.offset) << "\nk,f_k\n";
  for (std::size_t k = 0; k < f.values.size(); ++k) out << k << ',' << num(f.values[k]) << '\n';
  finish(out, path);
}

void write_rate_csv(const std::string& path, const Trajectory& traj, const ConfigEntries& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "t,B\n";
  for (std::size_t i = 0; i < traj.rate_times.size(); ++i) {
    out << num(traj.rate_times[i]) << ',' << num(traj.rate_values[i]) << '\n';
  }
  finish(out, path);
}

void write_harris_csv(const std::string& path, const std::vector<HarrisRow>& rows, const ConfigEntries& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "T,gamma_L,K,gamma_H,beta,gamma,C,lambda\n";
  for (const HarrisRow& r : rows) {
    out << num(r.T) << ',' << num(r.gamma_L) << ',' << num(r.K_lyap) << ',' << num(r.gamma_H) << ',' << num(r.beta)
        << ',' << num(r.gamma) << ',' << (r.C ? num(*r.C) : "") << ',' << (r.lambda ? num(*r.lambda) : "") << '\n';
  }
  finish(out, path);
}

void write_mc_csv(const std::string& path, const McReport& report, double t_end, const ConfigEntries& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "# tv_of_mean = " << num(report.tv_of_mean) << "\n# clamped_agents = " << report.clamped << '\n';
  out << "replicate,t_end,tv_distance\n";
  for (std::size_t r = 0; r < report.tv.size(); ++r) out << r << ',' << num(t_end) << ',' << num(report.tv[r]) << '\n';
  out << "mean," << num(t_end) << ',' << num(report.mean_tv) << '\n';
  out << "stderr," << num(t_end) << ',' << num(report.stderr_tv) << '\n';
  finish(out, path);
}

void write_loglog_svg(const std::string& path, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<PlotSeries>& series) {
  constexpr double W = 800, H = 600, L = 90, R = 30, T = 50, B = 70;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);
  auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  out << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" stroke-width=\"1\">\n";
  for (double e = xmin; e <= xmax + 1e-9; e += 1.0) {
    out << "<line x1=\"" << px(e) << "\" y1=\"" << T << "\" x2=\"" << px(e) << "\" y2=\"" << H - B
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << px(e) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
    out << "<line x1=\"" << L << "\" y1=\"" << py(e) << "\" x2=\"" << W - R << "\" y2=\"" << py(e)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 25 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"20\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
  out << "</g>\n";

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& S = series[s];
    const char* col = colors[s % 6];
    std::ostringstream pts;
    for (std::size_t i = 0; i < S.x.size() && i < S.y.size(); ++i) {
      if (!(S.x[i] > 0.0) || !(S.y[i] > 0.0)) continue;
      const double X = px(std::log10(S.x[i])), Y = py(std::log10(S.y[i]));
      if (S.markers) {
        out << "<circle cx=\"" << X << "\" cy=\"" << Y << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
      } else {
        pts << X << ',' << Y << ' ';
      }
    }
    if (!S.markers) {
      out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts.str()
          << "\"/>\n";
    }
    out << "<text x=\"" << W - R - 10 << "\" y=\"" << T + 18 + 16 * s << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"12\" fill=\"" << col << "\">" << S.label << "</text>\n";
  }
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace rps
