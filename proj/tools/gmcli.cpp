// Command-line front end: runs the library's computations as reproducible
// jobs, emitting RFC-4180 CSV tables plus a JSON manifest per run.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gm/curvature.hpp"
#include "gm/gabor.hpp"
#include "gm/metrics.hpp"
#include "gm/phase4d.hpp"
#include "gm/weylheisenberg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<fs::path> g_written;  // removed if the job fails

double gm_tol() {
  if (const char* env = std::getenv("GM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
      throw std::invalid_argument("GM_TOL: not a positive number");
    return v;
  }
  return 1e-10;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": expected a number, got '" + s + "'");
  }
}

gm::Grid1D parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3)
    throw std::invalid_argument("grid: expected start:stop:count, got '" +
                                spec + "'");
  const double a = to_double(parts[0], "grid start");
  const double b = to_double(parts[1], "grid stop");
  const int n = int(to_double(parts[2], "grid count"));
  if (n < 2 || !(b > a))
    throw std::invalid_argument("grid: need stop > start and count >= 2");
  return gm::Grid1D::from_range(a, b, n);
}

gm::Vector4 parse_vec4(const std::string& spec, const std::string& what) {
  const auto parts = split(spec, ',');
  if (parts.size() != 4)
    throw std::invalid_argument(what + ": expected four comma-separated values");
  gm::Vector4 v;
  for (int i = 0; i < 4; ++i) v[i] = to_double(parts[i], what);
  return v;
}

struct ProbeSpec {
  std::string kind;  // "shell" or "gauss"
  std::map<std::string, double> kv;
};

ProbeSpec parse_probe_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument(
        "probe: expected shell:rc=,sr=,st= or gauss:s0=,s1=,s2=,s3=");
  ProbeSpec out;
  out.kind = spec.substr(0, colon);
  for (const std::string& item : split(spec.substr(colon + 1), ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("probe: malformed field '" + item + "'");
    out.kv[item.substr(0, eq)] = to_double(item.substr(eq + 1), "probe field");
  }
  const std::vector<std::string> want =
      out.kind == "shell" ? std::vector<std::string>{"rc", "sr", "st"}
      : out.kind == "gauss"
          ? std::vector<std::string>{"s0", "s1", "s2", "s3"}
          : throw std::invalid_argument("probe: unknown kind '" + out.kind +
                                        "'");
  for (const std::string& k : want)
    if (!out.kv.count(k))
      throw std::invalid_argument("probe: missing field '" + k + "'");
  if (out.kv.size() != want.size())
    throw std::invalid_argument("probe: unknown extra field");
  return out;
}

gm::RadialProbability radial_probe(const ProbeSpec& p) {
  if (p.kind == "shell")
    return gm::RadialProbability::gaussian_shell(p.kv.at("rc"), p.kv.at("sr"),
                                                 p.kv.at("st"));
  const double s0 = p.kv.at("s0"), s1 = p.kv.at("s1");
  if (p.kv.at("s2") != s1 || p.kv.at("s3") != s1)
    throw std::invalid_argument(
        "probe: radial profiles need an isotropic gauss probe (s1 = s2 = s3)");
  return gm::RadialProbability::from_density(
      [s0, s1](double t, double r) {
        return std::exp(-t * t / (s0 * s0)) * std::exp(-r * r / (s1 * s1));
      },
      10.0 * s0, 12.0 * s1);
}

gm::Probe4 probe4(const ProbeSpec& p) {
  if (p.kind == "gauss")
    return gm::Probe4::gaussian(gm::Vector4(p.kv.at("s0"), p.kv.at("s1"),
                                            p.kv.at("s2"), p.kv.at("s3")));
  const double rc = p.kv.at("rc"), sr = p.kv.at("sr"), st = p.kv.at("st");
  return gm::Probe4::isotropic(
      [rc, sr, st](double t, double r) {
        return std::exp(-t * t / (2.0 * st * st)) *
               std::exp(-(r - rc) * (r - rc) / (2.0 * sr * sr));
      },
      10.0 * st, rc + 12.0 * sr);
}

std::map<std::string, double> parse_params(
    const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--param: expected key=value, got '" + item +
                                  "'");
    out[item.substr(0, eq)] = to_double(item.substr(eq + 1), "--param value");
  }
  return out;
}

gm::PhaseSpaceFunction parse_symbol(const std::string& name) {
  if (name == "one") return gm::PhaseSpaceFunction::constant(1.0);
  if (name == "b") return gm::PhaseSpaceFunction::time_poly(gm::Poly1::monomial(1));
  if (name == "b2") return gm::PhaseSpaceFunction::time_poly(gm::Poly1::monomial(2));
  if (name == "w") return gm::PhaseSpaceFunction::freq_poly(gm::Poly1::monomial(1));
  if (name == "w2") return gm::PhaseSpaceFunction::freq_poly(gm::Poly1::monomial(2));
  throw std::invalid_argument("--symbol: expected one of one, b, b2, w, w2");
}

// One CSV artifact plus its manifest.
struct Job {
  std::string command;
  json params = json::object();
  json extra = json::object();
  std::string outdir = ".";
  std::string name;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::vector<std::string> outputs;

  fs::path csv_path() const { return fs::path(outdir) / (name + ".csv"); }

  void write_csv(const std::string& header,
                 const std::vector<std::vector<std::string>>& rows) {
    fs::create_directories(outdir);
    const fs::path path = csv_path();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    g_written.push_back(path);
    out << header << "\r\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << "\r\n";
    }
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
    outputs.push_back(path.filename().string());
  }

  void write_manifest() {
    const fs::path path = fs::path(outdir) / (name + ".manifest.json");
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    json m{{"schema", 1},
           {"command", command},
           {"parameters", params},
           {"tolerance", gm_tol()},
           {"version", "0.1.0"},
           {"wall_time_s", wall},
           {"outputs", outputs}};
    for (auto& [k, v] : extra.items()) m[k] = v;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    g_written.push_back(path);
    out << m.dump(2) << "\n";
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
  }
};

// CSV input: header line, then numeric records; returns rows of doubles.
std::vector<std::vector<double>> read_csv(const std::string& path,
                                          size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {  // header
      first = false;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != columns)
      throw std::invalid_argument(path + ": expected " +
                                  std::to_string(columns) + " columns");
    std::vector<double> row;
    for (const std::string& f : fields) row.push_back(to_double(f, path));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(path + ": no data rows");
  return rows;
}

gm::Grid1D grid_from_column(const std::vector<std::vector<double>>& rows,
                            const std::string& what) {
  const int n = int(rows.size());
  if (n < 2) throw std::invalid_argument(what + ": need at least two samples");
  const double a = rows.front()[0], b = rows.back()[0];
  gm::Grid1D g = gm::Grid1D::from_range(a, b, n);
  for (int i = 0; i < n; ++i)
    if (std::abs(rows[size_t(i)][0] - g.point(i)) >
        1e-9 * std::max(1.0, std::abs(g.point(i))))
      throw std::invalid_argument(what + ": sample grid is not uniform");
  return g;
}

gm::SampledFunction load_signal(const std::string& spec,
                                const std::string& tgrid_spec) {
  if (spec.rfind("gauss:", 0) == 0) {
    ProbeSpec p;
    p.kind = "signal";
    const auto eq = spec.find("s=");
    if (eq == std::string::npos)
      throw std::invalid_argument("--signal: expected gauss:s=<width>");
    const double s = to_double(spec.substr(eq + 2), "--signal width");
    if (tgrid_spec.empty())
      throw std::invalid_argument("--signal gauss needs --tgrid");
    return gm::SampledFunction::sample(parse_grid(tgrid_spec), [s](double t) {
      return std::exp(-t * t / (2.0 * s * s));
    });
  }
  const auto rows = read_csv(spec, 3);
  gm::Grid1D g = grid_from_column(rows, spec);
  Eigen::VectorXcd v(g.count);
  for (int i = 0; i < g.count; ++i)
    v[i] = gm::Complex(rows[size_t(i)][1], rows[size_t(i)][2]);
  return gm::SampledFunction(g, std::move(v));
}

gm::MetricField metric_from_flags(const std::string& name,
                                  const std::vector<std::string>& params,
                                  const std::string& sigma,
                                  bool operator_symbol) {
  gm::MetricField m = gm::build_metric(name, parse_params(params));
  if (sigma.empty()) return m;
  return gm::regularize_gaussian(m, parse_vec4(sigma, "--sigma"),
                                 operator_symbol);
}

std::string coordinates_name(gm::MetricField::Coordinates c) {
  switch (c) {
    case gm::MetricField::Coordinates::Cartesian: return "cartesian";
    case gm::MetricField::Coordinates::Cylindrical: return "cylindrical";
    case gm::MetricField::Coordinates::Spherical: return "spherical";
    case gm::MetricField::Coordinates::Accelerated: return "accelerated";
  }
  return "unknown";
}

void add_field_rows(std::vector<std::vector<std::string>>& rows,
                    const gm::Field4& f, const gm::Vector4& base, int axis,
                    const gm::Grid1D& grid) {
  for (int i = 0; i < grid.count; ++i) {
    gm::Vector4 x = base;
    x[axis] = grid.point(i);
    rows.push_back({fmt(grid.point(i)), fmt(f(x))});
  }
}

gm::MultiPoly4 parse_terms(const std::vector<std::string>& terms) {
  if (terms.empty())
    throw std::invalid_argument("--term: at least one c:e0,e1,e2,e3 required");
  gm::MultiPoly4 p;
  for (const std::string& t : terms) {
    const auto colon = t.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--term: expected c:e0,e1,e2,e3, got '" + t +
                                  "'");
    const double c = to_double(t.substr(0, colon), "--term coefficient");
    const auto es = split(t.substr(colon + 1), ',');
    if (es.size() != 4)
      throw std::invalid_argument("--term: expected four exponents");
    std::array<int, 4> e{};
    for (int i = 0; i < 4; ++i) {
      e[size_t(i)] = int(to_double(es[size_t(i)], "--term exponent"));
      if (e[size_t(i)] < 0)
        throw std::invalid_argument("--term: exponents must be >= 0");
    }
    p.add(e, c);
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency quantization and regularized-metric toolkit"};
  app.require_subcommand(1);

  std::string outdir = ".", out;
  app.add_option("--output-dir", outdir, "Directory for output files");
  app.add_option("--out", out, "Output base name (default: subcommand name)");

  // Shared option storage; each leaf registers only what it uses.
  std::string sigma_s = "1.0", tau_s = "1.0", grid_s, bgrid_s, wgrid_s,
              tgrid_s, symbol_s, signal_s, coeffs_s, probe_s, name_s, at_s,
              sigma4_s;
  std::vector<std::string> params_s, terms_s;
  double b_v = 0.0, w_v = 0.0, theta_v = 1.0, radius_v = -1.0, m_v = 1.0,
         rmin_v = 0.01, rmax_v = 100.0, kappa_v = 1.0, step_v = -1.0;
  int N_v = 64, n_v = 200, axis_v = 1;
  bool opsym_v = false;

  CLI::App* gabor = app.add_subcommand("gabor", "1-D Gabor layer");
  gabor->require_subcommand(1);
  CLI::App* g_tr = gabor->add_subcommand("transform", "Gabor coefficients of a signal");
  g_tr->add_option("--sigma", sigma_s, "Gaussian probe width");
  g_tr->add_option("--signal", signal_s, "CSV path (t,re,im) or gauss:s=<width>")->required();
  g_tr->add_option("--tgrid", tgrid_s, "Time grid for built-in signals");
  g_tr->add_option("--bgrid", bgrid_s, "Time-shift grid start:stop:count")->required();
  g_tr->add_option("--wgrid", wgrid_s, "Frequency grid start:stop:count")->required();
  CLI::App* g_re = gabor->add_subcommand("reconstruct", "Resynthesize from coefficients");
  g_re->add_option("--sigma", sigma_s, "Gaussian probe width");
  g_re->add_option("--coeffs", coeffs_s, "CSV path (b,w,re,im)")->required();
  g_re->add_option("--bgrid", bgrid_s, "Time-shift grid")->required();
  g_re->add_option("--wgrid", wgrid_s, "Frequency grid")->required();
  g_re->add_option("--tgrid", tgrid_s, "Output time grid")->required();
  CLI::App* g_qu = gabor->add_subcommand("quantize", "Operator of a phase-space symbol");
  g_qu->add_option("--symbol", symbol_s, "one, b, b2, w, w2")->required();
  g_qu->add_option("--sigma", sigma_s, "Gaussian probe width");
  g_qu->add_option("--grid", grid_s, "Evaluation grid")->required();
  CLI::App* g_po = gabor->add_subcommand("portrait", "Semi-classical portrait of a symbol");
  g_po->add_option("--symbol", symbol_s, "one, b, b2, w, w2")->required();
  g_po->add_option("--sigma", sigma_s, "Gaussian probe width");
  g_po->add_option("--grid", grid_s, "Evaluation grid")->required();

  CLI::App* wh = app.add_subcommand("wh", "Weyl-Heisenberg layer");
  wh->require_subcommand(1);
  CLI::App* w_di = wh->add_subcommand("displacement", "Displacement matrix on the Fock basis");
  w_di->add_option("--b", b_v, "Time shift");
  w_di->add_option("--w", w_v, "Frequency shift");
  w_di->add_option("-N,--dim", N_v, "Truncation dimension");
  CLI::App* w_wi = wh->add_subcommand("wigner", "Wigner function of the Gaussian probe");
  w_wi->add_option("--sigma", sigma_s, "Gaussian probe width");
  w_wi->add_option("--bgrid", bgrid_s, "Time grid")->required();
  w_wi->add_option("--wgrid", wgrid_s, "Frequency grid")->required();
  CLI::App* w_q0 = wh->add_subcommand("q0", "Base operator of a Gaussian filter");
  w_q0->add_option("--sigma", sigma_s, "Filter time width");
  w_q0->add_option("--tau", tau_s, "Filter frequency width");
  w_q0->add_option("-N,--dim", N_v, "Truncation dimension");
  w_q0->add_option("--radius", radius_v, "Phase-plane integration radius");
  CLI::App* w_bo = wh->add_subcommand("boltzmann", "Thermal diagonal state");
  w_bo->add_option("--theta", theta_v, "Temperature parameter")->required();
  w_bo->add_option("-N,--dim", N_v, "Truncation dimension");

  CLI::App* field = app.add_subcommand("field", "4-D polynomial fields");
  field->require_subcommand(1);
  for (const char* sub : {"quantize", "portrait"}) {
    CLI::App* f = field->add_subcommand(sub, sub[0] == 'q'
                                                 ? "Multiplier symbol of the quantized field"
                                                 : "Probe-smoothed portrait of the field");
    f->add_option("--term", terms_s, "Monomial c:e0,e1,e2,e3 (repeatable)")->required();
    f->add_option("--probe", probe_s, "gauss:s0=,s1=,s2=,s3= or shell:rc=,sr=,st=")->required();
    f->add_option("--axis", axis_v, "Coordinate slot to sweep (0-3)");
    f->add_option("--grid", grid_s, "Sweep grid")->required();
    f->add_option("--at", at_s, "Base point t,x1,x2,x3");
  }

  CLI::App* metric = app.add_subcommand("metric", "Metric catalog and profiles");
  metric->require_subcommand(1);
  CLI::App* m_bu = metric->add_subcommand("build", "Evaluate a catalog metric");
  m_bu->add_option("--name", name_s, "Catalog name")->required();
  m_bu->add_option("--param", params_s, "key=value (repeatable)");
  m_bu->add_option("--at", at_s, "Coordinate tuple")->required();
  CLI::App* m_re = metric->add_subcommand("regularize", "Probe-regularized metric components");
  m_re->add_option("--name", name_s, "Catalog name")->required();
  m_re->add_option("--param", params_s, "key=value (repeatable)");
  m_re->add_option("--sigma", sigma4_s, "Probe widths s0,s1,s2,s3")->required();
  m_re->add_flag("--operator-symbol", opsym_v, "Multiplier symbol instead of portrait");
  m_re->add_option("--axis", axis_v, "Coordinate slot to sweep (0-3)");
  m_re->add_option("--grid", grid_s, "Sweep grid")->required();
  m_re->add_option("--at", at_s, "Base point");
  CLI::App* m_sc = metric->add_subcommand("schwarzschild-scan", "Regularized U, V, L profiles");
  m_sc->add_option("--m", m_v, "Mass parameter");
  m_sc->add_option("--probe", probe_s, "shell:rc=,sr=,st= or gauss:s0=,s1=,s2=,s3=")->required();
  m_sc->add_option("--rmin", rmin_v, "Smallest radius");
  m_sc->add_option("--rmax", rmax_v, "Largest radius");
  m_sc->add_option("-n,--count", n_v, "Number of radii");
  CLI::App* m_sr = metric->add_subcommand("shifted-radius", "Root of the regularized U in (0, 2m)");
  m_sr->add_option("--m", m_v, "Mass parameter");
  m_sr->add_option("--probe", probe_s, "shell:rc=,sr=,st= or gauss:s0=,s1=,s2=,s3=")->required();

  CLI::App* curv = app.add_subcommand("curvature", "Curvature and stress-energy");
  curv->require_subcommand(1);
  CLI::App* c_at = curv->add_subcommand("at", "Full curvature report at a point");
  c_at->add_option("--name", name_s, "Catalog name")->required();
  c_at->add_option("--param", params_s, "key=value (repeatable)");
  c_at->add_option("--sigma", sigma4_s, "Regularize with probe widths s0,s1,s2,s3");
  c_at->add_option("--at", at_s, "Coordinate tuple")->required();
  c_at->add_option("--kappa", kappa_v, "Coupling in T = G / kappa");
  c_at->add_option("--step", step_v, "Finite-difference base step");
  CLI::App* c_sc = curv->add_subcommand("scan", "Stress-energy diagonal along an axis");
  c_sc->add_option("--name", name_s, "Catalog name")->required();
  c_sc->add_option("--param", params_s, "key=value (repeatable)");
  c_sc->add_option("--sigma", sigma4_s, "Regularize with probe widths s0,s1,s2,s3");
  c_sc->add_option("--axis", axis_v, "Coordinate slot to sweep (0-3)");
  c_sc->add_option("--grid", grid_s, "Sweep grid")->required();
  c_sc->add_option("--at", at_s, "Base point");
  c_sc->add_option("--kappa", kappa_v, "Coupling in T = G / kappa");

  for (CLI::App* g : app.get_subcommands({})) {
    g->fallthrough();
    for (CLI::App* s : g->get_subcommands({})) s->fallthrough();
  }

  try {
    app.parse(argc, argv);

    Job job;
    job.outdir = outdir;
    json& P = job.params;
    std::vector<std::vector<std::string>> rows;
    std::string header;

    auto leaf = [&](CLI::App* group) { return group->get_subcommands().at(0); };
    CLI::App* group = app.get_subcommands().at(0);
    CLI::App* sub = leaf(group);
    job.command = group->get_name() + " " + sub->get_name();
    job.name = out.empty() ? group->get_name() + "-" + sub->get_name() : out;

    if (sub == g_tr || sub == g_re) {
      const gm::Probe psi = gm::Probe::gaussian(to_double(sigma_s, "--sigma"));
      const gm::Grid1D bg = parse_grid(bgrid_s), wg = parse_grid(wgrid_s);
      P = {{"sigma", sigma_s}, {"bgrid", bgrid_s}, {"wgrid", wgrid_s}};
      if (sub == g_tr) {
        P["signal"] = signal_s;
        if (!tgrid_s.empty()) P["tgrid"] = tgrid_s;
        const gm::SampledFunction s = load_signal(signal_s, tgrid_s);
        const gm::GaborCoefficients c = gm::gabor_transform(s, psi, bg, wg);
        header = "b,w,re,im";
        for (int i = 0; i < bg.count; ++i)
          for (int j = 0; j < wg.count; ++j)
            rows.push_back({fmt(bg.point(i)), fmt(wg.point(j)),
                            fmt(c.S(i, j).real()), fmt(c.S(i, j).imag())});
        job.extra["plancherel_ratio"] = c.plancherel_ratio;
        job.extra["coarse_grid_warning"] = c.coarse_grid_warning;
      } else {
        P["coeffs"] = coeffs_s;
        P["tgrid"] = tgrid_s;
        const auto data = read_csv(coeffs_s, 4);
        if (int(data.size()) != bg.count * wg.count)
          throw std::invalid_argument("--coeffs: row count != bgrid x wgrid");
        Eigen::MatrixXcd S(bg.count, wg.count);
        for (int i = 0; i < bg.count; ++i)
          for (int j = 0; j < wg.count; ++j) {
            const auto& r = data[size_t(i * wg.count + j)];
            S(i, j) = gm::Complex(r[2], r[3]);
          }
        const gm::Grid1D tg = parse_grid(tgrid_s);
        const gm::SampledFunction s = gm::gabor_reconstruct(S, psi, bg, wg, tg);
        header = "t,re,im";
        for (int i = 0; i < tg.count; ++i)
          rows.push_back({fmt(tg.point(i)), fmt(s.values[i].real()),
                          fmt(s.values[i].imag())});
      }
    } else if (sub == g_qu || sub == g_po) {
      const gm::Probe psi = gm::Probe::gaussian(to_double(sigma_s, "--sigma"));
      const gm::PhaseSpaceFunction f = parse_symbol(symbol_s);
      const gm::Grid1D grid = parse_grid(grid_s);
      P = {{"symbol", symbol_s}, {"sigma", sigma_s}, {"grid", grid_s}};
      const bool freq = symbol_s == "w" || symbol_s == "w2";
      if (sub == g_po) {
        header = std::string(freq ? "w" : "b") + ",check";
        for (int i = 0; i < grid.count; ++i) {
          const double x = grid.point(i);
          const gm::PhaseSpacePoint p{freq ? 0.0 : x, freq ? x : 0.0};
          rows.push_back({fmt(x), fmt(gm::portrait(f, psi, p).real())});
        }
      } else {
        const gm::OperatorKernel k = gm::quantize(f, psi);
        if (k.kind == gm::OperatorKernel::Kind::Multiplier) {
          job.extra["kernel_kind"] = "multiplier";
          header = "t,re,im";
          for (int i = 0; i < grid.count; ++i) {
            const gm::Complex v = k.multiplier(grid.point(i));
            rows.push_back({fmt(grid.point(i)), fmt(v.real()), fmt(v.imag())});
          }
        } else if (k.kind == gm::OperatorKernel::Kind::Convolver) {
          job.extra["kernel_kind"] = "convolver";
          header = "w,re,im";
          for (int i = 0; i < grid.count; ++i) {
            const gm::Complex v = k.spectral(grid.point(i));
            rows.push_back({fmt(grid.point(i)), fmt(v.real()), fmt(v.imag())});
          }
        } else {
          job.extra["kernel_kind"] = "dense";
          header = "i,j,re,im";
          for (int i = 0; i < k.grid.count; ++i)
            for (int j = 0; j < k.grid.count; ++j)
              rows.push_back({std::to_string(i), std::to_string(j),
                              fmt(k.matrix(i, j).real()),
                              fmt(k.matrix(i, j).imag())});
        }
      }
    } else if (sub == w_di) {
      P = {{"b", b_v}, {"w", w_v}, {"N", N_v}};
      const Eigen::MatrixXcd D =
          gm::displacement_matrix(b_v, w_v, gm::FockTruncation(N_v));
      header = "m,n,re,im";
      for (int m = 0; m < N_v; ++m)
        for (int n = 0; n < N_v; ++n)
          rows.push_back({std::to_string(m), std::to_string(n),
                          fmt(D(m, n).real()), fmt(D(m, n).imag())});
    } else if (sub == w_wi) {
      const gm::Probe psi = gm::Probe::gaussian(to_double(sigma_s, "--sigma"));
      const gm::Grid1D bg = parse_grid(bgrid_s), wg = parse_grid(wgrid_s);
      P = {{"sigma", sigma_s}, {"bgrid", bgrid_s}, {"wgrid", wgrid_s}};
      header = "b,w,value";
      for (int i = 0; i < bg.count; ++i)
        for (int j = 0; j < wg.count; ++j)
          rows.push_back(
              {fmt(bg.point(i)), fmt(wg.point(j)),
               fmt(gm::wigner_of_probe(psi, {bg.point(i), wg.point(j)}))});
    } else if (sub == w_q0) {
      const double sigma = to_double(sigma_s, "--sigma");
      const double tau = to_double(tau_s, "--tau");
      P = {{"sigma", sigma_s}, {"tau", tau_s}, {"N", N_v}, {"radius", radius_v}};
      const gm::Q0Result q = gm::q0_from_apodization(
          gm::Apodization::gaussian(sigma, tau), gm::FockTruncation(N_v),
          radius_v);
      header = "m,n,re,im";
      for (int m = 0; m < N_v; ++m)
        for (int n = 0; n < N_v; ++n)
          rows.push_back({std::to_string(m), std::to_string(n),
                          fmt(q.matrix(m, n).real()), fmt(q.matrix(m, n).imag())});
      job.extra["trace"] = q.trace;
      job.extra["min_eigenvalue"] = q.min_eigenvalue;
      job.extra["positive"] = q.positive;
      job.extra["hermiticity_defect"] = q.hermiticity_defect;
    } else if (sub == w_bo) {
      P = {{"theta", theta_v}, {"N", N_v}};
      const gm::DensityOperator rho =
          gm::boltzmann_planck(theta_v, gm::FockTruncation(N_v));
      header = "n,p";
      for (int n = 0; n < N_v; ++n)
        rows.push_back({std::to_string(n), fmt(rho.matrix(n, n).real())});
      job.extra["truncation_warning"] = rho.truncation_warning;
    } else if (group == field) {
      const gm::Field4 u = gm::Field4::polynomial(parse_terms(terms_s));
      const gm::Probe4 psi = probe4(parse_probe_spec(probe_s));
      const gm::Vector4 base =
          at_s.empty() ? gm::Vector4::Zero().eval() : parse_vec4(at_s, "--at");
      const gm::Grid1D grid = parse_grid(grid_s);
      if (axis_v < 0 || axis_v > 3)
        throw std::invalid_argument("--axis: expected 0..3");
      P = {{"term", terms_s}, {"probe", probe_s}, {"axis", axis_v},
           {"grid", grid_s}, {"at", at_s}};
      const gm::Field4 result = sub->get_name() == "quantize"
                                    ? gm::quantize_field(u, psi)
                                    : gm::portrait_field(u, psi);
      header = "x,value";
      add_field_rows(rows, result, base, axis_v, grid);
    } else if (sub == m_bu) {
      const gm::MetricField m = gm::build_metric(name_s, parse_params(params_s));
      const gm::Vector4 x = parse_vec4(at_s, "--at");
      P = {{"name", name_s}, {"param", params_s}, {"at", at_s}};
      header = "mu,value";
      for (int mu = 0; mu < 4; ++mu)
        rows.push_back({std::to_string(mu), fmt(m(mu, x))});
      job.extra["coordinates"] = coordinates_name(m.coordinates);
    } else if (sub == m_re) {
      const gm::MetricField m =
          metric_from_flags(name_s, params_s, sigma4_s, opsym_v);
      const gm::Vector4 base =
          at_s.empty() ? gm::Vector4::Zero().eval() : parse_vec4(at_s, "--at");
      const gm::Grid1D grid = parse_grid(grid_s);
      if (axis_v < 0 || axis_v > 3)
        throw std::invalid_argument("--axis: expected 0..3");
      P = {{"name", name_s}, {"param", params_s}, {"sigma", sigma4_s},
           {"operator_symbol", opsym_v}, {"axis", axis_v}, {"grid", grid_s},
           {"at", at_s}};
      header = "x,g00,g11,g22,g33";
      for (int i = 0; i < grid.count; ++i) {
        gm::Vector4 x = base;
        x[axis_v] = grid.point(i);
        rows.push_back({fmt(grid.point(i)), fmt(m(0, x)), fmt(m(1, x)),
                        fmt(m(2, x)), fmt(m(3, x))});
      }
      job.extra["coordinates"] = coordinates_name(m.coordinates);
    } else if (sub == m_sc || sub == m_sr) {
      const gm::RadialProbability p = radial_probe(parse_probe_spec(probe_s));
      const gm::SchwarzschildProfiles prof = gm::schwarzschild_profiles(p, m_v);
      if (sub == m_sc) {
        if (!(rmin_v > 0.0) || !(rmax_v > rmin_v) || n_v < 2)
          throw std::invalid_argument(
              "schwarzschild-scan: need 0 < rmin < rmax and count >= 2");
        P = {{"m", m_v}, {"probe", probe_s}, {"rmin", rmin_v},
             {"rmax", rmax_v}, {"n", n_v}};
        const double norm =
            p.expect([](double) { return 1.0; }, {}, gm_tol());
        const gm::Grid1D rg = gm::Grid1D::from_range(rmin_v, rmax_v, n_v);
        header = "r,U,V,L,probe_norm";
        for (int i = 0; i < rg.count; ++i) {
          const double r = rg.point(i);
          rows.push_back({fmt(r), fmt(prof.U(r)), fmt(prof.V(r)),
                          fmt(prof.L(r)), fmt(norm)});
        }
        job.extra["probe_norm"] = norm;
      } else {
        P = {{"m", m_v}, {"probe", probe_s}};
        const std::optional<double> root = gm::shifted_radius(prof);
        header = "found,root,residual";
        if (root)
          rows.push_back({"1", fmt(*root), fmt(prof.U(*root))});
        else
          rows.push_back({"0", "", ""});
      }
    } else if (sub == c_at) {
      const gm::MetricField m =
          metric_from_flags(name_s, params_s, sigma4_s, false);
      const gm::Vector4 x = parse_vec4(at_s, "--at");
      P = {{"name", name_s}, {"param", params_s}, {"sigma", sigma4_s},
           {"at", at_s}, {"kappa", kappa_v}, {"step", step_v}};
      const gm::CurvatureReport rep = gm::curvature_at(m, x, kappa_v, step_v);
      header = "quantity,mu,nu,value";
      auto tensor = [&](const char* q, const Eigen::Matrix4d& t) {
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu)
            rows.push_back({q, std::to_string(mu), std::to_string(nu),
                            fmt(t(mu, nu))});
      };
      tensor("ricci", rep.ricci);
      tensor("einstein", rep.einstein);
      tensor("stress_energy", rep.stress_energy);
      rows.push_back({"scalar", "0", "0", fmt(rep.scalar)});
      job.extra["step"] = rep.step;
      job.extra["derivative_error"] = rep.derivative_error;
    } else if (sub == c_sc) {
      const gm::MetricField m =
          metric_from_flags(name_s, params_s, sigma4_s, false);
      const gm::Vector4 base =
          at_s.empty() ? gm::Vector4::Zero().eval() : parse_vec4(at_s, "--at");
      const gm::Grid1D grid = parse_grid(grid_s);
      if (axis_v < 0 || axis_v > 3)
        throw std::invalid_argument("--axis: expected 0..3");
      P = {{"name", name_s}, {"param", params_s}, {"sigma", sigma4_s},
           {"axis", axis_v}, {"grid", grid_s}, {"at", at_s},
           {"kappa", kappa_v}};
      std::vector<gm::Vector4> pts;
      for (int i = 0; i < grid.count; ++i) {
        gm::Vector4 x = base;
        x[axis_v] = grid.point(i);
        pts.push_back(x);
      }
      const gm::StressEnergyScan scan = gm::stress_energy_scan(m, pts, kappa_v);
      header = "x,T00,T11,T22,T33,max_offdiag";
      for (const gm::CurvatureReport& rep : scan.reports) {
        double off = 0.0;
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu)
            if (mu != nu)
              off = std::max(off, std::abs(rep.stress_energy(mu, nu)));
        rows.push_back({fmt(rep.point[axis_v]), fmt(rep.stress_energy(0, 0)),
                        fmt(rep.stress_energy(1, 1)),
                        fmt(rep.stress_energy(2, 2)),
                        fmt(rep.stress_energy(3, 3)), fmt(off)});
      }
      json failures = json::array();
      for (const auto& [idx, msg] : scan.failures)
        failures.push_back({{"index", idx}, {"message", msg}});
      job.extra["failures"] = failures;
    }

    job.write_csv(header, rows);
    job.write_manifest();
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    for (const fs::path& p : g_written) fs::remove(p);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    for (const fs::path& p : g_written) fs::remove(p);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
