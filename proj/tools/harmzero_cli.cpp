// Command-line front end for the harmzero library.
//
// Exit codes: 0 success, 1 invalid input, 2 singular or degenerate target
// (target on a caustic, cusp on the trace path, degenerate mapping),
// 3 solver gave up (restart cap or curve tracing failure).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "harmzero/io.hpp"
#include "harmzero/transport.hpp"

using namespace harmzero;

namespace {

struct RunConfig {
  std::string command;
  std::string builder;
  std::string file;
  int n = 3;
  double rho = 0.7;
  double eps = 0.1;
  std::string eta;
  std::uint64_t seed = 1;
  std::optional<double> theta;
  int resolution = 256;
  std::string bbox;
  std::string out = "-";
  std::string format = "json";
  bool deterministic = false;
  int k_nodes = 1024;
  std::string from;
  std::string to;
  int samples = 100;
  int max_iter = 50;
  std::string export_spec;
};

Complex parse_complex(const std::string& text, const char* what) {
  std::stringstream ss(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  if (!(ss >> re >> comma >> im) || comma != ',' || !(ss >> std::ws).eof()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + " must look like RE,IM");
  }
  return {re, im};
}

std::vector<double> parse_bbox(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "--bbox must be x0,x1,y0,y1");
    }
  }
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) {
    throw Error(ErrorKind::InvalidInput, "--bbox must be x0,x1,y0,y1 with x0 < x1 and y0 < y1");
  }
  return v;
}

HarmonicMapping make_mapping(const RunConfig& cfg) {
  if (!cfg.file.empty() && !cfg.builder.empty()) {
    throw Error(ErrorKind::InvalidInput, "use either --file or --builder");
  }
  if (!cfg.file.empty()) return load_mapping_file(cfg.file);
  if (cfg.builder == "wilmshurst") return wilmshurst(cfg.n);
  if (cfg.builder == "mpw") return mpw(cfg.n, cfg.rho);
  if (cfg.builder == "rhie") return rhie(cfg.n, cfg.rho, cfg.eps);
  if (cfg.builder == "log_example") return log_example();
  if (cfg.builder == "chang_refsdal") return chang_refsdal();
  throw Error(ErrorKind::InvalidInput, "a mapping is required: --file PATH or --builder NAME");
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions opts;
  opts.theta = cfg.theta;
  opts.trace.k_nodes = cfg.k_nodes;
  return opts;
}

// Writes to --out, or to standard output for "-".
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + cfg.out + "'");
  out << text;
}

std::string report_csv(const SolveReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "re,im,residual,jacobian\n";
  for (size_t i = 0; i < r.zeros.size(); ++i) {
    os << r.zeros[i].real() << ',' << r.zeros[i].imag() << ',' << r.residuals[i] << ',' << r.jacobians[i]
       << '\n';
  }
  return os.str();
}

int cmd_solve(const RunConfig& cfg, bool preimages) {
  const HarmonicMapping f = make_mapping(cfg);
  if (!cfg.export_spec.empty()) save_mapping_file(f, cfg.export_spec);
  const SolveOptions opts = solve_options(cfg);
  SolveReport report;
  if (preimages) {
    if (cfg.eta.empty()) throw Error(ErrorKind::InvalidInput, "preimages requires --eta");
    report = solve_preimages(f, parse_complex(cfg.eta, "--eta"), cfg.seed, opts);
  } else {
    report = solve_all_zeros(f, cfg.seed, opts);
  }
  emit(cfg, cfg.format == "csv" ? report_csv(report) : report_to_json(report, cfg.deterministic) + "\n");
  return 0;
}

int cmd_caustics(const RunConfig& cfg) {
  const HarmonicMapping f = make_mapping(cfg);
  if (!f.has_dilatation()) throw Error(ErrorKind::DegenerateMapping, "d/dz f vanishes identically");
  const CriticalData crit = compute_critical_data(f, solve_options(cfg).trace);
  if (crit.curves.empty()) std::cerr << "warning: the mapping has no critical curves\n";
  const Complex eta = cfg.eta.empty() ? Complex{} : parse_complex(cfg.eta, "--eta");

  if (cfg.format == "csv") {
    std::ostringstream os;
    write_curves_csv(os, crit.curves, crit.caustics);
    emit(cfg, os.str());
    return 0;
  }
  nlohmann::json doc;
  doc["eta"] = {eta.real(), eta.imag()};
  doc["max_caustic_modulus"] = crit.max_modulus;
  nlohmann::json curves = nlohmann::json::array();
  for (size_t i = 0; i < crit.curves.size(); ++i) {
    const auto& cv = crit.curves[i];
    const auto& ca = crit.caustics[i];
    nlohmann::json c;
    c["id"] = i;
    c["multiplicity"] = cv.winding;
    c["nodes"] = cv.points.size();
    c["not_light"] = ca.not_light;
    c["cusp_indices"] = ca.cusp_indices;
    if (ca.not_light) {
      c["winding_about_eta"] = nullptr;
    } else {
      try {
        c["winding_about_eta"] = winding_number(f, cv, ca, eta);
      } catch (const Error&) {
        c["winding_about_eta"] = nullptr;
      }
    }
    nlohmann::json pts = nlohmann::json::array();
    for (size_t k = 0; k < cv.points.size(); ++k) {
      pts.push_back({cv.params[k], cv.points[k].real(), cv.points[k].imag(), ca.points[k].real(),
                     ca.points[k].imag(), ca.psi[k]});
    }
    c["points"] = pts;
    curves.push_back(c);
  }
  doc["curves"] = curves;
  emit(cfg, doc.dump(2) + "\n");
  return 0;
}

int cmd_trace(const RunConfig& cfg) {
  const HarmonicMapping f = make_mapping(cfg);
  if (cfg.from.empty() || cfg.to.empty()) throw Error(ErrorKind::InvalidInput, "trace requires --from and --to");
  if (cfg.samples < 1) throw Error(ErrorKind::InvalidInput, "--samples must be positive");
  const std::vector<Complex> nodes{parse_complex(cfg.from, "--from"), parse_complex(cfg.to, "--to")};
  const auto branches = trace_homotopy(f, nodes, cfg.samples, solve_options(cfg));

  std::ostringstream os;
  os.precision(17);
  os << "branch,index,re_eta,im_eta,re_z,im_z,turning_point\n";
  for (size_t b = 0; b < branches.size(); ++b) {
    const auto& br = branches[b];
    const size_t n = br.points.size();
    for (size_t k = 0; k < n; ++k) {
      const bool turning = (k == 0 && br.starts_at_turning_point) || (k + 1 == n && br.ends_at_turning_point);
      os << b << ',' << k << ',' << br.etas[k].real() << ',' << br.etas[k].imag() << ',' << br.points[k].real()
         << ',' << br.points[k].imag() << ',' << (turning ? 1 : 0) << '\n';
    }
  }
  emit(cfg, os.str());
  return 0;
}

// HSV with full saturation to 8-bit RGB.
std::array<unsigned char, 3> hue_color(double hue, double value) {
  const double h = 6.0 * (hue - std::floor(hue));
  const int sector = static_cast<int>(h) % 6;
  const double frac = h - std::floor(h);
  const double p = 0.0;
  const double q = value * (1.0 - frac);
  const double t = value * frac;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = value; g = t; b = p; break;
    case 1: r = q; g = value; b = p; break;
    case 2: r = p; g = value; b = t; break;
    case 3: r = p; g = q; b = value; break;
    case 4: r = t; g = p; b = value; break;
    default: r = value; g = p; b = q; break;
  }
  auto to8 = [](double x) { return static_cast<unsigned char>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

int cmd_basins(const RunConfig& cfg) {
  const HarmonicMapping f = make_mapping(cfg);
  if (cfg.eta.empty() || cfg.bbox.empty()) throw Error(ErrorKind::InvalidInput, "basins requires --eta and --bbox");
  if (cfg.resolution < 1 || cfg.resolution > 8192) {
    throw Error(ErrorKind::InvalidInput, "--resolution must be in [1, 8192]");
  }
  if (cfg.out == "-") throw Error(ErrorKind::InvalidInput, "basins requires --out for the pixmap");
  const Complex eta = parse_complex(cfg.eta, "--eta");
  const auto box = parse_bbox(cfg.bbox);
  const int res = cfg.resolution;
  NewtonOptions nopts;
  nopts.max_iter = cfg.max_iter;

  std::vector<NewtonOutcome> pixels(static_cast<size_t>(res) * res);
  auto run_rows = [&](int row0, int stride) {
    for (int i = row0; i < res; i += stride) {
      const double y = box[3] - (i + 0.5) * (box[3] - box[2]) / res;
      for (int j = 0; j < res; ++j) {
        const double x = box[0] + (j + 0.5) * (box[1] - box[0]) / res;
        pixels[static_cast<size_t>(i) * res + j] = newton_solve(f, eta, {x, y}, nopts);
      }
    }
  };
  const int workers = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 16u));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run_rows, w, workers);
  run_rows(0, workers);
  for (auto& t : pool) t.join();

  std::vector<Complex> limits;
  for (const auto& p : pixels) {
    if (p.converged()) limits.push_back(p.limit);
  }
  limits = distinct_filter(limits, 1e-6);
  sort_points(limits);
  auto limit_index = [&](Complex z) {
    size_t best = 0;
    for (size_t k = 1; k < limits.size(); ++k) {
      if (std::abs(limits[k] - z) < std::abs(limits[best] - z)) best = k;
    }
    return best;
  };

  std::vector<std::array<unsigned char, 3>> palette;
  for (size_t k = 0; k < limits.size(); ++k) {
    palette.push_back(hue_color(static_cast<double>(k) / static_cast<double>(limits.size()), 1.0));
  }
  std::ofstream ppm(cfg.out, std::ios::binary);
  if (!ppm) throw Error(ErrorKind::InvalidInput, "cannot write '" + cfg.out + "'");
  ppm << "P6\n" << res << ' ' << res << "\n255\n";
  for (const auto& p : pixels) {
    std::array<unsigned char, 3> rgb{0, 0, 0};
    if (p.converged()) {
      const size_t k = limit_index(p.limit);
      const double shade = 1.0 - 0.7 * std::min(1.0, static_cast<double>(p.iterations) / nopts.max_iter);
      rgb = hue_color(static_cast<double>(k) / static_cast<double>(limits.size()), shade);
    }
    ppm.write(reinterpret_cast<const char*>(rgb.data()), 3);
  }

  std::ofstream legend(cfg.out + ".legend.csv");
  if (!legend) throw Error(ErrorKind::InvalidInput, "cannot write the legend file");
  legend.precision(17);
  legend << "index,re,im,r,g,b\n";
  for (size_t k = 0; k < limits.size(); ++k) {
    legend << k << ',' << limits[k].real() << ',' << limits[k].imag() << ',' << int(palette[k][0]) << ','
           << int(palette[k][1]) << ',' << int(palette[k][2]) << '\n';
  }
  return 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::DegeneratePole:
    case ErrorKind::NotAPole:
      return 1;
    case ErrorKind::SingularZeroSuspected:
    case ErrorKind::DegenerateMapping:
    case ErrorKind::GuardViolation:
    case ErrorKind::RayRejected:
    case ErrorKind::PoleProximity:
    case ErrorKind::HitCritical:
      return 2;
    default:
      return 3;
  }
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--builder", cfg.builder, "Built-in mapping family")
      ->check(CLI::IsMember({"wilmshurst", "mpw", "rhie", "log_example", "chang_refsdal"}));
  sub->add_option("--file", cfg.file, "Mapping spec JSON file");
  sub->add_option("--n", cfg.n, "Family parameter n");
  sub->add_option("--rho", cfg.rho, "Family parameter rho");
  sub->add_option("--eps", cfg.eps, "Rhie parameter eps");
  sub->add_option("--seed", cfg.seed, "Seed for the ray angle generator");
  sub->add_option("--theta", cfg.theta, "Fixed angle of the first ray (radians)");
  sub->add_option("--out", cfg.out, "Output path, '-' for standard output");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--deterministic", cfg.deterministic, "Omit the timestamp from reports");
  sub->add_option("--k-nodes", cfg.k_nodes, "Grid size for critical curve tracing")->check(CLI::Range(16, 1 << 20));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeros and preimages of harmonic mappings by transport of images"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* zeros = app.add_subcommand("zeros", "Compute all zeros");
  add_common(zeros, cfg);
  zeros->add_option("--export-spec", cfg.export_spec, "Also write the mapping spec to this path");

  auto* pre = app.add_subcommand("preimages", "Compute all solutions of f(z) = eta");
  add_common(pre, cfg);
  pre->add_option("--eta", cfg.eta, "Target RE,IM")->required();
  pre->add_option("--export-spec", cfg.export_spec, "Also write the mapping spec to this path");

  auto* cau = app.add_subcommand("caustics", "Critical curves and caustics");
  add_common(cau, cfg);
  cau->add_option("--eta", cfg.eta, "Point for the per-curve winding numbers (default 0)");

  auto* tr = app.add_subcommand("trace", "Homotopy curves along a segment");
  add_common(tr, cfg);
  tr->add_option("--from", cfg.from, "Segment start RE,IM")->required();
  tr->add_option("--to", cfg.to, "Segment end RE,IM")->required();
  tr->add_option("--samples", cfg.samples, "Steps along the segment");

  auto* bas = app.add_subcommand("basins", "Newton basins of attraction as a P6 pixmap");
  add_common(bas, cfg);
  bas->add_option("--eta", cfg.eta, "Target RE,IM")->required();
  bas->add_option("--bbox", cfg.bbox, "x0,x1,y0,y1")->required();
  bas->add_option("--resolution", cfg.resolution, "Pixels per side");
  bas->add_option("--max-iter", cfg.max_iter, "Newton iteration cap per pixel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (zeros->parsed()) return cmd_solve(cfg, false);
    if (pre->parsed()) return cmd_solve(cfg, true);
    if (cau->parsed()) return cmd_caustics(cfg);
    if (tr->parsed()) return cmd_trace(cfg);
    if (bas->parsed()) return cmd_basins(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
