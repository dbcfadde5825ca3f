#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "geomom/error.hpp"
#include "geomom/momentum_rep.hpp"
#include "geomom/sphere_operators.hpp"
#include "geomom/surface_geometry.hpp"

namespace geomom::cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TableOptions {
  int l = 0;
  int m = 0;
  double kmax = 20.0;
  double step = 0.02;
  std::string format = "csv";
  std::string source = "auto";
  std::string output;
};

std::string num(double x) { return fmt::format("{:.17g}", x); }

HarmonicIndex checked_index(int l, int m) {
  if (l < 0 || std::abs(m) > l) throw UsageError(fmt::format("invalid index l={} m={}", l, m));
  return {l, m};
}

AmplitudeTable build_table(const TableOptions& o) {
  const HarmonicIndex idx = checked_index(o.l, o.m);
  const MomentumGrid grid = MomentumGrid::symmetric(o.kmax, o.step);
  if (o.source == "auto") return amplitude_table(idx, grid);
  if (o.source == "closed" && o.l > 2) throw UsageError("closed forms exist only for l <= 2");
  return amplitude_table(idx, grid, o.source == "closed" ? AmplitudeSource::closed_form : AmplitudeSource::quadrature);
}

json table_metadata(const AmplitudeTable& t, const TableOptions& o) {
  return json{{"l", t.index.l},
              {"m", t.index.m},
              {"source", std::string(to_string(t.source))},
              {"grid", {{"k_min", -o.kmax}, {"k_max", o.kmax}, {"step", o.step}, {"points", t.grid.size()}}}};
}

void write_density(std::ostream& os, const AmplitudeTable& t, const TableOptions& o) {
  const auto& k = t.grid.values();
  const auto d = t.density();
  if (o.format == "csv") {
    os << "k,density\n";
    for (std::size_t i = 0; i < k.size(); ++i) os << num(k[i]) << ',' << num(d[i]) << '\n';
  } else if (o.format == "json") {
    json j = table_metadata(t, o);
    j["k"] = k;
    j["density"] = d;
    os << j.dump(2) << '\n';
  } else {
    os << fmt::format("# |Q_{{{},{}}}(k)|^2  source={}\n", t.index.l, t.index.m, to_string(t.source));
    for (std::size_t i = 0; i < k.size(); ++i) os << fmt::format("{:>10.4f}  {:.10e}\n", k[i], d[i]);
  }
}

void write_amplitude(std::ostream& os, const AmplitudeTable& t, const TableOptions& o) {
  const auto& k = t.grid.values();
  if (o.format == "csv") {
    os << "k,re_q,im_q\n";
    for (std::size_t i = 0; i < k.size(); ++i)
      os << num(k[i]) << ',' << num(t.values[i].real()) << ',' << num(t.values[i].imag()) << '\n';
  } else if (o.format == "json") {
    json j = table_metadata(t, o);
    std::vector<double> re, im;
    for (const cplx& q : t.values) {
      re.push_back(q.real());
      im.push_back(q.imag());
    }
    j["k"] = k;
    j["re_q"] = re;
    j["im_q"] = im;
    os << j.dump(2) << '\n';
  } else {
    os << fmt::format("# Q_{{{},{}}}(k)  source={}\n", t.index.l, t.index.m, to_string(t.source));
    for (std::size_t i = 0; i < k.size(); ++i)
      os << fmt::format("{:>10.4f}  {: .10e}  {: .10e}\n", k[i], t.values[i].real(), t.values[i].imag());
  }
}

// Writes to --output when given, else to out.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file " + path);
  write(file);
}

json verify_algebra(int lmax, int interior, double hbar) {
  const GeneratorSet gens(lmax, hbar);
  const double threshold = 1e-8 * hbar * hbar;
  json relations = json::array();
  double worst = 0.0;
  for (const auto& rel : so31_relations()) {
    const double r = commutator_residual(gens, rel, interior);
    worst = std::max(worst, r);
    relations.push_back({{"relation", rel.name}, {"residual", r}});
  }
  json rotations = json::array();
  double worst_rot = 0.0;
  for (auto family : {GeneratorFamily::momentum, GeneratorFamily::angular_momentum})
    for (auto axis : {RotationAxis::x_from_z, RotationAxis::y_from_z}) {
      const double r = rotation_equivalence_residual(family, axis, lmax, interior, hbar);
      worst_rot = std::max(worst_rot, r);
      rotations.push_back({{"family", family == GeneratorFamily::momentum ? "momentum" : "angular_momentum"},
                           {"axis", axis == RotationAxis::x_from_z ? "x" : "y"},
                           {"residual", r}});
    }
  return json{{"l_max", lmax},
              {"interior", interior},
              {"hbar", hbar},
              {"relations", relations},
              {"max_commutator_residual", worst},
              {"commutator_threshold", threshold},
              {"rotations", rotations},
              {"max_rotation_residual", worst_rot},
              {"rotation_threshold", 1e-6},
              {"all_within_threshold", worst <= threshold && worst_rot <= 1e-6}};
}

json verify_qlm(int lmax) {
  const MomentumGrid grid = MomentumGrid::standard();
  std::vector<HarmonicIndex> indices;
  for (int l = 0; l <= lmax; ++l)
    for (int m = -l; m <= l; ++m) indices.push_back({l, m});
  const auto tables = quadrature_tables(indices, grid);
  const std::size_t n = grid.size();

  double norm = 0.0, k_reflection = 0.0, m_reflection = 0.0;
  int node_mismatches = 0;
  for (const auto& t : tables) {
    norm = std::max(norm, std::abs(t.norm() - 1.0));
    if (count_nodes(t) != t.index.l - std::abs(t.index.m)) ++node_mismatches;
    const double par = reflection_parity(t.index.l, t.index.m);
    const auto& other = tables[static_cast<std::size_t>(HarmonicIndex{t.index.l, -t.index.m}.flat())];
    const double msign = (t.index.m % 2) ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      k_reflection = std::max(k_reflection, std::abs(t.values[n - 1 - i] - par * t.values[i]));
      m_reflection = std::max(m_reflection, std::abs(other.values[i] - msign * t.values[i]));
    }
  }

  double ortho = 0.0;
  for (int m = -lmax; m <= lmax; ++m) {
    const auto G = orthogonality_matrix(m, lmax);
    ortho = std::max(ortho, (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff());
  }

  std::vector<double> u;
  for (int i = 0; i <= 240; ++i) u.push_back(-30.0 + 0.25 * i);
  double l2u = 0.0, poly = 0.0;
  for (const auto& idx : indices) {
    l2u = std::max(l2u, l2u_residual(idx.l, idx.m, u));
    poly = std::max(poly, polynomial_structure(idx.l, idx.m).residual);
  }

  double oracle = 0.0, difference = 0.0;
  for (int l = 0; l <= std::min(lmax, 2); ++l)
    for (int m = -l; m <= l; ++m) {
      const cplx phase = phase_alignment(l, m);
      for (int i = 0; i <= 200; ++i) {
        const double k = -10.0 + 0.1 * i;
        const cplx closed = q_lm_closed(l, m, k);
        oracle = std::max(oracle, std::abs(q_lm_numeric(l, m, k) - phase * closed));
        difference = std::max(difference, difference_residual(l, m, k) / (1.0 + std::abs(closed)));
      }
    }

  auto entry = [](double value, double threshold) {
    return json{{"max_residual", value}, {"threshold", threshold}, {"ok", value <= threshold}};
  };
  json checks{{"normalization", entry(norm, 1e-6)},
              {"orthogonality", entry(ortho, 1e-6)},
              {"k_reflection", entry(k_reflection, 1e-10)},
              {"m_reflection", entry(m_reflection, 1e-10)},
              {"l2u", entry(l2u, 1e-9)},
              {"polynomial_fit", entry(poly, 1e-7)},
              {"closed_form_oracle", entry(oracle, 1e-8)},
              {"difference_equation", entry(difference, 1e-10)}};
  bool ok = node_mismatches == 0;
  for (const auto& [name, c] : checks.items()) ok = ok && c["ok"].get<bool>();
  return json{{"l_max", lmax},
              {"k_reflection_parity", "(-1)^(l+m)"},
              {"checks", checks},
              {"node_count_mismatches", node_mismatches},
              {"all_within_threshold", ok}};
}

json surface_report(const std::string& spec, double q1, double q2, double q3, double mu, double hbar) {
  const SurfaceChart chart = parse_surface(spec);
  const SurfaceGeometry geo = geometry_at(chart, q1, q2);
  const ShellMetric shell = shell_metric(chart, q1, q2, q3);
  auto rows = [](const auto& M) {
    json a = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      json r = json::array();
      for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
      a.push_back(r);
    }
    return a;
  };
  return json{{"surface", chart.name()},
              {"q1", q1},
              {"q2", q2},
              {"metric", rows(geo.g)},
              {"normal", {geo.n.x(), geo.n.y(), geo.n.z()}},
              {"weingarten", rows(geo.alpha)},
              {"mean_curvature", geo.mean_curvature},
              {"gaussian_curvature", geo.gaussian_curvature},
              {"geometric_potential", geometric_potential(geo.mean_curvature, geo.gaussian_curvature, mu, hbar)},
              {"normal_divergence", normal_divergence(chart, q1, q2)},
              {"q3", q3},
              {"shell_metric", rows(shell.G)},
              {"shell_det", shell.det_G}};
}

void write_csv_pair(const std::filesystem::path& path, const char* header, const std::vector<double>& k,
                    const std::vector<double>& y) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path.string());
  f << header << '\n';
  for (std::size_t i = 0; i < k.size(); ++i) f << num(k[i]) << ',' << num(y[i]) << '\n';
}

json reproduce_figure(int id, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const MomentumGrid grid = MomentumGrid::standard();
  const auto& k = grid.values();
  json files = json::array();
  json extra;

  auto with_oscillator = [&](int l) {
    const auto t = amplitude_table({l, 0}, grid);
    const HoComparison c = compare_ho(l, l);
    std::vector<double> ho;
    for (double x : k) ho.push_back(ho_momentum_density(l, x, c.beta));
    const fs::path qp = fs::path(out_dir) / fmt::format("figure{}_q{}0.csv", id, l);
    const fs::path hp = fs::path(out_dir) / fmt::format("figure{}_ho{}.csv", id, l);
    write_csv_pair(qp, "k,density", k, t.density());
    write_csv_pair(hp, "k,density", k, ho);
    files.push_back(qp.string());
    files.push_back(hp.string());
    extra = {{"beta", c.beta}, {"sup_diff", c.sup_diff}, {"l1_diff", c.l1_diff}};
  };

  if (id == 1) {
    with_oscillator(0);
  } else if (id == 2) {
    json nodes = json::array();
    for (int m = 0; m <= 3; ++m) {
      const auto t = amplitude_table({3, m}, grid);
      const fs::path p = fs::path(out_dir) / fmt::format("figure2_q3{}.csv", m);
      write_csv_pair(p, "k,density", k, t.density());
      files.push_back(p.string());
      nodes.push_back(count_nodes(t));
    }
    extra = {{"node_counts", nodes}};
  } else if (id == 3) {
    with_oscillator(10);
  } else {
    throw UsageError(fmt::format("unknown figure id {}", id));
  }
  return json{{"figure", id}, {"files", files}, {"summary", extra}};
}

void add_table_options(CLI::App* sub, TableOptions& o) {
  sub->add_option("--l", o.l, "degree")->required();
  sub->add_option("--m", o.m, "order")->required();
  sub->add_option("--kmax", o.kmax, "grid half width")->capture_default_str();
  sub->add_option("--step", o.step, "grid spacing")->capture_default_str();
  sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json", "text"}))->capture_default_str();
  sub->add_option("--source", o.source)->check(CLI::IsMember({"auto", "closed", "quadrature"}))->capture_default_str();
  sub->add_option("--output", o.output, "file path (default stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric momentum on curved surfaces", "geomom"};
  app.require_subcommand(1);

  TableOptions qdist_opt, qamp_opt;
  auto* qdist = app.add_subcommand("qdist", "momentum distribution |Q_lm(k)|^2");
  add_table_options(qdist, qdist_opt);
  auto* qamp = app.add_subcommand("qamp", "complex amplitude Q_lm(k)");
  add_table_options(qamp, qamp_opt);

  int alg_lmax = 12, alg_interior = 10;
  double alg_hbar = 1.0;
  auto* alg = app.add_subcommand("verify-algebra", "so(3,1) commutators and rotation equivalence");
  alg->add_option("--lmax", alg_lmax)->capture_default_str();
  alg->add_option("--interior", alg_interior)->capture_default_str();
  alg->add_option("--hbar", alg_hbar)->capture_default_str();

  int qlm_lmax = 6;
  auto* vq = app.add_subcommand("verify-qlm", "amplitude properties for l <= lmax");
  vq->add_option("--lmax", qlm_lmax)->capture_default_str()->check(CLI::Range(0, 10));

  std::string surf = "sphere:r=1";
  double q1 = 1.0, q2 = 0.5, q3 = 0.0, mu = 1.0, s_hbar = 1.0;
  auto* sc = app.add_subcommand("surface", "curvature, geometric potential and shell metric at a point");
  sc->add_option("--surface", surf)->capture_default_str();
  sc->add_option("--q1", q1)->capture_default_str();
  sc->add_option("--q2", q2)->capture_default_str();
  sc->add_option("--q3", q3)->capture_default_str();
  sc->add_option("--mu", mu)->capture_default_str();
  sc->add_option("--hbar", s_hbar)->capture_default_str();

  double radius = 0.0;
  auto* unc = app.add_subcommand("uncertainty", "momentum uncertainty in atomic units");
  unc->add_option("--radius-angstrom", radius)->required();

  int ho_l = 0, ho_n = -1;
  double ho_beta = 0.0;
  auto* ho = app.add_subcommand("compare-ho", "compare |Q_l0|^2 with an oscillator density");
  ho->add_option("--l", ho_l)->required()->check(CLI::NonNegativeNumber);
  ho->add_option("--n", ho_n, "oscillator level (default l)");
  ho->add_option("--beta", ho_beta, "oscillator width (default variance matched)");

  int fig_id = 1;
  std::string fig_dir = ".";
  auto* fig = app.add_subcommand("figure", "write CSV data for figures 1-3");
  fig->add_option("--id", fig_id)->required()->check(CLI::IsMember({1, 2, 3}));
  fig->add_option("--out-dir", fig_dir)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    if (qdist->parsed()) {
      const auto t = build_table(qdist_opt);
      emit(qdist_opt.output, out, [&](std::ostream& os) { write_density(os, t, qdist_opt); });
    } else if (qamp->parsed()) {
      const auto t = build_table(qamp_opt);
      emit(qamp_opt.output, out, [&](std::ostream& os) { write_amplitude(os, t, qamp_opt); });
    } else if (alg->parsed()) {
      out << verify_algebra(alg_lmax, alg_interior, alg_hbar).dump(2) << '\n';
    } else if (vq->parsed()) {
      out << verify_qlm(qlm_lmax).dump(2) << '\n';
    } else if (sc->parsed()) {
      out << surface_report(surf, q1, q2, q3, mu, s_hbar).dump(2) << '\n';
    } else if (unc->parsed()) {
      out << json{{"delta_p_au", momentum_uncertainty_au(radius)}}.dump() << '\n';
    } else if (ho->parsed()) {
      const HoComparison c = compare_ho(ho_l, ho_n < 0 ? ho_l : ho_n, ho_beta);
      out << json{{"l", ho_l},
                  {"n", ho_n < 0 ? ho_l : ho_n},
                  {"beta", c.beta},
                  {"matching", ho_beta > 0.0 ? "manual" : "variance"},
                  {"sup_diff", c.sup_diff},
                  {"l1_diff", c.l1_diff},
                  {"q_support_width", c.q_support_width},
                  {"ho_support_width", c.ho_support_width}}
                 .dump(2)
          << '\n';
    } else if (fig->parsed()) {
      out << reproduce_figure(fig_id, fig_dir).dump(2) << '\n';
    }
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    if (e.code() == ErrorCode::InvalidArgument) {
      err << e.what() << '\n';
      return 2;
    }
    out << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace geomom::cli
