#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hemi/harness.hpp"

namespace hemi {

namespace {

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Canvas placement of the unit square.
struct Frame {
  double scale = 400.0;
  double left = 60.0;
  double top = 40.0;

  double px(double x) const { return left + scale * x; }
  double py(double y) const { return top + scale * (1.0 - y); }
};

const std::array<const char*, 3> kMethodColors = {"#1b6ca8", "#c0392b", "#27884a"};
const std::array<const char*, 3> kReferenceDash = {"", "6,3", "2,3"};

int method_slot(Method m) { return static_cast<int>(m); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_field(const std::string& text, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string displacement_csv(const DiscreteSystem& system, const Eigen::VectorXd& u) {
  const Eigen::VectorXd nodal = expand_to_nodes(system.dofs(), u);
  std::string out = "node_id,x,y,ux,uy\n";
  const auto& nodes = system.disc.mesh.nodes;
  for (int k = 0; k < static_cast<int>(nodes.size()); ++k) {
    out += std::to_string(k) + "," + format_number(nodes[k].x()) + "," + format_number(nodes[k].y()) + "," +
           format_number(nodal[2 * k]) + "," + format_number(nodal[2 * k + 1]) + "\n";
  }
  return out;
}

std::string contact_csv(const std::vector<ContactNodeResult>& contact) {
  std::string out = "node_id,x,u_nu,u_taux,sigma_nu,sigma_taux,normal_state,tangential_state\n";
  for (const auto& c : contact) {
    out += std::to_string(c.node) + "," + format_number(c.x) + "," + format_number(c.u_nu) + "," +
           format_number(c.u_tau) + "," + format_number(c.sigma_nu) + "," + format_number(c.sigma_tau) + "," +
           std::string(to_string(c.normal)) + "," + std::string(to_string(c.tangential)) + "\n";
  }
  return out;
}

std::string errors_csv(const ErrorReport& report) {
  std::vector<ErrorEntry> entries = report.entries;
  std::sort(entries.begin(), entries.end(), [](const ErrorEntry& a, const ErrorEntry& b) {
    if (a.solution != b.solution) return to_string(a.solution) < to_string(b.solution);
    if (a.reference != b.reference) return to_string(a.reference) < to_string(b.reference);
    return a.h_denominator < b.h_denominator;
  });
  std::string out = "method_solution,method_reference,h_denominator,v_error\n";
  for (const auto& e : entries) {
    out += std::string(to_string(e.solution)) + "," + std::string(to_string(e.reference)) + "," +
           std::to_string(e.h_denominator) + "," + format_number(e.v_error) + "\n";
  }
  return out;
}

std::string comparison_csv(const DiscreteSystem& system, const MethodComparison& comparison) {
  std::string out = "method_a,method_b,h_denominator,relative_v_difference\n";
  const std::array<Method, 3> order = {Method::AL, Method::Opt, Method::PDAS};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (!comparison.results.count(order[i]) || !comparison.results.count(order[j])) continue;
      out += std::string(to_string(order[i])) + "," + std::string(to_string(order[j])) + "," +
             std::to_string(system.disc.denominator()) + "," +
             format_number(comparison.relative_difference(system, order[i], order[j])) + "\n";
    }
  }
  return out;
}

std::string deformed_svg(const DiscreteSystem& system, const SolveResult& result, double magnification) {
  const TriMesh& mesh = system.disc.mesh;
  const Eigen::VectorXd nodal = expand_to_nodes(system.dofs(), result.u);
  double max_u = 0.0;
  for (int k = 0; k < mesh.num_nodes(); ++k) max_u = std::max(max_u, std::hypot(nodal[2 * k], nodal[2 * k + 1]));
  if (!(magnification > 0.0)) magnification = max_u > 0.0 ? 0.15 / max_u : 1.0;

  const Frame f;
  const double width = 2 * f.left + f.scale;
  const double height = f.top + f.scale + 160.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << " " << fixed(height, 0) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(f.left, 0) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << to_string(result.method) << ", h = 1/" << system.disc.denominator() << ", displacement x"
      << fixed(magnification, 2) << "</text>\n";
  // Undeformed outline and foundation line.
  svg << "<rect x=\"" << fixed(f.px(0)) << "\" y=\"" << fixed(f.py(1)) << "\" width=\"" << fixed(f.scale)
      << "\" height=\"" << fixed(f.scale) << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"4,3\"/>\n";
  svg << "<line x1=\"" << fixed(f.px(0) - 20) << "\" y1=\"" << fixed(f.py(0)) << "\" x2=\"" << fixed(f.px(1) + 20)
      << "\" y2=\"" << fixed(f.py(0)) << "\" stroke=\"#7f5f3f\" stroke-width=\"2\"/>\n";

  svg << "<g fill=\"none\" stroke=\"#1b6ca8\" stroke-width=\"0.6\">\n";
  for (const auto& tri : mesh.triangles) {
    svg << "<polygon points=\"";
    for (int a = 0; a < 3; ++a) {
      const int k = tri[a];
      const double x = mesh.nodes[k].x() + magnification * nodal[2 * k];
      const double y = mesh.nodes[k].y() + magnification * nodal[2 * k + 1];
      svg << (a ? " " : "") << fixed(f.px(x)) << "," << fixed(f.py(y));
    }
    svg << "\"/>\n";
  }
  svg << "</g>\n";

  // Foundation forces on the body, mirrored below the contact line.
  double max_force = 0.0;
  for (const auto& c : result.contact) max_force = std::max(max_force, std::hypot(c.sigma_tau, c.sigma_nu));
  if (max_force > 0.0) {
    const double arrow_scale = 0.25 / max_force;
    svg << "<g stroke=\"#c0392b\" stroke-width=\"1.2\" fill=\"#c0392b\">\n";
    for (const auto& c : result.contact) {
      const double fx = c.sigma_tau, fy = -c.sigma_nu;
      const double len = std::hypot(fx, fy);
      if (len == 0.0) continue;
      const double x0 = f.px(c.x), y0 = f.py(0.0);
      const double x1 = x0 + f.scale * arrow_scale * fx;
      const double y1 = y0 + f.scale * arrow_scale * fy;  // mirrored: upward force drawn downward
      const double ux = (x1 - x0) / (f.scale * arrow_scale * len), uy = (y1 - y0) / (f.scale * arrow_scale * len);
      svg << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\"" << fixed(x1) << "\" y2=\""
          << fixed(y1) << "\"/>";
      svg << "<polygon points=\"" << fixed(x1) << "," << fixed(y1) << " " << fixed(x1 - 5 * ux - 2.5 * uy) << ","
          << fixed(y1 - 5 * uy + 2.5 * ux) << " " << fixed(x1 - 5 * ux + 2.5 * uy) << ","
          << fixed(y1 - 5 * uy - 2.5 * ux) << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string error_plot_svg(const ErrorReport& report) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& e : report.entries) {
    if (e.v_error > 0.0) {
      lo = std::min(lo, e.v_error);
      hi = std::max(hi, e.v_error);
    }
  }
  if (!(hi > 0.0)) {
    lo = 1e-3;
    hi = 1.0;
  }
  const double y_min = std::floor(std::log10(lo)), y_max = std::ceil(std::log10(hi));
  const double x_min = std::floor(std::log10(1.0 / std::max(1, report.h_denominators.empty() ? 1 : report.h_denominators.back())));
  const double x_max = 0.0;

  const double left = 80, top = 30, w = 480, h = 360;
  const auto px = [&](double hval) { return left + w * (std::log10(hval) - x_min) / std::max(x_max - x_min, 1.0); };
  const auto py = [&](double e) { return top + h * (y_max - std::log10(e)) / std::max(y_max - y_min, 1.0); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"440\" viewBox=\"0 0 760 440\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" stroke=\"#dddddd\">\n";
  for (int d = static_cast<int>(x_min); d <= static_cast<int>(x_max); ++d) {
    const double x = px(std::pow(10.0, d));
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << top << "\" x2=\"" << fixed(x) << "\" y2=\"" << top + h
        << "\"/><text stroke=\"none\" x=\"" << fixed(x - 12) << "\" y=\"" << top + h + 16 << "\">1e" << d
        << "</text>\n";
  }
  for (int d = static_cast<int>(y_min); d <= static_cast<int>(y_max); ++d) {
    const double y = py(std::pow(10.0, d));
    svg << "<line x1=\"" << left << "\" y1=\"" << fixed(y) << "\" x2=\"" << left + w << "\" y2=\"" << fixed(y)
        << "\"/><text stroke=\"none\" x=\"" << left - 40 << "\" y=\"" << fixed(y + 4) << "\">1e" << d
        << "</text>\n";
  }
  svg << "<text stroke=\"none\" x=\"" << left + w / 2 - 10 << "\" y=\"" << top + h + 34 << "\">h</text>\n";
  svg << "<text stroke=\"none\" x=\"10\" y=\"" << top + h / 2 << "\">error</text>\n";
  svg << "</g>\n";

  int legend = 0;
  for (Method s : report.methods) {
    for (Method r : report.methods) {
      const std::vector<double> errors = report.curve(s, r);
      if (errors.empty()) continue;
      std::string points;
      for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!(errors[k] > 0.0)) continue;
        points += (points.empty() ? "" : " ") + fixed(px(1.0 / report.h_denominators[k])) + "," + fixed(py(errors[k]));
      }
      const char* color = kMethodColors[method_slot(s)];
      const char* dash = kReferenceDash[method_slot(r)];
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
      if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
      svg << " points=\"" << points << "\"/>\n";
      const double ly = top + 12 + 18 * legend++;
      svg << "<line x1=\"580\" y1=\"" << fixed(ly) << "\" x2=\"610\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"";
      if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
      svg << "/><text font-family=\"sans-serif\" font-size=\"11\" x=\"616\" y=\"" << fixed(ly + 4) << "\">"
          << to_string(s) << " vs " << to_string(r) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

DisplacementField read_displacement_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open solution file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty solution file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "node_id,x,y,ux,uy") throw InputError("unexpected header '" + line + "'");

  std::vector<std::array<double, 4>> rows;
  std::vector<long> ids;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 5) throw InputError("line " + std::to_string(line_no) + ": expected 5 fields");
    const double id = parse_field(fields[0], line_no);
    if (id < 0 || id != std::floor(id)) throw InputError("line " + std::to_string(line_no) + ": bad node id");
    ids.push_back(static_cast<long>(id));
    rows.push_back({parse_field(fields[1], line_no), parse_field(fields[2], line_no), parse_field(fields[3], line_no),
                    parse_field(fields[4], line_no)});
  }
  const long count = static_cast<long>(rows.size());
  const long side = std::lround(std::sqrt(static_cast<double>(count)));
  if (side < 3 || side * side != count) throw InputError("node count is not that of a uniform square mesh");

  DisplacementField field;
  field.denominator = static_cast<int>(side - 1);
  const TriMesh mesh = build_uniform_mesh(field.denominator);
  field.nodal = Eigen::VectorXd::Zero(2 * count);
  std::vector<char> seen(count, 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const long id = ids[r];
    if (id >= count || seen[id]) throw InputError("node ids must be a permutation of 0.." + std::to_string(count - 1));
    seen[id] = 1;
    if (std::abs(mesh.nodes[id].x() - rows[r][0]) > 1e-9 || std::abs(mesh.nodes[id].y() - rows[r][1]) > 1e-9) {
      throw InputError("node " + std::to_string(id) + " does not sit at its mesh coordinates");
    }
    field.nodal[2 * id] = rows[r][2];
    field.nodal[2 * id + 1] = rows[r][3];
  }
  return field;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_example_artifacts(const ExampleRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "displacements.csv", displacement_csv(*run.system, run.result.u));
  write_text(dir / "contact.csv", contact_csv(run.result.contact));
  write_text(dir / "deformed.svg", deformed_svg(*run.system, run.result));
  const auto marker = dir / "FAILED";
  if (run.result.converged()) {
    std::filesystem::remove(marker);
  } else {
    write_text(marker, std::string(to_string(run.result.status)) + "\n");
  }
}

}  // namespace hemi
