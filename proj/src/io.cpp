#include "cutplug/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cutplug {

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_lumped_csv(const std::vector<LumpedResponseRow>& rows,
                      std::ostream& out) {
  out << "f_hz,abs_p_pa\n";
  for (const LumpedResponseRow& r : rows)
    out << format_sig17(r.f_hz) << ',' << format_sig17(r.abs_p) << '\n';
}

void write_response_csv(const FrequencyResponse& resp, std::ostream& out) {
  out << "f_hz,k,re_pout,im_pout,abs_pout,abs_ideal\n";
  for (const FrequencyResponseRow& r : resp.rows) {
    out << format_sig17(r.f_hz) << ',' << format_sig17(r.k) << ','
        << format_sig17(r.p_out.real()) << ',' << format_sig17(r.p_out.imag())
        << ',' << format_sig17(std::abs(r.p_out)) << ','
        << format_sig17(std::abs(r.p_ideal)) << '\n';
  }
}

void write_history_csv(const std::vector<BfgsIterate>& history,
                       std::ostream& out) {
  out << "iter,J,grad_inf_norm,step\n";
  for (const BfgsIterate& it : history)
    out << it.iter << ',' << format_sig17(it.J) << ','
        << format_sig17(it.grad_inf) << ',' << format_sig17(it.step) << '\n';
}

void write_gradcheck_csv(const std::vector<GradCheckRow>& rows,
                         std::ostream& out) {
  out << "component,adjoint,fd,rel_err\n";
  for (const GradCheckRow& r : rows)
    out << r.component << ',' << format_sig17(r.adjoint) << ','
        << format_sig17(r.fd) << ',' << format_sig17(r.rel_err) << '\n';
}

void write_design_gradient_csv(const DesignPoisson& poisson,
                               const Eigen::VectorXd& grad,
                               std::ostream& out) {
  if (grad.size() != poisson.n_free())
    throw std::invalid_argument("gradient size does not match free vertices");
  out << "vertex_id,grad_value\n";
  const auto& verts = poisson.free_vertices();
  for (int i = 0; i < poisson.n_free(); ++i)
    out << verts[i] << ',' << format_sig17(grad[i]) << '\n';
}

void write_design_csv(const DesignPoisson& poisson, const DesignVector& design,
                      std::ostream& out) {
  if (design.size() != poisson.n_free())
    throw std::invalid_argument("design size does not match free vertices");
  out << "vertex_id,value\n";
  const auto& verts = poisson.free_vertices();
  for (int i = 0; i < poisson.n_free(); ++i)
    out << verts[i] << ',' << format_sig17(design[i]) << '\n';
}

DesignVector read_design_csv(const DesignPoisson& poisson, std::istream& in,
                             const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line != "vertex_id,value")
    throw std::runtime_error(name + ": expected header 'vertex_id,value'");
  DesignVector design = DesignVector::Zero(poisson.n_free());
  std::vector<bool> seen(poisson.n_free(), false);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    std::size_t pos = 0;
    int vertex = -1;
    double value = 0.0;
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      vertex = std::stoi(line.substr(0, comma), &pos);
      if (pos != comma) throw std::invalid_argument("trailing text");
      value = std::stod(line.substr(comma + 1), &pos);
      if (comma + 1 + pos != line.size())
        throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      std::ostringstream os;
      os << name << ":" << line_no << ": malformed row '" << line << "'";
      throw std::runtime_error(os.str());
    }
    const int fi = poisson.free_index(vertex);
    if (fi < 0) {
      std::ostringstream os;
      os << name << ":" << line_no << ": vertex " << vertex
         << " is not a free design vertex";
      throw std::runtime_error(os.str());
    }
    if (seen[fi]) {
      std::ostringstream os;
      os << name << ":" << line_no << ": duplicate vertex " << vertex;
      throw std::runtime_error(os.str());
    }
    seen[fi] = true;
    design[fi] = value;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::runtime_error(name + ": design file misses free vertices");
  return design;
}

void write_sweep_svg(const FrequencyResponse& resp, std::ostream& out) {
  const int W = 720, H = 440;
  const int ml = 70, mr = 20, mt = 20, mb = 50;
  const double pw = W - ml - mr, ph = H - mt - mb;
  double fmin = 0.0, fmax = 0.0, ymax = 0.0;
  for (const FrequencyResponseRow& r : resp.rows) {
    if (fmin == 0.0 || r.f_hz < fmin) fmin = r.f_hz;
    fmax = std::max(fmax, r.f_hz);
    ymax = std::max({ymax, std::abs(r.p_out), std::abs(r.p_ideal)});
  }
  if (resp.rows.empty() || !(fmin > 0.0) || !(ymax > 0.0)) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\"/>\n";
    return;
  }
  if (fmax == fmin) fmax = fmin * 1.01;
  ymax *= 1.05;
  auto xpix = [&](double f) {
    return ml + pw * (std::log(f / fmin) / std::log(fmax / fmin));
  };
  auto ypix = [&](double v) { return mt + ph * (1.0 - v / ymax); };
  auto path = [&](auto value_of) {
    std::ostringstream os;
    for (std::size_t i = 0; i < resp.rows.size(); ++i) {
      os << (i == 0 ? 'M' : 'L') << xpix(resp.rows[i].f_hz) << ' '
         << ypix(value_of(resp.rows[i]));
    }
    return os.str();
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
      << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  // Decade and half-decade frequency ticks.
  for (double f = 1000.0; f <= fmax * 1.0001; f *= 2.0) {
    if (f < fmin) continue;
    const double x = xpix(f);
    out << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x
        << "\" y2=\"" << mt + ph + 6 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << mt + ph + 22
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222\">"
        << f / 1000.0 << "k</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = ymax * i / 4.0;
    const double y = ypix(v);
    out << "<line x1=\"" << ml - 6 << "\" y1=\"" << y << "\" x2=\"" << ml
        << "\" y2=\"" << y << "\" stroke=\"#444\"/>\n";
    std::ostringstream lv;
    lv.precision(3);
    lv << v;
    out << "<text x=\"" << ml - 10 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#222\">" << lv.str()
        << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
      << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#222\">frequency "
         "[Hz], log scale</text>\n";
  out << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#222\" "
         "transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">|p_out| [Pa]</text>\n";
  out << "<path d=\"" << path([](const FrequencyResponseRow& r) {
    return std::abs(r.p_ideal);
  }) << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1.5\" "
        "stroke-dasharray=\"6 4\"/>\n";
  out << "<path d=\"" << path([](const FrequencyResponseRow& r) {
    return std::abs(r.p_out);
  }) << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 18
      << "\" font-size=\"12\" fill=\"#1f77b4\">|p_out|</text>\n";
  out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 34
      << "\" font-size=\"12\" fill=\"#999\">ideal target</text>\n";
  out << "</svg>\n";
}

}  // namespace cutplug
