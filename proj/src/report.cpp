#include "ryflow/report.hpp"

#include "ryflow/fd.hpp"
#include "ryflow/flows.hpp"
#include "ryflow/residuals.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ryflow {

Json Json::object() {
  Json j;
  j.kind_ = Kind::Object;
  return j;
}
Json Json::array() {
  Json j;
  j.kind_ = Kind::Array;
  return j;
}
Json Json::str(std::string v) {
  Json j;
  j.kind_ = Kind::String;
  j.str_ = std::move(v);
  return j;
}
Json Json::num(double v) {
  Json j;
  j.kind_ = Kind::Number;
  j.num_ = v;
  return j;
}
Json Json::integer(long long v) {
  Json j;
  j.kind_ = Kind::Integer;
  j.int_ = v;
  return j;
}
Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::Bool;
  j.bool_ = v;
  return j;
}
Json Json::null() { return Json{}; }

Json& Json::set(const std::string& key, Json v) {
  if (kind_ != Kind::Object) throw std::logic_error("set() on a non-object");
  members_.emplace_back(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  if (kind_ != Kind::Array) throw std::logic_error("push() on a non-array");
  items_.push_back(std::move(v));
  return *this;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (kind_) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += bool_ ? "true" : "false"; break;
    case Kind::Integer: out += std::to_string(int_); break;
    case Kind::Number: out += format_double(num_); break;
    case Kind::String: out += escape(str_); break;
    case Kind::Array:
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].write(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "]";
      break;
    case Kind::Object:
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad + escape(members_[i].first) + ": ";
        members_[i].second.write(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "}";
      break;
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

const char* chart_name(Chart chart) {
  switch (chart) {
    case Chart::Cartesian: return "Cartesian";
    case Chart::Polar: return "Polar";
    case Chart::ParabolicUV: return "ParabolicUV";
    case Chart::EllipticUV: return "EllipticUV";
  }
  return "unknown";
}

std::string grid_csv(const ConformalGridState& s) {
  std::string out = "chart,t,d1,d2,o1,o2,coord1,coord2,h\n";
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i)
      out += csv_row({chart_name(s.chart), format_double(s.t),
                      format_double(s.d1), format_double(s.d2),
                      format_double(s.o1), format_double(s.o2),
                      format_double(s.coord1(i)), format_double(s.coord2(j)),
                      format_double(s.at(i, j))});
  return out;
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::string out = "t,coord1,coord2,h,K,vol_rate\n";
  for (const auto& r : rows)
    out += csv_row({format_double(r.t), format_double(r.a), format_double(r.b),
                    format_double(r.h), format_double(r.gauss),
                    format_double(r.vol_rate)});
  return out;
}

namespace {

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

DiscrepancyRecord warped_record() {
  const FlowKind kind = WarpedRotSymFlow{exp_potential(1.0), 1.0};
  const RYParams params{1.0, 0.0};
  const double t = 0.5;
  const Point p{{0.7, 0.3}};
  const SymTensor2 tab = closed_form_ry(kind, t, p, params);
  const SymTensor2 direct = warped_ry_direct(kind, t, p, params);
  DiscrepancyRecord rec;
  rec.equation = "1.20/1.21";
  rec.printed = tab.sup_norm();
  rec.engine = direct.sup_norm();
  rec.relative_gap = (tab - direct).sup_norm() /
                     std::max(tab.sup_norm(), direct.sup_norm());
  rec.note =
      "warped-product map: tabulated closed form vs assembly from the warped "
      "metric's own curvature, sup norms at t=0.5, (u,v)=(0.7,0.3), sn_1, "
      "f=e^t, alpha=1, beta=0";
  return rec;
}

DiscrepancyRecord poincare_volume_record() {
  const FlowKind kind = PoincareFlow{2};
  const RYParams params{1.0, 0.0};
  const double t = 1.0;
  const Point p{{0.3, 2.0}};
  const double tab = *closed_form_volume_variation(kind, t, p, params).accumulated;
  const MetricField g = make_flow(kind);
  const double integral = fd::integrate(
      [&](double s) {
        const SymTensor2 ry = closed_form_ry(kind, s, p, params);
        return ry.contract(g.eval(s, p).inverse());
      },
      0.0, t);
  DiscrepancyRecord rec;
  rec.equation = "2.4";
  rec.printed = tab;
  rec.engine = integral;
  rec.relative_gap = rel_gap(tab, integral);
  rec.note =
      "half-plane family, n=2: tabulated accumulated volume variation vs the "
      "time integral of the metric trace of the map, t=1, y=2";
  return rec;
}

DiscrepancyRecord cigar_rate_record() {
  const FlowKind kind = GeneralizedCigarFlow{exp_potential(2.0)};
  const RYParams params{0.35, 0.25};
  const double t = 0.3;
  const Point p{{0.5, 0.4}};
  const double tab = closed_form_volume_variation(kind, t, p, params).rate;
  const MetricField g = make_flow(kind);
  const double trace =
      closed_form_ry(kind, t, p, params).contract(g.eval(t, p).inverse());
  DiscrepancyRecord rec;
  rec.equation = "2.5";
  rec.printed = tab;
  rec.engine = trace;
  rec.relative_gap = rel_gap(tab, trace);
  rec.note =
      "cigar family: tabulated volume-variation rate vs metric trace of the "
      "map; the trace is twice the tabulated rate";
  return rec;
}

DiscrepancyRecord polar_form_record() {
  ScalarTimeField h;
  h.value = [](double t, double a, double b) { return std::sin(a) * std::cos(b) + t * t; };
  h.d1 = [](double, double a, double b) { return std::cos(a) * std::cos(b); };
  h.d2 = [](double, double a, double b) { return -std::sin(a) * std::sin(b); };
  h.d11 = [](double, double a, double b) { return -std::sin(a) * std::cos(b); };
  h.d22 = [](double, double a, double b) { return -std::sin(a) * std::cos(b); };
  h.d12 = [](double, double a, double b) { return -std::cos(a) * std::sin(b); };
  h.dt = [](double t, double, double) { return 2.0 * t; };
  const DiffSpec spec{};
  const double t = 0.4, x = 1.3, y = 0.7;
  const double tab = residual_polar(h, t, x, y, spec);
  const double full = residual_polar_full(h, t, x, y, spec);
  DiscrepancyRecord rec;
  rec.equation = "3.5";
  rec.printed = tab;
  rec.engine = full;
  rec.relative_gap = rel_gap(tab, full);
  rec.note =
      "polar flow equation: tabulated second-order form vs the form with the "
      "first-order chain-rule term restored, at h = sin(u)cos(v)+t^2, t=0.4, "
      "(x,y)=(1.3,0.7)";
  return rec;
}

DiscrepancyRecord polar_sum_record() {
  SepFunction f;
  f.value = [](double t, double s) { return s * s + t; };
  f.ds = [](double, double s) { return 2.0 * s; };
  f.dss = [](double, double) { return 2.0; };
  f.dt = [](double, double) { return 1.0; };
  SepFunction g;
  g.value = [](double, double s) { return s * s; };
  g.ds = [](double, double s) { return 2.0 * s; };
  g.dss = [](double, double) { return 2.0; };
  g.dt = [](double, double) { return 0.0; };
  const DiffSpec spec{};
  const double t = 0.0, x = 2.0, y = 0.0;
  const double tab = separable_residual(SepChart::Polar, SepMode::Sum, f, g, t, x, y, spec);
  // same spatial side against the additive exponent e^(f+g)
  const double u = x * std::cos(y), v = x * std::sin(y);
  const double spatial = f.dss(t, u) * (std::cos(y) * std::cos(y) + x * x * std::sin(y) * std::sin(y)) +
                         g.dss(t, v) * (std::sin(y) * std::sin(y) + x * x * std::cos(y) * std::cos(y));
  const double additive = spatial - (f.dt(t, u) + g.dt(t, v)) * std::exp(f.value(t, u) + g.value(t, v));
  DiscrepancyRecord rec;
  rec.equation = "3.8";
  rec.printed = tab;
  rec.engine = additive;
  rec.relative_gap = rel_gap(tab, additive);
  rec.note =
      "polar additive separation: tabulated time side exp(f*g) vs the "
      "additive-ansatz exponent exp(f+g), at f=u^2+t, g=v^2, t=0, "
      "(x,y)=(2,0)";
  return rec;
}

}  // namespace

std::vector<DiscrepancyRecord> build_discrepancy_records() {
  return {warped_record(), poincare_volume_record(), cigar_rate_record(),
          polar_form_record(), polar_sum_record()};
}

Json discrepancy_json(const std::vector<DiscrepancyRecord>& records) {
  Json arr = Json::array();
  for (const auto& r : records) {
    Json obj = Json::object();
    obj.set("equation", Json::str(r.equation));
    obj.set("printed", Json::num(r.printed));
    obj.set("engine", Json::num(r.engine));
    obj.set("relative_gap", Json::num(r.relative_gap));
    obj.set("note", Json::str(r.note));
    arr.push(std::move(obj));
  }
  return arr;
}

}  // namespace ryflow
