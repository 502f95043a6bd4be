#pragma once

#include "ryflow/grid.hpp"

#include <string>
#include <vector>

namespace ryflow {

/// Insertion-ordered JSON value; doubles serialize with 17 significant digits
/// so reports round-trip losslessly and byte-identically across runs.
class Json {
 public:
  static Json object();
  static Json array();
  static Json str(std::string v);
  static Json num(double v);
  static Json integer(long long v);
  static Json boolean(bool v);
  static Json null();

  Json& set(const std::string& key, Json v);
  Json& push(Json v);
  std::string dump(int indent = 2) const;

 private:
  enum class Kind { Object, Array, String, Number, Integer, Bool, Null };
  Kind kind_ = Kind::Null;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> items_;
  std::string str_;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;

  void write(std::string& out, int indent, int depth) const;
};

/// Formats a double with 17 significant digits (shortest exact form %.17g).
std::string format_double(double v);

/// RFC-4180 field quoting: wraps and escapes when the field contains a comma,
/// quote, or newline.
std::string csv_field(const std::string& raw);

std::string csv_row(const std::vector<std::string>& fields);

const char* chart_name(Chart chart);

/// One grid snapshot, row-major, columns
/// chart,t,d1,d2,o1,o2,coord1,coord2,h.
std::string grid_csv(const ConformalGridState& s);

/// Probe table, columns t,coord1,coord2,h,K,vol_rate.
std::string probe_csv(const std::vector<ProbeRow>& rows);

/// One tabulated-closed-form vs engine-evaluation gap.
struct DiscrepancyRecord {
  std::string equation;  // data tag used by downstream tooling
  double printed = 0.0;  // value of the tabulated form
  double engine = 0.0;   // value this library derives independently
  double relative_gap = 0.0;
  std::string note;
};

/// The fixed set of closed-form vs engine gaps this library tracks, evaluated
/// at pinned sample points; deterministic.
std::vector<DiscrepancyRecord> build_discrepancy_records();

Json discrepancy_json(const std::vector<DiscrepancyRecord>& records);

}  // namespace ryflow
