#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "treecap/blowups.hpp"
#include "treecap/disk_numerics.hpp"
#include "treecap/extremal_fields.hpp"
#include "treecap/hankel.hpp"
#include "treecap/main_estimate.hpp"
#include "treecap/tree_capacity.hpp"

namespace treecap {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Wraps a payload object with the top-level "schema" field.
Json with_schema(Json payload);

Json to_json(const Complex& z);
Json to_json(const StoppingTime& w);
Json to_json(const ArcUnion& g);

/// {max_level, theta, nodes: [{id, level, idx}]}.
Json tree_to_json(const BergmanTree& tree);
BergmanTree tree_from_json(const Json& j);

/// {cap, h, H} with h and H dense arrays indexed by node id.
Json to_json(const ExtremalSolution& sol);
/// Rebuilds cap, h and H; sources and targets are read when present.
ExtremalSolution extremal_from_json(const Json& j);

Json to_json(const VerificationReport& r);
Json to_json(const LemmaReport& r);
Json to_json(const LemmaCheck& c);
Json to_json(const IntestReport& r);
Json to_json(const CapUpperResult& r);
Json to_json(const CapacityBand& b);
Json to_json(const PhiEstimateReport& r);
Json to_json(const Trend& t);
Json to_json(const NormRatio& r);
Json to_json(const MainEstimateReport& r);

struct HankelRow {
  std::size_t symbol_id = 0;
  int degree = 0;
  double form_norm = 0.0;
  double x_estimate = 0.0;
  double ratio = 0.0;
};

inline constexpr const char* kHankelCsvHeader = "symbol_id,degree,form_norm,x_estimate,ratio";
std::string hankel_csv_row(const HankelRow& row);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

}  // namespace treecap
