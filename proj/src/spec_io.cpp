#include "nquant/spec_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "nquant/errors.hpp"

namespace nquant {

using nlohmann::json;

SpecError::SpecError(std::string path, const std::string& message, int line, int column)
    : std::runtime_error(message), path_(std::move(path)), line_(line), column_(column) {}

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(path + "." + key, std::string("missing field '") + key + "'");
  return *it;
}

Scalar scalar_value(const json& v, const std::string& path, std::optional<Bits> precision) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number_integer()) {
    text = v.dump();
  } else {
    throw SpecError(path, "expected a number as a string (\"p/q\" or decimal) or a JSON integer");
  }
  try {
    if (precision) return Scalar(Real::parse(text, *precision));
    return Scalar::parse(text);
  } catch (const std::invalid_argument& e) {
    throw SpecError(path, e.what());
  }
}

std::vector<Scalar> scalar_list(const json& obj, const char* key, std::optional<Bits> precision) {
  const std::string path = std::string("$.") + key;
  const json& arr = field(obj, "$", key);
  if (!arr.is_array() || arr.empty()) throw SpecError(path, "expected a nonempty array");
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(scalar_value(arr[i], path + "[" + std::to_string(i) + "]", precision));
  }
  return out;
}

DiscreteDistribution finite_spec(const json& doc) {
  std::optional<Bits> precision;
  if (auto it = doc.find("precision"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long>() < 2) {
      throw SpecError("$.precision", "expected an integer number of bits >= 2");
    }
    precision = it->get<long>();
  }
  bool normalize = false;
  if (auto it = doc.find("normalize"); it != doc.end()) {
    if (!it->is_boolean()) throw SpecError("$.normalize", "expected true or false");
    normalize = it->get<bool>();
  }
  std::vector<Scalar> points = scalar_list(doc, "points", precision);
  std::vector<Scalar> masses = scalar_list(doc, "masses", precision);
  if (points.size() != masses.size()) {
    throw SpecError("$.masses", "has " + std::to_string(masses.size()) + " entries but points has " +
                                    std::to_string(points.size()));
  }
  try {
    return DiscreteDistribution::finite(std::move(points), std::move(masses), normalize);
  } catch (const QuantError& e) {
    std::string path = e.code() == ErrorCode::DuplicatePoint ? "$.points" : "$.masses";
    throw SpecError(path, e.what());
  }
}

DiscreteDistribution family_spec(const json& doc) {
  const json& name_field = field(doc, "$", "name");
  if (!name_field.is_string()) throw SpecError("$.name", "expected a string");
  const std::string name = name_field.get<std::string>();

  auto read_x = [&] {
    Scalar x = scalar_value(field(doc, "$", "x"), "$.x", std::nullopt);
    if (x.sign() <= 0 || x >= Scalar(1)) throw SpecError("$.x", "x must lie strictly between 0 and 1");
    return x.rational();
  };
  if (name == "geometric_naturals") return DiscreteDistribution::geometric_naturals();
  if (name == "dyadic_reciprocal") return DiscreteDistribution::dyadic_reciprocal();
  if (name == "geometric_infinite") return DiscreteDistribution::geometric_infinite(read_x());
  if (name == "geometric_truncated") {
    const json& m = field(doc, "$", "m");
    if (!m.is_number_integer() || m.get<long>() < 3) throw SpecError("$.m", "expected an integer m >= 3");
    return DiscreteDistribution::geometric_truncated(m.get<long>(), read_x());
  }
  throw SpecError("$.name", "unknown family '" + name +
                                "' (expected geometric_naturals, dyadic_reciprocal, geometric_truncated "
                                "or geometric_infinite)");
}

std::string scalar_text(const Scalar& s) { return s.to_string(); }

json scalar_list_json(const std::vector<Scalar>& values, bool roundtrip) {
  json out = json::array();
  for (const Scalar& v : values) {
    if (roundtrip) {
      const Real& r = v.real();
      out.push_back(r.to_decimal(roundtrip_digits(r.precision())));
    } else {
      out.push_back(scalar_text(v));
    }
  }
  return out;
}

json count_json(const Integer& count) {
  if (count.fits_slong_p()) return count.get_si();
  return count.get_str();
}

json distortion_json(const Scalar& d) {
  json out;
  if (d.is_exact()) {
    out["rational"] = rational_to_string(d.rational());
    out["decimal"] = d.to_decimal(20);
  } else {
    out["rational"] = nullptr;
    out["decimal"] = d.to_string();
    out["roundtrip"] = d.real().to_decimal(roundtrip_digits(d.real().precision()));
  }
  return out;
}

json result_json(const QuantizationResult& r) {
  json out;
  out["n"] = r.n;
  out["distortion"] = distortion_json(r.distortion);
  json optima = json::array();
  for (const Codebook& cb : r.optima) {
    json o;
    std::vector<Scalar> points = cb.points();
    o["codebook"] = scalar_list_json(points, false);
    if (!r.exact) o["codebook_roundtrip"] = scalar_list_json(points, true);
    o["cuts"] = cb.cuts;
    if (cb.last_atom) {
      o["last_atom"] = *cb.last_atom;
    } else {
      o["last_atom"] = nullptr;
    }
    o["ties"] = cb.ties;
    optima.push_back(std::move(o));
  }
  out["optima"] = std::move(optima);
  out["num_optima"] = count_json(r.num_optima);
  out["optima_truncated"] = r.optima_truncated;
  out["exact"] = r.exact;
  out["precision_bits"] = r.precision_bits;
  if (r.horizon > 0) out["horizon"] = r.horizon;
  out["verified"] = r.verified;
  return out;
}

std::string cell_text(const Codebook& cb, std::size_t i) {
  auto [first, last] = cb.cell(i);
  std::string s = "[" + std::to_string(first) + ", ";
  return s + (last ? std::to_string(*last) + "]" : std::string("inf)"));
}

}  // namespace

DiscreteDistribution parse_distribution_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw SpecError("$", "JSON syntax error: " + std::string(e.what()), line, column);
  }
  if (!doc.is_object()) throw SpecError("$", "expected a JSON object");
  const json& type = field(doc, "$", "type");
  if (!type.is_string()) throw SpecError("$.type", "expected \"finite\" or \"family\"");
  if (type == "finite") return finite_spec(doc);
  if (type == "family") return family_spec(doc);
  throw SpecError("$.type", "unknown type '" + type.get<std::string>() + "' (expected finite or family)");
}

DiscreteDistribution load_distribution_spec(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SpecError("$", "cannot read spec file '" + file + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_distribution_spec(buffer.str());
}

std::string result_to_json(const QuantizationResult& result, int indent) {
  return result_json(result).dump(indent);
}

std::string result_to_table(const QuantizationResult& r) {
  std::ostringstream out;
  out << "n = " << r.n << "\n";
  out << "distortion = " << r.distortion.to_string();
  if (r.distortion.is_exact()) out << "  (~" << r.distortion.to_decimal(20) << ")";
  out << "\n";
  out << (r.exact ? "exact rational arithmetic" : std::to_string(r.precision_bits) + "-bit floating arithmetic");
  if (r.horizon > 0) out << ", horizon " << r.horizon;
  out << "\n";
  out << "optimal codebooks: " << r.num_optima.get_str();
  if (r.optima_truncated) out << " (" << r.optima.size() << " listed)";
  out << "\n";
  for (std::size_t k = 0; k < r.optima.size(); ++k) {
    const Codebook& cb = r.optima[k];
    out << "#" << (k + 1) << "\n";
    for (std::size_t i = 0; i < cb.size(); ++i) {
      out << "  " << std::left << std::setw(14) << cell_text(cb, i) << " " << cb.centers[i].to_string() << "\n";
    }
    if (!cb.ties.empty()) {
      out << "  boundary ties at atoms";
      for (Index t : cb.ties) out << " " << t;
      out << "\n";
    }
  }
  return out.str();
}

std::string error_curve_csv(const std::vector<QuantizationResult>& results) {
  std::ostringstream out;
  out << "n,distortion,codebook_size,num_optima\n";
  for (const QuantizationResult& r : results) {
    const std::size_t size = r.optima.empty() ? 0 : r.optima.front().size();
    out << r.n << "," << r.distortion.to_string() << "," << size << "," << r.num_optima.get_str() << "\n";
  }
  return out.str();
}

std::string error_curve_json(const std::vector<QuantizationResult>& results, int indent) {
  json rows = json::array();
  for (const QuantizationResult& r : results) {
    json row;
    row["n"] = r.n;
    row["distortion"] = distortion_json(r.distortion);
    row["codebook_size"] = r.optima.empty() ? 0 : r.optima.front().size();
    row["num_optima"] = count_json(r.num_optima);
    rows.push_back(std::move(row));
  }
  return rows.dump(indent);
}

ParsedResult parse_result_json(std::string_view text) {
  json doc = json::parse(text);
  ParsedResult out;
  out.n = doc.at("n").get<Index>();
  out.exact = doc.at("exact").get<bool>();
  out.precision_bits = doc.at("precision_bits").get<Bits>();
  const json& d = doc.at("distortion");
  if (out.exact) {
    out.distortion = Scalar::parse(d.at("rational").get<std::string>());
  } else {
    out.distortion = Scalar(Real::parse(d.at("roundtrip").get<std::string>(), out.precision_bits));
  }
  for (const json& o : doc.at("optima")) {
    std::vector<Scalar> codebook;
    if (out.exact) {
      for (const json& v : o.at("codebook")) codebook.push_back(Scalar::parse(v.get<std::string>()));
    } else {
      for (const json& v : o.at("codebook_roundtrip")) {
        codebook.push_back(Scalar(Real::parse(v.get<std::string>(), out.precision_bits)));
      }
    }
    out.codebooks.push_back(std::move(codebook));
  }
  return out;
}

}  // namespace nquant
