#include "qit/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qit {

using nlohmann::json;

namespace {

json matrix_to_json(const cmat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

cmat matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ParseError("matrix: expected non-empty array");
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  cmat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw ParseError("matrix: ragged rows");
    for (int j = 0; j < c; ++j) {
      const json& e = rows[i][j];
      if (e.is_number()) {
        m(i, j) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(i, j) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ParseError("matrix: entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_json(const DensityOperator& rho) {
  json j;
  j["dims"] = rho.dims();
  j["labels"] = rho.labels();
  json classical = json::array();
  for (size_t k = 0; k < rho.labels().size(); ++k)
    if (rho.classical_mask()[k]) classical.push_back(rho.labels()[k]);
  if (!classical.empty()) j["classical"] = classical;
  j["matrix"] = matrix_to_json(rho.matrix());
  return j.dump();
}

std::string to_json(const Channel& ch) {
  json j;
  j["dim_in"] = ch.dim_in();
  j["dim_out"] = ch.dim_out();
  json kraus = json::array();
  for (const auto& e : ch.kraus()) kraus.push_back(matrix_to_json(e));
  j["kraus"] = kraus;
  return j.dump();
}

DensityOperator state_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("state json: ") + e.what());
  }
  if (!j.contains("matrix")) throw ParseError("state json: missing \"matrix\"");
  cmat m = matrix_from_json(j["matrix"]);
  std::vector<int> dims;
  if (j.contains("dims")) dims = j["dims"].get<std::vector<int>>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  std::vector<bool> classical;
  if (j.contains("classical")) {
    const auto names = j["classical"].get<std::vector<std::string>>();
    classical.assign(dims.empty() ? 1 : dims.size(), false);
    for (size_t k = 0; k < labels.size(); ++k)
      for (const auto& n : names)
        if (labels[k] == n) classical[k] = true;
  }
  return DensityOperator(std::move(m), dims, labels, classical);
}

Channel channel_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("channel json: ") + e.what());
  }
  if (!j.contains("kraus")) throw ParseError("channel json: missing \"kraus\"");
  std::vector<cmat> kraus;
  for (const auto& k : j["kraus"]) kraus.push_back(matrix_from_json(k));
  Channel ch(std::move(kraus));
  if (j.contains("dim_in") && j["dim_in"].get<int>() != ch.dim_in())
    throw ParseError("channel json: dim_in inconsistent with Kraus shapes");
  if (j.contains("dim_out") && j["dim_out"].get<int>() != ch.dim_out())
    throw ParseError("channel json: dim_out inconsistent with Kraus shapes");
  return ch;
}

DensityOperator load_state(const std::string& path) { return state_from_json(read_file(path)); }

Channel load_channel(const std::string& path) { return channel_from_json(read_file(path)); }

void save_state(const DensityOperator& rho, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << to_json(rho) << "\n";
}

cmat cmat_from_json_text(const std::string& text) {
  return matrix_from_json(json::parse(text));
}

}  // namespace qit
