#include "qit/sdp.hpp"

#include <cmath>

#include "json.hpp"

namespace qit {

using nlohmann::json;

rmat realify(const cmat& h) {
  const int d = static_cast<int>(h.rows());
  rmat out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.bottomRightCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  return out;
}

cmat derealify(const rmat& s) {
  const int d = static_cast<int>(s.rows()) / 2;
  cmat out(d, d);
  out.real() = 0.5 * (s.topLeftCorner(d, d) + s.bottomRightCorner(d, d));
  out.imag() = 0.5 * (s.bottomLeftCorner(d, d) - s.topRightCorner(d, d));
  return out;
}

std::vector<cmat> SdpProblem::hermitian_basis(int dim) {
  std::vector<cmat> basis;
  basis.reserve(static_cast<size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    cmat e = cmat::Zero(dim, dim);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      cmat re = cmat::Zero(dim, dim);
      re(i, j) = re(j, i) = inv_sqrt2;
      basis.push_back(std::move(re));
      cmat im = cmat::Zero(dim, dim);
      im(i, j) = cplx(0.0, inv_sqrt2);
      im(j, i) = cplx(0.0, -inv_sqrt2);
      basis.push_back(std::move(im));
    }
  return basis;
}

int SdpProblem::add_block(const std::string& name, int dim) {
  if (dim <= 0) throw BadDims("SdpProblem: block dimension must be positive");
  block_dims_.push_back(dim);
  block_names_.push_back(name);
  objective_.push_back(cmat::Zero(dim, dim));
  return static_cast<int>(block_dims_.size()) - 1;
}

void SdpProblem::set_objective(int block, const cmat& c) {
  require_hermitian(c, "SdpProblem::set_objective");
  if (c.rows() != block_dims_[block]) throw DimensionMismatch("SdpProblem: objective size");
  objective_[block] = c;
}

void SdpProblem::add_scalar_equality(const std::map<int, cmat>& coeffs, double rhs) {
  Row row;
  row.rhs = rhs;
  for (const auto& [b, c] : coeffs) {
    require_hermitian(c, "SdpProblem::add_scalar_equality");
    if (c.rows() != block_dims_[b]) throw DimensionMismatch("SdpProblem: coefficient size");
    row.terms.emplace_back(b, c);
  }
  rows_.push_back(std::move(row));
}

void SdpProblem::add_matrix_equality(const std::vector<std::pair<int, TermGenerator>>& terms,
                                     const cmat& rhs) {
  require_hermitian(rhs, "SdpProblem::add_matrix_equality");
  for (const cmat& e : hermitian_basis(static_cast<int>(rhs.rows()))) {
    Row row;
    row.rhs = (e * rhs).trace().real();
    for (const auto& [b, gen] : terms) {
      cmat coeff = gen(e);
      if (coeff.rows() != block_dims_[b])
        throw DimensionMismatch("SdpProblem: term generator produced a wrong size");
      row.terms.emplace_back(b, cmat(0.5 * (coeff + coeff.adjoint())));
    }
    rows_.push_back(std::move(row));
  }
}

long long SdpProblem::total_real_params() const {
  long long n = 0;
  for (int d : block_dims_) n += static_cast<long long>(d) * d;
  return n;
}

cmat SdpProblem::assemble_dual_block(const rvec& y, int first_row, int dim) {
  const auto basis = hermitian_basis(dim);
  cmat out = cmat::Zero(dim, dim);
  for (size_t k = 0; k < basis.size(); ++k) out += y(first_row + static_cast<int>(k)) * basis[k];
  return out;
}

SdpProblem::Solution SdpProblem::solve(const SdpOptions& opts) const {
  if (total_real_params() > opts.dim_cap)
    throw TooLarge("SdpProblem: total variable dimension exceeds the configured cap");
  const double sign = sense_ == Sense::maximize ? -1.0 : 1.0;

  RealSdp real;
  real.block_dims.reserve(block_dims_.size());
  for (int d : block_dims_) real.block_dims.push_back(2 * d);
  for (const auto& c : objective_) real.objective.push_back(sign * realify(c));
  // Rows are normalized by their largest coefficient norm; the multipliers
  // are rescaled back below.
  std::vector<double> row_scale;
  for (const auto& row : rows_) {
    RealSdp::Row r;
    double scale = 0.0;
    for (const auto& [b, c] : row.terms) scale = std::max(scale, max_abs(c));
    if (scale <= 0.0) scale = 1.0;
    row_scale.push_back(scale);
    r.rhs = 2.0 * row.rhs / scale;
    for (const auto& [b, c] : row.terms) r.terms.emplace_back(b, realify(c) / scale);
    real.rows.push_back(std::move(r));
  }

  RealSdpSolution rs = solve_real_sdp(real, opts);
  for (size_t i = 0; i < row_scale.size(); ++i) rs.y(i) /= row_scale[i];

  Solution sol;
  sol.status = rs.status;
  // Halve to undo the doubled realified inner products; un-flip max problems.
  sol.primal_value = 0.5 * sign * rs.primal_value;
  sol.dual_value = 0.5 * sign * rs.dual_value;
  sol.value = sol.primal_value;
  sol.duality_gap = 0.5 * rs.duality_gap;
  sol.primal_residual = rs.primal_residual;
  sol.dual_residual = rs.dual_residual;
  sol.iterations = rs.iterations;
  sol.y = sign * rs.y;
  for (const auto& xb : rs.x) sol.x.push_back(derealify(xb));
  for (const auto& sb : rs.s) sol.s.push_back(sign * derealify(sb));
  return sol;
}

std::string SdpProblem::dump_json() const {
  auto mat = [](const cmat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json j;
  j["sense"] = sense_ == Sense::maximize ? "max" : "min";
  j["blocks"] = json::array();
  for (size_t b = 0; b < block_dims_.size(); ++b)
    j["blocks"].push_back({{"name", block_names_[b]}, {"dim", block_dims_[b]}});
  j["objective"] = json::array();
  for (const auto& c : objective_) j["objective"].push_back(mat(c));
  j["rows"] = json::array();
  for (const auto& row : rows_) {
    json terms = json::array();
    for (const auto& [b, c] : row.terms) terms.push_back({{"block", b}, {"matrix", mat(c)}});
    j["rows"].push_back({{"rhs", row.rhs}, {"terms", terms}});
  }
  return j.dump();
}

SdpProblem SdpProblem::load_json(const std::string& text) {
  auto mat = [](const json& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r ? static_cast<int>(rows[0].size()) : 0;
    cmat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int jx = 0; jx < c; ++jx)
        m(i, jx) = cplx(rows[i][jx][0].get<double>(), rows[i][jx][1].get<double>());
    return m;
  };
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("sdp json: ") + e.what());
  }
  SdpProblem p(j.value("sense", "min") == std::string("max") ? Sense::maximize : Sense::minimize);
  for (const auto& b : j.at("blocks")) p.add_block(b.at("name"), b.at("dim"));
  int bi = 0;
  for (const auto& c : j.at("objective")) p.set_objective(bi++, mat(c));
  for (const auto& row : j.at("rows")) {
    Row r;
    r.rhs = row.at("rhs").get<double>();
    for (const auto& t : row.at("terms")) {
      cmat c = mat(t.at("matrix"));
      r.terms.emplace_back(t.at("block").get<int>(), std::move(c));
    }
    p.rows_.push_back(std::move(r));
  }
  return p;
}

}  // namespace qit
