#include "qit/states.hpp"

#include <algorithm>
#include <cmath>

namespace qit {

namespace {

std::vector<std::string> default_labels(size_t n) {
  std::vector<std::string> labels(n);
  for (size_t k = 0; k < n; ++k) labels[k] = std::string(1, static_cast<char>('A' + (k % 26)));
  if (n > 26)
    for (size_t k = 26; k < n; ++k) labels[k] = "S" + std::to_string(k);
  return labels;
}

}  // namespace

DensityOperator::DensityOperator(cmat m)
    : DensityOperator(std::move(m), {}, {}, {}) {}

DensityOperator::DensityOperator(cmat m, std::vector<int> dims, std::vector<std::string> labels,
                                 std::vector<bool> classical)
    : m_(std::move(m)), dims_(std::move(dims)), labels_(std::move(labels)),
      classical_(std::move(classical)) {
  if (dims_.empty()) dims_ = {static_cast<int>(m_.rows())};
  if (labels_.empty()) labels_ = default_labels(dims_.size());
  if (classical_.empty()) classical_.assign(dims_.size(), false);
  validate();
}

void DensityOperator::validate() const {
  require_hermitian(m_, "DensityOperator");
  long long n = 1;
  for (int d : dims_) n *= d;
  if (n != m_.rows()) throw DimensionMismatch("DensityOperator: dims do not match matrix size");
  if (labels_.size() != dims_.size() || classical_.size() != dims_.size())
    throw BadDims("DensityOperator: labels/classical size mismatch");
  EigenSystem es = eig_hermitian(m_);
  const double scale = std::max(1.0, es.eigenvalues.size() ? es.eigenvalues.cwiseAbs().maxCoeff() : 0.0);
  if (es.eigenvalues.size() && es.eigenvalues.minCoeff() < -Tol::ptol * scale)
    throw NotPsd("DensityOperator: matrix is not positive semi-definite");
  const double tr = trace();
  if (!(tr > 0.0) || tr > 1.0 + Tol::ttol)
    throw NotPsd("DensityOperator: trace must lie in (0, 1]");
  for (size_t k = 0; k < dims_.size(); ++k) {
    if (!classical_[k]) continue;
    // Classical subsystems must be diagonal in the standard basis.
    cmat pinched = m_;
    std::vector<int> digits(dims_.size());
    // Zero every entry whose k-th row/col digit differ.
    const auto& dims = dims_;
    long long stride = 1;
    for (size_t j = k + 1; j < dims.size(); ++j) stride *= dims[j];
    for (long long i = 0; i < m_.rows(); ++i) {
      const int di = static_cast<int>((i / stride) % dims[k]);
      for (long long j = 0; j < m_.cols(); ++j) {
        const int dj = static_cast<int>((j / stride) % dims[k]);
        if (di != dj) pinched(i, j) = 0.0;
      }
    }
    if (max_abs(m_ - pinched) > Tol::ctol)
      throw NotClassical("DensityOperator: declared classical subsystem has off-diagonal mass");
  }
}

int DensityOperator::subsystem_index(const std::string& label) const {
  for (size_t k = 0; k < labels_.size(); ++k)
    if (labels_[k] == label) return static_cast<int>(k);
  throw BadDims("DensityOperator: unknown subsystem label " + label);
}

int DensityOperator::subsystem_dim(const std::string& label) const {
  return dims_[subsystem_index(label)];
}

int DensityOperator::dim_of(const std::vector<std::string>& labels) const {
  int d = 1;
  for (const auto& l : labels) d *= subsystem_dim(l);
  return d;
}

DensityOperator DensityOperator::marginal(const std::vector<std::string>& keep) const {
  std::vector<int> keep_idx;
  for (const auto& l : keep) keep_idx.push_back(subsystem_index(l));
  std::vector<int> sorted = keep_idx;
  std::sort(sorted.begin(), sorted.end());
  cmat m = partial_trace(m_, dims_, sorted);
  std::vector<int> dims;
  std::vector<std::string> labels;
  std::vector<bool> classical;
  for (int k : sorted) {
    dims.push_back(dims_[k]);
    labels.push_back(labels_[k]);
    classical.push_back(classical_[k]);
  }
  DensityOperator out(std::move(m), dims, labels, classical);
  // Honor the requested order if it differs from the ascending one.
  if (keep_idx != sorted) out = out.reorder_front(keep);
  return out;
}

DensityOperator DensityOperator::reorder_front(const std::vector<std::string>& front) const {
  std::vector<int> perm;
  for (const auto& l : front) perm.push_back(subsystem_index(l));
  for (int k = 0; k < static_cast<int>(dims_.size()); ++k)
    if (std::find(perm.begin(), perm.end(), k) == perm.end()) perm.push_back(k);
  cmat m = permute_subsystems(m_, dims_, perm);
  std::vector<int> dims;
  std::vector<std::string> labels;
  std::vector<bool> classical;
  for (int k : perm) {
    dims.push_back(dims_[k]);
    labels.push_back(labels_[k]);
    classical.push_back(classical_[k]);
  }
  return DensityOperator(std::move(m), dims, labels, classical);
}

DensityOperator DensityOperator::maximally_mixed(int d, const std::string& label) {
  return DensityOperator(cmat::Identity(d, d) / static_cast<double>(d), {d}, {label});
}

DensityOperator DensityOperator::maximally_entangled(int d, const std::string& a,
                                                     const std::string& b) {
  cvec v = max_entangled_vector(d) / std::sqrt(static_cast<double>(d));
  return pure(v, {d, d}, {a, b});
}

DensityOperator DensityOperator::pure(const cvec& v, std::vector<int> dims,
                                      std::vector<std::string> labels) {
  return DensityOperator(v * v.adjoint(), std::move(dims), std::move(labels));
}

DensityOperator DensityOperator::classical(const rvec& pmf, const std::string& label) {
  const int d = static_cast<int>(pmf.size());
  cmat m = cmat::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = pmf(i);
  return DensityOperator(std::move(m), {d}, {label}, {true});
}

Channel::Channel(std::vector<cmat> kraus, bool minimize_rank) {
  if (kraus.empty()) throw BadDims("Channel: empty Kraus list");
  d_out_ = static_cast<int>(kraus[0].rows());
  d_in_ = static_cast<int>(kraus[0].cols());
  for (const auto& e : kraus)
    if (e.rows() != d_out_ || e.cols() != d_in_)
      throw DimensionMismatch("Channel: inconsistent Kraus shapes");
  kraus_ = std::move(kraus);
  if (minimize_rank && static_cast<int>(kraus_.size()) > 1) {
    // Re-derive a minimal Kraus list from the Choi eigendecomposition.
    ChoiMatrix choi = choi_of_kraus(kraus_, d_in_, d_out_);
    Channel minimal = channel_of_choi(choi);
    kraus_ = minimal.kraus_;
  }
  cmat gram = cmat::Zero(d_in_, d_in_);
  for (const auto& e : kraus_) gram += e.adjoint() * e;
  tp_ = max_abs(gram - cmat::Identity(d_in_, d_in_)) <= Tol::ttol;
  EigenSystem es = eig_hermitian(gram);
  tni_ = es.eigenvalues.maxCoeff() <= 1.0 + Tol::ttol;
  cmat out_gram = cmat::Zero(d_out_, d_out_);
  for (const auto& e : kraus_) out_gram += e * e.adjoint();
  unital_ = (d_in_ == d_out_) && max_abs(out_gram - cmat::Identity(d_out_, d_out_)) <= Tol::ttol;
  EigenSystem eso = eig_hermitian(out_gram);
  sub_unital_ = eso.eigenvalues.maxCoeff() <= 1.0 + Tol::ttol;
}

cmat Channel::apply(const cmat& x) const {
  if (x.rows() != d_in_ || x.cols() != d_in_)
    throw DimensionMismatch("Channel::apply: input size mismatch");
  cmat out = cmat::Zero(d_out_, d_out_);
  for (const auto& e : kraus_) out += e * x * e.adjoint();
  return out;
}

cmat Channel::apply_adjoint(const cmat& y) const {
  if (y.rows() != d_out_ || y.cols() != d_out_)
    throw DimensionMismatch("Channel::apply_adjoint: input size mismatch");
  cmat out = cmat::Zero(d_in_, d_in_);
  for (const auto& e : kraus_) out += e.adjoint() * y * e;
  return out;
}

Channel Channel::identity(int d) { return Channel({cmat::Identity(d, d)}, false); }

Channel Channel::from_unitary(const cmat& u) { return Channel({u}, false); }

Channel Channel::depolarizing(int d, double p) {
  // (1-p) rho + p pi tr(rho): the full Weyl twirl provides the mixing part.
  std::vector<cmat> kraus;
  if (p < 1.0) kraus.push_back(std::sqrt(1.0 - p) * cmat::Identity(d, d));
  cmat x = cmat::Zero(d, d), z = cmat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    x((k + 1) % d, k) = 1.0;
    z(k, k) = std::exp(cplx(0.0, 2.0 * M_PI * k / d));
  }
  cmat xa = cmat::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    cmat w = xa;
    for (int b = 0; b < d; ++b) {
      if (p > 0.0) kraus.push_back(std::sqrt(p) / d * w);
      w = w * z;
    }
    xa = x * xa;
  }
  return Channel(std::move(kraus));
}

Channel Channel::sample_cptp(Rng& rng, int d_in, int d_out, int d_env) {
  return Channel(rng.cptp_kraus(d_in, d_out, d_env), false);
}

Povm::Povm(std::vector<cmat> effects, std::vector<std::string> outcomes)
    : effects_(std::move(effects)), outcomes_(std::move(outcomes)) {
  if (effects_.empty()) throw BadDims("Povm: empty effect list");
  const int d = static_cast<int>(effects_[0].rows());
  cmat total = cmat::Zero(d, d);
  for (const auto& e : effects_) {
    require_hermitian(e, "Povm");
    if (e.rows() != d) throw DimensionMismatch("Povm: inconsistent effect shapes");
    EigenSystem es = eig_hermitian(e);
    if (es.eigenvalues.minCoeff() < -Tol::ptol) throw NotPsd("Povm: effect not psd");
    if (es.eigenvalues.maxCoeff() > 1.0 + Tol::ttol) throw NotPsd("Povm: effect exceeds identity");
    total += e;
  }
  if (max_abs(total - cmat::Identity(d, d)) > Tol::ttol)
    throw NotPsd("Povm: effects do not sum to the identity");
  if (outcomes_.empty()) {
    outcomes_.resize(effects_.size());
    for (size_t k = 0; k < effects_.size(); ++k) outcomes_[k] = std::to_string(k);
  }
}

rvec Povm::outcome_weights(const cmat& rho) const {
  rvec w(effects_.size());
  for (size_t k = 0; k < effects_.size(); ++k) w(k) = (rho * effects_[k]).trace().real();
  return w;
}

Povm Povm::computational(int d) {
  std::vector<cmat> effects;
  for (int k = 0; k < d; ++k) {
    cmat e = cmat::Zero(d, d);
    e(k, k) = 1.0;
    effects.push_back(std::move(e));
  }
  return Povm(std::move(effects));
}

Povm Povm::from_basis(const cmat& basis_columns) {
  const int d = static_cast<int>(basis_columns.rows());
  if (basis_columns.cols() != d) throw BasisNotON("Povm::from_basis: basis must be square");
  if (max_abs(basis_columns.adjoint() * basis_columns - cmat::Identity(d, d)) > 1e-9)
    throw BasisNotON("Povm::from_basis: columns are not orthonormal");
  std::vector<cmat> effects;
  for (int k = 0; k < d; ++k)
    effects.push_back(basis_columns.col(k) * basis_columns.col(k).adjoint());
  return Povm(std::move(effects));
}

cvec purification_vector(const cmat& rho) {
  EigenSystem es = eig_hermitian(rho);
  const int d = static_cast<int>(es.eigenvalues.size());
  std::vector<int> kept;
  for (int i = d - 1; i >= 0; --i)
    if (es.support[i] && es.eigenvalues[i] > 0) kept.push_back(i);
  const int r = std::max<int>(1, static_cast<int>(kept.size()));
  cvec v = cvec::Zero(static_cast<long long>(d) * r);
  for (size_t k = 0; k < kept.size(); ++k) {
    const double w = std::sqrt(es.eigenvalues[kept[k]]);
    for (int a = 0; a < d; ++a)
      v(static_cast<long long>(a) * r + k) += w * es.eigenvectors(a, kept[k]);
  }
  return v;
}

DensityOperator purify(const DensityOperator& rho) {
  const cvec v = purification_vector(rho.matrix());
  const int r = static_cast<int>(v.size()) / rho.dim();
  std::vector<int> dims = rho.dims();
  dims.push_back(r);
  std::vector<std::string> labels = rho.labels();
  std::string anc = labels.back() + "'";
  // Avoid collisions.
  while (std::find(labels.begin(), labels.end(), anc) != labels.end()) anc += "'";
  labels.push_back(anc);
  DensityOperator out = DensityOperator::pure(v, dims, labels);
  if (max_abs(out.marginal(rho.labels()).matrix() - rho.matrix()) > Tol::rtol * 10)
    throw Error("purify: reconstruction check failed");
  return out;
}

DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho) {
  cmat out = ch.apply(rho.matrix());
  return DensityOperator(std::move(out), {ch.dim_out()}, {rho.labels().empty() ? "A" : rho.labels()[0]});
}

DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho,
                              const std::string& subsystem) {
  const int idx = rho.subsystem_index(subsystem);
  if (rho.dims()[idx] != ch.dim_in())
    throw DimensionMismatch("apply_channel: channel input does not match subsystem");
  // Move the subsystem to the front, conjugate with id ⊗ ... embedded Kraus.
  std::vector<std::string> front = {subsystem};
  DensityOperator r = rho.reorder_front(front);
  int rest = 1;
  for (size_t k = 1; k < r.dims().size(); ++k) rest *= r.dims()[k];
  cmat out = cmat::Zero(static_cast<long long>(ch.dim_out()) * rest,
                        static_cast<long long>(ch.dim_out()) * rest);
  const cmat id_rest = cmat::Identity(rest, rest);
  for (const auto& e : ch.kraus()) {
    const cmat big = tensor(e, id_rest);
    out += big * r.matrix() * big.adjoint();
  }
  std::vector<int> dims = r.dims();
  dims[0] = ch.dim_out();
  DensityOperator mapped(std::move(out), dims, r.labels(), r.classical_mask());
  return mapped.reorder_front(rho.labels());
}

ChoiMatrix choi_of_kraus(const std::vector<cmat>& kraus, int d_in, int d_out) {
  ChoiMatrix choi;
  choi.dim_in = d_in;
  choi.dim_out = d_out;
  const long long n = static_cast<long long>(d_in) * d_out;
  choi.matrix = cmat::Zero(n, n);
  for (const auto& e : kraus) {
    // |gamma_k> = sum_x |x>_{A'} ⊗ E|x>_B, component (x, b) = E(b, x).
    cvec g(n);
    for (int x = 0; x < d_in; ++x)
      for (int b = 0; b < d_out; ++b) g(static_cast<long long>(x) * d_out + b) = e(b, x);
    choi.matrix += g * g.adjoint();
  }
  return choi;
}

ChoiMatrix choi_of_channel(const Channel& ch) {
  return choi_of_kraus(ch.kraus(), ch.dim_in(), ch.dim_out());
}

Channel channel_of_choi(const ChoiMatrix& choi) {
  require_hermitian(choi.matrix, "channel_of_choi");
  EigenSystem es = eig_hermitian(choi.matrix);
  const double scale = std::max(1.0, es.eigenvalues.cwiseAbs().maxCoeff());
  if (es.eigenvalues.minCoeff() < -Tol::ptol * scale)
    throw NotCp("channel_of_choi: Choi matrix has a negative eigenvalue");
  std::vector<cmat> kraus;
  for (int i = 0; i < es.eigenvalues.size(); ++i) {
    if (!es.support[i] || es.eigenvalues[i] <= 0) continue;
    const double w = std::sqrt(es.eigenvalues[i]);
    cmat e(choi.dim_out, choi.dim_in);
    for (int x = 0; x < choi.dim_in; ++x)
      for (int b = 0; b < choi.dim_out; ++b)
        e(b, x) = w * es.eigenvectors(static_cast<long long>(x) * choi.dim_out + b, i);
    kraus.push_back(std::move(e));
  }
  if (kraus.empty()) kraus.push_back(cmat::Zero(choi.dim_out, choi.dim_in));
  return Channel(std::move(kraus), false);
}

Stinespring stinespring(const Channel& ch) {
  if (!ch.trace_non_increasing()) throw NotCp("stinespring: channel must be trace non-increasing");
  Stinespring st;
  st.dim_env = static_cast<int>(ch.kraus().size());
  cmat l(static_cast<long long>(st.dim_env) * ch.dim_out(), ch.dim_in());
  for (int k = 0; k < st.dim_env; ++k) l.middleRows(static_cast<long long>(k) * ch.dim_out(), ch.dim_out()) = ch.kraus()[k];
  st.isometry_or_contraction = std::move(l);
  return st;
}

Channel measurement_channel(const Povm& povm) {
  const int d = povm.dim();
  const int n = static_cast<int>(povm.effects().size());
  std::vector<cmat> kraus;
  for (int x = 0; x < n; ++x) {
    EigenSystem es = eig_hermitian(povm.effects()[x]);
    for (int i = 0; i < es.eigenvalues.size(); ++i) {
      if (!es.support[i] || es.eigenvalues[i] <= 0) continue;
      cmat e = cmat::Zero(n, d);
      e.row(x) = std::sqrt(es.eigenvalues[i]) * es.eigenvectors.col(i).adjoint();
      kraus.push_back(std::move(e));
    }
  }
  return Channel(std::move(kraus), false);
}

DensityOperator cq_state(const rvec& weights, const std::vector<cmat>& conditionals,
                         const std::string& classical_label, const std::string& quantum_label) {
  const int nx = static_cast<int>(weights.size());
  if (nx == 0 || conditionals.size() != static_cast<size_t>(nx))
    throw BadDims("cq_state: weights/conditionals mismatch");
  if (weights.minCoeff() < -1e-15) throw NotPsd("cq_state: negative weight");
  if (weights.sum() > 1.0 + Tol::ttol) throw NotPsd("cq_state: weights exceed unity");
  const int d = static_cast<int>(conditionals[0].rows());
  cmat m = cmat::Zero(static_cast<long long>(nx) * d, static_cast<long long>(nx) * d);
  for (int x = 0; x < nx; ++x) {
    if (conditionals[x].rows() != d) throw DimensionMismatch("cq_state: conditional size mismatch");
    m.block(static_cast<long long>(x) * d, static_cast<long long>(x) * d, d, d) =
        weights(x) * conditionals[x];
  }
  return DensityOperator(std::move(m), {nx, d}, {classical_label, quantum_label}, {true, false});
}

std::pair<rvec, std::vector<cmat>> cq_split(const DensityOperator& rho,
                                            const std::string& classical_subsystem) {
  DensityOperator r = rho.reorder_front({classical_subsystem});
  const int nx = r.dims()[0];
  const int d = r.dim() / nx;
  // Off-diagonal blocks must vanish.
  double offdiag = 0.0;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y) {
      if (x == y) continue;
      offdiag = std::max(offdiag, max_abs(r.matrix().block(static_cast<long long>(x) * d,
                                                           static_cast<long long>(y) * d, d, d)));
    }
  if (offdiag > Tol::ctol)
    throw NotClassical("cq_split: off-diagonal mass on the classical subsystem");
  rvec weights(nx);
  std::vector<cmat> conditionals;
  for (int x = 0; x < nx; ++x) {
    cmat block = r.matrix().block(static_cast<long long>(x) * d, static_cast<long long>(x) * d, d, d);
    const double w = block.trace().real();
    weights(x) = w;
    conditionals.push_back(w > 0 ? cmat(block / w) : cmat::Zero(d, d));
  }
  return {weights, conditionals};
}

}  // namespace qit
