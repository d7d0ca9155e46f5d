#include "cqed/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cqed {

int HilbertLayout::add_qubit(std::string label) {
  subs_.push_back({SubsystemKind::Qubit, 2, std::move(label)});
  rebuild();
  return size() - 1;
}

int HilbertLayout::add_qumode(int n_fock, std::string label) {
  if (n_fock < 2) throw std::invalid_argument("qumode truncation must be >= 2");
  subs_.push_back({SubsystemKind::Qumode, n_fock, std::move(label)});
  rebuild();
  return size() - 1;
}

void HilbertLayout::rebuild() {
  strides_.assign(subs_.size(), 1);
  total_ = 1;
  for (int i = size() - 1; i >= 0; --i) {
    strides_[i] = total_;
    total_ *= static_cast<std::size_t>(subs_[i].dim);
  }
}

std::size_t HilbertLayout::flatten(const std::vector<int>& digits) const {
  if (static_cast<int>(digits.size()) != size())
    throw std::invalid_argument("flatten: digit count does not match layout");
  std::size_t idx = 0;
  for (int i = 0; i < size(); ++i) {
    if (digits[i] < 0 || digits[i] >= subs_[i].dim)
      throw std::invalid_argument("flatten: digit out of range");
    idx += strides_[i] * static_cast<std::size_t>(digits[i]);
  }
  return idx;
}

std::vector<int> HilbertLayout::unflatten(std::size_t index) const {
  if (index >= total_) throw std::invalid_argument("unflatten: index out of range");
  std::vector<int> d(subs_.size());
  for (int i = 0; i < size(); ++i) d[i] = digit(index, i);
  return d;
}

int HilbertLayout::find(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (subs_[i].label == label) return i;
  return -1;
}

int HilbertLayout::at(const std::string& label) const {
  int i = find(label);
  if (i < 0) throw std::invalid_argument("no subsystem labelled '" + label + "'");
  return i;
}

bool HilbertLayout::operator==(const HilbertLayout& o) const {
  if (size() != o.size()) return false;
  for (int i = 0; i < size(); ++i)
    if (subs_[i].kind != o.subs_[i].kind || subs_[i].dim != o.subs_[i].dim) return false;
  return true;
}

std::size_t local_dim_of(const HilbertLayout& layout, const std::vector<int>& targets) {
  std::size_t d = 1;
  for (int t : targets) {
    if (t < 0 || t >= layout.size())
      throw std::invalid_argument("target " + std::to_string(t) + " out of range");
    d *= static_cast<std::size_t>(layout.dim(t));
  }
  return d;
}

void validate_targets(const HilbertLayout& layout, const std::vector<int>& targets,
                      std::size_t local_dim) {
  if (targets.empty()) throw std::invalid_argument("no targets given");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= layout.size())
      throw std::invalid_argument("target " + std::to_string(targets[i]) + " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j])
        throw std::invalid_argument("duplicate target " + std::to_string(targets[i]));
  }
  if (local_dim_of(layout, targets) != local_dim)
    throw std::invalid_argument("local operator dimension does not match targets");
}

StateVector basis_state(const HilbertLayout& layout, const std::vector<int>& digits) {
  StateVector s{layout, Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()))};
  s.amplitudes(static_cast<Eigen::Index>(layout.flatten(digits))) = 1.0;
  return s;
}

StateVector vacuum_state(const HilbertLayout& layout) {
  return basis_state(layout, std::vector<int>(layout.size(), 0));
}

LocalAction::LocalAction(const HilbertLayout& layout, std::vector<int> targets)
    : targets_(std::move(targets)) {
  const std::size_t d = local_dim_of(layout, targets_);
  validate_targets(layout, targets_, d);

  offsets_.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t rem = j, off = 0;
    for (int k = static_cast<int>(targets_.size()) - 1; k >= 0; --k) {
      const int t = targets_[k];
      off += (rem % layout.dim(t)) * layout.stride(t);
      rem /= layout.dim(t);
    }
    offsets_[j] = off;
  }

  std::vector<int> rest;
  for (int i = 0; i < layout.size(); ++i)
    if (std::find(targets_.begin(), targets_.end(), i) == targets_.end()) rest.push_back(i);

  bases_.reserve(layout.total_dim() / d);
  std::vector<int> counter(rest.size(), 0);
  std::size_t base = 0;
  while (true) {
    bases_.push_back(base);
    int k = static_cast<int>(rest.size()) - 1;
    for (; k >= 0; --k) {
      const int s = rest[k];
      if (++counter[k] < layout.dim(s)) {
        base += layout.stride(s);
        break;
      }
      base -= layout.stride(s) * static_cast<std::size_t>(counter[k] - 1);
      counter[k] = 0;
    }
    if (k < 0) break;
  }
}

void LocalAction::apply(const Matrix& op, Vector& amps) const {
  const std::size_t d = offsets_.size();
  if (static_cast<std::size_t>(op.rows()) != d || static_cast<std::size_t>(op.cols()) != d)
    throw std::invalid_argument("LocalAction::apply: operator dimension mismatch");
  Complex* a = amps.data();
  const Complex* m = op.data();  // column-major
  std::vector<Complex> in(d), out(d);
  for (std::size_t base : bases_) {
    for (std::size_t j = 0; j < d; ++j) in[j] = a[base + offsets_[j]];
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    for (std::size_t j = 0; j < d; ++j) {
      const Complex v = in[j];
      if (v == Complex(0.0, 0.0)) continue;
      const Complex* col = m + j * d;
      for (std::size_t i = 0; i < d; ++i) out[i] += col[i] * v;
    }
    for (std::size_t i = 0; i < d; ++i) a[base + offsets_[i]] = out[i];
  }
}

void LocalAction::apply_diagonal(const Vector& diag, Vector& amps) const {
  const std::size_t d = offsets_.size();
  Complex* a = amps.data();
  for (std::size_t base : bases_)
    for (std::size_t j = 0; j < d; ++j) a[base + offsets_[j]] *= diag[j];
}

Matrix embed(const Matrix& local_op, const std::vector<int>& targets,
             const HilbertLayout& layout) {
  return Matrix(embed_sparse(local_op, targets, layout));
}

SparseMatrix embed_sparse(const Matrix& local_op, const std::vector<int>& targets,
                          const HilbertLayout& layout) {
  if (local_op.rows() != local_op.cols()) throw std::invalid_argument("embed: non-square operator");
  LocalAction act(layout, targets);
  if (static_cast<std::size_t>(local_op.rows()) != act.local_dim())
    throw std::invalid_argument("embed: dimension mismatch");
  const std::size_t d = act.local_dim();
  std::vector<Eigen::Triplet<Complex>> trip;
  std::size_t nnz_local = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (local_op(i, j) != Complex(0.0, 0.0)) ++nnz_local;
  trip.reserve(nnz_local * act.bases().size());
  for (std::size_t base : act.bases())
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const Complex v = local_op(i, j);
        if (v != Complex(0.0, 0.0))
          trip.emplace_back(base + act.offsets()[i], base + act.offsets()[j], v);
      }
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  SparseMatrix out(n, n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

void apply_local_inplace(Vector& amps, const HilbertLayout& layout, const Matrix& local_op,
                         const std::vector<int>& targets) {
  if (static_cast<std::size_t>(amps.size()) != layout.total_dim())
    throw std::invalid_argument("apply_local: state size does not match layout");
  LocalAction(layout, targets).apply(local_op, amps);
}

StateVector apply_local(const StateVector& state, const Matrix& local_op,
                        const std::vector<int>& targets) {
  StateVector out = state;
  apply_local_inplace(out.amplitudes, out.layout, local_op, targets);
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{splitmix64(seed), splitmix64(seed ^ splitmix64(stream + 1))};
  return Rng(seq);
}

static void require_qubit(const HilbertLayout& layout, int qubit) {
  if (qubit < 0 || qubit >= layout.size()) throw std::invalid_argument("qubit index out of range");
  if (!layout.is_qubit(qubit))
    throw std::invalid_argument("subsystem " + std::to_string(qubit) + " is not a qubit");
}

double probability_one(const Vector& amps, const HilbertLayout& layout, int qubit) {
  require_qubit(layout, qubit);
  const std::size_t s = layout.stride(qubit), n = layout.total_dim();
  double p1 = 0.0;
  for (std::size_t hi = 0; hi < n; hi += 2 * s)
    for (std::size_t lo = 0; lo < s; ++lo) p1 += std::norm(amps[hi + s + lo]);
  return p1;
}

void project_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit, int outcome) {
  require_qubit(layout, qubit);
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  const std::size_t s = layout.stride(qubit), n = layout.total_dim();
  const std::size_t keep = outcome == 1 ? s : 0, drop = s - keep;
  double kept = 0.0;
  for (std::size_t hi = 0; hi < n; hi += 2 * s)
    for (std::size_t lo = 0; lo < s; ++lo) {
      kept += std::norm(amps[hi + keep + lo]);
      amps[hi + drop + lo] = 0.0;
    }
  if (!(kept > 1e-300))
    throw NumericalError("projection of qubit " + std::to_string(qubit) + " onto |" +
                         std::to_string(outcome) + "> has zero norm");
  amps /= std::sqrt(kept);
}

int measure_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit, Rng& rng) {
  const double total = amps.squaredNorm();
  const double p1 = probability_one(amps, layout, qubit) / total;
  const int outcome = uniform01(rng) < p1 ? 1 : 0;
  project_qubit_inplace(amps, layout, qubit, outcome);
  return outcome;
}

void flip_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit) {
  require_qubit(layout, qubit);
  const std::size_t s = layout.stride(qubit), n = layout.total_dim();
  for (std::size_t hi = 0; hi < n; hi += 2 * s)
    for (std::size_t lo = 0; lo < s; ++lo) std::swap(amps[hi + lo], amps[hi + s + lo]);
}

int reset_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit, Rng& rng) {
  const int outcome = measure_qubit_inplace(amps, layout, qubit, rng);
  if (outcome == 1) flip_qubit_inplace(amps, layout, qubit);
  return outcome;
}

MeasureResult measure_qubit(const StateVector& state, int qubit, Rng& rng) {
  MeasureResult r{0, state, 0.0};
  const double total = state.amplitudes.squaredNorm();
  const double p1 = probability_one(state.amplitudes, state.layout, qubit) / total;
  r.outcome = measure_qubit_inplace(r.collapsed.amplitudes, r.collapsed.layout, qubit, rng);
  r.probability = r.outcome == 1 ? p1 : 1.0 - p1;
  return r;
}

StateVector reset_qubit(const StateVector& state, int qubit, Rng& rng) {
  StateVector out = state;
  reset_qubit_inplace(out.amplitudes, out.layout, qubit, rng);
  return out;
}

std::vector<double> populations(const Vector& amps, const HilbertLayout& layout,
                                const std::vector<int>& qubits) {
  const double total = amps.squaredNorm();
  std::vector<double> p;
  p.reserve(qubits.size());
  for (int q : qubits) p.push_back(std::clamp(probability_one(amps, layout, q) / total, 0.0, 1.0));
  return p;
}

std::vector<double> populations(const StateVector& state, const std::vector<int>& qubits) {
  return populations(state.amplitudes, state.layout, qubits);
}

}  // namespace cqed
