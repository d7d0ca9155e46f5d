#pragma once

// Mixed qubit/qumode tensor-product spaces.
//
// Index convention (global): the first-listed subsystem is the slowest-varying
// digit of the flat index, so embed(A, {0}) ⊗ embed(B, {1}) == kron(A, B).
// Qubit basis: |0> = ground, |1> = excited; sigma_z = diag(1, -1).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cqed/linalg.hpp"

namespace cqed {

enum class SubsystemKind { Qubit, Qumode };

struct Subsystem {
  SubsystemKind kind;
  int dim;
  std::string label;
};

class HilbertLayout {
 public:
  int add_qubit(std::string label = {});
  int add_qumode(int n_fock, std::string label = {});

  int size() const { return static_cast<int>(subs_.size()); }
  const Subsystem& operator[](int i) const { return subs_.at(i); }
  int dim(int i) const { return subs_.at(i).dim; }
  bool is_qubit(int i) const { return subs_.at(i).kind == SubsystemKind::Qubit; }
  std::size_t stride(int i) const { return strides_.at(i); }
  std::size_t total_dim() const { return total_; }

  int digit(std::size_t index, int sub) const {
    return static_cast<int>((index / strides_[sub]) % subs_[sub].dim);
  }
  std::size_t flatten(const std::vector<int>& digits) const;
  std::vector<int> unflatten(std::size_t index) const;

  // -1 when absent.
  int find(const std::string& label) const;
  int at(const std::string& label) const;

  bool operator==(const HilbertLayout& o) const;

 private:
  void rebuild();
  std::vector<Subsystem> subs_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

// Throws std::invalid_argument on duplicate/out-of-range targets or when
// local_dim differs from the product of target dims.
void validate_targets(const HilbertLayout& layout, const std::vector<int>& targets,
                      std::size_t local_dim);
std::size_t local_dim_of(const HilbertLayout& layout, const std::vector<int>& targets);

struct StateVector {
  HilbertLayout layout;
  Vector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

StateVector basis_state(const HilbertLayout& layout, const std::vector<int>& digits);
StateVector vacuum_state(const HilbertLayout& layout);

Matrix embed(const Matrix& local_op, const std::vector<int>& targets, const HilbertLayout& layout);
SparseMatrix embed_sparse(const Matrix& local_op, const std::vector<int>& targets,
                          const HilbertLayout& layout);

// Index tables for applying a local operator without forming the full matrix.
// offsets[j] is the flat offset of local basis state j, bases enumerates the
// flat indices whose target digits are all zero.
class LocalAction {
 public:
  LocalAction() = default;
  LocalAction(const HilbertLayout& layout, std::vector<int> targets);

  std::size_t local_dim() const { return offsets_.size(); }
  const std::vector<int>& targets() const { return targets_; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<std::size_t>& bases() const { return bases_; }

  void apply(const Matrix& op, Vector& amps) const;
  void apply_diagonal(const Vector& diag, Vector& amps) const;

 private:
  std::vector<int> targets_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> bases_;
};

void apply_local_inplace(Vector& amps, const HilbertLayout& layout, const Matrix& local_op,
                         const std::vector<int>& targets);
StateVector apply_local(const StateVector& state, const Matrix& local_op,
                        const std::vector<int>& targets);

// Per-shot RNG streams keyed by (seed, stream); order independent.
using Rng = std::mt19937_64;
std::uint64_t splitmix64(std::uint64_t x);
Rng make_rng(std::uint64_t seed, std::uint64_t stream);
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double probability_one(const Vector& amps, const HilbertLayout& layout, int qubit);

// Projects onto qubit = outcome and renormalizes. A zero-norm projection is a
// numerical degeneracy and throws NumericalError.
void project_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit, int outcome);
int measure_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit, Rng& rng);
void flip_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit);
int reset_qubit_inplace(Vector& amps, const HilbertLayout& layout, int qubit, Rng& rng);

struct MeasureResult {
  int outcome;
  StateVector collapsed;
  double probability;  // Born probability of the observed outcome
};

MeasureResult measure_qubit(const StateVector& state, int qubit, Rng& rng);
StateVector reset_qubit(const StateVector& state, int qubit, Rng& rng);

// P(qubit = 1) for each listed qubit.
std::vector<double> populations(const StateVector& state, const std::vector<int>& qubits);
std::vector<double> populations(const Vector& amps, const HilbertLayout& layout,
                                const std::vector<int>& qubits);

}  // namespace cqed
