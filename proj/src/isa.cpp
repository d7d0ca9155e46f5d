#include "cqed/isa.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace cqed {

namespace {

using std::numbers::pi;

struct KindInfo {
  GateKind kind;
  const char* name;
  int n_targets;
  int n_params;  // -1: variable (SNAP)
};

constexpr std::array<KindInfo, 23> kKinds{{
    {GateKind::Rx, "RX", 1, 1},        {GateKind::Ry, "RY", 1, 1},
    {GateKind::Rz, "RZ", 1, 1},        {GateKind::X, "X", 1, 0},
    {GateKind::Z, "Z", 1, 0},          {GateKind::H, "H", 1, 0},
    {GateKind::CNOT, "CNOT", 2, 0},    {GateKind::SWAP, "SWAP", 2, 0},
    {GateKind::RXX, "RXX", 2, 1},      {GateKind::RYY, "RYY", 2, 1},
    {GateKind::D, "D", 1, 2},          {GateKind::R, "R", 1, 1},
    {GateKind::SNAP, "SNAP", 1, -1},   {GateKind::BS, "BS", 2, 2},
    {GateKind::CD, "CD", 2, 2},        {GateKind::CR, "CR", 2, 1},
    {GateKind::CRy, "CRY", 2, 1},      {GateKind::CZ, "CZ", 2, 0},
    {GateKind::Measure, "MEASURE", 1, 0}, {GateKind::Reset, "RESET", 1, 0},
    {GateKind::AmpDamp, "AMPDAMP", 1, 1}, {GateKind::Dephase, "DEPHASE", 1, 1},
    {GateKind::PhotonLoss, "PHOTONLOSS", 1, 1},
}};

const KindInfo& info(GateKind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i;
  throw std::invalid_argument("unknown gate kind");
}

double wrap(double x, double range) {
  double r = std::fmod(x, range);
  if (r < 0) r += range;
  if (r >= range) r = 0.0;
  return r;
}

GateOp make(GateKind k, std::vector<int> targets, std::vector<double> params = {}) {
  GateOp g{k, std::move(targets), std::move(params), {}};
  normalize(g);
  return g;
}

// Which targets must be qubits (true) or qumodes (false).
std::vector<bool> target_is_qubit(GateKind k) {
  switch (k) {
    case GateKind::D:
    case GateKind::R:
    case GateKind::SNAP:
    case GateKind::PhotonLoss:
      return {false};
    case GateKind::BS:
      return {false, false};
    case GateKind::CD:
    case GateKind::CR:
      return {true, false};
    default:
      return std::vector<bool>(info(k).n_targets, true);
  }
}

Matrix displacement(Complex beta, int n) {
  Matrix b = annihilation(n);
  return expm_hermitian(kI * (beta * b.adjoint() - std::conj(beta) * b));
}

Matrix rotation_diag(double theta, int n) {
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = std::exp(kI * (theta * k));
  return m;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

Matrix pauli_rotation(const Matrix& sigma, double theta) {
  return std::cos(theta / 2) * Matrix::Identity(sigma.rows(), sigma.cols()) -
         kI * std::sin(theta / 2) * sigma;
}

}  // namespace

const char* kind_name(GateKind k) { return info(k).name; }

GateKind kind_from_name(const std::string& name) {
  for (const auto& i : kKinds)
    if (name == i.name) return i.kind;
  throw std::invalid_argument("unknown gate kind '" + name + "'");
}

bool is_noise_kind(GateKind k) {
  return k == GateKind::AmpDamp || k == GateKind::Dephase || k == GateKind::PhotonLoss;
}

bool is_unitary_kind(GateKind k) {
  return !is_noise_kind(k) && k != GateKind::Measure && k != GateKind::Reset;
}

namespace gate {
GateOp rx(int q, double t) { return make(GateKind::Rx, {q}, {t}); }
GateOp ry(int q, double t) { return make(GateKind::Ry, {q}, {t}); }
GateOp rz(int q, double t) { return make(GateKind::Rz, {q}, {t}); }
GateOp x(int q) { return make(GateKind::X, {q}); }
GateOp z(int q) { return make(GateKind::Z, {q}); }
GateOp h(int q) { return make(GateKind::H, {q}); }
GateOp cnot(int c, int t) { return make(GateKind::CNOT, {c, t}); }
GateOp swap(int a, int b) { return make(GateKind::SWAP, {a, b}); }
GateOp rxx(int a, int b, double t) { return make(GateKind::RXX, {a, b}, {t}); }
GateOp ryy(int a, int b, double t) { return make(GateKind::RYY, {a, b}, {t}); }
GateOp d(int m, Complex beta) { return make(GateKind::D, {m}, {beta.real(), beta.imag()}); }
GateOp r(int m, double t) { return make(GateKind::R, {m}, {t}); }
GateOp snap(int m, std::vector<double> phases) {
  return make(GateKind::SNAP, {m}, std::move(phases));
}
GateOp bs(int m1, int m2, double t, double phi) { return make(GateKind::BS, {m1, m2}, {t, phi}); }
GateOp cd(int q, int m, Complex beta) {
  return make(GateKind::CD, {q, m}, {beta.real(), beta.imag()});
}
GateOp cr(int q, int m, double t) { return make(GateKind::CR, {q, m}, {t}); }
GateOp cry(int c, int t, double theta) { return make(GateKind::CRy, {c, t}, {theta}); }
GateOp cz(int c, int t) { return make(GateKind::CZ, {c, t}); }
GateOp measure(int q) { return make(GateKind::Measure, {q}); }
GateOp reset(int q) { return make(GateKind::Reset, {q}); }
GateOp amp_damp(int q, double p) { return make(GateKind::AmpDamp, {q}, {p}); }
GateOp dephase(int q, double p) { return make(GateKind::Dephase, {q}, {p}); }
GateOp photon_loss(int m, double p) { return make(GateKind::PhotonLoss, {m}, {p}); }
}  // namespace gate

void normalize(GateOp& g) {
  const auto& ki = info(g.kind);
  if (static_cast<int>(g.targets.size()) != ki.n_targets)
    throw std::invalid_argument(std::string(ki.name) + ": wrong number of targets");
  if (ki.n_params >= 0 && static_cast<int>(g.params.size()) != ki.n_params)
    throw std::invalid_argument(std::string(ki.name) + ": wrong number of parameters");
  for (double p : g.params)
    if (!std::isfinite(p)) throw std::invalid_argument(std::string(ki.name) + ": non-finite parameter");

  switch (g.kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::RXX:
    case GateKind::RYY:
    case GateKind::CRy:
      g.params[0] = wrap(g.params[0], 4 * pi);
      break;
    case GateKind::R:
    case GateKind::CR:
      g.params[0] = wrap(g.params[0], 2 * pi);
      break;
    case GateKind::BS: {
      // BS(t, p + pi) = BS(-t, p)
      const double k = std::floor(g.params[1] / pi);
      g.params[1] -= k * pi;
      if (g.params[1] >= pi || g.params[1] < 0) g.params[1] = wrap(g.params[1], pi);
      if (std::fmod(std::abs(k), 2.0) == 1.0) g.params[0] = -g.params[0];
      g.params[0] = wrap(g.params[0], 4 * pi);
      break;
    }
    case GateKind::AmpDamp:
    case GateKind::Dephase:
    case GateKind::PhotonLoss:
      if (g.params[0] < 0 || g.params[0] > 1)
        throw std::invalid_argument(std::string(ki.name) + ": probability outside [0,1]");
      break;
    default:
      break;
  }
}

Complex beta_of(const GateOp& g) {
  if (g.kind != GateKind::D && g.kind != GateKind::CD)
    throw std::invalid_argument("beta_of: not a displacement");
  return {g.params.at(0), g.params.at(1)};
}

Matrix gate_matrix(const GateOp& g, const std::vector<int>& dims) {
  const auto kinds = target_is_qubit(g.kind);
  if (dims.size() != kinds.size())
    throw std::invalid_argument(std::string(kind_name(g.kind)) + ": wrong arity");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (kinds[i] && dims[i] != 2)
      throw std::invalid_argument(std::string(kind_name(g.kind)) + ": qubit target must have dim 2");
    if (!kinds[i] && dims[i] < 2)
      throw std::invalid_argument(std::string(kind_name(g.kind)) + ": qumode dim must be >= 2");
  }
  for (double p : g.params)
    if (!std::isfinite(p)) throw std::invalid_argument("non-finite gate parameter");

  const Matrix I2 = Matrix::Identity(2, 2);
  switch (g.kind) {
    case GateKind::Rx:
      return pauli_rotation(pauli_x(), g.params.at(0));
    case GateKind::Ry:
      return pauli_rotation(pauli_y(), g.params.at(0));
    case GateKind::Rz:
      return pauli_rotation(pauli_z(), g.params.at(0));
    case GateKind::X:
      return pauli_x();
    case GateKind::Z:
      return pauli_z();
    case GateKind::H:
      return pauli_x() * pauli_rotation(pauli_y(), pi / 2);
    case GateKind::CNOT:
      return block_diag(I2, pauli_x());
    case GateKind::SWAP: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = m(1, 2) = m(2, 1) = 1.0;
      return m;
    }
    case GateKind::RXX:
      return pauli_rotation(kron(pauli_x(), pauli_x()), g.params.at(0));
    case GateKind::RYY:
      return pauli_rotation(kron(pauli_y(), pauli_y()), g.params.at(0));
    case GateKind::D:
      return displacement(beta_of(g), dims[0]);
    case GateKind::R:
      return rotation_diag(g.params.at(0), dims[0]);
    case GateKind::SNAP: {
      if (static_cast<int>(g.params.size()) > dims[0])
        throw std::invalid_argument("SNAP: more phases than Fock levels");
      Matrix m = Matrix::Identity(dims[0], dims[0]);
      for (std::size_t n = 0; n < g.params.size(); ++n) m(n, n) = std::exp(-kI * g.params[n]);
      return m;
    }
    case GateKind::BS: {
      const Matrix b = annihilation(dims[0]), c = annihilation(dims[1]);
      const Complex e = std::exp(kI * g.params.at(1));
      const Matrix gen = e * kron(b.adjoint(), c) + std::conj(e) * kron(b, c.adjoint());
      return expm_hermitian(0.5 * g.params.at(0) * gen);
    }
    case GateKind::CD: {
      const Complex beta = beta_of(g);
      return block_diag(displacement(beta, dims[1]), displacement(-beta, dims[1]));
    }
    case GateKind::CR:
      return block_diag(rotation_diag(g.params.at(0), dims[1]),
                        rotation_diag(-g.params.at(0), dims[1]));
    case GateKind::CRy:
      return block_diag(I2, pauli_rotation(pauli_y(), g.params.at(0)));
    case GateKind::CZ:
      return block_diag(I2, pauli_z());
    default:
      throw std::invalid_argument(std::string(kind_name(g.kind)) + " has no unitary matrix");
  }
}

Matrix gate_matrix(const GateOp& g, const HilbertLayout& layout) {
  validate_op(g, layout);
  std::vector<int> dims;
  for (int t : g.targets) dims.push_back(layout.dim(t));
  return gate_matrix(g, dims);
}

void validate_op(const GateOp& g, const HilbertLayout& layout) {
  const auto kinds = target_is_qubit(g.kind);
  if (g.targets.size() != kinds.size())
    throw std::invalid_argument(std::string(kind_name(g.kind)) + ": wrong number of targets");
  validate_targets(layout, g.targets, local_dim_of(layout, g.targets));
  for (std::size_t i = 0; i < kinds.size(); ++i)
    if (layout.is_qubit(g.targets[i]) != kinds[i])
      throw std::invalid_argument(std::string(kind_name(g.kind)) + ": target " +
                                  std::to_string(g.targets[i]) + " has the wrong subsystem kind");
}

std::vector<GateOp> decompose_swap(int a, int b) {
  return {gate::cnot(a, b), gate::cnot(b, a), gate::cnot(a, b)};
}

std::vector<GateOp> decompose_cnot_cavity_only(int cq, int cm, int tq, int tm) {
  const Complex beta{0.25, 0.0};
  return {gate::bs(cm, tm, pi / 2, 0.0), gate::cd(cq, cm, beta),
          gate::bs(cm, tm, -pi / 2, 0.0), gate::cd(tq, tm, beta),
          gate::bs(cm, tm, pi / 2, 0.0), gate::cd(cq, cm, -beta),
          gate::bs(cm, tm, -pi / 2, 0.0), gate::cd(tq, tm, -beta)};
}

void validate_circuit(const Circuit& c) {
  for (const auto& g : c.ops) validate_op(g, c.layout);
}

Matrix ops_unitary(const std::vector<GateOp>& ops, const HilbertLayout& layout) {
  if (layout.total_dim() > 8192) throw std::invalid_argument("ops_unitary: layout too large");
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  Matrix u = Matrix::Identity(n, n);
  for (const auto& g : ops) {
    if (!is_unitary_kind(g.kind))
      throw std::invalid_argument("ops_unitary: non-unitary op " + std::string(kind_name(g.kind)));
    const Matrix m = gate_matrix(g, layout);
    LocalAction act(layout, g.targets);
    for (Eigen::Index j = 0; j < n; ++j) {
      Vector col = u.col(j);
      act.apply(m, col);
      u.col(j) = col;
    }
  }
  return u;
}

Matrix circuit_unitary(const Circuit& c) { return ops_unitary(c.ops, c.layout); }

std::string to_text(const Circuit& c) {
  std::ostringstream os;
  os << "# layout:";
  for (int i = 0; i < c.layout.size(); ++i) {
    const auto& s = c.layout[i];
    os << ' ' << (s.kind == SubsystemKind::Qubit ? "q" : "m") << s.dim;
    if (!s.label.empty()) os << ':' << s.label;
  }
  os << '\n' << std::setprecision(17);
  for (const auto& g : c.ops) {
    os << kind_name(g.kind);
    for (int t : g.targets) os << ' ' << t;
    for (double p : g.params) os << ' ' << p;
    if (!g.tag.empty()) os << " # " << g.tag;
    os << '\n';
  }
  return os.str();
}

std::vector<GateOp> parse_ops(const std::string& text) {
  std::vector<GateOp> ops;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string tag;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      tag = line.substr(hash + 1);
      line.resize(hash);
      const auto first = tag.find_first_not_of(' ');
      tag = first == std::string::npos ? std::string{} : tag.substr(first);
    }
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    try {
      const GateKind k = kind_from_name(name);
      const auto& ki = info(k);
      GateOp g{k, {}, {}, tag};
      for (int i = 0; i < ki.n_targets; ++i) {
        int t;
        if (!(ls >> t)) throw std::invalid_argument("missing target");
        g.targets.push_back(t);
      }
      double p;
      while (ls >> p) g.params.push_back(p);
      if (!ls.eof()) throw std::invalid_argument("malformed parameter");
      normalize(g);
      ops.push_back(std::move(g));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ops;
}

}  // namespace cqed
