#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cqed/isa.hpp"

using namespace cqed;
using std::numbers::pi;

namespace {

Matrix two_qubit(const GateOp& g) { return gate_matrix(g, {2, 2}); }

double poisson(double mean, int n) { return std::exp(-mean) * std::pow(mean, n) / std::tgamma(n + 1.0); }

double composition_error(int nf) {
  const Complex a(0.2, 0.0), b(0.0, -0.2);
  const Matrix lhs = gate_matrix(gate::d(0, a), {nf}) * gate_matrix(gate::d(0, b), {nf});
  const Matrix rhs = std::exp(kI * std::imag(a * std::conj(b))) * gate_matrix(gate::d(0, a + b), {nf});
  // Compare on the low Fock block where truncation does not reach.
  return max_abs((lhs - rhs).topLeftCorner(4, 4));
}

}  // namespace

TEST(Gates, SnapZeroIsIdentity) {
  EXPECT_LT(max_abs(gate_matrix(gate::snap(0, {0, 0, 0, 0}), {4}) - Matrix::Identity(4, 4)), 1e-15);
}

TEST(Gates, SnapPhasesPerLevel) {
  const Matrix m = gate_matrix(gate::snap(0, {0.1, -0.3}), {3});
  EXPECT_NEAR(std::abs(m(0, 0) - std::exp(-kI * 0.1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 1) - std::exp(kI * 0.3)), 0, 1e-15);
  EXPECT_NEAR(std::abs(m(2, 2) - 1.0), 0, 1e-15);
}

TEST(Gates, RotationIsDiagonalPhase) {
  const Matrix m = gate_matrix(gate::r(0, 0.7), {5});
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(std::abs(m(n, n) - std::exp(kI * 0.7 * double(n))), 0, 1e-14);
  EXPECT_NEAR(std::abs(gate_matrix(gate::r(0, pi), {4})(2, 2) - 1.0), 0, 1e-14);
}

TEST(Gates, ConditionalDisplacementMakesCoherentState) {
  const Matrix cd = gate_matrix(gate::cd(0, 1, 0.5), {2, 8});
  const Vector out = cd.col(0);  // |0>_q |vac>
  EXPECT_NEAR(std::norm(out[0]), std::exp(-0.25), 1e-6);
  for (int n = 0; n < 8; ++n) EXPECT_NEAR(std::norm(out[n]), poisson(0.25, n), 1e-6) << n;
  EXPECT_LT(out.tail(8).norm(), 1e-15);
}

TEST(Gates, ConditionalSectorsMatchUnconditionalGates) {
  const int nf = 6;
  const Complex beta(0.3, -0.2);
  const Matrix cd = gate_matrix(gate::cd(0, 1, beta), {2, nf});
  EXPECT_LT(max_abs(cd.topLeftCorner(nf, nf) - gate_matrix(gate::d(0, beta), {nf})), 1e-13);
  EXPECT_LT(max_abs(cd.bottomRightCorner(nf, nf) - gate_matrix(gate::d(0, -beta), {nf})), 1e-13);
  EXPECT_LT(max_abs(cd.topRightCorner(nf, nf)), 1e-15);

  const Matrix cr = gate_matrix(gate::cr(0, 1, 0.4), {2, nf});
  EXPECT_LT(max_abs(cr.topLeftCorner(nf, nf) - gate_matrix(gate::r(0, 0.4), {nf})), 1e-14);
  EXPECT_LT(max_abs(cr.bottomRightCorner(nf, nf) - gate_matrix(gate::r(0, -0.4), {nf})), 1e-14);
}

TEST(Gates, HadamardIsXTimesRy) {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  EXPECT_LT(max_abs(gate_matrix(gate::h(0), {2}) - h), 1e-15);
}

TEST(Gates, RyyByRzConjugationOfRxx) {
  // Rz(pi/2) maps X to Y under conjugation; a pi/4 angle in this
  // identity does not produce RYY.
  for (double theta : {0.3, 1.7, 5.0}) {
    const Matrix rxx = two_qubit(gate::rxx(0, 1, theta));
    const auto rz2 = [](double a) { return kron(gate_matrix(gate::rz(0, a), {2}), gate_matrix(gate::rz(0, a), {2})); };
    const Matrix ryy = two_qubit(gate::ryy(0, 1, theta));
    EXPECT_LT(max_abs(rz2(pi / 2) * rxx * rz2(-pi / 2) - ryy), 1e-12);
    EXPECT_GT(max_abs(rz2(-pi / 4) * rxx * rz2(pi / 4) - ryy), 0.1);
  }
}

TEST(Gates, RxxDefinition) {
  const double t = 0.9;
  const Matrix xx = kron(pauli_x(), pauli_x());
  const Matrix expect = std::cos(t / 2) * Matrix::Identity(4, 4) - kI * std::sin(t / 2) * xx;
  EXPECT_LT(max_abs(two_qubit(gate::rxx(0, 1, t)) - expect), 1e-14);
}

TEST(Gates, AllUnitaryOnTruncatedSpace) {
  const std::vector<std::pair<GateOp, std::vector<int>>> cases = {
      {gate::rx(0, 1.1), {2}},          {gate::ry(0, -0.4), {2}},
      {gate::rz(0, 7.0), {2}},          {gate::h(0), {2}},
      {gate::cnot(0, 1), {2, 2}},       {gate::swap(0, 1), {2, 2}},
      {gate::rxx(0, 1, 2.2), {2, 2}},   {gate::ryy(0, 1, -1.3), {2, 2}},
      {gate::d(0, {1.5, 0.7}), {10}},   {gate::r(0, 3.0), {7}},
      {gate::snap(0, {0.3, 1.0, 2.0}), {5}},
      {gate::bs(0, 1, 1.2, 0.4), {4, 5}},
      {gate::cd(0, 1, {0.0, 2.0}), {2, 9}},
      {gate::cr(0, 1, 1.4), {2, 6}},    {gate::cry(0, 1, 0.8), {2, 2}},
      {gate::cz(0, 1), {2, 2}},
  };
  for (const auto& [g, dims] : cases) EXPECT_TRUE(is_unitary(gate_matrix(g, dims), 1e-10)) << kind_name(g.kind);
}

TEST(Gates, DisplacementCompositionTightensWithTruncation) {
  const double e8 = composition_error(8), e16 = composition_error(16), e24 = composition_error(24);
  EXPECT_LT(e16, 1e-6);
  EXPECT_LE(e16, e8);
  EXPECT_LE(e24, e16 + 1e-15);
}

TEST(Gates, BeamSplitterSwapsAtPi) {
  // BS(pi, 0) = exp(-i pi/2 (a^+ b + a b^+)) maps |1,0> to -i |0,1>.
  const Matrix m = gate_matrix(gate::bs(0, 1, pi, 0.0), {3, 3});
  EXPECT_NEAR(std::abs(m(0 * 3 + 1, 1 * 3 + 0) - Complex(0, -1)), 0, 1e-12);
}

TEST(Normalize, ReducesIntoNominalRanges) {
  EXPECT_NEAR(gate::rx(0, -0.5).params[0], 4 * pi - 0.5, 1e-12);
  EXPECT_NEAR(gate::r(0, 2 * pi + 0.25).params[0], 0.25, 1e-12);
  EXPECT_NEAR(gate::cr(0, 1, -0.25).params[0], 2 * pi - 0.25, 1e-12);
  const GateOp bs = gate::bs(0, 1, 0.4, pi + 0.3);
  EXPECT_NEAR(bs.params[1], 0.3, 1e-12);
  // Same unitary after reduction.
  EXPECT_LT(max_abs(gate_matrix(bs, {3, 3}) - gate_matrix(GateOp{GateKind::BS, {0, 1}, {0.4, pi + 0.3}, {}}, {3, 3})),
            1e-12);
  EXPECT_LT(max_abs(gate_matrix(gate::rx(0, -0.5), {2}) - gate_matrix(GateOp{GateKind::Rx, {0}, {-0.5}, {}}, {2})),
            1e-14);
}

TEST(Normalize, RejectsNonFinite) {
  EXPECT_THROW(gate::rz(0, std::nan("")), std::invalid_argument);
  EXPECT_THROW(gate::d(0, {INFINITY, 0}), std::invalid_argument);
}

TEST(Swap, ThreeCnotsEqualSwap) {
  const auto ops = decompose_swap(0, 1);
  ASSERT_EQ(ops.size(), 3u);
  for (const auto& g : ops) EXPECT_EQ(g.kind, GateKind::CNOT);
  HilbertLayout l;
  l.add_qubit();
  l.add_qubit();
  const Matrix u = ops_unitary(ops, l);
  EXPECT_LT(max_abs(u - two_qubit(gate::swap(0, 1))), 1e-15);
  EXPECT_LT(max_abs(u * u - Matrix::Identity(4, 4)), 1e-15);
  const Vector out = u * basis_state(l, {0, 1}).amplitudes;
  EXPECT_NEAR(std::abs(out[l.flatten({1, 0})]), 1.0, 1e-15);
}

TEST(Swap, CavityOnlyCnotTemplate) {
  const auto ops = decompose_cnot_cavity_only(0, 1, 2, 3);
  ASSERT_EQ(ops.size(), 8u);
  int bs = 0, cd = 0;
  for (const auto& g : ops) {
    bs += g.kind == GateKind::BS;
    cd += g.kind == GateKind::CD;
  }
  EXPECT_EQ(bs, 4);
  EXPECT_EQ(cd, 4);
}

TEST(Validate, TargetKinds) {
  HilbertLayout l;
  l.add_qubit();
  l.add_qumode(3);
  EXPECT_NO_THROW(validate_op(gate::cd(0, 1, 0.1), l));
  EXPECT_THROW(validate_op(gate::cd(1, 0, 0.1), l), std::invalid_argument);
  EXPECT_THROW(validate_op(gate::measure(1), l), std::invalid_argument);
  EXPECT_THROW(validate_op(gate::reset(1), l), std::invalid_argument);
  EXPECT_THROW(validate_op(gate::d(0, 0.1), l), std::invalid_argument);
  EXPECT_THROW(validate_op(gate::rx(3, 0.1), l), std::invalid_argument);
}

TEST(TextIr, RoundTripIsExact) {
  Circuit c;
  c.layout.add_qubit("q");
  c.layout.add_qumode(4, "m");
  c.layout.add_qubit("x");
  c.append(gate::rx(0, 0.1234567890123456789));
  c.append(gate::cd(0, 1, {1.0 / 3, -2.0 / 7}));
  c.append(gate::snap(1, {0.1, 0.2, 0.3}));
  c.append(gate::cnot(0, 2));
  c.append(gate::measure(2));
  c.append(gate::reset(2));
  c.append(gate::amp_damp(0, 1e-5));
  c.ops[1].tag = "H1 site A";
  const std::string text = to_text(c);
  const auto back = parse_ops(text);
  ASSERT_EQ(back.size(), c.ops.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].kind, c.ops[i].kind);
    EXPECT_EQ(back[i].targets, c.ops[i].targets);
    EXPECT_EQ(back[i].params, c.ops[i].params);
    EXPECT_EQ(back[i].tag, c.ops[i].tag);
  }
  EXPECT_NE(text.find("CD 0 1"), std::string::npos);
}

TEST(TextIr, MalformedLinesReportLineNumber) {
  try {
    parse_ops("RX 0 0.1\nCNOT 0\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_ops("FOO 1 2\n"), std::invalid_argument);
  EXPECT_THROW(parse_ops("RX 0 abc\n"), std::invalid_argument);
}
