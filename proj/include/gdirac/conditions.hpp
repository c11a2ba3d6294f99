#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gdirac/graph.hpp"
#include "gdirac/spinor.hpp"

namespace gdirac {

using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

/// Where one trace slot of C^M comes from.
///
/// Every origin end (segment coordinate 0, half-line base point) contributes
/// Gamma0 = psi1 and Gamma1 = i c psi2; every segment far end contributes
/// Gamma0 = i c psi2 and Gamma1 = psi1. With this choice the abstract Green
/// identity holds with the sign <G1 f, G0 g> - <G0 f, G1 g> and the edge Weyl
/// blocks are Herglotz.
struct TraceSlot {
  std::size_t edge = 0;
  EndKind end = EndKind::origin;
  int gamma0_component = 1;  // 1 -> psi1, 2 -> psi2
  bool gamma0_scaled = false;  // multiplier i c instead of 1
  int gamma1_component = 2;
  bool gamma1_scaled = true;
};

class TraceIndexMap {
 public:
  explicit TraceIndexMap(const MetricGraph& g);

  std::size_t dimension() const noexcept { return slots_.size(); }
  const std::vector<TraceSlot>& slots() const noexcept { return slots_; }
  const TraceSlot& slot(std::size_t s) const { return slots_.at(s); }
  std::size_t slot_of(Endpoint p) const;

 private:
  std::vector<TraceSlot> slots_;
  std::vector<std::size_t> origin_slot_;
  std::vector<std::size_t> far_slot_;
};

/// M = 2 |E_s| + |E_h|.
std::size_t trace_dimension(const MetricGraph& g);

struct TraceVectors {
  VectorC gamma0;
  VectorC gamma1;
};

TraceVectors trace_vectors(const MetricGraph& g, const ClosedFormSpinor& psi, const PhysicalParams& p);

/// A Gamma0 psi = B Gamma1 psi, rows grouped by vertex.
struct ConditionMatrices {
  MatrixC A;
  MatrixC B;
  std::vector<std::size_t> row_vertex;  // owning vertex of each row (empty for literal matrices)
};

/// Kirchhoff-type rows vertex by vertex: d-1 consecutive continuity rows on
/// psi1 traces and one signed balance row on psi2 traces; a vertex with an
/// EndpointCondition gets the single row a Gamma0 = b Gamma1 instead.
ConditionMatrices assemble_AB(const MetricGraph& g, const PhysicalParams& p);

struct SelfAdjointReport {
  bool hermitian_compat = false;
  double hermitian_residual = 0.0;  // max |(A B* - B A*)_ij|
  bool rank_full = false;
  std::size_t rank = 0;
  double min_singular_value = 0.0;  // of [A | B]
};

/// Throws ValidationError on dimension mismatch.
SelfAdjointReport check_selfadjoint_conditions(const ConditionMatrices& cm,
                                               double hermitian_tol = 1e-14);

/// ||A Gamma0 psi - B Gamma1 psi||.
double condition_residual(const ConditionMatrices& cm, const TraceVectors& t);

/// True iff the row spaces of [A | B] and [A' | B'] coincide.
bool same_row_space(const ConditionMatrices& lhs, const ConditionMatrices& rhs, double tol = 1e-10);

/// Reference 4x4 condition matrices of the three-edge model, slots ordered
/// (e1, e2, e3 origin, e3 far).
ConditionMatrices model_condition_matrices(cplx a, cplx b);

}  // namespace gdirac
