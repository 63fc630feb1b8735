#pragma once

#include <string>
#include <vector>

#include "teichlab/iet.hpp"
#include "teichlab/saddle.hpp"
#include "teichlab/surface.hpp"

namespace teichlab {

// Zippered-rectangle suspension datum. The surface is the polygon with top
// broken line zeta_1, ..., zeta_d and bottom broken line in the order
// pi^{-1}(1), ..., pi^{-1}(d), where zeta_j = lambda_j + i b_j.
//
// Conditions: sum_{j<=k} b_j > 0 and sum_{pi(j)<=k} b_j < 0 for k < d, and
// sum b_j = 0 so that the transversal [0, |lambda|] is a diagonal of the
// polygon. The return times are then h = Q b > 0 and the area is Q(lambda, b).
struct SuspensionData {
  Iet base;
  std::vector<double> b;
};

// Throws InvalidSuspension (with the failing condition) or DimensionMismatch.
void validate(const SuspensionData& s);
bool is_valid(const SuspensionData& s);

// h_i = Q(e_i, b), the first return time of the vertical flow over I_i.
std::vector<double> heights(const SuspensionData& s);
double suspension_area(const SuspensionData& s);

// Polygon vertex index of T_i = zeta_1 + ... + zeta_i, 0 <= i <= d.
int top_vertex_index(int d, int i);

TranslationSurface suspend(const SuspensionData& s);

struct NamedSuspension {
  std::string name;
  SuspensionData data;
};

// The example suspensions shipped with the lab (d in {2, 3, 4}).
std::vector<NamedSuspension> shipped_suspensions();

// Largest shears keeping lambda + sigma b positive: sigma in (-neg, pos).
struct ShearRange {
  double neg = 0;
  double pos = 0;
};
ShearRange max_admissible_shear(const SuspensionData& s);

struct LocalProductReport {
  double max_discrepancy = 0;         // max over samples of the vertex and holonomy discrepancies
  std::vector<double> per_sample;
  std::size_t connections_compared = 0;
};

// Compares act(h_sigma, suspend(lambda, b)) with suspend(lambda + sigma b, b):
// vertex by vertex and by matching saddle connections up to `bound`. Throws
// PreconditionViolated when some lambda + sigma b leaves the positive cone.
LocalProductReport verify_local_product(const SuspensionData& s, const std::vector<double>& shears, double bound = 1.0);

// Horizontal segment inside one polygon, oriented in +x.
struct Transversal {
  int polygon = 0;
  Vec2 start;
  double length = 0;
};

Transversal base_transversal(const SuspensionData& s);

struct ReturnSample {
  double x = 0;      // offset along the transversal
  double image = 0;  // offset of the first return
  double time = 0;   // first return time
};

// First return of the upward vertical flow started at offset x. Throws
// SingularTrajectory if the trajectory passes within 1e-10 (relative to the
// surface scale) of a vertex.
ReturnSample trace_first_return(const TranslationSurface& x, const Transversal& tr, double offset);

struct ReturnPiece {
  double begin = 0;
  double end = 0;
  double translation = 0;
  double time = 0;
};

struct FirstReturnTable {
  std::vector<ReturnSample> samples;
  std::vector<ReturnPiece> pieces;     // maximal runs of equal translation
  std::vector<double> breakpoints;     // interior piece boundaries, bisected to 1e-12
  int resampled = 0;                   // samples moved off singular leaves
};

// `samples` midpoints of a uniform grid on the transversal. A singular sample
// is nudged (up to retry_budget times) before giving up with SingularTrajectory.
FirstReturnTable first_return_oracle(const TranslationSurface& x, const Transversal& tr, int samples, int retry_budget = 8);

// The saddle connection across the shortest interval I_n = [a, b) of D_n:
// joins the first singular points on the vertical lines over a and b inside
// the strip of n returns. |Re v| = epsilon_n and |Im v| <= n max h.
SaddleConnection short_interval_saddle_connection(const SuspensionData& s, int n);

}  // namespace teichlab
