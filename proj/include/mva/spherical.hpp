#pragma once

#include <nlohmann/json.hpp>

#include "mva/linalg.hpp"
#include "mva/manifold.hpp"

namespace mva {

/// Product quadrature rule on the unit sphere: columns of `nodes` are unit
/// vectors, `weights` are positive and sum to 4*pi.
struct QuadratureRule {
  Mat nodes;    // 3 x M
  Vec weights;  // M

  long size() const { return weights.size(); }
};

/// Gauss-Legendre (L+1 colatitudes) x equispaced (2L+2 longitudes) product
/// rule, exact on all spherical harmonics of degree <= 2L.
QuadratureRule sphere_quadrature(int L);

/// All real orthonormal spherical harmonics of degree <= L at the unit vector
/// x, ordered by index l^2 + (k + l) for l = 0..L, k = -l..l.  Convention:
/// Y_{l,0} = Ptilde_l^0, Y_{l,+-k} = sqrt(2) Ptilde_l^k {cos,sin}(k phi) with
/// fully normalized associated Legendre values (no Condon-Shortley phase).
Vec sphere_harmonics(int L, const Vec& x);

/// Truncated spherical-harmonic series F(x) = sum c_{l,k} Y_{l,k}(x) with
/// real d-vector coefficients stored as columns in harmonic index order.
struct SphereSeries {
  int bandwidth = 0;  // L
  Mat coeffs;         // d x (L+1)^2

  int dim() const { return static_cast<int>(coeffs.rows()); }
  Vec coeff(int l, int k) const;

  nlohmann::json to_json() const;
  static SphereSeries from_json(const nlohmann::json& j);
};

/// Quadrature analysis c_{l,k} = sum_n w_n f(y_n) Y_{l,k}(y_n).  Columns of
/// `fsamples` are the field values at the rule's nodes, in node order; a
/// column-count mismatch throws DimensionMismatch.  Exact (round trip within
/// 1e-9) on fields of degree <= L when the rule is exact to degree 2L.
SphereSeries sphere_coefficients(const Mat& fsamples, const QuadratureRule& rule, int L);

Vec sphere_eval(const SphereSeries& series, const Vec& x);

/// Tangential differential columns by normalized forward difference
/// quotients: (F((x + h t_i)/|x + h t_i|) - F(x))/h for each tangent basis
/// column t_i.
Mat sphere_eval_dtangent(const SphereSeries& series, const Vec& x, const Mat& basis,
                         double h = 1e-6);

/// Metric projection of the linear series value at x (see the TorusSeries
/// overload for the reach guard semantics).
Vec manifold_approximant(const Manifold& model, const SphereSeries& series, const Vec& x);

}  // namespace mva
