//! Branch-cut-aware conformal map P(z) = sqrt(z - alpha), its inverse
//! P⁻¹(w) = w² + alpha, and the derived matrix fields J, J⁻¹ and Q².
//!
//! For a holomorphic F = a + ib the matrix of partials (row convention
//! (∇P)_{kj} = ∂_j P^k) is [[a, -b], [b, a]]; the Cauchy-Riemann structure
//! J11 = J22, J12 = -J21 and Q² = det J follow. Since P'(P⁻¹(β)) = 1/(2β)
//! independent of alpha, all derived fields are rational in β.

use crate::geometry::{BoundaryCurve, GeometryError, Vec2};
use nalgebra::Matrix2;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConformalError {
    #[error("point ({0}, {1}) lies on or within tolerance of the branch cut")]
    PointOnBranchCut(f64, f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The branch cut Γ, a curve from `alpha` chosen so the evolving fluid
/// domain stays off it. The default is the downward vertical ray.
#[derive(Clone, Debug)]
pub enum BranchCut {
    /// Straight ray from alpha in direction `angle` (radians).
    Ray { angle: f64 },
    /// Polyline from alpha through the listed points (last segment extended
    /// to infinity along its direction). Branch selection uses the angle of
    /// the final segment.
    Polyline { points: Vec<Vec2> },
}

impl BranchCut {
    fn effective_angle(&self) -> f64 {
        match self {
            BranchCut::Ray { angle } => *angle,
            BranchCut::Polyline { points } => {
                if points.len() >= 2 {
                    let d = points[points.len() - 1] - points[points.len() - 2];
                    d.y.atan2(d.x)
                } else if let Some(p) = points.first() {
                    p.y.atan2(p.x)
                } else {
                    -std::f64::consts::FRAC_PI_2
                }
            }
        }
    }

    fn distance(&self, alpha: Complex64, z: Complex64) -> f64 {
        let p = Vec2::new(z.re - alpha.re, z.im - alpha.im);
        match self {
            BranchCut::Ray { angle } => {
                let u = Vec2::new(angle.cos(), angle.sin());
                let t = p.dot(&u);
                if t <= 0.0 {
                    p.norm()
                } else {
                    (p - u * t).norm()
                }
            }
            BranchCut::Polyline { points } => {
                let mut best = f64::INFINITY;
                let mut prev = Vec2::zeros(); // cut starts at alpha
                for q in points {
                    best = best.min(crate::geometry::point_segment_distance(p, prev, *q));
                    prev = *q;
                }
                // final segment extended as a ray
                if points.len() >= 2 {
                    let d = points[points.len() - 1] - points[points.len() - 2];
                    let n = d.norm();
                    if n > 0.0 {
                        let u = d / n;
                        let rel = p - points[points.len() - 1];
                        let t = rel.dot(&u);
                        if t > 0.0 {
                            best = best.min((rel - u * t).norm());
                        }
                    }
                }
                best
            }
        }
    }
}

/// Immutable descriptor of the conformal map; all queries are pure.
#[derive(Clone, Debug)]
pub struct ConformalMap {
    pub alpha: Complex64,
    pub cut: BranchCut,
    /// Absolute tolerance for PointOnBranchCut (1e-10 x domain diameter).
    pub cut_tol: f64,
}

pub const LAMBDA: Matrix2<f64> = Matrix2::new(0.0, -1.0, 1.0, 0.0);

/// Matrix representation [[a, -b], [b, a]] of a holomorphic derivative a+ib.
#[inline]
pub fn conformal_matrix(f: Complex64) -> Matrix2<f64> {
    Matrix2::new(f.re, -f.im, f.im, f.re)
}

impl ConformalMap {
    /// Map with the default downward-ray cut and the spec tolerance for the
    /// given domain diameter.
    pub fn new(alpha: Complex64, domain_diameter: f64) -> Self {
        Self {
            alpha,
            cut: BranchCut::Ray { angle: -std::f64::consts::FRAC_PI_2 },
            cut_tol: 1e-10 * domain_diameter,
        }
    }

    pub fn with_cut(alpha: Complex64, cut: BranchCut, domain_diameter: f64) -> Self {
        Self { alpha, cut, cut_tol: 1e-10 * domain_diameter }
    }

    pub fn distance_to_cut(&self, z: Complex64) -> f64 {
        self.cut.distance(self.alpha, z)
    }

    /// P(z) = sqrt(z - alpha) on the branch determined by the cut: the
    /// argument of z - alpha is taken in (cut_angle, cut_angle + 2π).
    pub fn map_point(&self, z: Complex64) -> Result<Complex64, ConformalError> {
        if self.distance_to_cut(z) < self.cut_tol {
            return Err(ConformalError::PointOnBranchCut(z.re, z.im));
        }
        let d = z - self.alpha;
        let cut_angle = self.cut.effective_angle();
        let mut theta = (d.im.atan2(d.re) - cut_angle).rem_euclid(2.0 * std::f64::consts::PI);
        if theta == 0.0 {
            theta = 2.0 * std::f64::consts::PI;
        }
        let theta = theta + cut_angle;
        let r = d.norm().sqrt();
        Ok(Complex64::from_polar(r, 0.5 * theta))
    }

    /// P⁻¹(w) = w² + alpha (entire).
    pub fn inverse_point(&self, w: Complex64) -> Complex64 {
        w * w + self.alpha
    }

    fn require_off_cut(&self, beta: Complex64) -> Result<(), ConformalError> {
        let z = self.inverse_point(beta);
        if self.distance_to_cut(z) < self.cut_tol {
            return Err(ConformalError::PointOnBranchCut(beta.re, beta.im));
        }
        Ok(())
    }

    /// J(β) with J_{kj}(β) = (∂_j P^k)(P⁻¹(β)) = conformal matrix of 1/(2β).
    pub fn jacobian_at(&self, beta: Complex64) -> Result<Matrix2<f64>, ConformalError> {
        self.require_off_cut(beta)?;
        Ok(conformal_matrix(Complex64::new(0.5, 0.0) / beta))
    }

    /// Unchecked evaluation for interior hot loops (flux positions already
    /// validated to stay off the cut).
    #[inline]
    pub fn jacobian_unchecked(&self, beta: Complex64) -> Matrix2<f64> {
        conformal_matrix(Complex64::new(0.5, 0.0) / beta)
    }

    /// J(β)⁻¹ = [[2β¹, -2β²], [2β², 2β¹]].
    #[inline]
    pub fn jacobian_inv_unchecked(&self, beta: Complex64) -> Matrix2<f64> {
        conformal_matrix(2.0 * beta)
    }

    pub fn jacobian_inv_at(&self, beta: Complex64) -> Result<Matrix2<f64>, ConformalError> {
        self.require_off_cut(beta)?;
        Ok(self.jacobian_inv_unchecked(beta))
    }

    /// Q²(β) = |dP/dz ∘ P⁻¹(β)|² = 1/(4|β|²).
    pub fn q_squared_at(&self, beta: Complex64) -> Result<f64, ConformalError> {
        self.require_off_cut(beta)?;
        Ok(self.q_squared_unchecked(beta))
    }

    #[inline]
    pub fn q_squared_unchecked(&self, beta: Complex64) -> f64 {
        0.25 / beta.norm_sqr()
    }

    /// Partial derivatives (∂_1 J, ∂_2 J) at β, from the holomorphic
    /// derivative of F(β) = 1/(2β): ∂_1 F = F' = -1/(2β²), ∂_2 F = i F'.
    pub fn jacobian_grad_unchecked(&self, beta: Complex64) -> [Matrix2<f64>; 2] {
        let fp = Complex64::new(-0.5, 0.0) / (beta * beta);
        [conformal_matrix(fp), conformal_matrix(Complex64::i() * fp)]
    }

    /// Map a closed curve through P (forward) or P⁻¹ (inverse) and resample
    /// the image to uniform arc length, preserving node ordering and count.
    ///
    /// Forward mapping tracks the branch by continuity from the first node,
    /// so curves hugging both sides of the cut map consistently.
    pub fn map_curve(
        &self,
        curve: &BoundaryCurve,
        direction: MapDirection,
    ) -> Result<BoundaryCurve, ConformalError> {
        let nodes = curve.nodes();
        let mut out: Vec<Vec2> = Vec::with_capacity(nodes.len());
        match direction {
            MapDirection::Inverse => {
                for p in nodes {
                    let w = Complex64::new(p.x, p.y);
                    let z = self.inverse_point(w);
                    out.push(Vec2::new(z.re, z.im));
                }
            }
            MapDirection::Forward => {
                let mut prev: Option<Complex64> = None;
                for p in nodes {
                    let z = Complex64::new(p.x, p.y);
                    if self.distance_to_cut(z) < self.cut_tol {
                        return Err(ConformalError::PointOnBranchCut(z.re, z.im));
                    }
                    let w = match prev {
                        None => self.map_point(z)?,
                        Some(wp) => {
                            let s = (z - self.alpha).sqrt(); // principal
                            if (s - wp).norm() <= (-s - wp).norm() {
                                s
                            } else {
                                -s
                            }
                        }
                    };
                    prev = Some(w);
                    out.push(Vec2::new(w.re, w.im));
                }
            }
        }
        Ok(BoundaryCurve::from_nodes(&out)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDirection {
    Forward,
    Inverse,
}
