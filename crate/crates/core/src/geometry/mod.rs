//! Closed-curve geometry: arc-length parametrization, Frenet data, tubular
//! coordinates, self-intersection and distance queries.
//!
//! Curves are periodic cubic splines over uniformly spaced arc-length nodes,
//! counterclockwise by construction, with the outward normal n = (t_y, -t_x).
//! The signed curvature convention gives +1 on the unit circle.

mod spline;

pub use spline::PeriodicSpline;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec2 = Vector2<f64>;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("point ({0}, {1}) outside the tubular neighborhood")]
    Outside(f64, f64),
    #[error("ambiguous projection: competing feet at r={0:.6} and r={1:.6}")]
    AmbiguousProjection(f64, f64),
    #[error("curve I/O: {0}")]
    Io(String),
}

/// Closed curve with arc-length parameter `r in [0, L)`.
#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    nodes: Vec<Vec2>,
    length: f64,
    sx: PeriodicSpline,
    sy: PeriodicSpline,
}

/// Tangent/normal/curvature at a boundary point.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub tangent: Vec2,
    /// Outward unit normal (curve is CCW).
    pub normal: Vec2,
    pub curvature: f64,
}

impl BoundaryCurve {
    /// Build from an ordered node loop (implicitly closed; a duplicated final
    /// node is dropped) and resample to uniform arc length.
    pub fn from_nodes(nodes: &[Vec2]) -> Result<Self, GeometryError> {
        let mut pts: Vec<Vec2> = nodes.to_vec();
        if pts.len() >= 2 {
            let d = (pts[0] - pts[pts.len() - 1]).norm();
            let scale = polyline_length(&pts).max(1e-300);
            if d < 1e-9 * scale {
                pts.pop();
            }
        }
        if pts.len() < 8 {
            return Err(GeometryError::DegenerateCurve(format!(
                "need at least 8 nodes, got {}",
                pts.len()
            )));
        }
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        let total = polyline_length(&pts);
        if !(total > 1e-12) {
            return Err(GeometryError::DegenerateCurve("zero length".into()));
        }
        let n = pts.len();
        let mut curve = Self::nonuniform_fit(&pts)?.resample_uniform(n)?;
        // one more pass tightens the unit-speed property
        curve = curve.resample_uniform(n)?;
        Ok(curve)
    }

    /// Resample this curve to `n` uniformly spaced arc-length nodes.
    pub fn resample(&self, n: usize) -> Result<Self, GeometryError> {
        self.resample_uniform(n)
    }

    /// Chord-parametrized periodic spline through the exact input points,
    /// converted to uniform arc-length nodes.
    fn nonuniform_fit(pts: &[Vec2]) -> Result<Self, GeometryError> {
        let n = pts.len();
        let mut ts = vec![0.0; n];
        for i in 1..n {
            ts[i] = ts[i - 1] + (pts[i] - pts[i - 1]).norm();
            if !(ts[i] > ts[i - 1]) {
                return Err(GeometryError::DegenerateCurve(format!(
                    "repeated node at index {i}"
                )));
            }
        }
        let period = ts[n - 1] + (pts[0] - pts[n - 1]).norm();
        let fx = spline::NonuniformPeriodicSpline::new(
            ts.clone(),
            pts.iter().map(|p| p.x).collect(),
            period,
        );
        let fy = spline::NonuniformPeriodicSpline::new(
            ts,
            pts.iter().map(|p| p.y).collect(),
            period,
        );
        // arc length of the fitted spline on a fine subdivision
        let m = 4 * n;
        let gauss: [(f64, f64); 4] = GAUSS4;
        let mut cum = vec![0.0; m + 1];
        for i in 0..m {
            let a = period * i as f64 / m as f64;
            let b = period * (i + 1) as f64 / m as f64;
            let mut acc = 0.0;
            for (x, w) in gauss {
                let t = a + (b - a) * 0.5 * (x + 1.0);
                let dx = fx.deriv1(t);
                let dy = fy.deriv1(t);
                acc += w * (dx * dx + dy * dy).sqrt();
            }
            cum[i + 1] = cum[i] + acc * (b - a) * 0.5;
        }
        let total = cum[m];
        // uniform arclength targets, inverted by bisection on the fine grid
        let mut px = vec![0.0; n];
        let mut py = vec![0.0; n];
        for k in 0..n {
            let target = total * k as f64 / n as f64;
            let (i, w) = bracket(&cum, target);
            let mut lo = period * i as f64 / m as f64;
            let mut hi = period * (i + 1) as f64 / m as f64;
            let _ = w;
            let want = target - cum[i];
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                let mut s = 0.0;
                let a = period * i as f64 / m as f64;
                for (x, wq) in gauss {
                    let t = a + (mid - a) * 0.5 * (x + 1.0);
                    let dx = fx.deriv1(t);
                    let dy = fy.deriv1(t);
                    s += wq * (dx * dx + dy * dy).sqrt();
                }
                s *= (mid - a) * 0.5;
                if s < want {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            px[k] = fx.eval(t);
            py[k] = fy.eval(t);
        }
        let sx = PeriodicSpline::new(px.clone(), total);
        let sy = PeriodicSpline::new(py.clone(), total);
        let nodes = (0..n).map(|k| Vec2::new(px[k], py[k])).collect();
        Ok(Self { nodes, length: total, sx, sy })
    }

    fn resample_uniform(&self, n: usize) -> Result<Self, GeometryError> {
        // arclength of the current spline via per-segment Gauss quadrature
        let m = self.nodes.len();
        let h = self.length / m as f64;
        let gauss: [(f64, f64); 4] = GAUSS4;
        let mut seg = vec![0.0; m];
        for i in 0..m {
            let a = i as f64 * h;
            let mut acc = 0.0;
            for (x, w) in gauss {
                let t = a + h * 0.5 * (x + 1.0);
                let dx = self.sx.deriv1(t);
                let dy = self.sy.deriv1(t);
                acc += w * (dx * dx + dy * dy).sqrt();
            }
            seg[i] = acc * h * 0.5;
        }
        let mut cum = vec![0.0; m + 1];
        for i in 0..m {
            cum[i + 1] = cum[i] + seg[i];
        }
        let total = cum[m];
        // invert s(t) at uniform arclength targets (bisection per segment)
        let mut px = vec![0.0; n];
        let mut py = vec![0.0; n];
        for k in 0..n {
            let target = total * k as f64 / n as f64;
            let (i, _) = bracket(&cum, target);
            let mut lo = i as f64 * h;
            let mut hi = lo + h;
            let want = target - cum[i];
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                let s = self.arclen_within(i as f64 * h, mid);
                if s < want {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            px[k] = self.sx.eval(t);
            py[k] = self.sy.eval(t);
        }
        let sx = PeriodicSpline::new(px.clone(), total);
        let sy = PeriodicSpline::new(py.clone(), total);
        let nodes = (0..n).map(|k| Vec2::new(px[k], py[k])).collect();
        Ok(Self { nodes, length: total, sx, sy })
    }

    fn arclen_within(&self, a: f64, b: f64) -> f64 {
        let gauss: [(f64, f64); 4] = GAUSS4;
        let mut acc = 0.0;
        for (x, w) in gauss {
            let t = a + (b - a) * 0.5 * (x + 1.0);
            let dx = self.sx.deriv1(t);
            let dy = self.sy.deriv1(t);
            acc += w * (dx * dx + dy * dy).sqrt();
        }
        acc * (b - a) * 0.5
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn len_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn node_spacing(&self) -> f64 {
        self.length / self.nodes.len() as f64
    }

    /// Arc-length parameter of node `i`.
    pub fn node_r(&self, i: usize) -> f64 {
        self.length * (i % self.nodes.len()) as f64 / self.nodes.len() as f64
    }

    pub fn position_at(&self, r: f64) -> Vec2 {
        Vec2::new(self.sx.eval(r), self.sy.eval(r))
    }

    /// Raw parametric velocity dz/dr (close to unit length after normalization).
    pub fn velocity_at(&self, r: f64) -> Vec2 {
        Vec2::new(self.sx.deriv1(r), self.sy.deriv1(r))
    }

    pub fn frame_at(&self, r: f64) -> Result<Frame, GeometryError> {
        let d1 = Vec2::new(self.sx.deriv1(r), self.sy.deriv1(r));
        let d2 = Vec2::new(self.sx.deriv2(r), self.sy.deriv2(r));
        let speed = d1.norm();
        if !(speed > 1e-12) {
            return Err(GeometryError::DegenerateCurve(format!("zero speed at r={r}")));
        }
        let tangent = d1 / speed;
        let normal = Vec2::new(tangent.y, -tangent.x);
        let curvature = (d1.x * d2.y - d1.y * d2.x) / (speed * speed * speed);
        Ok(Frame { tangent, normal, curvature })
    }

    pub fn max_abs_curvature(&self) -> f64 {
        let n = self.nodes.len();
        (0..4 * n)
            .map(|k| {
                let r = self.length * k as f64 / (4 * n) as f64;
                self.frame_at(r).map(|f| f.curvature.abs()).unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.nodes)
    }

    /// Winding-number point-in-polygon test on the node loop.
    pub fn contains(&self, p: Vec2) -> bool {
        let mut winding = 0i32;
        let n = self.nodes.len();
        for i in 0..n {
            let a = self.nodes[i];
            let b = self.nodes[(i + 1) % n];
            if a.y <= p.y {
                if b.y > p.y && cross(b - a, p - a) > 0.0 {
                    winding += 1;
                }
            } else if b.y <= p.y && cross(b - a, p - a) < 0.0 {
                winding -= 1;
            }
        }
        winding != 0
    }

    /// Distance from `p` to the node polygon (segments).
    pub fn distance_to(&self, p: Vec2) -> f64 {
        let n = self.nodes.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let d = point_segment_distance(p, self.nodes[i], self.nodes[(i + 1) % n]);
            if d < best {
                best = d;
            }
        }
        best
    }

    /// Nearest-point projection: returns (r, lambda) with
    /// p = z(r) + lambda * n_out(r), lambda signed positive outward.
    ///
    /// `lambda_max` bounds the accepted offset; `window` is the minimum arc
    /// separation (in units of arc length) for a competing foot to count as
    /// ambiguous, `amb_tol` the distance tie tolerance.
    pub fn tubular_coords(
        &self,
        p: Vec2,
        lambda_max: f64,
        window: f64,
        amb_tol: f64,
    ) -> Result<(f64, f64), GeometryError> {
        let n = self.nodes.len();
        // all local minima of squared distance over the node loop
        let d2: Vec<f64> = (0..n).map(|i| (p - self.nodes[i]).norm_squared()).collect();
        let mut minima: Vec<usize> = Vec::new();
        for i in 0..n {
            let prev = d2[(i + n - 1) % n];
            let next = d2[(i + 1) % n];
            if d2[i] <= prev && d2[i] <= next {
                minima.push(i);
            }
        }
        let mut feet: Vec<(f64, f64)> = Vec::new(); // (distance, r)
        for &i in &minima {
            let r = self.refine_foot(p, self.node_r(i));
            let d = (p - self.position_at(r)).norm();
            feet.push((d, r));
        }
        feet.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        feet.dedup_by(|a, b| circ_dist(a.1, b.1, self.length) < 0.5 * self.node_spacing());
        if feet.is_empty() {
            return Err(GeometryError::Outside(p.x, p.y));
        }
        let (dist0, r0) = feet[0];
        // ambiguity: a competing foot at comparable distance but far in arc
        for &(d, r) in feet.iter().skip(1) {
            if (d - dist0).abs() < amb_tol && circ_dist(r, r0, self.length) > window {
                return Err(GeometryError::AmbiguousProjection(r0, r));
            }
        }
        let frame = self.frame_at(r0)?;
        let lambda = (p - self.position_at(r0)).dot(&frame.normal);
        if lambda.abs() > lambda_max {
            return Err(GeometryError::Outside(p.x, p.y));
        }
        Ok((wrap(r0, self.length), lambda))
    }

    /// Projection seeded at `r_seed` (local Newton, no ambiguity scan).
    /// Used to invert the tubular map per designated arc.
    pub fn tubular_coords_seeded(&self, p: Vec2, r_seed: f64) -> (f64, f64) {
        let r = self.refine_foot(p, r_seed);
        let f = self.frame_at(r).expect("frame at seeded foot");
        let lambda = (p - self.position_at(r)).dot(&f.normal);
        (wrap(r, self.length), lambda)
    }

    fn refine_foot(&self, p: Vec2, r0: f64) -> f64 {
        // Newton on g(r) = (p - z(r)) . z'(r) = 0
        let mut r = r0;
        for _ in 0..30 {
            let z = self.position_at(r);
            let d1 = Vec2::new(self.sx.deriv1(r), self.sy.deriv1(r));
            let d2 = Vec2::new(self.sx.deriv2(r), self.sy.deriv2(r));
            let e = p - z;
            let g = e.dot(&d1);
            let gp = -d1.norm_squared() + e.dot(&d2);
            if gp.abs() < 1e-14 {
                break;
            }
            let step = g / gp;
            let clamp = self.node_spacing();
            let step = step.clamp(-clamp, clamp);
            r -= step;
            if step.abs() < 1e-13 * self.length {
                break;
            }
        }
        r
    }

    /// All pairs of non-adjacent segments closer than `tol`, with approximate
    /// contact points. An empty result means the curve is simple at
    /// resolution `tol`.
    pub fn self_intersects(&self, tol: f64) -> Vec<(f64, f64, Vec2)> {
        let n = self.nodes.len();
        let mut hits = Vec::new();
        // spatial hash over segment bounding boxes
        let cell = (self.node_spacing() + tol).max(1e-12);
        let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> =
            std::collections::HashMap::new();
        let key = |p: Vec2| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
        for i in 0..n {
            let a = self.nodes[i];
            let b = self.nodes[(i + 1) % n];
            let (k0, k1) = (key(a), key(b));
            for gx in k0.0.min(k1.0) - 1..=k0.0.max(k1.0) + 1 {
                for gy in k0.1.min(k1.1) - 1..=k0.1.max(k1.1) + 1 {
                    grid.entry((gx, gy)).or_default().push(i);
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut cells: Vec<_> = grid.into_iter().collect();
        cells.sort_by_key(|(k, _)| *k);
        for (_, segs) in cells {
            for ii in 0..segs.len() {
                for jj in ii + 1..segs.len() {
                    let (i, j) = (segs[ii].min(segs[jj]), segs[ii].max(segs[jj]));
                    let sep = (j - i).min(n - (j - i));
                    if sep < 2 || !seen.insert((i, j)) {
                        continue;
                    }
                    let (d, pi, pj) = segment_segment_distance(
                        self.nodes[i],
                        self.nodes[(i + 1) % n],
                        self.nodes[j],
                        self.nodes[(j + 1) % n],
                    );
                    if d < tol {
                        let ri = self.node_r(i) + pi * self.node_spacing();
                        let rj = self.node_r(j) + pj * self.node_spacing();
                        let a = self.nodes[i] * (1.0 - pi) + self.nodes[(i + 1) % n] * pi;
                        let b = self.nodes[j] * (1.0 - pj) + self.nodes[(j + 1) % n] * pj;
                        hits.push((ri, rj, (a + b) * 0.5));
                    }
                }
            }
        }
        hits.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
        hits
    }

    /// Global minimum distance between curve points whose segment-index
    /// separation exceeds `window` segments. Returns (distance, r_a, r_b).
    pub fn min_arc_distance(&self, window: usize) -> (f64, f64, f64) {
        let n = self.nodes.len();
        let window = window.max(2);
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let sep = (j - i).min(n - (j - i));
                if sep <= window {
                    continue;
                }
                let (d, pi, pj) = segment_segment_distance(
                    self.nodes[i],
                    self.nodes[(i + 1) % n],
                    self.nodes[j],
                    self.nodes[(j + 1) % n],
                );
                if d < best.0 {
                    best = (
                        d,
                        self.node_r(i) + pi * self.node_spacing(),
                        self.node_r(j) + pj * self.node_spacing(),
                    );
                }
            }
        }
        best
    }

    /// Symmetric Hausdorff distance between node sets with segment projection.
    pub fn hausdorff_distance(&self, other: &BoundaryCurve) -> f64 {
        directed_hausdorff(self, other).max(directed_hausdorff(other, self))
    }

    // ---- I/O ----

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for p in &self.nodes {
            s.push_str(&format!("{},{}\n", p.x, p.y));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self, GeometryError> {
        let mut pts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if lineno == 0 && line.chars().any(|c| c.is_alphabetic()) {
                continue; // header
            }
            let mut it = line.split(',');
            let x: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| GeometryError::Io(format!("bad CSV line {}", lineno + 1)))?;
            let y: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| GeometryError::Io(format!("bad CSV line {}", lineno + 1)))?;
            pts.push(Vec2::new(x, y));
        }
        Self::from_nodes(&pts)
    }

    pub fn to_json(&self) -> String {
        let doc = CurveJson { nodes: self.nodes.iter().map(|p| [p.x, p.y]).collect() };
        serde_json::to_string(&doc).expect("curve JSON")
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let doc: CurveJson =
            serde_json::from_str(text).map_err(|e| GeometryError::Io(e.to_string()))?;
        let pts: Vec<Vec2> = doc.nodes.iter().map(|&[x, y]| Vec2::new(x, y)).collect();
        Self::from_nodes(&pts)
    }
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    nodes: Vec<[f64; 2]>,
}

fn directed_hausdorff(a: &BoundaryCurve, b: &BoundaryCurve) -> f64 {
    let n = b.nodes.len();
    a.nodes
        .iter()
        .map(|&p| {
            let mut best = f64::INFINITY;
            for i in 0..n {
                let d = point_segment_distance(p, b.nodes[i], b.nodes[(i + 1) % n]);
                if d < best {
                    best = d;
                }
            }
            best
        })
        .fold(0.0, f64::max)
}

const GAUSS4: [(f64, f64); 4] = [
    (-0.861136311594053, 0.347854845137454),
    (-0.339981043584856, 0.652145154862546),
    (0.339981043584856, 0.652145154862546),
    (0.861136311594053, 0.347854845137454),
];

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn wrap(r: f64, period: f64) -> f64 {
    let mut v = r % period;
    if v < 0.0 {
        v += period;
    }
    v
}

fn circ_dist(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).abs() % period;
    d.min(period - d)
}

fn signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    acc * 0.5
}

fn polyline_length(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| (pts[(i + 1) % n] - pts[i]).norm()).sum()
}

fn bracket(cum: &[f64], target: f64) -> (usize, f64) {
    // cum is nondecreasing with cum[0] = 0
    let n = cum.len() - 1;
    let mut lo = 0usize;
    let mut hi = n;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cum[mid] <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let seg = (cum[lo + 1] - cum[lo]).max(1e-300);
    (lo, ((target - cum[lo]) / seg).clamp(0.0, 1.0))
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let denom = ab.norm_squared();
    let t = if denom > 0.0 { ((p - a).dot(&ab) / denom).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).norm()
}

/// Minimum distance between two segments, with the parameters of the
/// closest points on each.
pub fn segment_segment_distance(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> (f64, f64, f64) {
    // proper crossing check first
    let d1 = a1 - a0;
    let d2 = b1 - b0;
    let denom = cross(d1, d2);
    if denom.abs() > 1e-15 {
        let t = cross(b0 - a0, d2) / denom;
        let u = cross(b0 - a0, d1) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            return (0.0, t, u);
        }
    }
    // otherwise min over endpoint projections
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let cases = [
        (point_segment_param(a0, b0, b1), 0.0, true),
        (point_segment_param(a1, b0, b1), 1.0, true),
        (point_segment_param(b0, a0, a1), 0.0, false),
        (point_segment_param(b1, a0, a1), 1.0, false),
    ];
    for ((d, s), fixed, fixed_is_a) in cases {
        if d < best.0 {
            best = if fixed_is_a { (d, fixed, s) } else { (d, s, fixed) };
        }
    }
    best
}

fn point_segment_param(p: Vec2, a: Vec2, b: Vec2) -> (f64, f64) {
    let ab = b - a;
    let denom = ab.norm_squared();
    let t = if denom > 0.0 { ((p - a).dot(&ab) / denom).clamp(0.0, 1.0) } else { 0.0 };
    ((p - (a + ab * t)).norm(), t)
}

/// Uniformly sampled circle, for tests and presets.
pub fn circle(center: Vec2, radius: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            center + Vec2::new(radius * a.cos(), radius * a.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_circle(n: usize) -> BoundaryCurve {
        BoundaryCurve::from_nodes(&circle(Vec2::zeros(), 1.0, n)).unwrap()
    }

    #[test]
    fn circle_arclength_and_speed() {
        // nonuniform samples of the unit circle
        let pts: Vec<Vec2> = (0..64)
            .map(|i| {
                let a = 2.0 * PI * (i as f64 / 64.0).powf(1.3);
                Vec2::new(a.cos(), a.sin())
            })
            .collect();
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        assert!((c.length() - 2.0 * PI).abs() < 1e-3, "length {}", c.length());
        for k in 0..64 {
            let r = c.length() * k as f64 / 64.0;
            let speed = c.velocity_at(r).norm();
            assert!((speed - 1.0).abs() < 1e-3, "speed {speed}");
        }
    }

    #[test]
    fn square_length() {
        let mut pts = Vec::new();
        for i in 0..16 {
            pts.push(Vec2::new(i as f64 / 16.0, 0.0));
        }
        for i in 0..16 {
            pts.push(Vec2::new(1.0, i as f64 / 16.0));
        }
        for i in 0..16 {
            pts.push(Vec2::new(1.0 - i as f64 / 16.0, 1.0));
        }
        for i in 0..16 {
            pts.push(Vec2::new(0.0, 1.0 - i as f64 / 16.0));
        }
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        // spline rounding at corners keeps this within a percent
        assert!((c.length() - 4.0).abs() < 0.04, "length {}", c.length());
    }

    #[test]
    fn star_curve_unit_speed_by_finite_differences() {
        let pts: Vec<Vec2> = (0..256)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / 256.0;
                let rho = 1.0 + 0.25 * (3.0 * a).cos();
                Vec2::new(rho * a.cos(), rho * a.sin())
            })
            .collect();
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        let dr = 1e-6 * c.length();
        // unit speed at every node
        for i in 0..c.len_nodes() {
            let r = c.node_r(i);
            let fd = (c.position_at(r + dr) - c.position_at(r - dr)).norm() / (2.0 * dr);
            assert!((fd - 1.0).abs() < 2e-3, "fd speed {fd} at node {i}");
        }
        // and nearly unit speed between nodes
        for k in 0..100 {
            let r = c.length() * (k as f64 + 0.5) / 100.0;
            let fd = (c.position_at(r + dr) - c.position_at(r - dr)).norm() / (2.0 * dr);
            assert!((fd - 1.0).abs() < 5e-3, "fd speed {fd}");
        }
    }

    #[test]
    fn circle_curvature() {
        let c = unit_circle(192);
        for k in 0..24 {
            let f = c.frame_at(c.length() * k as f64 / 24.0).unwrap();
            assert!((f.curvature - 1.0).abs() < 1e-3, "kappa {}", f.curvature);
            assert!((f.tangent.norm() - 1.0).abs() < 1e-10);
            assert!((f.normal.norm() - 1.0).abs() < 1e-10);
            assert!(f.tangent.dot(&f.normal).abs() < 1e-10);
        }
        let c2 = BoundaryCurve::from_nodes(&circle(Vec2::zeros(), 2.0, 192)).unwrap();
        let f = c2.frame_at(1.0).unwrap();
        assert!((f.curvature - 0.5).abs() < 1e-3);
    }

    #[test]
    fn ellipse_curvature_closed_form() {
        let (a, b) = (2.0, 1.0);
        let pts: Vec<Vec2> = (0..512)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 512.0;
                Vec2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        // point (2, 0): curvature a/b^2 = 2
        let (r, _) = c.tubular_coords(Vec2::new(2.0, 0.0), 0.5, 1.0, 1e-9).unwrap();
        let f = c.frame_at(r).unwrap();
        assert!((f.curvature - 2.0).abs() < 1e-2, "kappa {}", f.curvature);
    }

    #[test]
    fn tubular_coords_radial_offsets() {
        let c = unit_circle(256);
        let (r, lam) = c.tubular_coords(Vec2::new(1.1, 0.0), 0.5, 1.0, 1e-9).unwrap();
        assert!(lam > 0.0 && (lam - 0.1).abs() < 1e-4, "lambda {lam}");
        let p = c.position_at(r);
        assert!((p - Vec2::new(1.0, 0.0)).norm() < 1e-4);
        let (_, lam2) = c.tubular_coords(Vec2::new(0.95, 0.0), 0.5, 1.0, 1e-9).unwrap();
        assert!((lam2 + 0.05).abs() < 1e-4, "lambda {lam2}");
    }

    #[test]
    fn tubular_roundtrip_within_reach() {
        let c = unit_circle(256);
        for k in 0..16 {
            let r = c.length() * k as f64 / 16.0;
            for &lam in &[-0.2, -0.05, 0.1, 0.3] {
                let f = c.frame_at(r).unwrap();
                let p = c.position_at(r) + f.normal * lam;
                let (r2, l2) = c.tubular_coords(p, 0.5, 1.0, 1e-9).unwrap();
                let mut dr = (r2 - r).abs();
                dr = dr.min(c.length() - dr);
                assert!(dr < 1e-4 * c.length(), "dr {dr}");
                assert!((l2 - lam).abs() < 1e-6, "dlam {}", l2 - lam);
            }
        }
    }

    #[test]
    fn ambiguous_projection_between_near_arcs() {
        // two long horizontal arcs at y = 0 and y = 0.2, joined far away
        let mut pts = Vec::new();
        let n = 60;
        for i in 0..n {
            pts.push(Vec2::new(-3.0 + 6.0 * i as f64 / n as f64, 0.0));
        }
        for i in 0..8 {
            let a = -0.5 * PI + PI * i as f64 / 8.0;
            pts.push(Vec2::new(3.0 + 0.1 * a.cos(), 0.1 + 0.1 * a.sin()));
        }
        for i in 0..n {
            pts.push(Vec2::new(3.0 - 6.0 * i as f64 / n as f64, 0.2));
        }
        for i in 0..8 {
            let a = 0.5 * PI + PI * i as f64 / 8.0;
            pts.push(Vec2::new(-3.0 + 0.1 * a.cos(), 0.1 + 0.1 * a.sin()));
        }
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        let mid = Vec2::new(0.0, 0.1);
        let res = c.tubular_coords(mid, 0.15, 1.0, 1e-3);
        assert!(matches!(res, Err(GeometryError::AmbiguousProjection(_, _))), "{res:?}");
    }

    #[test]
    fn figure_eight_detected() {
        let pts: Vec<Vec2> = (0..128)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 128.0;
                Vec2::new(t.sin(), t.sin() * t.cos())
            })
            .collect();
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        let hits = c.self_intersects(1e-2);
        assert!(!hits.is_empty());
        // the crossing is at the origin
        assert!(hits.iter().any(|h| h.2.norm() < 5e-2));
        let circle = unit_circle(128);
        assert!(circle.self_intersects(1e-3).is_empty());
    }

    #[test]
    fn near_contact_arcs_detected_at_tolerance() {
        // two arcs at distance 0.01, tol 0.02
        let mut pts = Vec::new();
        let n = 50;
        for i in 0..n {
            pts.push(Vec2::new(-1.0 + 2.0 * i as f64 / n as f64, 0.0));
        }
        for i in 0..6 {
            let a = -0.5 * PI + PI * i as f64 / 6.0;
            pts.push(Vec2::new(1.0 + 0.005 * a.cos(), 0.005 + 0.005 * a.sin()));
        }
        for i in 0..n {
            pts.push(Vec2::new(1.0 - 2.0 * i as f64 / n as f64, 0.01));
        }
        for i in 0..6 {
            let a = 0.5 * PI + PI * i as f64 / 6.0;
            pts.push(Vec2::new(-1.0 + 0.005 * a.cos(), 0.005 + 0.005 * a.sin()));
        }
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        let hits = c.self_intersects(0.02);
        assert!(!hits.is_empty());
    }

    #[test]
    fn min_arc_distance_circle_chord() {
        let c = unit_circle(256);
        // window = quarter perimeter in segments
        let window = 256 / 4;
        let (d, _, _) = c.min_arc_distance(window);
        let expect = 2.0 * ((window as f64 * c.node_spacing()) / 2.0).sin();
        assert!((d - expect).abs() < 2e-3, "d {d} expect {expect}");
        assert!((d - 2.0f64.sqrt()).abs() < 2e-3);
    }

    #[test]
    fn min_arc_distance_parallel_gap() {
        let mut pts = Vec::new();
        let n = 80;
        for i in 0..n {
            pts.push(Vec2::new(-4.0 + 8.0 * i as f64 / n as f64, 0.0));
        }
        for i in 0..10 {
            let a = -0.5 * PI + PI * i as f64 / 10.0;
            pts.push(Vec2::new(4.0 + 0.05 * a.cos(), 0.05 + 0.05 * a.sin()));
        }
        for i in 0..n {
            pts.push(Vec2::new(4.0 - 8.0 * i as f64 / n as f64, 0.1));
        }
        for i in 0..10 {
            let a = 0.5 * PI + PI * i as f64 / 10.0;
            pts.push(Vec2::new(-4.0 + 0.05 * a.cos(), 0.05 + 0.05 * a.sin()));
        }
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        let (d, _, _) = c.min_arc_distance(10);
        assert!((d - 0.1).abs() < 1e-3, "gap {d}");
    }

    #[test]
    fn hausdorff_concentric_circles() {
        let a = unit_circle(256);
        let b = BoundaryCurve::from_nodes(&circle(Vec2::zeros(), 1.1, 256)).unwrap();
        assert!(a.hausdorff_distance(&a) < 1e-12);
        let d = a.hausdorff_distance(&b);
        assert!((d - 0.1).abs() < 1e-3, "hausdorff {d}");
        // translation bound
        let shifted =
            BoundaryCurve::from_nodes(&circle(Vec2::new(0.01, 0.0), 1.0, 256)).unwrap();
        let ds = a.hausdorff_distance(&shifted);
        assert!(ds <= 0.01 + 1e-3, "hausdorff {ds}");
    }

    #[test]
    fn intersection_invariant_under_node_rotation() {
        let pts: Vec<Vec2> = (0..128)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 128.0;
                Vec2::new(t.sin(), t.sin() * t.cos())
            })
            .collect();
        let c1 = BoundaryCurve::from_nodes(&pts).unwrap();
        let mut rotated = pts.clone();
        rotated.rotate_left(37);
        let c2 = BoundaryCurve::from_nodes(&rotated).unwrap();
        assert_eq!(c1.self_intersects(1e-2).is_empty(), c2.self_intersects(1e-2).is_empty());
    }

    #[test]
    fn csv_json_roundtrip() {
        let c = unit_circle(64);
        let c2 = BoundaryCurve::from_csv(&c.to_csv()).unwrap();
        assert!(c.hausdorff_distance(&c2) < 1e-9);
        let c3 = BoundaryCurve::from_json(&c.to_json()).unwrap();
        assert!(c.hausdorff_distance(&c3) < 1e-9);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let few = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(matches!(
            BoundaryCurve::from_nodes(&few),
            Err(GeometryError::DegenerateCurve(_))
        ));
    }

    #[test]
    fn orientation_forced_ccw() {
        let mut pts = circle(Vec2::zeros(), 1.0, 64);
        pts.reverse();
        let c = BoundaryCurve::from_nodes(&pts).unwrap();
        assert!(c.signed_area() > 0.0);
        let f = c.frame_at(0.0).unwrap();
        // outward normal at whatever r=0 maps to points away from the center
        let p = c.position_at(0.0);
        assert!(f.normal.dot(&p) > 0.9);
    }
}
