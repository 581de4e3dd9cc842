//! Periodic cubic spline over a uniform parameter grid.

/// Cubic spline interpolating `values[i]` at `t = i*h` with period `n*h`.
#[derive(Clone, Debug)]
pub struct PeriodicSpline {
    values: Vec<f64>,
    second: Vec<f64>, // second derivatives at the nodes
    h: f64,
}

impl PeriodicSpline {
    pub fn new(values: Vec<f64>, period: f64) -> Self {
        let n = values.len();
        assert!(n >= 3, "periodic spline needs at least 3 nodes");
        let h = period / n as f64;
        // M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i-1} - 2 y_i + y_{i+1}) / h^2, cyclic
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            rhs[i] = 6.0 * (values[im] - 2.0 * values[i] + values[ip]) / (h * h);
        }
        let second = solve_cyclic_tridiag(1.0, 4.0, 1.0, &rhs);
        Self { values, second, h }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn period(&self) -> f64 {
        self.h * self.values.len() as f64
    }

    #[inline]
    fn locate(&self, t: f64) -> (usize, usize, f64) {
        let n = self.values.len();
        let period = self.period();
        let mut tt = t % period;
        if tt < 0.0 {
            tt += period;
        }
        let mut i = (tt / self.h).floor() as usize;
        if i >= n {
            i = n - 1;
        }
        let xi = (tt - i as f64 * self.h) / self.h;
        (i, (i + 1) % n, xi)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, ip, xi) = self.locate(t);
        let (yi, yp) = (self.values[i], self.values[ip]);
        let (mi, mp) = (self.second[i], self.second[ip]);
        let om = 1.0 - xi;
        yi * om + yp * xi
            + self.h * self.h / 6.0 * ((om * om * om - om) * mi + (xi * xi * xi - xi) * mp)
    }

    pub fn deriv1(&self, t: f64) -> f64 {
        let (i, ip, xi) = self.locate(t);
        let (yi, yp) = (self.values[i], self.values[ip]);
        let (mi, mp) = (self.second[i], self.second[ip]);
        let om = 1.0 - xi;
        (yp - yi) / self.h + self.h / 6.0 * ((-3.0 * om * om + 1.0) * mi + (3.0 * xi * xi - 1.0) * mp)
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        let (i, ip, xi) = self.locate(t);
        (1.0 - xi) * self.second[i] + xi * self.second[ip]
    }
}

/// Periodic cubic spline on arbitrary (sorted) knots; used once while
/// reparametrizing input polylines, before the uniform representation.
#[derive(Clone, Debug)]
pub struct NonuniformPeriodicSpline {
    ts: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
    period: f64,
}

impl NonuniformPeriodicSpline {
    pub fn new(ts: Vec<f64>, values: Vec<f64>, period: f64) -> Self {
        let n = ts.len();
        assert_eq!(n, values.len());
        assert!(n >= 3);
        let h = |i: usize| -> f64 {
            if i + 1 < n {
                ts[i + 1] - ts[i]
            } else {
                period - ts[n - 1] + ts[0]
            }
        };
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            let hm = h(im);
            let hi = h(i);
            sub[i] = hm / 6.0;
            diag[i] = (hm + hi) / 3.0;
            sup[i] = hi / 6.0;
            rhs[i] = (values[ip] - values[i]) / hi - (values[i] - values[im]) / hm;
        }
        let second = solve_cyclic_tridiag_general(&sub, &diag, &sup, &rhs);
        Self { ts, values, second, period }
    }

    fn locate(&self, t: f64) -> (usize, usize, f64, f64) {
        let n = self.ts.len();
        let mut tt = (t - self.ts[0]).rem_euclid(self.period) + self.ts[0];
        // binary search for the knot interval
        let mut lo = 0usize;
        let mut hi = n; // interval n-1 wraps
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if mid < n && self.ts[mid] <= tt {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let i = lo;
        let ip = (i + 1) % n;
        let h = if i + 1 < n { self.ts[i + 1] - self.ts[i] } else { self.period - self.ts[n - 1] + self.ts[0] };
        if i + 1 == n && tt < self.ts[0] {
            tt += self.period;
        }
        let local = tt - self.ts[i];
        (i, ip, local, h)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, ip, x, h) = self.locate(t);
        let a = h - x;
        self.second[i] * a * a * a / (6.0 * h)
            + self.second[ip] * x * x * x / (6.0 * h)
            + (self.values[i] / h - self.second[i] * h / 6.0) * a
            + (self.values[ip] / h - self.second[ip] * h / 6.0) * x
    }

    pub fn deriv1(&self, t: f64) -> f64 {
        let (i, ip, x, h) = self.locate(t);
        let a = h - x;
        -self.second[i] * a * a / (2.0 * h)
            + self.second[ip] * x * x / (2.0 * h)
            - (self.values[i] / h - self.second[i] * h / 6.0)
            + (self.values[ip] / h - self.second[ip] * h / 6.0)
    }
}

/// Solve a cyclic tridiagonal system with constant bands (sub, diag, sup)
/// via Sherman-Morrison on top of the Thomas algorithm.
fn solve_cyclic_tridiag(sub: f64, diag: f64, sup: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    solve_cyclic_tridiag_general(&vec![sub; n], &vec![diag; n], &vec![sup; n], rhs)
}

/// General cyclic tridiagonal solve: row i couples i-1, i, i+1 (mod n).
fn solve_cyclic_tridiag_general(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    assert!(n >= 3);
    // corners: row 0 col n-1 is sub[0]; row n-1 col 0 is sup[n-1]
    let beta = sub[0];
    let alpha = sup[n - 1];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    let x = solve_tridiag(sub, &d, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiag(sub, &d, sup, &u);
    let vx = x[0] + beta / gamma * x[n - 1];
    let vz = z[0] + beta / gamma * z[n - 1];
    let factor = vx / (1.0 + vz);
    (0..n).map(|i| x[i] - factor * z[i]).collect()
}

fn solve_tridiag(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_nodes() {
        let n = 32;
        let period = 2.0 * std::f64::consts::PI;
        let vals: Vec<f64> = (0..n).map(|i| (i as f64 * period / n as f64).sin()).collect();
        let s = PeriodicSpline::new(vals.clone(), period);
        for i in 0..n {
            let t = i as f64 * period / n as f64;
            assert!((s.eval(t) - vals[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_accuracy_on_sine() {
        let n = 128;
        let period = 2.0 * std::f64::consts::PI;
        let vals: Vec<f64> = (0..n).map(|i| (i as f64 * period / n as f64).sin()).collect();
        let s = PeriodicSpline::new(vals, period);
        for k in 0..40 {
            let t = 0.137 + k as f64 * 0.15;
            assert!((s.deriv1(t) - t.cos()).abs() < 1e-5);
            assert!((s.deriv2(t) + t.sin()).abs() < 1e-3);
        }
    }

    #[test]
    fn cyclic_solver_matches_direct_product() {
        let n = 20;
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).cos()).collect();
        let x = solve_cyclic_tridiag(1.0, 4.0, 1.0, &rhs);
        for i in 0..n {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            let r = x[im] + 4.0 * x[i] + x[ip];
            assert!((r - rhs[i]).abs() < 1e-10);
        }
    }
}
