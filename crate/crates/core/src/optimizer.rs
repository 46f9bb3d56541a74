//! The scaled product program for three families:
//!
//! ```text
//! max abc  s.t.  ab + bc + ca + ad + be + cf <= 1,
//!                a + b + c - d - e - f <= 1,  a..f >= 0
//! ```
//!
//! solved by KKT case analysis and, independently, by direct search.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Steps of the fixed Newton multistart lattice over `(a, b, λ)`.
const GRID_AB: usize = 21;
const GRID_LAMBDA: usize = 11;
const MAX_HALVINGS: u32 = 40;
const MAX_NEWTON_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct OptPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl OptPoint {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        OptPoint { a, b, c, d, e, f }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    /// The three constraints of the unrelaxed program.
    pub fn satisfies_extra_constraints(&self, tol: f64) -> bool {
        self.d + self.e <= self.c + tol
            && self.e + self.f <= self.a + tol
            && self.f + self.d <= self.b + tol
    }
}

impl fmt::Display for OptPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={:.6} b={:.6} c={:.6} d={:.6} e={:.6} f={:.6}",
            self.a, self.b, self.c, self.d, self.e, self.f
        )
    }
}

/// Multipliers `μ₁..μ₈` (two main constraints, then `a..f >= 0`) and the
/// scalar `λ` of the two-variable Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct KktMultipliers {
    pub mu: [f64; 8],
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[allow(non_camel_case_types)]
pub enum CaseLabel {
    DEF_ZERO,
    CASE1,
    CASE2,
    CASE3,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::DEF_ZERO => "DEF_ZERO",
            CaseLabel::CASE1 => "CASE1",
            CaseLabel::CASE2 => "CASE2",
            CaseLabel::CASE3 => "CASE3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub point: OptPoint,
    pub value: f64,
    pub case_label: CaseLabel,
    /// KKT residual at the reconstructed multipliers.
    pub residual: f64,
    /// Feasible within tolerance and satisfying the unrelaxed constraints.
    pub constraint_check: bool,
    pub multipliers: KktMultipliers,
}

impl SolveReport {
    fn build(
        point: OptPoint,
        case_label: CaseLabel,
        multipliers: KktMultipliers,
        residual: f64,
    ) -> Self {
        let (value, g1, g2) = objective_and_constraints(&point);
        let tol = 1e-9;
        let feasible = g1 <= tol && g2 <= tol && point.as_array().iter().all(|&v| v >= -tol);
        SolveReport {
            point,
            value,
            case_label,
            residual,
            constraint_check: feasible && point.satisfies_extra_constraints(tol),
            multipliers,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "case_label": self.case_label.as_str(),
            "point": self.point,
            "value": self.value,
            "residual": self.residual,
            "constraint_check": self.constraint_check,
            "multipliers": self.multipliers,
        })
    }
}

/// `(abc, g1, g2)` with `g1 = ab+bc+ca+ad+be+cf-1` and `g2 = a+b+c-d-e-f-1`.
pub fn objective_and_constraints(p: &OptPoint) -> (f64, f64, f64) {
    let OptPoint { a, b, c, d, e, f } = *p;
    let value = a * b * c;
    let g1 = a * b + b * c + c * a + a * d + b * e + c * f - 1.0;
    let g2 = a + b + c - d - e - f - 1.0;
    (value, g1, g2)
}

fn stationarity(p: &OptPoint, m: &KktMultipliers) -> [f64; 6] {
    let OptPoint { a, b, c, d, e, f } = *p;
    let grad_obj = [b * c, c * a, a * b, 0.0, 0.0, 0.0];
    let grad_g1 = [b + c + d, a + c + e, a + b + f, a, b, c];
    let grad_g2 = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
    let mut out = [0.0; 6];
    for i in 0..6 {
        out[i] = grad_obj[i] - m.mu[0] * grad_g1[i] - m.mu[1] * grad_g2[i] + m.mu[i + 2];
    }
    out
}

/// Max-norm of stationarity, complementary slackness, dual feasibility and
/// primal feasibility violations.
pub fn kkt_residual(p: &OptPoint, m: &KktMultipliers) -> f64 {
    residual_over(p, m, 6)
}

fn residual_over(p: &OptPoint, m: &KktMultipliers, rows: usize) -> f64 {
    let (_, g1, g2) = objective_and_constraints(p);
    let vars = p.as_array();
    let mut r: f64 = 0.0;
    for s in &stationarity(p, m)[..rows] {
        r = r.max(s.abs());
    }
    r = r.max((m.mu[0] * g1).abs()).max((m.mu[1] * g2).abs());
    for (v, mu) in vars.iter().zip(&m.mu[2..]) {
        r = r.max((mu * v).abs()).max(-v);
    }
    for mu in m.mu {
        r = r.max(-mu);
    }
    r.max(g1).max(g2)
}

/// Multipliers for a point with `a, b, c, d > 0` and both main constraints
/// active: rows 4..6 give `μ₂ = μ₁ a`, `μ₇ = μ₁ (b - a)`, `μ₈ = μ₁ (c - a)`,
/// and the second row fixes `μ₁`.
fn active_multipliers(p: &OptPoint, lambda: f64) -> KktMultipliers {
    let OptPoint { a, b, c, e, .. } = *p;
    let mu1 = c * a / (a + c + e + a);
    let mut mu = [0.0; 8];
    mu[0] = mu1;
    mu[1] = mu1 * a;
    mu[6] = mu1 * (b - a);
    mu[7] = mu1 * (c - a);
    KktMultipliers { mu, lambda }
}

/// `d = e = f = 0`: the symmetric point `a = b = c = 1/3`.
pub fn solve_def_zero() -> SolveReport {
    let t = 1.0 / 3.0;
    let point = OptPoint::new(t, t, t, 0.0, 0.0, 0.0);
    // Only g2 binds; the multiplier of the reduced problem is abc's partial.
    let mut mu = [0.0; 8];
    mu[1] = t * t;
    let m = KktMultipliers { mu, lambda: 0.0 };
    let residual = residual_over(&point, &m, 3);
    SolveReport::build(point, CaseLabel::DEF_ZERO, m, residual)
}

/// `μ₇ = μ₈ = 0`: `a = b = c`, `x = 3a - 1`, `3a² + ax = 1`, so
/// `6a² - a - 1 = 0` and `a = x = 1/2`.
pub fn solve_case1() -> SolveReport {
    let a = (1.0 + (1.0f64 + 24.0).sqrt()) / 12.0;
    let x = 3.0 * a - 1.0;
    // Stationarity in d, e, f forces an even split of x.
    let point = OptPoint::new(a, a, a, x / 3.0, x / 3.0, x / 3.0);
    let m = active_multipliers(&point, 0.0);
    SolveReport::build(point, CaseLabel::CASE1, m, kkt_residual(&point, &m))
}

/// `μ₇ > 0 = μ₈`: `e = 0`, `a = c`. With `x = d + f = 2a + b - 1` the
/// first constraint gives `b = (1 + a - 3a²)/(3a)`, and maximizing
/// `a²b = a(1 + a - 3a²)/3` gives `9a² - 2a - 1 = 0`.
pub fn solve_case2() -> SolveReport {
    let a = (1.0 + 10f64.sqrt()) / 9.0;
    let b = (1.0 + a - 3.0 * a * a) / (3.0 * a);
    let x = 2.0 * a + b - 1.0;
    let point = OptPoint::new(a, b, a, x / 2.0, 0.0, x / 2.0);
    let m = active_multipliers(&point, 0.0);
    SolveReport::build(point, CaseLabel::CASE2, m, kkt_residual(&point, &m))
}

fn case3_system(v: [f64; 3]) -> [f64; 3] {
    let [a, b, l] = v;
    [
        b * b + 2.0 * l * a + 4.0 * l * b - l,
        2.0 * a * b + 4.0 * l * a + 2.0 * l * b,
        a * a + 4.0 * a * b + b * b - a - 1.0,
    ]
}

fn case3_jacobian(v: [f64; 3]) -> [[f64; 3]; 3] {
    let [a, b, l] = v;
    [
        [2.0 * l, 2.0 * b + 4.0 * l, 2.0 * a + 4.0 * b - 1.0],
        [2.0 * b + 4.0 * l, 2.0 * a + 2.0 * l, 4.0 * a + 2.0 * b],
        [2.0 * a + 4.0 * b - 1.0, 4.0 * a + 2.0 * b, 0.0],
    ]
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule; `None` for a (numerically) singular matrix.
fn solve3(m: &[[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = det3(m);
    if !det.is_finite() || det.abs() < 1e-14 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mc = *m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *slot = det3(&mc) / det;
    }
    Some(out)
}

/// Damped Newton from `start`; returns the root and its residual when the
/// residual drops below `tol`.
fn newton_case3(start: [f64; 3], tol: f64) -> Option<([f64; 3], f64)> {
    let mut v = start;
    let mut res = max_norm(&case3_system(v));
    for _ in 0..MAX_NEWTON_ITERS {
        if res < tol {
            return Some((v, res));
        }
        let fv = case3_system(v);
        let step = solve3(&case3_jacobian(v), [-fv[0], -fv[1], -fv[2]])?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let cand = [v[0] + t * step[0], v[1] + t * step[1], v[2] + t * step[2]];
            let r = max_norm(&case3_system(cand));
            if r < res {
                v = cand;
                res = r;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (res < tol).then_some((v, res))
}

/// `μ₇, μ₈ > 0`: `e = f = 0`, `b = c`, `d = a + 2b - 1`. Solves the
/// Lagrange system for `max ab²` on `a² + 4ab + b² - a - 1 = 0` from a fixed
/// lattice of starts and keeps the best admissible root.
pub fn solve_case3(tol: f64) -> Result<SolveReport> {
    if tol.is_nan() || tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let mut best: Option<([f64; 3], f64)> = None;
    for i in 0..GRID_AB {
        for j in 0..GRID_AB {
            for l in 0..GRID_LAMBDA {
                let start = [
                    (i + 1) as f64 / 22.0,
                    (j + 1) as f64 / 22.0,
                    -0.05 * (l + 1) as f64,
                ];
                let Some((root, _)) = newton_case3(start, tol) else {
                    continue;
                };
                let [a, b, _] = root;
                if a <= 0.0 || b <= 0.0 || a + 2.0 * b - 1.0 < 0.0 {
                    continue;
                }
                let value = a * b * b;
                let better = match best {
                    None => true,
                    Some((r, v)) => value > v || (value == v && root < r),
                };
                if better {
                    best = Some((root, value));
                }
            }
        }
    }
    let Some(([a, b, lambda], _)) = best else {
        return Err(Error::Inconsistent(
            "no admissible root of the three-equation system".into(),
        ));
    };
    let point = OptPoint::new(a, b, b, a + 2.0 * b - 1.0, 0.0, 0.0);
    let m = active_multipliers(&point, lambda);
    Ok(SolveReport::build(
        point,
        CaseLabel::CASE3,
        m,
        kkt_residual(&point, &m),
    ))
}

/// Result of the case-free maximizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectResult {
    pub point: OptPoint,
    pub value: f64,
    pub starts: usize,
}

/// Feasibility of `(a, b, c)` after choosing `d, e, f` optimally: the second
/// constraint needs `d + e + f >= a + b + c - 1`, and the cheapest way to
/// pay for it in the first puts everything on the variable paired with
/// `min(a, b, c)`.
fn reduced_load(a: f64, b: f64, c: f64) -> f64 {
    a * b + b * c + c * a + a.min(b).min(c) * (a + b + c - 1.0).max(0.0)
}

fn completion(a: f64, b: f64, c: f64) -> OptPoint {
    let x = (a + b + c - 1.0).max(0.0);
    let (mut d, mut e, mut f) = (0.0, 0.0, 0.0);
    if a <= b && a <= c {
        d = x;
    } else if b <= c {
        e = x;
    } else {
        f = x;
    }
    OptPoint::new(a, b, c, d, e, f)
}

/// Largest feasible multiple of the direction `u` (a point of the open
/// simplex). The load grows along rays, so bisection finds the boundary.
fn ray_value(u: [f64; 3]) -> (f64, [f64; 3]) {
    let (mut lo, mut hi) = (0.0f64, 4.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reduced_load(mid * u[0], mid * u[1], mid * u[2]) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let p = [lo * u[0], lo * u[1], lo * u[2]];
    (p[0] * p[1] * p[2], p)
}

fn direction(s: f64, t: f64) -> Option<[f64; 3]> {
    let u = [s, t, 1.0 - s - t];
    u.iter().all(|&x| x > 0.0).then_some(u)
}

/// Maximizes `abc` over the full relaxed region without any case split:
/// reduce `(d, e, f)` exactly, scan a fixed lattice of directions, then
/// refine the best ones by compass search.
pub fn direct_maximize() -> DirectResult {
    // Interior lattice of the simplex with 49 steps per side: 1176 points.
    let steps = 50;
    let mut scored = Vec::new();
    for i in 1..steps {
        for j in 1..steps - i {
            let (s, t) = (i as f64 / steps as f64, j as f64 / steps as f64);
            if let Some(u) = direction(s, t) {
                scored.push((ray_value(u).0, s, t));
            }
        }
    }
    let starts = scored.len();
    scored.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.total_cmp(&y.2))
    });

    let mut best = (f64::NEG_INFINITY, [0.0; 3]);
    for &(v0, s0, t0) in scored.iter().take(12) {
        let (mut s, mut t, mut v) = (s0, t0, v0);
        let mut h = 1.0 / steps as f64;
        while h > 1e-13 {
            let mut moved = false;
            for (ds, dt) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h), (h, -h), (-h, h)] {
                if let Some(u) = direction(s + ds, t + dt) {
                    let cand = ray_value(u).0;
                    if cand > v {
                        s += ds;
                        t += dt;
                        v = cand;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        let (val, p) = ray_value(direction(s, t).expect("refinement stays inside"));
        if val > best.0 {
            best = (val, p);
        }
    }
    let [a, b, c] = best.1;
    DirectResult {
        point: completion(a, b, c),
        value: best.0,
        starts,
    }
}

/// Best of the four cases, checked against [`direct_maximize`].
pub fn solve_global(tol: f64) -> Result<SolveReport> {
    if tol.is_nan() || tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let candidates = [
        solve_def_zero(),
        solve_case1(),
        solve_case2(),
        solve_case3(tol)?,
    ];
    let winner = candidates
        .into_iter()
        .reduce(|x, y| if y.value > x.value { y } else { x })
        .expect("four candidates");
    let direct = direct_maximize();
    let slack = (10.0 * tol).max(1e-10);
    if (direct.value - winner.value).abs() > slack {
        return Err(Error::Inconsistent(format!(
            "case maximum {:.15} disagrees with direct maximum {:.15}",
            winner.value, direct.value
        )));
    }
    if !winner.constraint_check {
        return Err(Error::Inconsistent(format!(
            "winning point {} violates a constraint",
            winner.point
        )));
    }
    Ok(winner)
}

/// Leading coefficient of the product bound for three families: the global
/// maximum rounded up at the fifth decimal.
pub fn product_upper_scaled() -> Result<f64> {
    let v = solve_global(DEFAULT_TOL)?.value;
    Ok((v * 1e5).ceil() / 1e5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, eps: f64) -> bool {
        (x - y).abs() <= eps
    }

    #[test]
    fn objective_examples() {
        let t = 1.0 / 3.0;
        let (v, g1, g2) = objective_and_constraints(&OptPoint::new(t, t, t, 0.0, 0.0, 0.0));
        assert!(close(v, 1.0 / 27.0, 1e-15) && close(g1, t - 1.0, 1e-15) && close(g2, 0.0, 1e-15));
        let (v, g1, g2) = objective_and_constraints(&OptPoint::new(0.5, 0.5, 0.5, 0.5, 0.0, 0.0));
        assert_eq!((v, g1, g2), (0.125, 0.0, 0.0));
        assert_eq!(
            objective_and_constraints(&OptPoint::default()),
            (0.0, -1.0, -1.0)
        );
    }

    #[test]
    fn residual_examples() {
        assert_eq!(
            kkt_residual(&OptPoint::default(), &KktMultipliers::default()),
            0.0
        );
        let bad = OptPoint::new(2.0, 2.0, 2.0, 0.0, 0.0, 0.0);
        assert!(kkt_residual(&bad, &KktMultipliers::default()) > 0.0);
    }

    #[test]
    fn case1_closed_form() {
        let r = solve_case1();
        assert_eq!(r.value, 0.125);
        assert_eq!(r.point.a, 0.5);
        assert!(close(r.point.d + r.point.e + r.point.f, 0.5, 1e-15));
        assert!(r.residual <= 1e-12, "{}", r.residual);
        assert!(
            close(r.multipliers.mu[0], 0.15, 1e-15) && close(r.multipliers.mu[1], 0.075, 1e-15)
        );
    }

    #[test]
    fn case2_closed_form() {
        let r = solve_case2();
        let root10 = 10f64.sqrt();
        assert!(close(729.0 * r.value - 20.0 * root10 - 29.0, 0.0, 1e-10));
        assert!(close(r.point.a, 0.462475, 1e-6));
        assert!(close(r.point.b, 0.591617, 1e-6));
        assert!(close(r.point.d + r.point.f, 0.516568, 1e-6));
        assert!(r.residual <= 1e-12, "{}", r.residual);
    }

    #[test]
    fn case3_newton() {
        let r = solve_case3(DEFAULT_TOL).unwrap();
        assert!(close(r.value, 0.130748, 1e-6));
        assert!(close(r.point.a, 0.37478, 1e-5));
        assert!(close(r.point.b, 0.590649, 1e-6));
        assert!(close(r.point.d, 0.556078, 1e-6));
        assert!(close(r.multipliers.lambda, -0.165171, 1e-6));
        assert_eq!((r.point.e, r.point.f), (0.0, 0.0));
        assert!(case3_system([r.point.a, r.point.b, r.multipliers.lambda])
            .iter()
            .all(|v| v.abs() <= DEFAULT_TOL));
        assert!(r.residual <= 1e-8, "{}", r.residual);
        assert!(solve_case3(0.0).is_err());
    }

    #[test]
    fn case_values_are_ordered() {
        // 1/27 < 1/8 < (29+20√10)/729 < case 3
        let v = [
            solve_def_zero().value,
            solve_case1().value,
            solve_case2().value,
            solve_case3(DEFAULT_TOL).unwrap().value,
        ];
        for w in v.windows(2) {
            assert!(w[0] + 1e-4 < w[1], "{v:?}");
        }
    }

    #[test]
    fn global_is_case3_and_direct_agrees() {
        let r = solve_global(DEFAULT_TOL).unwrap();
        assert_eq!(r.case_label, CaseLabel::CASE3);
        assert!(r.constraint_check);
        let d = direct_maximize();
        assert!(d.starts >= 1000);
        assert!(d.value <= 0.130749);
        assert!(close(d.value, r.value, 1e-6));
        assert_eq!(product_upper_scaled().unwrap(), 0.13075);
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            solve_global(DEFAULT_TOL).unwrap(),
            solve_global(DEFAULT_TOL).unwrap()
        );
    }

    #[test]
    fn grid_never_beats_global() {
        let best = solve_global(DEFAULT_TOL).unwrap().value + 1e-3;
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 * 0.02).collect();
        for &a in &grid {
            for &b in &grid {
                for &z in &grid {
                    // Case 1 manifold (a, x), case 2 (a, b, x = d + f), case 3 (a, b, d).
                    let pts = [
                        OptPoint::new(a, a, a, z / 3.0, z / 3.0, z / 3.0),
                        OptPoint::new(a, b, a, z / 2.0, 0.0, z / 2.0),
                        OptPoint::new(a, b, b, z, 0.0, 0.0),
                    ];
                    for p in pts {
                        let (v, g1, g2) = objective_and_constraints(&p);
                        if g1 <= 0.0 && g2 <= 0.0 {
                            assert!(v <= best, "{p}");
                        }
                    }
                }
            }
        }
    }
}
