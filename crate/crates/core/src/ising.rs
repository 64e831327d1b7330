//! Annealed renormalization map of the Ising model on the M1 family.
//!
//! With `A_k, B_k, C_k, D_k` the averaged conditional partition functions
//! for boundary spins `(+,+,+)`, `(+,+,-)`, `(-,-,+)`, `(-,-,-)`, the ratios
//! `x = A/C`, `y = B/C`, `z = D/C` obey `(x, y, z) ↦ T_t(x, y, z)`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::sampler::check_probability;

/// Tangency value of `t` where the two nontrivial fixed points merge.
pub const T_TANGENT: f64 = 9.0 / 5.0;
/// Relative tolerance used to recognise `t = 9/5` and `t = 1`.
pub const T_TOL: f64 = 1e-12;
/// Coordinates above this switch [`map_step`] to log-sum-exp arithmetic.
pub const LOG_SWITCH: f64 = 1e100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsingParams {
    /// Basic-bond coupling `K`.
    pub k: f64,
    /// Decoration coupling `L`.
    pub l: f64,
    /// External field `h`.
    pub h: f64,
    /// Decoration probability.
    pub p: f64,
}

impl IsingParams {
    pub fn new(k: f64, l: f64, h: f64, p: f64) -> Result<Self> {
        check_probability(p)?;
        for (name, v) in [("K", k), ("L", l), ("h", h)] {
            if !v.is_finite() {
                return Err(invalid(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self { k, l, h, p })
    }

    pub fn t(&self) -> f64 {
        t_of(self.l, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StateTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl StateTriple {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_positive(&self) -> bool {
        [self.x, self.y, self.z].iter().all(|&v| v > 0.0 && v.is_finite())
    }

    pub fn ln(&self) -> LogTriple {
        LogTriple {
            x: self.x.ln(),
            y: self.y.ln(),
            z: self.z.ln(),
        }
    }

    /// Largest of `|ln x|, |ln y|, |ln z|`: how far the boundary ratios have
    /// moved from 1 in either direction.
    pub fn log_spread(&self) -> f64 {
        self.x.ln().abs().max(self.y.ln().abs()).max(self.z.ln().abs())
    }

    /// Signed distance from the surface `x = y³ z`, in log form.
    pub fn surface_defect(&self) -> f64 {
        self.x.ln() - 3.0 * self.y.ln() - self.z.ln()
    }
}

/// A state stored as `(ln x, ln y, ln z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LogTriple {
    pub fn exp(&self) -> StateTriple {
        StateTriple::new(self.x.exp(), self.y.exp(), self.z.exp())
    }
}

/// `t = ((p e^L + 1 - p) / (p e^{-L} + 1 - p))²`.
pub fn t_of(l: f64, p: f64) -> f64 {
    let ratio = (p * l.exp() + 1.0 - p) / (p * (-l).exp() + 1.0 - p);
    ratio * ratio
}

/// `(e^{4(K+h)}, e^{2h}, e^{4K-2h})`.
pub fn initial_state(k: f64, h: f64) -> StateTriple {
    StateTriple::new((4.0 * (k + h)).exp(), (2.0 * h).exp(), (4.0 * k - 2.0 * h).exp())
}

pub fn p_x(x: f64, y: f64) -> f64 {
    x * x * x + 3.0 * x * y * y + 3.0 * y * y + 1.0
}

pub fn p_y(x: f64, y: f64, z: f64) -> f64 {
    x * x * y + y * y * y + 2.0 * x * y + y * y * z + 2.0 * y + z
}

pub fn p_z(y: f64, z: f64) -> f64 {
    y * y * y + 3.0 * y + 3.0 * z + z * z * z
}

pub fn q_poly(x: f64, y: f64, z: f64) -> f64 {
    x * y * y + x + 2.0 * y * y + 2.0 * y * z + z * z + 1.0
}

/// One step of the map. Inputs above [`LOG_SWITCH`] are processed in
/// log-sum-exp form; an image that no longer fits in `f64` is an error
/// (use [`map_step_log`] to keep iterating).
pub fn map_step(s: StateTriple, t: f64) -> Result<StateTriple> {
    check_step_args(&s, t)?;
    if s.x.max(s.y).max(s.z) > LOG_SWITCH {
        let out = map_step_log(s.ln(), t.ln()).exp();
        if !out.is_positive() {
            return Err(crate::error::capacity("map image overflows f64; iterate with map_step_log"));
        }
        return Ok(out);
    }
    let q = q_poly(s.x, s.y, s.z);
    Ok(StateTriple::new(
        t * p_x(s.x, s.y) / q,
        p_y(s.x, s.y, s.z) / q,
        t * p_z(s.y, s.z) / q,
    ))
}

fn check_step_args(s: &StateTriple, t: f64) -> Result<()> {
    if !s.is_positive() {
        return Err(invalid(format!(
            "state must be finite and strictly positive, got ({}, {}, {})",
            s.x, s.y, s.z
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + terms.iter().map(|&v| (v - m).exp()).sum::<f64>().ln()
}

/// The map in log coordinates; `log_t = ln t`.
pub fn map_step_log(s: LogTriple, log_t: f64) -> LogTriple {
    let (a, b, c) = (s.x, s.y, s.z);
    let (l2, l3) = (2f64.ln(), 3f64.ln());
    let px = log_sum_exp(&[3.0 * a, l3 + a + 2.0 * b, l3 + 2.0 * b, 0.0]);
    let py = log_sum_exp(&[2.0 * a + b, 3.0 * b, l2 + a + b, 2.0 * b + c, l2 + b, c]);
    let pz = log_sum_exp(&[3.0 * b, l3 + b, l3 + c, 3.0 * c]);
    let q = log_sum_exp(&[a + 2.0 * b, a, l2 + 2.0 * b, l2 + b + c, 2.0 * c, 0.0]);
    LogTriple {
        x: log_t + px - q,
        y: py - q,
        z: log_t + pz - q,
    }
}

/// Restriction of the map to `{y = 1, x = z}`: `x ↦ t (x² - x + 4)/(x + 3)`.
pub fn phi(t: f64, x: f64) -> f64 {
    t * (x * x - x + 4.0) / (x + 3.0)
}

/// `d/dx` of [`phi`]: `t (x² + 6x - 7)/(x + 3)²`.
pub fn phi_prime(t: f64, x: f64) -> f64 {
    t * (x * x + 6.0 * x - 7.0) / ((x + 3.0) * (x + 3.0))
}

/// Positive fixed points of [`phi`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedPoints {
    /// `t ≤ 1`: a single stable point (`x = 1` at `t = 1`).
    Unique { x: f64 },
    /// `1 < t < 9/5`: stable `low` and unstable `high`.
    Pair { low: f64, high: f64 },
    /// `t = 9/5`: the double root `x = 3`.
    Double { x: f64 },
    /// `t > 9/5`: no positive fixed point.
    None,
}

impl FixedPoints {
    /// Stable (attracting) fixed point, if any.
    pub fn low(&self) -> Option<f64> {
        match *self {
            FixedPoints::Unique { x } | FixedPoints::Double { x } => Some(x),
            FixedPoints::Pair { low, .. } => Some(low),
            FixedPoints::None => None,
        }
    }

    /// Threshold `x2*` separating convergence from divergence.
    pub fn high(&self) -> Option<f64> {
        match *self {
            FixedPoints::Double { x } => Some(x),
            FixedPoints::Pair { high, .. } => Some(high),
            _ => None,
        }
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= T_TOL * b.abs()
}

/// Fixed points of `x = t (x² - x + 4)/(x + 3)`, i.e. the roots of
/// `(t - 1) x² - (3 + t) x + 4t = 0`, from the closed forms.
pub fn fixed_points(t: f64) -> FixedPoints {
    if near(t, T_TANGENT) {
        return FixedPoints::Double { x: 3.0 };
    }
    if t > T_TANGENT {
        return FixedPoints::None;
    }
    if near(t, 1.0) {
        return FixedPoints::Unique { x: 1.0 };
    }
    let root = (9.0 + 22.0 * t - 15.0 * t * t).sqrt();
    // 8t / (3 + t + √D) equals both (-(3+t) + √D)/(2(1-t)) for t < 1 and the
    // smaller root ((3+t) - √D)/(2(t-1)) for t > 1, without cancellation.
    let low = 8.0 * t / (3.0 + t + root);
    if t < 1.0 {
        FixedPoints::Unique { x: low }
    } else {
        FixedPoints::Pair {
            low,
            high: (3.0 + t + root) / (2.0 * (t - 1.0)),
        }
    }
}

/// `ψ(L) = (3 - √5)/(√5 e^L - 3 e^{-L} + 3 - √5)`, the value of `p` at which
/// `t` reaches `9/5`.
pub fn psi(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(invalid(format!("psi needs L > 0, got {l}")));
    }
    let s5 = 5f64.sqrt();
    Ok((3.0 - s5) / (s5 * l.exp() - 3.0 * (-l).exp() + 3.0 - s5))
}

/// `L* = ln(9/5) / 4`.
pub fn l_star() -> f64 {
    T_TANGENT.ln() / 4.0
}

/// Critical coupling `K* = ln(x2*(t)) / 4` for `t ∈ (1, 9/5]`.
pub fn k_star(l: f64, p: f64) -> Result<Option<f64>> {
    check_probability(p)?;
    Ok(k_star_of_t(t_of(l, p)))
}

pub fn k_star_of_t(t: f64) -> Option<f64> {
    match fixed_points(t) {
        FixedPoints::Double { .. } => Some(3f64.ln() / 4.0),
        FixedPoints::Pair { high, .. } => Some(high.ln() / 4.0),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowClass {
    ConvergesToLowFp,
    Critical,
    Diverges,
    NoCriticalPointRegime,
}

impl fmt::Display for FlowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlowClass::ConvergesToLowFp => "converges_to_low_fp",
            FlowClass::Critical => "critical",
            FlowClass::Diverges => "diverges",
            FlowClass::NoCriticalPointRegime => "no_critical_point_regime",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowOptions {
    pub max_iter: usize,
    pub div_threshold: f64,
    pub tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            div_threshold: 1e12,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowResult {
    pub t: f64,
    pub trajectory: Vec<StateTriple>,
    pub classification: FlowClass,
    pub fixed_points: FixedPoints,
    pub k_star: Option<f64>,
}

impl FlowResult {
    pub fn last(&self) -> StateTriple {
        *self.trajectory.last().expect("trajectory is never empty")
    }
}

/// Iterate from [`initial_state`] and classify the flow.
///
/// At `h = 0`, `x1 = e^{4K}` is compared with `x2*`: exactly at `x2*` (to
/// relative `1e-12`) the flow is critical. Otherwise the trajectory decides:
/// it diverges once some ratio leaves `[1/div_threshold, div_threshold]`
/// (past `x2*` the symmetric subspace repels, so the flow may escape towards
/// `x → 0, z → ∞` rather than along `x`), and converges once it is
/// within `tol` of `(x1*, 1, x1*)`. If neither happens in `max_iter` steps
/// (slow approach near tangency), the side of `x2*` decides. For `t > 9/5`
/// the regime has no critical point. For `h ≠ 0`, classification uses the
/// trajectory alone: divergence, settling (successive steps within `tol`),
/// or `critical` if undecided.
pub fn classify_flow(params: &IsingParams, opts: &FlowOptions) -> Result<FlowResult> {
    if opts.max_iter < 1 {
        return Err(invalid("max_iter must be at least 1"));
    }
    if !(opts.tol > 0.0) || !(opts.div_threshold > 0.0) {
        return Err(invalid("tol and div_threshold must be positive"));
    }
    IsingParams::new(params.k, params.l, params.h, params.p)?;
    let t = params.t();
    let fps = fixed_points(t);
    let k_star = k_star_of_t(t);
    let mut s = initial_state(params.k, params.h);
    let mut trajectory = vec![s];

    let target = fps.low().filter(|_| params.h == 0.0);
    let within = |s: &StateTriple, x: f64| {
        let scale = opts.tol * x.max(1.0);
        (s.x - x).abs() <= scale && (s.z - x).abs() <= scale && (s.y - 1.0).abs() <= opts.tol
    };

    let critical_start = params.h == 0.0
        && fps
            .high()
            .is_some_and(|x2| (s.x - x2).abs() <= T_TOL * x2);

    let log_div = opts.div_threshold.ln();
    let mut outcome = None;
    for _ in 0..opts.max_iter {
        if s.log_spread() > log_div {
            outcome = Some(FlowClass::Diverges);
            break;
        }
        match target {
            Some(x) if within(&s, x) => {
                outcome = Some(FlowClass::ConvergesToLowFp);
                break;
            }
            _ => {}
        }
        let next = flow_step(s, t)?;
        trajectory.push(next);
        if target.is_none() && params.h != 0.0 {
            let settled = [(next.x, s.x), (next.y, s.y), (next.z, s.z)]
                .iter()
                .all(|&(a, b)| (a - b).abs() <= opts.tol * b.max(1.0));
            if settled {
                s = next;
                outcome = Some(FlowClass::ConvergesToLowFp);
                break;
            }
        }
        s = next;
    }
    if outcome.is_none() && s.log_spread() > log_div {
        outcome = Some(FlowClass::Diverges);
    }

    let classification = if t > T_TANGENT && !near(t, T_TANGENT) {
        FlowClass::NoCriticalPointRegime
    } else if critical_start {
        FlowClass::Critical
    } else if let Some(c) = outcome {
        c
    } else if params.h == 0.0 {
        let x1 = trajectory[0].x;
        match fps.high() {
            Some(x2) if x1 > x2 => FlowClass::Diverges,
            _ => FlowClass::ConvergesToLowFp,
        }
    } else {
        FlowClass::Critical
    };

    Ok(FlowResult {
        t,
        trajectory,
        classification,
        fixed_points: fps,
        k_star,
    })
}

/// [`map_step`], except that states exactly on `{y = 1, x = z}` are advanced
/// with [`phi`] so the orbit stays on the invariant subspace bit for bit.
fn flow_step(s: StateTriple, t: f64) -> Result<StateTriple> {
    if s.y == 1.0 && s.x == s.z && s.x < LOG_SWITCH {
        let x = phi(t, s.x);
        return Ok(StateTriple::new(x, 1.0, x));
    }
    map_step(s, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `1 < t < 9/5`: unique Gibbs field for `K < K*`.
    UniqueForSmallK,
    /// `t = 9/5`.
    Boundary,
    /// `t > 9/5`: multiple fields for every `K`.
    AlwaysMultiple,
    /// `t < 1` (antiferromagnetic decorations).
    Frustrated,
    /// `t = 1` (no decorations in effect).
    NoTransition,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::UniqueForSmallK => "unique-for-small-K",
            Regime::Boundary => "boundary",
            Regime::AlwaysMultiple => "always-multiple",
            Regime::Frustrated => "frustrated",
            Regime::NoTransition => "no-transition",
        })
    }
}

pub fn regime_of_t(t: f64) -> Regime {
    if near(t, T_TANGENT) {
        Regime::Boundary
    } else if t > T_TANGENT {
        Regime::AlwaysMultiple
    } else if near(t, 1.0) {
        Regime::NoTransition
    } else if t < 1.0 {
        Regime::Frustrated
    } else {
        Regime::UniqueForSmallK
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseRow {
    pub l: f64,
    pub p: f64,
    pub t: f64,
    pub psi: Option<f64>,
    pub k_star: Option<f64>,
    pub regime: Regime,
}

/// One row per `(L, p)` pair, `L` major, in grid order.
pub fn phase_diagram(l_grid: &[f64], p_grid: &[f64]) -> Result<Vec<PhaseRow>> {
    for &p in p_grid {
        check_probability(p)?;
    }
    if let Some(l) = l_grid.iter().find(|l| !l.is_finite()) {
        return Err(invalid(format!("L grid entries must be finite, got {l}")));
    }
    let cells: Vec<(f64, f64)> = l_grid
        .iter()
        .flat_map(|&l| p_grid.iter().map(move |&p| (l, p)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(l, p)| {
            let t = t_of(l, p);
            PhaseRow {
                l,
                p,
                t,
                psi: psi(l).ok(),
                k_star: k_star_of_t(t),
                regime: regime_of_t(t),
            }
        })
        .collect())
}

/// Evenly spaced grid of `steps` points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn t_examples() {
        assert_eq!(t_of(0.7, 0.0), 1.0);
        assert_eq!(t_of(0.0, 0.4), 1.0);
        assert!(close(t_of(0.3, 1.0), (1.2f64).exp(), 1e-15));
        assert!(close(t_of(l_star(), 1.0), 1.8, 1e-15));
    }

    #[test]
    fn initial_state_examples() {
        assert_eq!(initial_state(0.0, 0.0), StateTriple::new(1.0, 1.0, 1.0));
        let s = initial_state(0.4, 0.0);
        assert_eq!((s.x, s.y, s.z), ((1.6f64).exp(), 1.0, (1.6f64).exp()));
        let s = initial_state(0.3, -0.2);
        assert!(s.surface_defect().abs() < 1e-15);
    }

    #[test]
    fn trivial_and_tangent_fixed_points_of_map() {
        assert_eq!(map_step(StateTriple::new(1.0, 1.0, 1.0), 1.0).unwrap(), StateTriple::new(1.0, 1.0, 1.0));
        let s = map_step(StateTriple::new(3.0, 1.0, 3.0), 1.8).unwrap();
        assert!(close(s.x, 3.0, 1e-15) && close(s.y, 1.0, 1e-15) && close(s.z, 3.0, 1e-15));
    }

    #[test]
    fn rejects_non_positive_state() {
        assert!(map_step(StateTriple::new(0.0, 1.0, 1.0), 1.0).is_err());
        assert!(map_step(StateTriple::new(1.0, -1.0, 1.0), 1.0).is_err());
        assert!(map_step(StateTriple::new(1.0, 1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn log_mode_agrees_with_direct() {
        let s = StateTriple::new(2e99, 3.5, 1e99);
        let direct = {
            let q = q_poly(s.x, s.y, s.z);
            (1.3 * p_x(s.x, s.y) / q, p_y(s.x, s.y, s.z) / q, 1.3 * p_z(s.y, s.z) / q)
        };
        let logged = map_step_log(s.ln(), 1.3f64.ln()).exp();
        assert!(close(logged.x, direct.0, 1e-13));
        assert!(close(logged.y, direct.1, 1e-13));
        assert!(close(logged.z, direct.2, 1e-13));
        // beyond the switch the image overflows: reported, not inf
        assert!(map_step(StateTriple::new(1e300, 1.0, 1.0), 1.5).is_err());
        let big = map_step_log(StateTriple::new(1e300, 1.0, 1.0).ln(), 1.5f64.ln());
        assert!(big.x > 1000.0);
    }

    #[test]
    fn fixed_point_cases() {
        assert_eq!(fixed_points(1.8), FixedPoints::Double { x: 3.0 });
        assert_eq!(fixed_points(1.0), FixedPoints::Unique { x: 1.0 });
        assert_eq!(fixed_points(2.0), FixedPoints::None);
        let t = 1.2214;
        let FixedPoints::Pair { low, high } = fixed_points(t) else { panic!() };
        let d = (9.0 + 22.0 * t - 15.0 * t * t).sqrt();
        assert!(close(high, (3.0 + t + d) / (2.0 * (t - 1.0)), 1e-15));
        assert!(close(low, (3.0 + t - d) / (2.0 * (t - 1.0)), 1e-12));
        assert!((phi(t, high) - high).abs() <= 1e-12 * high);
        for t in [0.2, 0.5, 0.9] {
            let FixedPoints::Unique { x } = fixed_points(t) else { panic!() };
            assert!(close(x, (-3.0 - t + (9.0 + 22.0 * t - 15.0 * t * t).sqrt()) / (2.0 * (1.0 - t)), 1e-13));
            assert!(x < 1.0);
        }
    }

    #[test]
    fn fixed_point_stability() {
        for t in [1.05, 1.2, 1.5, 1.79] {
            let FixedPoints::Pair { low, high } = fixed_points(t) else { panic!() };
            for x in [low, high] {
                assert!((phi(t, x) - x).abs() <= 1e-12 * x);
            }
            let fd = |x: f64| {
                let h = 1e-6 * x;
                (phi(t, x + h) - phi(t, x - h)) / (2.0 * h)
            };
            assert!(fd(low) < 1.0 && fd(high) > 1.0);
            assert!((fd(low) - phi_prime(t, low)).abs() < 1e-6);
        }
    }

    #[test]
    fn fixed_points_near_one() {
        let mut prev: Option<(f64, f64)> = None;
        for e in 2..=6 {
            let FixedPoints::Pair { low, high } = fixed_points(1.0 + 10f64.powi(-e)) else { panic!() };
            if let Some((pl, ph)) = prev {
                assert!(low < pl && high > ph);
            }
            prev = Some((low, high));
        }
        let (low, high) = prev.unwrap();
        assert!((low - 1.0).abs() < 1e-5 && high > 1e6);
    }

    #[test]
    fn critical_surface() {
        assert!(close(psi(l_star()).unwrap(), 1.0, 1e-12));
        assert!(psi(2.0 * l_star()).unwrap() < 1.0);
        assert!(psi(0.0).is_err());
        assert!(close(l_star(), 0.146_946_666_225_530, 1e-12));
        assert_eq!(k_star(l_star(), 1.0).unwrap(), Some(3f64.ln() / 4.0));
        for p in [0.05, 0.3, 0.7, 1.0] {
            assert!(k_star(l_star() * 0.9, p).unwrap().is_some());
        }
        let l = 0.3;
        let ps = psi(l).unwrap();
        assert!(k_star(l, (ps * 1.01).min(1.0)).unwrap().is_none());
        assert!(k_star(l, ps * 0.99).unwrap().is_some());
        let t = t_of(0.1, 0.5);
        let FixedPoints::Pair { high, .. } = fixed_points(t) else { panic!() };
        assert_eq!(k_star(0.1, 0.5).unwrap(), Some(high.ln() / 4.0));
    }

    #[test]
    fn surface_not_invariant() {
        let s = initial_state(0.3, 0.2);
        assert!(s.surface_defect().abs() < 1e-14);
        let img = map_step(s, 1.4).unwrap();
        assert!(img.surface_defect().abs() > 1e-3);
    }

    #[test]
    fn flow_examples() {
        let opts = FlowOptions::default();
        let l = l_star() / 2.0;
        let ks = k_star(l, 0.5).unwrap().unwrap();
        let below = classify_flow(&IsingParams::new(ks - 0.05, l, 0.0, 0.5).unwrap(), &opts).unwrap();
        assert_eq!(below.classification, FlowClass::ConvergesToLowFp);
        let above = classify_flow(&IsingParams::new(ks + 0.05, l, 0.0, 0.5).unwrap(), &opts).unwrap();
        assert_eq!(above.classification, FlowClass::Diverges);
        let at = classify_flow(&IsingParams::new(ks, l, 0.0, 0.5).unwrap(), &opts).unwrap();
        assert_eq!(at.classification, FlowClass::Critical);
        let none = classify_flow(&IsingParams::new(0.1, 0.5, 0.0, 1.0).unwrap(), &opts).unwrap();
        assert_eq!(none.classification, FlowClass::NoCriticalPointRegime);
        let neg = classify_flow(&IsingParams::new(1.0, -0.3, 0.0, 0.6).unwrap(), &opts).unwrap();
        assert_eq!(neg.classification, FlowClass::ConvergesToLowFp);
        assert!(neg.last().x < 1.0);
        assert!(classify_flow(&IsingParams { k: 0.1, l: 0.1, h: 0.0, p: 2.0 }, &opts).is_err());
    }

    #[test]
    fn flow_close_to_critical_stays_symmetric() {
        let opts = FlowOptions::default();
        let (l, p) = (l_star() / 2.0, 0.6);
        let ks = k_star(l, p).unwrap().unwrap();
        for dk in [1e-6, 1e-3, 1e-2] {
            let below = classify_flow(&IsingParams::new(ks - dk, l, 0.0, p).unwrap(), &opts).unwrap();
            assert_eq!(below.classification, FlowClass::ConvergesToLowFp);
            assert!(below.trajectory.iter().all(|s| s.y == 1.0 && s.x == s.z));
            let above = classify_flow(&IsingParams::new(ks + dk, l, 0.0, p).unwrap(), &opts).unwrap();
            assert_eq!(above.classification, FlowClass::Diverges);
            assert!(above.last().x > opts.div_threshold);
        }
    }

    #[test]
    fn phase_rows() {
        let rows = phase_diagram(&[l_star(), 0.2], &[0.0, 1.0]).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].p, 0.0);
        assert_eq!(rows[0].regime, Regime::NoTransition);
        assert_eq!(rows[1].regime, Regime::Boundary);
        assert_eq!(rows[1].k_star, Some(3f64.ln() / 4.0));
        assert_eq!(rows[3].regime, Regime::AlwaysMultiple);
        assert_eq!(rows[3].k_star, None);
        assert_eq!(Regime::UniqueForSmallK.to_string(), "unique-for-small-K");
        assert_eq!(linspace(0.05, 0.3, 6).len(), 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn maps_octant_into_itself(x in -20f64..20.0, y in -20f64..20.0, z in -20f64..20.0, lt in -3f64..3.0) {
            let s = StateTriple::new(x.exp(), y.exp(), z.exp());
            let out = map_step(s, lt.exp()).unwrap();
            prop_assert!(out.is_positive());
        }

        #[test]
        fn symmetric_subspace_invariant(lx in -15f64..15.0, lt in -3f64..3.0) {
            let (x, t) = (lx.exp(), lt.exp());
            let out = map_step(StateTriple::new(x, 1.0, x), t).unwrap();
            prop_assert!((out.y - 1.0).abs() <= 1e-12);
            prop_assert!((out.x - out.z).abs() <= 1e-12 * out.x);
            prop_assert!((out.x - phi(t, x)).abs() <= 1e-12 * out.x);
        }

        #[test]
        fn log_step_matches_direct(x in -30f64..30.0, y in -30f64..30.0, z in -30f64..30.0, lt in -3f64..3.0) {
            let s = StateTriple::new(x.exp(), y.exp(), z.exp());
            let a = map_step(s, lt.exp()).unwrap().ln();
            let b = map_step_log(s.ln(), lt);
            prop_assert!((a.x - b.x).abs() < 1e-11 && (a.y - b.y).abs() < 1e-11 && (a.z - b.z).abs() < 1e-11);
        }

        #[test]
        fn psi_is_decreasing(a in 0.01f64..3.0, d in 0.001f64..1.0) {
            prop_assert!(psi(a + d).unwrap() < psi(a).unwrap());
        }

        #[test]
        fn t_is_nine_fifths_at_psi(l in 0.01f64..2.0) {
            let p = psi(l).unwrap();
            if p <= 1.0 {
                prop_assert!((t_of(l, p) - 1.8).abs() < 1e-12);
            }
        }
    }
}
