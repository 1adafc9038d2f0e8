//! Iteration of protocol maps: trajectories, Jacobians, fidelity curves,
//! thresholds, and twirl/no-twirl iteration counts.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::protocols::{Protocol, ProtocolError, TwirlMode};
use crate::states::{axis_fidelity, classify_state, family_state, BlochVector, Classification, Family, ReferenceStateSet, StateError, StateKind};

pub const DEFAULT_CONV_TOL: f64 = 1e-9;
pub const DEFAULT_CLASS_TOL: f64 = 1e-3;
pub const DEFAULT_EPS: f64 = 1e-5;
pub const DEFAULT_F_TARGET: f64 = 0.99;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("m_max must be at least 1")]
    ZeroSteps,
    #[error("finite-difference step must be positive, got {0}")]
    BadEps(f64),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("fidelity range [{0}, {1}] must satisfy 0 <= lo < hi <= 1")]
    BadRange(f64, f64),
    #[error("bisection bracket invalid: f_lo = {f_lo} probes as {lo}, f_hi = {f_hi} probes as {hi} (need mixed below, magic above)")]
    Bracket { f_lo: f64, lo: ProbeOutcome, f_hi: f64, hi: ProbeOutcome },
    #[error(transparent)]
    State(#[from] StateError),
}

/// How an iteration ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Terminal {
    /// A step had zero success probability.
    Bad,
    Classified(Classification),
}

impl Terminal {
    pub fn label(&self) -> &str {
        match self {
            Terminal::Bad => "bad",
            Terminal::Classified(c) => c.label(),
        }
    }

    pub fn kind(&self) -> Option<StateKind> {
        match self {
            Terminal::Bad => None,
            Terminal::Classified(c) => c.kind(),
        }
    }

    pub fn is_magic(&self) -> bool {
        self.kind().is_some_and(StateKind::is_magic)
    }
}

/// Iterates with per-step success probabilities. `points[0]` is the input with probability 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<(BlochVector, f64)>,
    pub terminal: Terminal,
    /// Steps applied.
    pub m: u32,
    /// `n_inputs^m`, saturating at `u128::MAX`.
    pub resources: u128,
}

impl Trajectory {
    pub fn last(&self) -> BlochVector {
        self.points.last().expect("trajectory holds its start point").0
    }
}

pub fn resource_count(n_inputs: u32, m: u32) -> u128 {
    (n_inputs as u128).checked_pow(m).unwrap_or(u128::MAX)
}

/// Applies `p` until successive iterates differ by less than `conv_tol`, a
/// step fails, or `m_max` steps are done, then labels the read-out state.
pub fn iterate(
    p: &Protocol,
    r0: BlochVector,
    m_max: u32,
    conv_tol: f64,
    refs: &ReferenceStateSet,
    class_tol: f64,
) -> Result<Trajectory, DynamicsError> {
    if m_max == 0 {
        return Err(DynamicsError::ZeroSteps);
    }
    let mut points = vec![(r0, 1.0)];
    let mut r = r0;
    let mut m = 0;
    let mut bad = false;
    while m < m_max {
        match p.apply(r) {
            Ok((next, prob)) => {
                m += 1;
                points.push((next, prob));
                let moved = next.distance(r);
                r = next;
                if moved < conv_tol {
                    break;
                }
            }
            Err(_) => {
                bad = true;
                break;
            }
        }
    }
    let terminal = if bad {
        Terminal::Bad
    } else {
        Terminal::Classified(classify_state(p.readout(r), refs, class_tol)?)
    };
    Ok(Trajectory { points, terminal, m, resources: resource_count(p.n_inputs(), m) })
}

/// Exactly `m` steps, without labels.
pub fn iterate_fixed(p: &Protocol, r: BlochVector, m: u32) -> Result<BlochVector, ProtocolError> {
    let mut r = r;
    for _ in 0..m {
        r = p.apply(r)?.0;
    }
    Ok(r)
}

pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY3: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Eigenvalues of a symmetric 3×3 matrix, descending (trigonometric closed form).
pub fn symmetric_eigenvalues(a: &Mat3) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(|x, y| y.total_cmp(x));
        return d;
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = *a;
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (*v - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let half_det = (det / 2.0).clamp(-1.0, 1.0);
    let phi = half_det.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}

/// Largest singular value: `sqrt(λ_max(JᵀJ))`.
pub fn spectral_norm(j: &Mat3) -> f64 {
    let mut jtj = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            jtj[a][b] = (0..3).map(|k| j[k][a] * j[k][b]).sum();
        }
    }
    let scale = jtj.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    // Normalizing keeps the trigonometric form well conditioned.
    for v in jtj.iter_mut().flatten() {
        *v /= scale;
    }
    (symmetric_eigenvalues(&jtj)[0].max(0.0) * scale).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JacobianMethod {
    /// Central differences of the `m`-fold map.
    Direct,
    /// Product of single-step central-difference Jacobians along the trajectory.
    Chain,
}

impl fmt::Display for JacobianMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JacobianMethod::Direct => "direct",
            JacobianMethod::Chain => "chain",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianReport {
    pub method: JacobianMethod,
    /// `None` when some stencil point had zero success probability.
    pub matrix: Option<Mat3>,
    pub norm: Option<f64>,
}

impl JacobianReport {
    fn bad(method: JacobianMethod) -> Self {
        Self { method, matrix: None, norm: None }
    }

    pub fn is_bad(&self) -> bool {
        self.norm.is_none()
    }
}

fn central_difference<F>(f: F, r: BlochVector, eps: f64) -> Option<Mat3>
where
    F: Fn(BlochVector) -> Option<BlochVector>,
{
    let mut j = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut d = [0.0; 3];
        d[k] = eps;
        let d = BlochVector::from_array(d);
        let plus = f(r + d)?.to_array();
        let minus = f(r - d)?.to_array();
        for i in 0..3 {
            j[i][k] = (plus[i] - minus[i]) / (2.0 * eps);
        }
    }
    Some(j)
}

pub fn jacobian(p: &Protocol, r: BlochVector, m: u32, eps: f64, method: JacobianMethod) -> Result<JacobianReport, DynamicsError> {
    if !(eps > 0.0) {
        return Err(DynamicsError::BadEps(eps));
    }
    let matrix = match method {
        JacobianMethod::Direct => central_difference(|x| iterate_fixed(p, x, m).ok(), r, eps),
        JacobianMethod::Chain => {
            let mut acc = Some(IDENTITY3);
            let mut x = r;
            for _ in 0..m {
                let step = central_difference(|y| p.apply(y).ok().map(|o| o.0), x, eps);
                let next = p.apply(x).ok().map(|o| o.0);
                match (acc, step, next) {
                    (Some(a), Some(s), Some(n)) => {
                        acc = Some(mat_mul(&s, &a));
                        x = n;
                    }
                    _ => {
                        acc = None;
                        break;
                    }
                }
            }
            acc
        }
    };
    Ok(match matrix {
        Some(j) if j.iter().flatten().all(|v| v.is_finite()) => JacobianReport { method, matrix: Some(j), norm: Some(spectral_norm(&j)) },
        _ => JacobianReport::bad(method),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub f: f64,
    /// Family fidelity after `m` steps; `None` on a zero-probability step.
    pub fprime: Option<f64>,
    pub dfprime: Option<f64>,
}

/// Samples `f ↦ f'_m` on an even grid and differentiates on the grid.
pub fn curve_sweep(p: &Protocol, family: Family, f_lo: f64, f_hi: f64, samples: usize, m: u32) -> Result<Vec<CurvePoint>, DynamicsError> {
    if samples < 2 {
        return Err(DynamicsError::TooFewSamples(samples));
    }
    if !(0.0 <= f_lo && f_lo < f_hi && f_hi <= 1.0) {
        return Err(DynamicsError::BadRange(f_lo, f_hi));
    }
    let step = (f_hi - f_lo) / (samples - 1) as f64;
    let fs: Vec<f64> = (0..samples).map(|i| if i + 1 == samples { f_hi } else { f_lo + step * i as f64 }).collect();
    let mut fp = Vec::with_capacity(samples);
    for &f in &fs {
        let r = family_state(family, f)?;
        fp.push(iterate_fixed(p, r, m).ok().map(|out| axis_fidelity(p.readout(out), family).0));
    }
    let deriv = |a: usize, b: usize| -> Option<f64> { Some((fp[b]? - fp[a]?) / (fs[b] - fs[a])) };
    Ok((0..samples)
        .map(|i| {
            let d = if i == 0 {
                deriv(0, 1)
            } else if i + 1 == samples {
                deriv(i - 1, i)
            } else {
                deriv(i - 1, i + 1)
            };
            CurvePoint { f: fs[i], fprime: fp[i], dfprime: d }
        })
        .collect())
}

fn csv_value(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.16e}"),
        None => "bad".to_string(),
    }
}

/// CSV with header `f,fprime,dfprime`, 17 significant digits, `bad` for failed samples.
pub fn write_curve_csv<W: Write>(rows: &[CurvePoint], mut w: W) -> io::Result<()> {
    writeln!(w, "f,fprime,dfprime")?;
    for row in rows {
        writeln!(w, "{},{},{}", csv_value(Some(row.f)), csv_value(row.fprime), csv_value(row.dfprime))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    Magic,
    Mixed,
    Other,
}

impl fmt::Display for ProbeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeOutcome::Magic => "magic",
            ProbeOutcome::Mixed => "mixed",
            ProbeOutcome::Other => "other",
        })
    }
}

pub fn probe(p: &Protocol, family: Family, f: f64, m_probe: u32) -> Result<ProbeOutcome, DynamicsError> {
    Ok(probe_with_fidelity(p, family, f, m_probe)?.0)
}

/// Probe outcome together with the family fidelity of the last read-out state.
pub fn probe_with_fidelity(p: &Protocol, family: Family, f: f64, m_probe: u32) -> Result<(ProbeOutcome, f64), DynamicsError> {
    let refs = ReferenceStateSet::standard();
    let t = iterate(p, family_state(family, f)?, m_probe, DEFAULT_CONV_TOL, &refs, DEFAULT_CLASS_TOL)?;
    let outcome = match t.terminal.kind() {
        Some(k) if k.is_magic() => ProbeOutcome::Magic,
        Some(StateKind::Mixed) => ProbeOutcome::Mixed,
        _ => ProbeOutcome::Other,
    };
    let f_out = match t.terminal {
        Terminal::Bad => 0.0,
        Terminal::Classified(_) => axis_fidelity(p.readout(t.last()), family).0,
    };
    Ok((outcome, f_out))
}

/// Bisection for the fidelity separating flow to `I/2` from flow to a magic state.
///
/// Midpoints that have not settled within `m_probe` steps are assigned by the
/// direction their family fidelity moved: up counts as the magic side.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection {
    pub threshold: f64,
    /// `(lo, hi)` after each halving.
    pub brackets: Vec<(f64, f64)>,
}

pub fn threshold_bisect(p: &Protocol, family: Family, f_lo: f64, f_hi: f64, m_probe: u32, iters: u32) -> Result<Bisection, DynamicsError> {
    if !(0.0 <= f_lo && f_lo < f_hi && f_hi <= 1.0) {
        return Err(DynamicsError::BadRange(f_lo, f_hi));
    }
    let lo_out = probe(p, family, f_lo, m_probe)?;
    let hi_out = probe(p, family, f_hi, m_probe)?;
    if lo_out != ProbeOutcome::Mixed || hi_out != ProbeOutcome::Magic {
        return Err(DynamicsError::Bracket { f_lo, lo: lo_out, f_hi, hi: hi_out });
    }
    let (mut lo, mut hi) = (f_lo, f_hi);
    let mut brackets = Vec::with_capacity(iters as usize);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let magic = match probe_with_fidelity(p, family, mid, m_probe)? {
            (ProbeOutcome::Magic, _) => true,
            (ProbeOutcome::Mixed, _) => false,
            (ProbeOutcome::Other, f_out) => f_out > mid,
        };
        if magic {
            hi = mid;
        } else {
            lo = mid;
        }
        brackets.push((lo, hi));
    }
    Ok(Bisection { threshold: 0.5 * (lo + hi), brackets })
}

/// Steps needed to exceed `f_target` in the protocol's family, with the
/// twirl applied every step and with the twirl applied only at read-out.
/// `None` stands for "never within `m_max`" (including failed steps).
pub fn speed_maps(p: &Protocol, r: BlochVector, m_max: u32, f_target: f64) -> (Option<u32>, Option<u32>) {
    let family = p.family();
    let count = |q: Protocol| -> Option<u32> {
        let mut x = r;
        for m in 0..=m_max {
            if m > 0 {
                x = q.apply(x).ok()?.0;
            }
            if axis_fidelity(q.readout(x), family).0 > f_target {
                return Some(m);
            }
        }
        None
    };
    (count(p.with_twirl(TwirlMode::EveryStep, family)), count(p.with_twirl(TwirlMode::FinalOnly, family)))
}
