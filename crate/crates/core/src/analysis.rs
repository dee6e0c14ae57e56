//! Rerun budgets and noise thresholds.
//!
//! A classical exhaustive search needs `N/2` oracle calls on average, and one
//! Grover run needs `pi/4 sqrt(N)`. The rerun budget `k` is how many Grover
//! runs fit in the classical cost; `p_min` is the smallest single-run success
//! probability for which `k` runs succeed at least once with confidence `C`.
//! The noise threshold is the largest `alpha` at which a noisy run still
//! reaches `p_min`.

use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{NoiseFamily, NoiseKind};
use crate::error::{Error, Result};
use crate::grover::{run_noisy, GroverInstance};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;
pub const DEFAULT_RESOLUTION: f64 = 1e-4;
/// Spacing of the coarse scan that brackets the threshold.
pub const COARSE_STEP: f64 = 0.005;

/// Rises smaller than this between neighbouring grid points are rounding.
const MONOTONE_SLACK: f64 = 1e-12;

/// `floor((N/2) / (pi/4 sqrt(N)))`.
pub fn rerun_budget(size: usize) -> u64 {
    let n = size as f64;
    ((n / 2.0) / (FRAC_PI_4 * n.sqrt())).floor() as u64
}

/// Smallest `p` with `1 - (1 - p)^k >= C`, which is `1 - (1 - C)^(1/k)`.
pub fn p_min(reruns: u64, confidence: f64) -> Result<f64> {
    check_confidence(confidence)?;
    if reruns == 0 {
        return Err(Error::NeverCompetitive { size: 0 });
    }
    Ok(1.0 - (1.0 - confidence).powf(1.0 / reruns as f64))
}

fn check_confidence(confidence: f64) -> Result<()> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidConfidence(confidence));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityBudget {
    pub size: usize,
    pub reruns: u64,
    pub confidence: f64,
    /// `None` when the budget is zero.
    pub p_min: Option<f64>,
}

impl ComplexityBudget {
    pub fn new(size: usize, confidence: f64) -> Result<Self> {
        check_confidence(confidence)?;
        let reruns = rerun_budget(size);
        let p_min = (reruns > 0)
            .then(|| p_min(reruns, confidence))
            .transpose()?;
        Ok(Self {
            size,
            reruns,
            confidence,
            p_min,
        })
    }

    pub fn for_qubits(qubits: usize, confidence: f64) -> Result<Self> {
        Self::new(1 << qubits, confidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub success: f64,
}

/// Success probabilities over a grid of noise strengths. Points are
/// evaluated in parallel and returned in grid order.
pub fn sweep_points(inst: &GroverInstance, kind: NoiseKind, alphas: &[f64]) -> Result<Vec<SweepPoint>> {
    alphas
        .par_iter()
        .map(|&alpha| {
            let success = run_noisy(inst, NoiseFamily::new(kind, alpha)?)?;
            Ok(SweepPoint { alpha, success })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdStatus {
    Ok,
    /// Even the noiseless run misses `p_min`, or the rerun budget is zero.
    NeverCompetitive,
    /// The coarse scan found `p(alpha)` rising somewhere; the threshold is
    /// the first downward crossing of `p_min`.
    NonMonotoneWarning,
}

impl ThresholdStatus {
    pub fn name(self) -> &'static str {
        match self {
            ThresholdStatus::Ok => "ok",
            ThresholdStatus::NeverCompetitive => "never-competitive",
            ThresholdStatus::NonMonotoneWarning => "non-monotone-warning",
        }
    }
}

/// Where a sampled curve first drops below `p_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// The first point already fails.
    Never,
    /// Every point passes.
    Above,
    /// Point `index - 1` passes and point `index` is the first failure.
    At { index: usize },
}

/// Finds the first downward crossing of `p_min` on a curve sorted by alpha.
pub fn first_crossing(points: &[SweepPoint], p_min: f64) -> Crossing {
    match points.iter().position(|p| p.success < p_min) {
        Some(0) => Crossing::Never,
        Some(index) => Crossing::At { index },
        None => Crossing::Above,
    }
}

/// Grid-resolution threshold: the last grid alpha before the first failure.
/// `None` when the curve starts below `p_min`.
pub fn grid_threshold(points: &[SweepPoint], p_min: f64) -> Option<f64> {
    match first_crossing(points, p_min) {
        Crossing::Never => None,
        Crossing::Above => points.last().map(|p| p.alpha),
        Crossing::At { index } => Some(points[index - 1].alpha),
    }
}

/// First grid alpha at which the curve rises above its previous value.
pub fn first_rise(points: &[SweepPoint]) -> Option<f64> {
    points
        .windows(2)
        .find(|w| w[1].success > w[0].success + MONOTONE_SLACK)
        .map(|w| w[1].alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub qubits: usize,
    pub kind: NoiseKind,
    pub budget: ComplexityBudget,
    /// Largest competitive alpha, to within the search resolution.
    pub alpha: Option<f64>,
    /// Success probability at `alpha`, or of the noiseless run when not competitive.
    pub success: Option<f64>,
    pub status: ThresholdStatus,
    /// Where the coarse scan first saw the curve rise.
    pub rise_at: Option<f64>,
}

/// Threshold search: coarse scan on `[0, 1]`, then bisection of the
/// bracketing interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearch {
    pub confidence: f64,
    pub resolution: f64,
    pub coarse_step: f64,
    /// Marked element; `2^(n-1)` when `None`.
    pub marked: Option<usize>,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self {
            confidence: DEFAULT_CONFIDENCE,
            resolution: DEFAULT_RESOLUTION,
            coarse_step: COARSE_STEP,
            marked: None,
        }
    }
}

impl ThresholdSearch {
    pub fn run(&self, qubits: usize, kind: NoiseKind) -> Result<Threshold> {
        if !(self.resolution > 0.0) || !(self.coarse_step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "resolution ({}) and coarse step ({}) must be positive",
                self.resolution, self.coarse_step
            )));
        }
        let inst = instance(qubits, self.marked)?;
        let budget = ComplexityBudget::new(inst.size(), self.confidence)?;
        let never = |success| Threshold {
            qubits,
            kind,
            budget,
            alpha: None,
            success,
            status: ThresholdStatus::NeverCompetitive,
            rise_at: None,
        };
        let Some(p_min) = budget.p_min else {
            return Ok(never(None));
        };

        let points = sweep_points(&inst, kind, &coarse_grid(self.coarse_step))?;
        let rise_at = first_rise(&points);
        let (alpha, success) = match first_crossing(&points, p_min) {
            Crossing::Never => return Ok(never(Some(points[0].success))),
            Crossing::Above => {
                let last = points[points.len() - 1];
                (last.alpha, last.success)
            }
            Crossing::At { index } => {
                let mut lo = points[index - 1];
                let mut hi = points[index].alpha;
                while hi - lo.alpha > self.resolution {
                    let mid = 0.5 * (lo.alpha + hi);
                    let p = run_noisy(&inst, NoiseFamily::new(kind, mid)?)?;
                    if p >= p_min {
                        lo = SweepPoint { alpha: mid, success: p };
                    } else {
                        hi = mid;
                    }
                }
                (lo.alpha, lo.success)
            }
        };
        Ok(Threshold {
            qubits,
            kind,
            budget,
            alpha: Some(alpha),
            success: Some(success),
            status: if rise_at.is_some() {
                ThresholdStatus::NonMonotoneWarning
            } else {
                ThresholdStatus::Ok
            },
            rise_at,
        })
    }
}

fn instance(qubits: usize, marked: Option<usize>) -> Result<GroverInstance> {
    match marked {
        Some(m) => GroverInstance::new(qubits, m),
        None => GroverInstance::with_default_marked(qubits),
    }
}

/// `0, step, 2 step, ...` up to and including 1.
pub fn coarse_grid(step: f64) -> Vec<f64> {
    let count = (1.0 / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|i| i as f64 * step).collect();
    if grid.last().is_some_and(|&a| a < 1.0 - 1e-12) {
        grid.push(1.0);
    }
    grid
}

/// Largest competitive alpha with the default coarse step and marked element.
pub fn alpha_threshold(
    qubits: usize,
    kind: NoiseKind,
    confidence: f64,
    resolution: f64,
) -> Result<Threshold> {
    ThresholdSearch {
        confidence,
        resolution,
        ..ThresholdSearch::default()
    }
    .run(qubits, kind)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub qubits: usize,
    pub kind: NoiseKind,
    pub confidence: f64,
    pub points: Vec<SweepPoint>,
    pub p_min: Option<f64>,
    pub threshold: Threshold,
}

impl SweepResult {
    pub fn threshold_alpha(&self) -> Option<f64> {
        self.threshold.alpha
    }

    pub fn non_monotone(&self) -> bool {
        first_rise(&self.points).is_some()
    }
}

/// One noisy run per grid point with the default marked element, plus the
/// threshold located by [`alpha_threshold`].
pub fn sweep(qubits: usize, kind: NoiseKind, confidence: f64, alphas: &[f64]) -> Result<SweepResult> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("alpha grid is empty".into()));
    }
    if alphas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig("alpha grid must be sorted".into()));
    }
    let inst = GroverInstance::with_default_marked(qubits)?;
    let points = sweep_points(&inst, kind, alphas)?;
    let threshold = alpha_threshold(qubits, kind, confidence, DEFAULT_RESOLUTION)?;
    Ok(SweepResult {
        qubits,
        kind,
        confidence,
        points,
        p_min: threshold.budget.p_min,
        threshold,
    })
}
