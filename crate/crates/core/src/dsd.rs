//! Death-time detection and trajectory classification.
//!
//! A trajectory is scanned on a uniform grid over `[0, t_max]`; the last sign
//! change of each criterion is then refined by bisection.
//!
//! NPT detection is relative: a state counts as NPT when its smallest
//! partial-transpose eigenvalue is below `-npt_floor * w(t)`, where `w(t)` is
//! the total population outside `|0,0>`. Every element of the evolved state
//! decays towards the ground state, so an absolute threshold would declare
//! every long-lived NPT trajectory dead once its eigenvalues shrink past it.

use std::fmt;

use rayon::prelude::*;

use crate::dynamics::{propagate_closed_form, DecayParams};
use crate::error::{Error, Result};
use crate::measures::{ccnr_score, criteria_sample, pt_eigenvalues, CriteriaSample, DEFAULT_TOL};
use crate::states::{DensityMatrix, DIM};

/// Sampled criteria along an evolution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub samples: Vec<CriteriaSample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `n_points` uniformly spaced times from 0 to `t_max` inclusive.
pub fn time_grid(t_max: f64, n_points: usize) -> Vec<f64> {
    let step = t_max / (n_points - 1) as f64;
    (0..n_points)
        .map(|i| if i + 1 == n_points { t_max } else { i as f64 * step })
        .collect()
}

fn check_horizon(t_max: f64, n_points: usize) -> Result<()> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 grid points, got {n_points}")));
    }
    Ok(())
}

pub fn sample_trajectory(rho0: &DensityMatrix, params: &DecayParams, t_max: f64, n_points: usize) -> Result<Trajectory> {
    sample_trajectory_with_tol(rho0, params, t_max, n_points, DEFAULT_TOL)
}

/// As [`sample_trajectory`], with an explicit partial-transpose zero threshold.
pub fn sample_trajectory_with_tol(
    rho0: &DensityMatrix,
    params: &DecayParams,
    t_max: f64,
    n_points: usize,
    tol: f64,
) -> Result<Trajectory> {
    check_horizon(t_max, n_points)?;
    let times = time_grid(t_max, n_points);
    let samples = times
        .par_iter()
        .map(|&t| criteria_sample(&propagate_closed_form(rho0, t, params)?, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times, samples })
}

/// Population outside the joint ground state, summed from the eight excited
/// populations so it keeps full relative precision as it decays.
pub fn excited_weight(rho: &DensityMatrix) -> f64 {
    (0..DIM - 1).map(|i| rho.element(i, i).re).sum()
}

/// Tuning knobs for death-time detection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DsdOptions {
    /// Coarse scan points over `[0, t_max]`.
    pub grid_points: usize,
    /// Bisection stops when the bracket is no wider than this.
    pub tol_t: f64,
    /// NPT threshold relative to the excited population.
    pub npt_floor: f64,
    /// CCNR scores at or below this count as non-detection.
    pub ccnr_tol: f64,
}

impl Default for DsdOptions {
    fn default() -> Self {
        DsdOptions {
            grid_points: 2000,
            tol_t: 1e-5,
            npt_floor: 1e-12,
            ccnr_tol: 1e-10,
        }
    }
}

/// A located death time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeathTime {
    pub time: f64,
    /// The criterion switched on again after switching off somewhere on the
    /// scan grid, so `time` is only the last crossing.
    pub non_monotone: bool,
}

struct Probe<'a> {
    rho0: &'a DensityMatrix,
    params: &'a DecayParams,
    opts: &'a DsdOptions,
}

impl Probe<'_> {
    fn state(&self, t: f64) -> Result<DensityMatrix> {
        propagate_closed_form(self.rho0, t, self.params)
    }

    fn is_npt(&self, t: f64) -> Result<bool> {
        let rho = self.state(t)?;
        let w = excited_weight(&rho);
        let min = pt_eigenvalues(&rho)?[0];
        Ok(w > 0.0 && min < -self.opts.npt_floor * w)
    }

    fn is_ccnr_positive(&self, t: f64) -> Result<bool> {
        Ok(ccnr_score(&self.state(t)?)? > self.opts.ccnr_tol)
    }

    fn scan(&self, grid: &[f64], f: impl Fn(&Self, f64) -> Result<bool> + Sync) -> Result<Vec<bool>> {
        grid.par_iter().map(|&t| f(self, t)).collect()
    }

    /// Refines the switch-off between `lo` (on) and `hi` (off).
    fn bisect(&self, mut lo: f64, mut hi: f64, f: impl Fn(&Self, f64) -> Result<bool>) -> Result<f64> {
        while hi - lo > self.opts.tol_t {
            let mid = 0.5 * (lo + hi);
            if f(self, mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// True if the `true` entries do not form a single contiguous run.
fn has_gap(flags: &[bool]) -> bool {
    let first = flags.iter().position(|&f| f);
    let last = flags.iter().rposition(|&f| f);
    match (first, last) {
        (Some(a), Some(b)) => flags[a..=b].iter().any(|&f| !f),
        _ => false,
    }
}

/// Outcome of the NPT scan before refinement.
enum NptScan {
    NeverNpt,
    NptAtHorizon,
    Crossing { lo: f64, hi: f64, non_monotone: bool },
}

fn npt_scan(probe: &Probe, t_max: f64) -> Result<NptScan> {
    let grid = time_grid(t_max, probe.opts.grid_points);
    let flags = probe.scan(&grid, Probe::is_npt)?;
    Ok(match flags.iter().rposition(|&f| f) {
        None => NptScan::NeverNpt,
        Some(k) if k + 1 == grid.len() => NptScan::NptAtHorizon,
        Some(k) => NptScan::Crossing {
            lo: grid[k],
            hi: grid[k + 1],
            non_monotone: has_gap(&flags) || !flags[0],
        },
    })
}

fn negativity_death(probe: &Probe, t_max: f64) -> Result<Option<DeathTime>> {
    Ok(match npt_scan(probe, t_max)? {
        NptScan::NeverNpt => Some(DeathTime {
            time: 0.0,
            non_monotone: false,
        }),
        NptScan::NptAtHorizon => None,
        NptScan::Crossing { lo, hi, non_monotone } => Some(DeathTime {
            time: probe.bisect(lo, hi, Probe::is_npt)?,
            non_monotone,
        }),
    })
}

fn realignment_death(probe: &Probe, t_max: f64) -> Result<Option<DeathTime>> {
    let grid = time_grid(t_max, probe.opts.grid_points);
    let flags = probe.scan(&grid, Probe::is_ccnr_positive)?;
    let non_monotone = has_gap(&flags);
    Ok(match flags.iter().rposition(|&f| f) {
        None => None,
        Some(k) if k + 1 == grid.len() => Some(DeathTime {
            time: t_max,
            non_monotone,
        }),
        Some(k) => Some(DeathTime {
            time: probe.bisect(grid[k], grid[k + 1], Probe::is_ccnr_positive)?,
            non_monotone,
        }),
    })
}

fn validate_options(t_max: f64, opts: &DsdOptions) -> Result<()> {
    check_horizon(t_max, opts.grid_points)?;
    if opts.tol_t.is_nan() || opts.tol_t <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol_t must be positive, got {}", opts.tol_t)));
    }
    Ok(())
}

/// Time after which the state stays PPT on the scan grid.
///
/// `None` if the state is still NPT at `t_max`; `Some(0)` if it is never NPT.
pub fn find_negativity_death(
    rho0: &DensityMatrix,
    params: &DecayParams,
    t_max: f64,
    tol_t: f64,
) -> Result<Option<DeathTime>> {
    let opts = DsdOptions {
        tol_t,
        ..DsdOptions::default()
    };
    find_negativity_death_with(rho0, params, t_max, &opts)
}

pub fn find_negativity_death_with(
    rho0: &DensityMatrix,
    params: &DecayParams,
    t_max: f64,
    opts: &DsdOptions,
) -> Result<Option<DeathTime>> {
    validate_options(t_max, opts)?;
    negativity_death(&Probe { rho0, params, opts }, t_max)
}

/// Last time at which the CCNR score is positive.
///
/// `None` if the score is never positive; `Some(t_max)` if it still is at
/// the horizon.
pub fn find_realignment_death(
    rho0: &DensityMatrix,
    params: &DecayParams,
    t_max: f64,
    tol_t: f64,
) -> Result<Option<DeathTime>> {
    let opts = DsdOptions {
        tol_t,
        ..DsdOptions::default()
    };
    find_realignment_death_with(rho0, params, t_max, &opts)
}

pub fn find_realignment_death_with(
    rho0: &DensityMatrix,
    params: &DecayParams,
    t_max: f64,
    opts: &DsdOptions,
) -> Result<Option<DeathTime>> {
    validate_options(t_max, opts)?;
    realignment_death(&Probe { rho0, params, opts }, t_max)
}

/// The three kinds of trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrajectoryType {
    /// NPT up to the horizon.
    NptForever,
    /// Becomes PPT and is not detected by realignment afterwards.
    EsdNoDsd,
    /// Becomes PPT while realignment still certifies entanglement.
    DsdThenUndetected,
}

impl TrajectoryType {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrajectoryType::NptForever => "NPT_FOREVER",
            TrajectoryType::EsdNoDsd => "ESD_NO_DSD",
            TrajectoryType::DsdThenUndetected => "DSD_THEN_UNDETECTED",
        }
    }
}

impl fmt::Display for TrajectoryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DsdReport {
    /// Negativity death time; `None` if NPT at the horizon.
    pub t_n: Option<f64>,
    /// Last CCNR-positive time; `None` if never positive.
    pub t_r: Option<f64>,
    /// `(t_n, t_r)` when realignment certifies PPT entanglement after `t_n`.
    pub window: Option<(f64, f64)>,
    pub trajectory_type: TrajectoryType,
    /// The classification rests on CCNR non-detection at some times, which
    /// does not imply separability.
    pub entanglement_after_tn_unknown: bool,
    /// PPT already at `t = 0` (then `t_n == Some(0.0)`).
    pub initially_ppt: bool,
    /// Either criterion re-crossed on the scan grid.
    pub non_monotone: bool,
    /// `t_max` of the analysis; `NptForever` means "NPT up to here".
    pub horizon: f64,
}

pub fn classify(rho0: &DensityMatrix, params: &DecayParams, t_max: f64) -> Result<DsdReport> {
    classify_with(rho0, params, t_max, &DsdOptions::default())
}

pub fn classify_with(rho0: &DensityMatrix, params: &DecayParams, t_max: f64, opts: &DsdOptions) -> Result<DsdReport> {
    validate_options(t_max, opts)?;
    let probe = Probe { rho0, params, opts };
    let tn = negativity_death(&probe, t_max)?;
    let tr = realignment_death(&probe, t_max)?;

    let initially_ppt = !probe.is_npt(0.0)?;
    let non_monotone = tn.is_some_and(|d| d.non_monotone) || tr.is_some_and(|d| d.non_monotone);
    let t_n = tn.map(|d| d.time);
    let t_r = tr.map(|d| d.time);

    let (trajectory_type, window) = match (t_n, t_r) {
        (None, _) => (TrajectoryType::NptForever, None),
        (Some(n), Some(r)) if r > n => (TrajectoryType::DsdThenUndetected, Some((n, r))),
        (Some(_), _) => (TrajectoryType::EsdNoDsd, None),
    };
    Ok(DsdReport {
        t_n,
        t_r,
        window,
        trajectory_type,
        entanglement_after_tn_unknown: trajectory_type != TrajectoryType::NptForever,
        initially_ppt,
        non_monotone,
        horizon: t_max,
    })
}
