//! Minimum latency submodular cover by phase doubling over a submodular
//! orienteering oracle.

use num_traits::Zero;

use crate::error::{check_cap, Error, Result};
use crate::instances::{ElemSet, Metric, ValuationSet};
use crate::orienteering::{SopQuery, SopSolver};
use crate::rational::{self, int, Rational};
use crate::ranking::{recurrence_rows, CheckpointRow};

pub const BRUTE_FORCE_MAX: usize = 7;

/// A walk from the root with the distance at which each function is covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatencyTour {
    pub walk: Vec<usize>,
    /// `prefix[p]` is the walk length up to position `p`.
    pub prefix: Vec<u64>,
    pub cover_times: Vec<u64>,
    pub objective: u64,
}

impl LatencyTour {
    pub fn from_walk(metric: &Metric, vs: &ValuationSet, walk: Vec<usize>) -> Result<Self> {
        let mut prefix = Vec::with_capacity(walk.len());
        let mut times = vec![None; vs.len()];
        let mut seen = ElemSet::EMPTY;
        let mut d = 0u64;
        for (p, &v) in walk.iter().enumerate() {
            if p > 0 {
                d += metric.d(walk[p - 1], v);
            }
            prefix.push(d);
            if !seen.contains(v) {
                seen.insert(v);
                for (i, slot) in times.iter_mut().enumerate() {
                    if slot.is_none() && vs.is_covered(i, seen) {
                        *slot = Some(d);
                    }
                }
            }
        }
        let cover_times = times
            .iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Error::Uncoverable(format!("function {i} is not covered by the walk"))))
            .collect::<Result<Vec<u64>>>()?;
        let objective = cover_times.iter().sum();
        Ok(LatencyTour {
            walk,
            prefix,
            cover_times,
            objective,
        })
    }

    pub fn length(&self) -> u64 {
        self.prefix.last().copied().unwrap_or(0)
    }

    /// Walk distance at which `v` is first reached.
    pub fn first_visit(&self, v: usize) -> Option<u64> {
        self.walk.iter().position(|&u| u == v).map(|p| self.prefix[p])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation {
    pub path: Vec<usize>,
    pub length: u64,
    /// Residual value `f^S(V(P))` of the returned path.
    pub gain: Rational,
    pub added: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phase {
    pub k: u32,
    pub budget: u64,
    pub augmentations: Vec<Augmentation>,
    /// Walk length at the end of the phase.
    pub prefix_length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseLog {
    pub alpha: Rational,
    pub rho: u64,
    pub sigma: u64,
    /// Augmentations per phase, `ceil(4 * alpha * rho)`.
    pub per_phase: u64,
    pub phases: Vec<Phase>,
}

impl PhaseLog {
    /// `16 * alpha * rho * sigma`.
    pub fn checkpoint_mult(&self) -> Rational {
        int(16 * self.rho as i128 * self.sigma as i128) * self.alpha
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlscRun {
    pub tour: LatencyTour,
    pub log: PhaseLog,
}

/// Runs phases `k = 0, 1, ...` of `ceil(4 alpha rho)` orienteering queries
/// with budget `2^k` on the residual valuation, stitching the returned
/// paths at the root.
///
/// Fails with [`Error::Uncoverable`] once a phase with `2^k >= n * diameter`
/// makes no progress.
pub fn alg_mlsc(metric: &Metric, vs: &ValuationSet, solver: &dyn SopSolver, rho: u64, sigma: u64) -> Result<MlscRun> {
    if vs.domain() != metric.len() {
        return Err(Error::invalid(format!(
            "valuations over {} elements, metric has {} points",
            vs.domain(),
            metric.len()
        )));
    }
    let root = metric.root();
    let alpha = vs.alpha();
    let per_phase = rational::ceil_u64(&(int(4 * rho as i128) * alpha));
    let cap = (metric.len() as u64).saturating_mul(metric.diameter());
    let mut log = PhaseLog {
        alpha,
        rho,
        sigma,
        per_phase,
        phases: Vec::new(),
    };
    let mut walk = vec![root];
    let mut len = 0u64;
    let mut s = ElemSet::EMPTY;
    let mut k = 0u32;
    while !vs.all_covered(s) {
        let budget = 1u64 << k;
        let mut phase = Phase {
            k,
            budget,
            augmentations: Vec::new(),
            prefix_length: len,
        };
        let mut progress = false;
        for _ in 0..per_phase {
            let residual = vs.residual(s);
            let q = SopQuery {
                metric,
                root,
                valuation: &residual,
                budget,
            };
            let res = solver.solve(&q)?;
            if res.length > sigma.saturating_mul(budget) {
                return Err(Error::Invariant(format!(
                    "solver `{}` returned length {} above sigma * budget = {}",
                    solver.name(),
                    res.length,
                    sigma * budget
                )));
            }
            let gain = residual.gain(res.path.iter().copied().collect());
            if gain.is_zero() {
                continue;
            }
            progress = true;
            let mut added = Vec::new();
            // return to the root before the next path
            let last = *walk.last().unwrap();
            len += metric.d(last, root);
            if last != root {
                walk.push(root);
            }
            for w in res.path.windows(2) {
                len += metric.d(w[0], w[1]);
            }
            for &v in &res.path[1..] {
                walk.push(v);
            }
            for &v in &res.path {
                if !s.contains(v) {
                    s.insert(v);
                    added.push(v);
                }
            }
            phase.augmentations.push(Augmentation {
                length: res.length,
                path: res.path,
                gain,
                added,
            });
            if vs.all_covered(s) {
                break;
            }
        }
        phase.prefix_length = len;
        log.phases.push(phase);
        if !progress && budget >= cap {
            return Err(Error::Uncoverable(format!(
                "{} functions remain uncovered at budget {budget}",
                vs.uncovered(s)
            )));
        }
        k += 1;
        if k >= 63 {
            return Err(Error::Uncoverable("phase budget overflow".into()));
        }
    }
    let tour = LatencyTour::from_walk(metric, vs, walk)?;
    Ok(MlscRun { tour, log })
}

/// Exact minimizer of the latency objective over all visiting orders of the
/// non-root vertices, lexicographically first among ties.
pub fn brute_force_latency(metric: &Metric, vs: &ValuationSet) -> Result<LatencyTour> {
    let n = metric.len();
    check_cap("brute-force latency", n, BRUTE_FORCE_MAX)?;
    let root = metric.root();
    let rest: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut best: Option<LatencyTour> = None;
    let mut perm = Vec::with_capacity(n);
    perm.push(root);
    permute(&rest, &mut vec![false; rest.len()], &mut perm, &mut |walk| {
        let tour = LatencyTour::from_walk(metric, vs, walk.to_vec())?;
        if best.as_ref().is_none_or(|b| tour.objective < b.objective) {
            best = Some(tour);
        }
        Ok(())
    })?;
    Ok(best.expect("at least one ordering"))
}

fn permute(
    items: &[usize],
    used: &mut Vec<bool>,
    cur: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if cur.len() == items.len() + 1 {
        return visit(cur);
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            permute(items, used, cur, visit)?;
            cur.pop();
            used[i] = false;
        }
    }
    Ok(())
}

/// Recurrence rows with `R_j = R(16 alpha rho sigma 2^j)` and
/// `R*_j = R*(2^j)`.
pub fn mlsc_recurrence_rows(run: &MlscRun, opt: &LatencyTour) -> Vec<CheckpointRow> {
    recurrence_rows(&run.tour.cover_times, &opt.cover_times, &run.log.checkpoint_mult())
}

pub fn check_mlsc_recurrence(run: &MlscRun, opt: &LatencyTour) -> bool {
    mlsc_recurrence_rows(run, opt).iter().all(|r| r.holds)
}

/// Checks that the walk length after phase `j` is at most
/// `sum_{k <= j} 2 H sigma 2^k` and that every vertex added in phase `j` is
/// reached within `16 alpha rho sigma 2^j`.
pub fn check_phase_bounds(run: &MlscRun) -> bool {
    let log = &run.log;
    let mult = log.checkpoint_mult();
    let mut bound = 0u64;
    for phase in &log.phases {
        bound += 2 * log.per_phase * log.sigma * phase.budget;
        if phase.prefix_length > bound {
            return false;
        }
        let limit = rational::checkpoint(&mult, phase.k);
        for aug in &phase.augmentations {
            for &v in &aug.added {
                match run.tour.first_visit(v) {
                    Some(t) if t <= limit => {}
                    _ => return false,
                }
            }
        }
    }
    true
}
