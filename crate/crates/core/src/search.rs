//! Hartigan–Wong single-point local search, Lloyd's method, and the two
//! local-optimality predicates.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{center_of_mass, move_gain, potential, sq_dist, Clustering, PointSet};
use crate::scalar::Scalar;

/// A reassignment requested by a scripted run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedMove {
    pub point: usize,
    pub src: usize,
    pub dst: usize,
}

/// Policy choosing among improving moves.
#[derive(Clone, Debug, PartialEq)]
pub enum PivotRule {
    /// First improving candidate in (point id, target cluster) order.
    FirstImprovement,
    /// Largest gain; ties go to the smallest (point id, target cluster).
    BestImprovement,
    /// Uniform among improving candidates. The choice depends only on the
    /// seed and the current assignment.
    RandomImprovement { seed: u64 },
    /// Replays a fixed list of moves in order.
    Scripted {
        moves: VecDeque<ScriptedMove>,
        consumed: usize,
    },
}

impl PivotRule {
    pub fn scripted(moves: impl IntoIterator<Item = ScriptedMove>) -> Self {
        PivotRule::Scripted {
            moves: moves.into_iter().collect(),
            consumed: 0,
        }
    }

    pub fn is_scripted(&self) -> bool {
        matches!(self, PivotRule::Scripted { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PivotRule::FirstImprovement => "first",
            PivotRule::BestImprovement => "best",
            PivotRule::RandomImprovement { .. } => "random",
            PivotRule::Scripted { .. } => "scripted",
        }
    }
}

/// One executed reassignment.
#[derive(Clone, Debug, PartialEq)]
pub struct Move<S> {
    pub point: usize,
    pub src: usize,
    pub dst: usize,
    pub gain: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    LocalOpt,
    MaxIters,
    ScriptExhausted,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::LocalOpt => "LOCAL_OPT",
            Termination::MaxIters => "MAX_ITERS",
            Termination::ScriptExhausted => "SCRIPT_EXHAUSTED",
        }
    }
}

/// Log of a Hartigan–Wong run.
#[derive(Clone, Debug)]
pub struct Trace<S> {
    pub moves: Vec<Move<S>>,
    pub initial_potential: S,
    pub final_potential: S,
    pub iterations: usize,
    pub terminated: Termination,
    pub clustering: Clustering<S>,
}

/// How to produce a starting clustering.
#[derive(Clone, Debug, PartialEq)]
pub enum InitStrategy {
    /// Seeded shuffle followed by round-robin dealing into `k` clusters.
    BalancedRandom,
    /// Explicit assignment.
    Given(Vec<usize>),
}

pub fn init_clustering<S: Scalar>(
    points: &PointSet<S>,
    k: usize,
    strategy: &InitStrategy,
    seed: u64,
) -> Result<Clustering<S>> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    match strategy {
        InitStrategy::Given(assign) => Clustering::new(points, k, assign.clone()),
        InitStrategy::BalancedRandom => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let mut assign = vec![0; n];
            for (slot, &id) in order.iter().enumerate() {
                assign[id] = slot % k;
            }
            Clustering::new(points, k, assign)
        }
    }
}

/// Default iteration cap: `10 * k^(4kd)`, saturating at 10^7.
pub fn default_max_iters(k: usize, d: usize) -> usize {
    const CAP: f64 = 1e7;
    let exponent = 4.0 * k as f64 * d as f64;
    let bound = 10.0 * (k as f64).powf(exponent);
    if bound.is_finite() && bound < CAP {
        bound as usize
    } else {
        CAP as usize
    }
}

fn improving_candidates<S: Scalar>(
    clustering: &Clustering<S>,
    points: &PointSet<S>,
    threshold: &S,
    mut visit: impl FnMut(usize, usize, usize, S) -> bool,
) {
    let centers: Vec<Vec<S>> = (0..clustering.k())
        .map(|c| center_of_mass(c, clustering).expect("non-empty cluster"))
        .collect();
    let factors: Vec<(S, S)> = clustering
        .sizes()
        .iter()
        .map(|&s| {
            let n = S::from_count(s);
            let leave = if s >= 2 {
                n.clone() / (n.clone() - S::one())
            } else {
                S::zero()
            };
            let join = n.clone() / (n + S::one());
            (leave, join)
        })
        .collect();
    for point in 0..clustering.n() {
        let src = clustering.cluster_of(point);
        if clustering.size(src) < 2 {
            continue;
        }
        let x = points.point(point);
        let leave = factors[src].0.clone() * sq_dist(x, &centers[src]);
        for dst in 0..clustering.k() {
            if dst == src {
                continue;
            }
            let gain = leave.clone() - factors[dst].1.clone() * sq_dist(x, &centers[dst]);
            if gain > *threshold && !visit(point, src, dst, gain) {
                return;
            }
        }
    }
}

fn assignment_key(seed: u64, assign: &[usize]) -> u64 {
    // FNV-1a over the assignment, folded with the seed.
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    for &c in assign {
        for byte in (c as u64).to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Performs one Hartigan–Wong iteration under `rule`.
///
/// Returns `Ok(None)` when no improving move exists (or a script is
/// exhausted) and leaves the clustering untouched in that case.
pub fn hw_step<S: Scalar>(
    clustering: &mut Clustering<S>,
    points: &PointSet<S>,
    rule: &mut PivotRule,
) -> Result<Option<Move<S>>> {
    let phi = potential(clustering, points);
    hw_step_at(clustering, points, rule, &phi)
}

fn hw_step_at<S: Scalar>(
    clustering: &mut Clustering<S>,
    points: &PointSet<S>,
    rule: &mut PivotRule,
    phi: &S,
) -> Result<Option<Move<S>>> {
    let threshold = S::improvement_threshold(phi);
    let chosen: Option<Move<S>> = match rule {
        PivotRule::Scripted { moves, consumed } => {
            let Some(next) = moves.pop_front() else {
                return Ok(None);
            };
            let index = *consumed;
            *consumed += 1;
            if next.point >= clustering.n() || next.dst >= clustering.k() {
                return Err(Error::precondition(format!(
                    "scripted move {index} refers to a missing point or cluster"
                )));
            }
            let current = clustering.cluster_of(next.point);
            if current != next.src {
                return Err(Error::NotInCluster {
                    point: next.point,
                    cluster: next.src,
                });
            }
            let gain = match move_gain(next.point, next.src, next.dst, clustering, points) {
                Ok(gain) => gain,
                Err(Error::SingletonSource { .. }) => {
                    return Err(Error::ScriptInvalid {
                        index,
                        point: next.point,
                        src: next.src,
                        dst: next.dst,
                        gain: "singleton source".into(),
                    })
                }
                Err(e) => return Err(e),
            };
            if gain <= threshold {
                return Err(Error::ScriptInvalid {
                    index,
                    point: next.point,
                    src: next.src,
                    dst: next.dst,
                    gain: gain.encode(),
                });
            }
            Some(Move {
                point: next.point,
                src: next.src,
                dst: next.dst,
                gain,
            })
        }
        PivotRule::FirstImprovement => {
            let mut found = None;
            improving_candidates(clustering, points, &threshold, |point, src, dst, gain| {
                found = Some(Move {
                    point,
                    src,
                    dst,
                    gain,
                });
                false
            });
            found
        }
        PivotRule::BestImprovement => {
            let mut best: Option<Move<S>> = None;
            improving_candidates(clustering, points, &threshold, |point, src, dst, gain| {
                if best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(Move {
                        point,
                        src,
                        dst,
                        gain,
                    });
                }
                true
            });
            best
        }
        PivotRule::RandomImprovement { seed } => {
            let mut all = Vec::new();
            improving_candidates(clustering, points, &threshold, |point, src, dst, gain| {
                all.push(Move {
                    point,
                    src,
                    dst,
                    gain,
                });
                true
            });
            if all.is_empty() {
                None
            } else {
                let key = assignment_key(*seed, clustering.assignment());
                let pick = ChaCha8Rng::seed_from_u64(key).random_range(0..all.len());
                Some(all.swap_remove(pick))
            }
        }
    };
    if let Some(mv) = &chosen {
        clustering.apply_move(points, mv.point, mv.dst)?;
    }
    Ok(chosen)
}

/// Runs Hartigan–Wong from `init` until no improving move remains, the
/// script runs out, or `max_iters` moves have been made.
pub fn hw_run<S: Scalar>(
    points: &PointSet<S>,
    init: Clustering<S>,
    rule: PivotRule,
    max_iters: usize,
) -> Result<Trace<S>> {
    hw_run_observed(points, init, rule, max_iters, |_, _| {})
}

/// [`hw_run`] with a callback invoked after every accepted move.
pub fn hw_run_observed<S: Scalar>(
    points: &PointSet<S>,
    init: Clustering<S>,
    mut rule: PivotRule,
    max_iters: usize,
    mut observe: impl FnMut(&Move<S>, &Clustering<S>),
) -> Result<Trace<S>> {
    let mut clustering = init;
    let initial_potential = potential(&clustering, points);
    let mut phi = initial_potential.clone();
    let mut moves = Vec::new();
    let terminated = loop {
        if moves.len() >= max_iters {
            break Termination::MaxIters;
        }
        match hw_step_at(&mut clustering, points, &mut rule, &phi)? {
            Some(mv) => {
                phi = phi - mv.gain.clone();
                observe(&mv, &clustering);
                moves.push(mv);
            }
            None if rule.is_scripted() => break Termination::ScriptExhausted,
            None => break Termination::LocalOpt,
        }
    };
    // Float runs re-anchor the reported potential on a fresh evaluation;
    // exact runs keep the running value, which is identical.
    let final_potential = if S::EXACT {
        phi
    } else {
        potential(&clustering, points)
    };
    Ok(Trace {
        iterations: moves.len(),
        moves,
        initial_potential,
        final_potential,
        terminated,
        clustering,
    })
}

/// `true` iff no point in a cluster of size ≥ 2 has a strictly improving
/// reassignment.
pub fn is_hw_local_opt<S: Scalar>(clustering: &Clustering<S>, points: &PointSet<S>) -> bool {
    let phi = potential(clustering, points);
    let threshold = S::improvement_threshold(&phi);
    let mut any = false;
    improving_candidates(clustering, points, &threshold, |_, _, _, _| {
        any = true;
        false
    });
    !any
}

/// `true` iff every point is at minimal distance to its own center.
pub fn is_lloyd_local_opt<S: Scalar>(clustering: &Clustering<S>, points: &PointSet<S>) -> bool {
    let centers: Vec<Vec<S>> = (0..clustering.k())
        .map(|c| center_of_mass(c, clustering).expect("non-empty cluster"))
        .collect();
    (0..clustering.n()).all(|id| {
        let x = points.point(id);
        let own = sq_dist(x, &centers[clustering.cluster_of(id)]);
        centers.iter().all(|c| sq_dist(x, c) >= own)
    })
}

/// One Lloyd round: the assignment after reassignment and the recomputed
/// centers.
#[derive(Clone, Debug, PartialEq)]
pub struct LloydRound<S> {
    pub assign: Vec<usize>,
    pub centers: Vec<Vec<S>>,
    pub reassigned: usize,
    pub potential: S,
}

#[derive(Clone, Debug)]
pub struct LloydTrace<S> {
    pub initial_centers: Vec<Vec<S>>,
    pub initial_potential: S,
    pub rounds: Vec<LloydRound<S>>,
    pub terminated: Termination,
    pub assign: Vec<usize>,
    pub centers: Vec<Vec<S>>,
}

impl<S: Scalar> LloydTrace<S> {
    /// The final state as a [`Clustering`], if no cluster ended up empty.
    pub fn clustering(&self, points: &PointSet<S>) -> Result<Clustering<S>> {
        Clustering::new(points, self.centers.len(), self.assign.clone())
    }
}

/// Lloyd's method from `init`. Ties keep the current cluster, and a cluster
/// emptied by reassignment keeps its previous center.
pub fn lloyd_run<S: Scalar>(
    points: &PointSet<S>,
    init: &Clustering<S>,
    max_iters: usize,
) -> LloydTrace<S> {
    let k = init.k();
    let d = points.dim();
    let mut assign = init.assignment().to_vec();
    let mut centers: Vec<Vec<S>> = (0..k)
        .map(|c| center_of_mass(c, init).expect("non-empty cluster"))
        .collect();
    let initial_centers = centers.clone();
    let initial_potential = potential(init, points);
    let mut rounds = Vec::new();

    let terminated = loop {
        if rounds.len() >= max_iters {
            break Termination::MaxIters;
        }
        let mut reassigned = 0;
        for (id, slot) in assign.iter_mut().enumerate() {
            let x = points.point(id);
            let mut best = *slot;
            let mut best_dist = sq_dist(x, &centers[best]);
            for (c, center) in centers.iter().enumerate() {
                let dist = sq_dist(x, center);
                if dist < best_dist {
                    best = c;
                    best_dist = dist;
                }
            }
            if best != *slot {
                *slot = best;
                reassigned += 1;
            }
        }
        if reassigned == 0 {
            break Termination::LocalOpt;
        }
        let mut sums = vec![vec![S::zero(); d]; k];
        let mut sizes = vec![0usize; k];
        for (id, &c) in assign.iter().enumerate() {
            crate::geometry::add_assign(&mut sums[c], points.point(id));
            sizes[c] += 1;
        }
        for c in 0..k {
            if sizes[c] > 0 {
                let inv = S::one() / S::from_count(sizes[c]);
                centers[c] = crate::geometry::scale(&sums[c], &inv);
            }
        }
        let phi = assign.iter().enumerate().fold(S::zero(), |acc, (id, &c)| {
            acc + sq_dist(points.point(id), &centers[c])
        });
        rounds.push(LloydRound {
            assign: assign.clone(),
            centers: centers.clone(),
            reassigned,
            potential: phi,
        });
    };

    LloydTrace {
        initial_centers,
        initial_potential,
        rounds,
        terminated,
        assign,
        centers,
    }
}
