//! The exponential worst-case instance on the line.
//!
//! The instance is a chain of gadgets `G_0, ..., G_{m-1}`. `G_0` is a single
//! leaf point `f`; every other gadget is a scaled and translated copy of a
//! four-point unit gadget `{a, b, p, q}` owning two clusters. Gadget `G_i`
//! watches `G_{i-1}` and wakes it whenever it falls asleep, so `G_{i-1}`
//! falls asleep twice for every time `G_i` does. The scripted sequence is
//! produced by an explicit per-gadget state machine and then replayed
//! through the Hartigan–Wong engine in exact rational arithmetic.
//!
//! Coordinates: `G_1` is the unit gadget itself (`a=9, b=6, p=5, q=13`),
//! the leaf sits at `f=0`, and corresponding points of consecutive gadgets
//! satisfy `x_{i+1} = 5 x_i + 8`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{set_move_gain, Clustering, PointSet};
use crate::scalar::{rational, Rational, Scalar};
use crate::search::{hw_run_observed, is_hw_local_opt, Move, PivotRule, ScriptedMove, Termination};

/// Unit gadget coordinates.
pub const UNIT_A: i64 = 9;
pub const UNIT_B: i64 = 6;
pub const UNIT_P: i64 = 5;
pub const UNIT_Q: i64 = 13;
pub const LEAF_F: i64 = 0;
pub const TRANSLATION: i64 = 8;
pub const SCALE: i64 = 5;

/// Largest `m` accepted by [`build_instance`].
pub const MAX_M: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    A,
    B,
    P,
    Q,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::A, Role::B, Role::P, Role::Q];

    fn unit(self) -> i64 {
        match self {
            Role::A => UNIT_A,
            Role::B => UNIT_B,
            Role::P => UNIT_P,
            Role::Q => UNIT_Q,
        }
    }

    fn offset(self) -> usize {
        match self {
            Role::A => 0,
            Role::B => 1,
            Role::P => 2,
            Role::Q => 3,
        }
    }

    fn letter(self) -> char {
        match self {
            Role::A => 'a',
            Role::B => 'b',
            Role::P => 'p',
            Role::Q => 'q',
        }
    }
}

/// What a point is in the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointLabel {
    Leaf,
    Gadget { index: usize, role: Role },
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLabel::Leaf => write!(f, "f"),
            PointLabel::Gadget { index, role } => write!(f, "{}_{}", role.letter(), index),
        }
    }
}

/// Which of a gadget's two clusters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Zero,
    One,
}

/// Coordinate of `role` in gadget `i >= 1`:
/// `5^(i-1) * unit(role) + 8 * (5^(i-1) - 1) / 4`.
pub fn gadget_point(i: usize, role: Role) -> Result<Rational> {
    if i < 1 {
        return Err(Error::precondition("gadget index must be at least 1"));
    }
    let scale = num_traits::pow(BigInt::from(SCALE), i - 1);
    // Sum_{j=0}^{i-2} 5^j * 8, the offset accumulated from G_1.
    let offset =
        (scale.clone() - BigInt::one()) / BigInt::from(SCALE - 1) * BigInt::from(TRANSLATION);
    Ok(Rational::from_integer(
        scale * BigInt::from(role.unit()) + offset,
    ))
}

/// Coarse gadget state read off the cluster contents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GadgetState {
    Asleep,
    Morning,
    Afternoon,
    /// Leaf only: `C_0(G_0) != {f}`.
    Awake,
}

/// The worst-case instance with its prescribed starting clustering.
#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub m: usize,
    pub points: PointSet<Rational>,
    pub labels: Vec<PointLabel>,
    pub initial: Clustering<Rational>,
}

impl GadgetInstance {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        2 * self.m - 1
    }

    pub fn leaf_id(&self) -> usize {
        0
    }

    pub fn point_id(&self, gadget: usize, role: Role) -> usize {
        point_id(gadget, role)
    }

    pub fn cluster_id(&self, gadget: usize, side: Side) -> usize {
        cluster_id(gadget, side)
    }

    /// Reads the state of gadget `i` (`0` is the leaf) from a clustering,
    /// looking only at the gadget's own four points.
    /// Returns `None` for configurations that are in the middle of a phase.
    pub fn state_of(&self, clustering: &Clustering<Rational>, i: usize) -> Option<GadgetState> {
        if i == 0 {
            let c0 = clustering.members(cluster_id(0, Side::Zero));
            return Some(if c0 == [self.leaf_id()] {
                GadgetState::Asleep
            } else {
                GadgetState::Awake
            });
        }
        let id = |r| point_id(i, r);
        let own = point_id(i, Role::A)..point_id(i, Role::A) + 4;
        let members = |c: usize| -> Vec<usize> {
            let mut v = clustering.members(c);
            v.retain(|p| own.contains(p));
            v
        };
        let sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            v
        };
        let c0 = members(cluster_id(i, Side::Zero));
        let c1 = members(cluster_id(i, Side::One));
        let b = vec![id(Role::B)];
        if c0 == b && c1 == sorted(vec![id(Role::A), id(Role::Q)]) {
            Some(GadgetState::Asleep)
        } else if c0 == sorted(vec![id(Role::P), id(Role::Q), id(Role::B)]) && c1 == [id(Role::A)] {
            Some(GadgetState::Morning)
        } else if c0 == b && c1 == sorted(vec![id(Role::P), id(Role::Q), id(Role::A)]) {
            Some(GadgetState::Afternoon)
        } else {
            None
        }
    }
}

fn point_id(gadget: usize, role: Role) -> usize {
    1 + 4 * (gadget - 1) + role.offset()
}

fn cluster_id(gadget: usize, side: Side) -> usize {
    match (gadget, side) {
        (0, _) => 0,
        (i, Side::Zero) => 2 * i - 1,
        (i, Side::One) => 2 * i,
    }
}

/// The cluster gadget `i` pushes `p_i` into to wake `G_{i-1}`.
fn watch_cluster(i: usize) -> usize {
    if i == 1 {
        cluster_id(0, Side::Zero)
    } else {
        cluster_id(i - 1, Side::One)
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::precondition("m must be ≥ 2"));
    }
    if m > MAX_M {
        return Err(Error::precondition(format!("m must be ≤ {MAX_M}")));
    }
    Ok(())
}

/// Builds the instance with `n = 4m - 3` points and `k = 2m - 1` clusters.
///
/// Initially `G_{m-1}` is in the morning state and every other gadget is
/// asleep. An asleep `G_i` keeps `p_i` in `C_1(G_{i-1})`, and `p_1` sits in
/// the leaf cluster.
pub fn build_instance(m: usize) -> Result<GadgetInstance> {
    check_m(m)?;
    let n = 4 * m - 3;
    let mut coords = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    coords.push(rational(LEAF_F));
    labels.push(PointLabel::Leaf);
    for index in 1..m {
        for role in Role::ALL {
            coords.push(gadget_point(index, role)?);
            labels.push(PointLabel::Gadget { index, role });
        }
    }

    let mut assign = vec![0; n];
    for i in 1..m {
        let (c0, c1) = (cluster_id(i, Side::Zero), cluster_id(i, Side::One));
        if i == m - 1 {
            assign[point_id(i, Role::P)] = c0;
            assign[point_id(i, Role::Q)] = c0;
            assign[point_id(i, Role::B)] = c0;
            assign[point_id(i, Role::A)] = c1;
        } else {
            assign[point_id(i, Role::B)] = c0;
            assign[point_id(i, Role::A)] = c1;
            assign[point_id(i, Role::Q)] = c1;
            assign[point_id(i, Role::P)] = watch_cluster(i);
        }
    }

    let points = PointSet::from_line(coords)?;
    let initial = Clustering::new(&points, 2 * m - 1, assign)?;
    Ok(GadgetInstance {
        m,
        points,
        labels,
        initial,
    })
}

/// One move of the scripted sequence, plus the gadget states that must hold
/// right after it.
#[derive(Clone, Debug, PartialEq)]
pub struct ScriptStep {
    pub point: usize,
    pub label: PointLabel,
    pub src: usize,
    pub dst: usize,
    pub expect: Vec<(usize, GadgetState)>,
}

impl ScriptStep {
    pub fn as_move(&self) -> ScriptedMove {
        ScriptedMove {
            point: self.point,
            src: self.src,
            dst: self.dst,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Asleep,
    /// Ready to push `p_i` into the watched gadget.
    Morning,
    /// `p_i` is with `G_{i-1}`; waiting for it to finish waking.
    MorningWait,
    /// Watching `G_{i-1}` until it falls asleep.
    Afternoon,
    /// Woken: `p_i` returns to `C_0(G_i)` next.
    WakingP,
    /// Woken: `q_i` moves to `C_0(G_i)` next.
    WakingQ,
    /// Woke up; waiting for the waker to take its point back.
    WakeDone,
}

struct Driver {
    m: usize,
    /// `phase[0]` is the leaf: `WakeDone` while it holds `p_1`.
    phase: Vec<Phase>,
    assign: Vec<usize>,
    steps: Vec<ScriptStep>,
    labels: Vec<PointLabel>,
}

impl Driver {
    fn emit(&mut self, point: usize, dst: usize, expect: Vec<(usize, GadgetState)>) {
        let src = self.assign[point];
        self.assign[point] = dst;
        self.steps.push(ScriptStep {
            point,
            label: self.labels[point],
            src,
            dst,
            expect,
        });
    }

    fn actionable(&self, i: usize) -> bool {
        let lower = self.phase[i - 1];
        match self.phase[i] {
            Phase::Morning | Phase::Afternoon => lower == Phase::Asleep,
            Phase::MorningWait => lower == Phase::WakeDone,
            Phase::WakingP | Phase::WakingQ => true,
            Phase::Asleep | Phase::WakeDone => false,
        }
    }

    /// Waking `G_{i-1}` by pushing `p_i` into it.
    fn wake_lower(&mut self, i: usize) {
        self.phase[i - 1] = if i == 1 {
            Phase::WakeDone
        } else {
            Phase::WakingP
        };
    }

    /// `p_{i}` leaving the gadget below releases it into the morning (or,
    /// for the leaf, back to sleep).
    fn release_lower(&mut self, i: usize, expect: &mut Vec<(usize, GadgetState)>) {
        if self.phase[i - 1] != Phase::WakeDone {
            return;
        }
        if i == 1 {
            self.phase[0] = Phase::Asleep;
            expect.push((0, GadgetState::Asleep));
        } else {
            self.phase[i - 1] = Phase::Morning;
            expect.push((i - 1, GadgetState::Morning));
        }
    }

    /// Executes one action of gadget `i`. Returns `true` when the sequence
    /// is complete.
    fn act(&mut self, i: usize) -> bool {
        let p = point_id(i, Role::P);
        let q = point_id(i, Role::Q);
        match self.phase[i] {
            Phase::Morning => {
                self.emit(p, watch_cluster(i), Vec::new());
                self.wake_lower(i);
                self.phase[i] = Phase::MorningWait;
            }
            Phase::MorningWait => {
                let mut expect = Vec::new();
                self.release_lower(i, &mut expect);
                // Both moves in one action: G_i finishes its morning before
                // the released gadget starts its own.
                self.emit(p, cluster_id(i, Side::One), expect);
                self.emit(
                    q,
                    cluster_id(i, Side::One),
                    vec![(i, GadgetState::Afternoon)],
                );
                self.phase[i] = Phase::Afternoon;
            }
            Phase::Afternoon => {
                self.emit(p, watch_cluster(i), vec![(i, GadgetState::Asleep)]);
                self.wake_lower(i);
                self.phase[i] = Phase::Asleep;
                if i == self.m - 1 {
                    return true;
                }
            }
            Phase::WakingP => {
                let mut expect = Vec::new();
                self.release_lower(i, &mut expect);
                self.emit(p, cluster_id(i, Side::Zero), expect);
                self.phase[i] = Phase::WakingQ;
            }
            Phase::WakingQ => {
                self.emit(q, cluster_id(i, Side::Zero), Vec::new());
                self.phase[i] = Phase::WakeDone;
            }
            Phase::Asleep | Phase::WakeDone => unreachable!("gadget {i} cannot act"),
        }
        false
    }
}

/// Generates the improving sequence for the instance of size `m`.
///
/// At every step the lowest-index gadget that can act does so. The
/// sequence ends as soon as `G_{m-1}` falls asleep.
pub fn scripted_sequence(m: usize) -> Result<Vec<ScriptStep>> {
    let instance = build_instance(m)?;
    let mut phase = vec![Phase::Asleep; m];
    phase[m - 1] = Phase::Morning;
    if m > 2 {
        // p_1 starts in the leaf cluster.
        phase[0] = Phase::WakeDone;
    }
    let mut driver = Driver {
        m,
        phase,
        assign: instance.initial.assignment().to_vec(),
        steps: Vec::new(),
        labels: instance.labels.clone(),
    };
    loop {
        let Some(i) = (1..m).find(|&i| driver.actionable(i)) else {
            return Err(Error::precondition(format!(
                "gadget driver stalled after {} moves",
                driver.steps.len()
            )));
        };
        if driver.act(i) {
            break;
        }
    }
    Ok(driver.steps)
}

/// Outcome of replaying a script in exact arithmetic.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub moves: usize,
    #[serde(serialize_with = "crate::io::ser_rational_vec")]
    pub gains: Vec<Rational>,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub min_gain: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub initial_potential: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub final_potential: Rational,
    pub state_checks: usize,
    pub terminated: Termination,
    /// Reported, not asserted.
    pub final_is_local_opt: bool,
}

/// Replays `script` from the instance's initial clustering with a scripted
/// pivot rule in exact arithmetic. Every gain must be strictly positive and
/// every expected gadget state must be observed.
pub fn verify_sequence(
    instance: &GadgetInstance,
    script: &[ScriptStep],
) -> Result<VerificationReport> {
    verify_sequence_observed(instance, script, |_, _, _| {})
}

/// [`verify_sequence`] with a callback after each replayed move, for
/// streaming traces.
pub fn verify_sequence_observed(
    instance: &GadgetInstance,
    script: &[ScriptStep],
    mut observe: impl FnMut(usize, &Move<Rational>, &Clustering<Rational>),
) -> Result<VerificationReport> {
    let rule = PivotRule::scripted(script.iter().map(ScriptStep::as_move));
    let mut index = 0;
    let mut state_checks = 0;
    let mut failure: Option<Error> = None;
    let mut gains = Vec::with_capacity(script.len());
    let trace = hw_run_observed(
        &instance.points,
        instance.initial.clone(),
        rule,
        usize::MAX,
        |mv, clustering| {
            observe(index, mv, clustering);
            gains.push(mv.gain.clone());
            if failure.is_none() {
                if let Some(cluster) = clustering.sizes().iter().position(|&s| s == 0) {
                    failure = Some(Error::EmptyCluster { cluster });
                }
                for &(gadget, want) in &script[index].expect {
                    let got = instance.state_of(clustering, gadget);
                    if got != Some(want) {
                        failure = Some(Error::precondition(format!(
                            "after move {index}: gadget {gadget} expected {want:?}, found {got:?}"
                        )));
                        break;
                    }
                    state_checks += 1;
                }
            }
            index += 1;
        },
    )?;
    if let Some(err) = failure {
        return Err(err);
    }
    let min_gain = gains.iter().min().cloned().unwrap_or_else(Rational::zero);
    Ok(VerificationReport {
        m: instance.m,
        n: instance.n(),
        k: instance.k(),
        moves: trace.moves.len(),
        gains,
        min_gain,
        final_is_local_opt: is_hw_local_opt(&trace.clustering, &instance.points),
        initial_potential: trace.initial_potential,
        final_potential: trace.final_potential,
        state_checks,
        terminated: trace.terminated,
    })
}

/// One line of an exported trace.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub index: usize,
    pub point_id: usize,
    pub role: String,
    pub src: usize,
    pub dst: usize,
    pub gain_num: String,
    pub gain_den: String,
}

impl TraceRecord {
    pub fn new(index: usize, label: PointLabel, mv: &Move<Rational>) -> Self {
        Self {
            index,
            point_id: mv.point,
            role: label.to_string(),
            src: mv.src,
            dst: mv.dst,
            gain_num: mv.gain.numer().to_string(),
            gain_den: mv.gain.denom().to_string(),
        }
    }
}

/// A named gain whose positivity the construction needs.
#[derive(Clone, Debug)]
pub struct Inequality {
    pub name: &'static str,
    pub value: Rational,
}

/// The ten distinct move gains the construction relies on, evaluated at the
/// unit gadget `G_i` with neighbours `x_{i-1} = (x_i - 8)/5` and
/// `x_{i+1} = 5 x_i + 8`, and the leaf at `f = 0`.
pub fn appendix_inequalities() -> Vec<Inequality> {
    let t0 = rational(TRANSLATION);
    let five = rational(SCALE);
    let prev = |x: i64| (rational(x) - t0.clone()) / five.clone();
    let a = rational(UNIT_A);
    let b = rational(UNIT_B);
    let p = rational(UNIT_P);
    let q = rational(UNIT_Q);
    let f = rational(LEAF_F);
    let a_prev = prev(UNIT_A);
    let q_prev = prev(UNIT_Q);
    let p_next = five.clone() * p.clone() + t0.clone();

    // ids:      0  1  2  3  4       5       6       7
    let pts = PointSet::from_line(vec![a, b, p, q, a_prev, q_prev, p_next, f])
        .expect("eight points on the line");
    const A: usize = 0;
    const B: usize = 1;
    const P: usize = 2;
    const Q: usize = 3;
    const A_PREV: usize = 4;
    const Q_PREV: usize = 5;
    const P_NEXT: usize = 6;
    const F: usize = 7;

    let table: [(&str, usize, &[usize], &[usize]); 10] = [
        ("Δ_p({p,q,b},{a₋,q₋})", P, &[P, Q, B], &[A_PREV, Q_PREV]),
        ("Δ_p({a₋,p},{a})", P, &[A_PREV, P], &[A]),
        ("Δ_q({b,q},{a,p})", Q, &[B, Q], &[A, P]),
        ("Δ_p({a,p,q},{a₋,q₋})", P, &[A, P, Q], &[A_PREV, Q_PREV]),
        ("Δ_p({a₋,p},{b})", P, &[A_PREV, P], &[B]),
        ("Δ_q({a,q,p₊},{p,b})", Q, &[A, Q, P_NEXT], &[P, B]),
        ("Δ_p({p,q,b},{f})", P, &[P, Q, B], &[F]),
        ("Δ_p({f,p},{a})", P, &[F, P], &[A]),
        ("Δ_p({a,p,q},{f})", P, &[A, P, Q], &[F]),
        ("Δ_p({f,p},{b})", P, &[F, P], &[B]),
    ];
    table
        .iter()
        .map(|&(name, x, from, to)| Inequality {
            name,
            value: set_move_gain(&pts, x, from, to).expect("well-formed gadget sets"),
        })
        .collect()
}

/// Convenience for reporting: the smallest gain as `f64`.
pub fn min_gain_f64(report: &VerificationReport) -> f64 {
    report.min_gain.to_f64_lossy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::potential;
    use crate::scalar::ratio;

    #[test]
    fn unit_gadget_is_g1() {
        let got: Vec<_> = Role::ALL
            .iter()
            .map(|&r| gadget_point(1, r).unwrap())
            .collect();
        assert_eq!(
            got,
            vec![rational(9), rational(6), rational(5), rational(13)]
        );
        assert!(gadget_point(0, Role::A).is_err());
    }

    #[test]
    fn recurrence_between_gadgets() {
        for i in 1..20 {
            for role in Role::ALL {
                let next = rational(5) * gadget_point(i, role).unwrap() + rational(8);
                assert_eq!(gadget_point(i + 1, role).unwrap(), next);
            }
        }
        assert_eq!(gadget_point(2, Role::P).unwrap(), rational(33));
    }

    #[test]
    fn instance_sizes() {
        for m in 2..=8 {
            let inst = build_instance(m).unwrap();
            assert_eq!(inst.n(), 4 * m - 3);
            assert_eq!(inst.k(), 2 * m - 1);
            assert_eq!(inst.points.len(), 4 * m - 3);
            assert!(potential(&inst.initial, &inst.points) > rational(0));
            assert_eq!(
                inst.state_of(&inst.initial, m - 1),
                Some(GadgetState::Morning)
            );
            for i in 1..m - 1 {
                assert_eq!(inst.state_of(&inst.initial, i), Some(GadgetState::Asleep));
            }
        }
        assert!(build_instance(1).is_err());
        assert!(build_instance(MAX_M + 1).is_err());
    }

    #[test]
    fn m2_instance() {
        let inst = build_instance(2).unwrap();
        let coords: Vec<_> = inst.points.iter().map(|p| p[0].clone()).collect();
        assert_eq!(
            coords,
            vec![
                rational(0),
                rational(9),
                rational(6),
                rational(5),
                rational(13)
            ]
        );
        let c0 = inst.initial.members(cluster_id(1, Side::Zero));
        let c1 = inst.initial.members(cluster_id(1, Side::One));
        let leaf = inst.initial.members(0);
        assert_eq!(
            c0,
            vec![
                point_id(1, Role::B),
                point_id(1, Role::P),
                point_id(1, Role::Q)
            ]
        );
        assert_eq!(c1, vec![point_id(1, Role::A)]);
        assert_eq!(leaf, vec![0]);
    }

    #[test]
    fn m2_script() {
        let script = scripted_sequence(2).unwrap();
        let p = point_id(1, Role::P);
        let q = point_id(1, Role::Q);
        let moves: Vec<_> = script.iter().map(|s| (s.point, s.dst)).collect();
        assert_eq!(moves, vec![(p, 0), (p, 2), (q, 2), (p, 0)]);

        let inst = build_instance(2).unwrap();
        let report = verify_sequence(&inst, &script).unwrap();
        assert_eq!(report.moves, 4);
        assert_eq!(
            report.gains,
            vec![rational(1), ratio(9, 2), ratio(1, 2), ratio(23, 2)]
        );
        assert_eq!(report.terminated, Termination::ScriptExhausted);
    }

    #[test]
    fn tampered_script_is_rejected() {
        let inst = build_instance(2).unwrap();
        let script = scripted_sequence(2).unwrap();
        let mut invalid = 0;
        for i in 0..script.len() {
            for j in i + 1..script.len() {
                let mut swapped = script.clone();
                swapped.swap(i, j);
                if swapped == script {
                    continue;
                }
                match verify_sequence(&inst, &swapped) {
                    Err(Error::ScriptInvalid { .. }) => invalid += 1,
                    Err(_) => {}
                    Ok(_) => panic!("swap ({i},{j}) verified"),
                }
            }
        }
        assert!(invalid > 0);
    }

    #[test]
    fn appendix_values_are_positive() {
        let ineqs = appendix_inequalities();
        assert_eq!(ineqs.len(), 10);
        assert!(ineqs.iter().all(|i| i.value > rational(0)));
        assert_eq!(ineqs[0].value, ratio(89, 150));
        assert_eq!(ineqs[9].value, rational(12));
    }

    #[test]
    fn labels_render() {
        assert_eq!(PointLabel::Leaf.to_string(), "f");
        assert_eq!(
            PointLabel::Gadget {
                index: 3,
                role: Role::Q
            }
            .to_string(),
            "q_3"
        );
    }
}
