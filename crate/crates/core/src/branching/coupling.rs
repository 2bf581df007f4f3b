//! Pathwise coupling of the frog model, run one frog at a time, with the
//! dominating two-type process.
//!
//! Both sides consume the same uniform at every step. The frog side keeps
//! its visited set in a [`LazyTree`]; a vertex exists in the tree exactly when
//! it has been visited. A frog is type 1 when its vertex is a tip of the
//! visited set (one visited neighbour) and type 2 otherwise. For a type-2
//! frog, `a` counts visited neighbours that are not tips and `b` counts
//! visited tips: moving to the former leaves one type-2 frog, moving to the
//! latter one type-1 frog, and moving anywhere unvisited wakes a second frog,
//! giving two type-1 frogs.

use std::collections::{BTreeMap, VecDeque};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::branching::law::{build_partition, IntervalPartition, OffspringLaw, Outcome};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::sim::tree::{LazyTree, VertexId};

/// Restarts allowed while growing the initial visited set.
pub const SEEDING_RETRIES: u32 = 100_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Site {
    pub visited_nbrs: u32,
    pub frogs: u32,
}

/// Visited set of the frog side with active frog counts per vertex.
#[derive(Debug, Clone)]
pub struct VisitedSet {
    tree: LazyTree<Site>,
}

impl VisitedSet {
    pub fn new(d: u32, max_vertices: usize) -> Self {
        VisitedSet {
            tree: LazyTree::new(d, max_vertices),
        }
    }

    pub fn tree(&self) -> &LazyTree<Site> {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn site(&self, v: VertexId) -> Site {
        *self.tree.get(v)
    }

    pub fn is_tip(&self, v: VertexId) -> bool {
        self.tree.get(v).visited_nbrs == 1
    }
}

/// Type and site counts of a frog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub ty: u8,
    pub a: u32,
    pub b: u32,
    /// For type 2: whether `a >= 1` and `a + b >= 2`. For type 1: whether the
    /// single visited neighbour is not itself a tip.
    pub valid: bool,
}

#[derive(Debug, Default)]
struct Groups {
    interior: Vec<u32>,
    tips: Vec<u32>,
    unvisited: Vec<u32>,
}

fn fill_groups(set: &VisitedSet, v: VertexId, g: &mut Groups) {
    g.interior.clear();
    g.tips.clear();
    g.unvisited.clear();
    for j in 0..=set.tree.d() {
        match set.tree.neighbour(v, j) {
            Some(w) if set.is_tip(w) => g.tips.push(j),
            Some(_) => g.interior.push(j),
            None => g.unvisited.push(j),
        }
    }
}

fn classify_groups(set: &VisitedSet, v: VertexId, g: &Groups) -> Classification {
    let a = g.interior.len() as u32;
    let b = g.tips.len() as u32;
    if set.is_tip(v) {
        Classification {
            ty: 1,
            a: 1,
            b: 0,
            valid: a == 1,
        }
    } else {
        Classification {
            ty: 2,
            a,
            b,
            valid: a >= 1 && a + b >= 2,
        }
    }
}

/// Type and `(a, b)` of a frog at `v`. A type-1 frog reports `(1, 0)`, whose
/// partition coincides with the type-1 layout.
pub fn classify_frog(v: VertexId, visited: &VisitedSet) -> Result<Classification> {
    if v.index() >= visited.len() || visited.site(v).frogs == 0 {
        return Err(Error::InactiveVertex);
    }
    let mut g = Groups::default();
    fill_groups(visited, v, &mut g);
    Ok(classify_groups(visited, v, &g))
}

/// Particle counts of both processes after `t` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoupledState {
    pub t: u64,
    pub n_tt1: u64,
    pub n_tt2: u64,
    pub n_fm1: u64,
    pub n_fm2: u64,
}

impl CoupledState {
    pub fn dominates(&self) -> bool {
        self.n_tt1 >= self.n_fm1 && self.n_tt1 + self.n_tt2 >= self.n_fm1 + self.n_fm2
    }

    fn tt_total(&self) -> u64 {
        self.n_tt1 + self.n_tt2
    }

    fn fm_total(&self) -> u64 {
        self.n_fm1 + self.n_fm2
    }
}

/// One coupled step. `chosen_type` is the frog's type, or 0 once the frog
/// side is extinct; `outcome` is then the dominating side's outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub state: CoupledState,
    pub chosen_type: u8,
    pub a: u32,
    pub b: u32,
    pub u: f64,
    pub outcome: Outcome,
    pub tt_outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledRun {
    pub initial: CoupledState,
    pub trace: Vec<TraceRow>,
    pub violations: u64,
    pub restarts: u32,
    /// Number of type-2 selections per `(a, b)`.
    pub ab_counts: BTreeMap<(u32, u32), u64>,
    /// Selections whose classification broke the expected constraints.
    pub constraint_flags: u64,
}

impl CoupledRun {
    pub fn final_state(&self) -> CoupledState {
        self.trace.last().map_or(self.initial, |r| r.state)
    }

    pub fn steps(&self) -> u64 {
        self.final_state().t
    }
}

struct FrogSide {
    set: VisitedSet,
    queue: VecDeque<VertexId>,
    n1: u64,
    n2: u64,
}

impl FrogSide {
    fn new(d: u32, max_vertices: usize) -> Self {
        let mut side = FrogSide {
            set: VisitedSet::new(d, max_vertices),
            queue: VecDeque::new(),
            n1: 0,
            n2: 0,
        };
        side.add_frogs(VertexId::ROOT, 1);
        side
    }

    fn counter(&mut self, v: VertexId) -> &mut u64 {
        if self.set.is_tip(v) {
            &mut self.n1
        } else {
            &mut self.n2
        }
    }

    fn add_frogs(&mut self, v: VertexId, k: u32) {
        self.set.tree.get_mut(v).frogs += k;
        *self.counter(v) += k as u64;
        for _ in 0..k {
            self.queue.push_back(v);
        }
    }

    fn remove_frog(&mut self, v: VertexId) {
        self.set.tree.get_mut(v).frogs -= 1;
        *self.counter(v) -= 1;
    }

    /// Moves one frog from `v` along neighbour `j`, visiting a new vertex if
    /// needed. Frogs already at `v` are retyped if `v` stops being a tip.
    fn step_to(&mut self, v: VertexId, j: u32) -> Result<()> {
        self.remove_frog(v);
        let (w, created) = self.set.tree.neighbour_or_insert(v, j)?;
        if created {
            let at_v = self.set.site(v).frogs as u64;
            *self.counter(v) -= at_v;
            self.set.tree.get_mut(v).visited_nbrs += 1;
            *self.counter(v) += at_v;
            self.set.tree.get_mut(w).visited_nbrs = 1;
            self.add_frogs(w, 2);
        } else {
            self.add_frogs(w, 1);
        }
        Ok(())
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}

/// Raw dynamics from a single frog at the root until `d + 3` vertices are
/// visited, restarting on extinction.
fn seed_frog_side(params: ModelParams, max_vertices: usize, rng: &mut ChaCha8Rng) -> Result<(FrogSide, u32)> {
    let d = params.d();
    let p = params.p();
    let target = d as usize + 3;
    for restart in 0..SEEDING_RETRIES {
        let mut side = FrogSide::new(d, max_vertices);
        while let Some(v) = side.queue.pop_front() {
            let u = uniform(rng);
            if u >= p {
                side.remove_frog(v);
                continue;
            }
            let j = ((u / p * (d as f64 + 1.0)) as u32).min(d);
            side.step_to(v, j)?;
            if side.set.len() >= target {
                return Ok((side, restart));
            }
        }
    }
    Err(Error::SeedingExhausted(SEEDING_RETRIES))
}

fn pick(list: &[u32], offset: f64, width: f64) -> u32 {
    let k = (offset / width) as usize;
    list[k.min(list.len() - 1)]
}

/// Frog-side partition for a classification.
fn frog_partition(c: &Classification, params: ModelParams) -> IntervalPartition {
    if c.ty == 1 {
        return IntervalPartition::tip(params);
    }
    IntervalPartition::frog(c.a, c.b, params).unwrap_or_else(|_| {
        let p = params.p();
        let n = params.d() as f64 + 1.0;
        let (a, b) = (c.a as f64, c.b as f64);
        let law = OffspringLaw {
            death: 1.0 - p,
            one_tip: p * b / n,
            one_interior: p * a / n,
            two_tips: (p - p * (a + b) / n).max(0.0),
        };
        build_partition(&law)
    })
}

fn apply(state: &mut CoupledState, ty: u8, outcome: Outcome) {
    let (i, j) = outcome.counts();
    if ty == 1 {
        state.n_tt1 -= 1;
    } else {
        state.n_tt2 -= 1;
    }
    state.n_tt1 += i;
    state.n_tt2 += j;
}

/// Runs the coupled pair for at most `max_steps` steps after seeding.
///
/// The frog side picks its oldest active frog. The dominating side picks a
/// particle of the same type, falling back to type 1 when it has no type-2
/// particle. Once the frog side is extinct the dominating side keeps
/// running (type 1 first) until it dies out or the step budget is spent.
pub fn run_coupled(params: ModelParams, max_steps: u64, seed: u64) -> Result<CoupledRun> {
    let p = params.p();
    let d = params.d();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidLifetime(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_vertices = (d as usize + 4).saturating_add(max_steps as usize);
    let (mut fm, restarts) = seed_frog_side(params, max_vertices, &mut rng)?;

    let initial = CoupledState {
        t: 0,
        n_tt1: fm.n1,
        n_tt2: fm.n2,
        n_fm1: fm.n1,
        n_fm2: fm.n2,
    };
    let mut state = initial;
    let mut run = CoupledRun {
        initial,
        trace: Vec::new(),
        violations: 0,
        restarts,
        ab_counts: BTreeMap::new(),
        constraint_flags: 0,
    };
    if !initial.dominates() {
        run.violations += 1;
    }

    let tip = IntervalPartition::tip(params);
    let interior = IntervalPartition::interior(params);
    let width = p / (d as f64 + 1.0);
    let mut groups = Groups::default();

    while state.t < max_steps && (state.fm_total() > 0 || state.tt_total() > 0) {
        let u = uniform(&mut rng);
        let mut row_type = 0;
        let (mut a, mut b) = (0, 0);
        let mut fm_outcome = None;

        let tt_type = if let Some(v) = fm.queue.pop_front() {
            fill_groups(&fm.set, v, &mut groups);
            let c = classify_groups(&fm.set, v, &groups);
            if !c.valid {
                run.constraint_flags += 1;
            }
            if c.ty == 2 {
                *run.ab_counts.entry((c.a, c.b)).or_insert(0) += 1;
            }
            row_type = c.ty;
            (a, b) = (c.a, c.b);

            let cell = *frog_partition(&c, params).locate(u);
            let offset = u - cell.lower;
            match cell.outcome {
                Outcome::Death => fm.remove_frog(v),
                Outcome::OneInterior => fm.step_to(v, pick(&groups.interior, offset, width))?,
                Outcome::OneTip => fm.step_to(v, pick(&groups.tips, offset, width))?,
                Outcome::TwoTips => fm.step_to(v, pick(&groups.unvisited, offset, width))?,
            }
            fm_outcome = Some(cell.outcome);

            match c.ty {
                1 if state.n_tt1 > 0 => Some(1),
                2 if state.n_tt2 > 0 => Some(2),
                _ if state.n_tt1 > 0 => Some(1),
                _ if state.n_tt2 > 0 => Some(2),
                _ => None,
            }
        } else if state.n_tt1 > 0 {
            Some(1)
        } else {
            Some(2)
        };

        let tt_outcome = match tt_type {
            Some(ty) => {
                let part = if ty == 1 { &tip } else { &interior };
                let o = part.sample(u);
                apply(&mut state, ty, o);
                o
            }
            None => Outcome::Death,
        };

        state.t += 1;
        state.n_fm1 = fm.n1;
        state.n_fm2 = fm.n2;
        if !state.dominates() {
            run.violations += 1;
        }
        run.trace.push(TraceRow {
            state,
            chosen_type: row_type,
            a,
            b,
            u,
            outcome: fm_outcome.unwrap_or(tt_outcome),
            tt_outcome,
        });
    }
    Ok(run)
}

/// Writes one CSV row per step:
/// `t, N_TT1, N_TT2, N_FM1, N_FM2, chosen_type, a, b, u, outcome`.
pub fn write_trace_csv<W: Write>(run: &CoupledRun, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Invalid(format!("trace export failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "N_TT1", "N_TT2", "N_FM1", "N_FM2", "chosen_type", "a", "b", "u", "outcome"])
        .map_err(io)?;
    for row in &run.trace {
        let s = row.state;
        w.write_record([
            s.t.to_string(),
            s.n_tt1.to_string(),
            s.n_tt2.to_string(),
            s.n_fm1.to_string(),
            s.n_fm2.to_string(),
            row.chosen_type.to_string(),
            row.a.to_string(),
            row.b.to_string(),
            format!("{:.17}", row.u),
            row.outcome.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Invalid(format!("trace export failed: {e}")))?;
    Ok(())
}
