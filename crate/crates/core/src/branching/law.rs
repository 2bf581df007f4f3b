use std::fmt;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Offspring outcome `(i, j)`: `i` particles of type 1 and `j` of type 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    /// `(0, 0)`
    Death,
    /// `(1, 0)`
    OneTip,
    /// `(0, 1)`
    OneInterior,
    /// `(2, 0)`
    TwoTips,
}

impl Outcome {
    /// Layout order of the coupling partitions.
    pub const CANONICAL: [Outcome; 4] = [
        Outcome::OneInterior,
        Outcome::OneTip,
        Outcome::TwoTips,
        Outcome::Death,
    ];

    pub fn counts(self) -> (u64, u64) {
        match self {
            Outcome::Death => (0, 0),
            Outcome::OneTip => (1, 0),
            Outcome::OneInterior => (0, 1),
            Outcome::TwoTips => (2, 0),
        }
    }

    pub fn from_counts(i: u64, j: u64) -> Option<Outcome> {
        match (i, j) {
            (0, 0) => Some(Outcome::Death),
            (1, 0) => Some(Outcome::OneTip),
            (0, 1) => Some(Outcome::OneInterior),
            (2, 0) => Some(Outcome::TwoTips),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.counts();
        write!(f, "({i},{j})")
    }
}

/// Distribution over the four outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffspringLaw {
    pub death: f64,
    pub one_tip: f64,
    pub one_interior: f64,
    pub two_tips: f64,
}

impl OffspringLaw {
    pub fn new(death: f64, one_tip: f64, one_interior: f64, two_tips: f64) -> Result<Self> {
        let law = OffspringLaw {
            death,
            one_tip,
            one_interior,
            two_tips,
        };
        let sum = death + one_tip + one_interior + two_tips;
        let in_range = [death, one_tip, one_interior, two_tips]
            .iter()
            .all(|x| (0.0..=1.0).contains(x));
        if !in_range || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidLaw(sum));
        }
        Ok(law)
    }

    pub fn prob(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Death => self.death,
            Outcome::OneTip => self.one_tip,
            Outcome::OneInterior => self.one_interior,
            Outcome::TwoTips => self.two_tips,
        }
    }

    /// Expected numbers of type-1 and type-2 children.
    pub fn mean(&self) -> (f64, f64) {
        (self.one_tip + 2.0 * self.two_tips, self.one_interior)
    }
}

/// Offspring law of a type-1 (tip) or type-2 (interior) particle of the
/// dominating two-type process.
pub fn ttbp_law(particle_type: u8, params: ModelParams) -> Result<OffspringLaw> {
    let p = params.p();
    let n = params.neighbours();
    let d = params.d() as f64;
    match particle_type {
        1 => OffspringLaw::new(1.0 - p, 0.0, p / n, p * d / n),
        2 => OffspringLaw::new(1.0 - p, p / n, p / n, p * (d - 1.0) / n),
        t => Err(Error::InvalidType(t)),
    }
}

fn check_site_counts(a: u32, b: u32, d: u32) -> Result<()> {
    if a < 1 || a + b < 2 || a + b > d + 1 {
        return Err(Error::InvalidSiteCounts { a, b, max: d + 1 });
    }
    Ok(())
}

/// Offspring law of a type-2 frog with `a` visited interior neighbours and `b`
/// visited tip neighbours.
pub fn fmbp_law(a: u32, b: u32, params: ModelParams) -> Result<OffspringLaw> {
    check_site_counts(a, b, params.d())?;
    let p = params.p();
    let n = params.neighbours();
    let (a, b) = (a as f64, b as f64);
    let used = ((a + b) * p / n).min(p);
    OffspringLaw::new(1.0 - p, b * p / n, (a * p / n).min(p), p - used)
}

/// One labelled cell `[lower, upper)` of a partition of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub outcome: Outcome,
    pub lower: f64,
    pub upper: f64,
}

impl Cell {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Ordered cells covering `[0, 1]`; half-open on the right except the last,
/// which is closed. One uniform draw picks an outcome for every partition
/// at once, which is what couples the processes.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPartition {
    cells: Vec<Cell>,
}

impl IntervalPartition {
    /// Builds a partition from consecutive breakpoints `0 = b_0 <= ... <= b_n = 1`.
    fn from_breakpoints(labels: &[Outcome], breaks: &[f64]) -> Self {
        debug_assert_eq!(labels.len() + 1, breaks.len());
        let cells = labels
            .iter()
            .zip(breaks.windows(2))
            .map(|(&outcome, w)| Cell {
                outcome,
                lower: w[0],
                upper: w[1],
            })
            .collect();
        IntervalPartition { cells }
    }

    /// Type-1 partition: `[0, p/(d+1))`, `[p/(d+1), p)`, `[p, 1]`.
    pub fn tip(params: ModelParams) -> Self {
        let p = params.p();
        let n = params.neighbours();
        Self::from_breakpoints(
            &[Outcome::OneInterior, Outcome::TwoTips, Outcome::Death],
            &[0.0, p / n, p, 1.0],
        )
    }

    /// Type-2 partition of the dominating process.
    pub fn interior(params: ModelParams) -> Self {
        let p = params.p();
        let n = params.neighbours();
        Self::from_breakpoints(
            &Outcome::CANONICAL,
            &[0.0, p / n, 2.0 * p / n, p, 1.0],
        )
    }

    /// Partition for a type-2 frog with site counts `(a, b)`.
    pub fn frog(a: u32, b: u32, params: ModelParams) -> Result<Self> {
        check_site_counts(a, b, params.d())?;
        let p = params.p();
        let n = params.neighbours();
        let (a, b) = (a as f64, b as f64);
        let first = (a * p / n).min(p);
        let second = ((a + b) * p / n).clamp(first, p);
        Ok(Self::from_breakpoints(&Outcome::CANONICAL, &[0.0, first, second, p, 1.0]))
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Breakpoints `0, ..., 1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.cells.iter().map(|c| c.lower).collect();
        out.push(self.cells.last().map_or(1.0, |c| c.upper));
        out
    }

    /// Cell containing `u`, for `u` in `[0, 1]`.
    pub fn locate(&self, u: f64) -> &Cell {
        let last = self.cells.len() - 1;
        self.cells[..last]
            .iter()
            .find(|c| c.lower <= u && u < c.upper)
            .unwrap_or(&self.cells[last])
    }

    pub fn sample(&self, u: f64) -> Outcome {
        self.locate(u).outcome
    }

    /// Width of the cell labelled `outcome`, or 0 if there is none.
    pub fn width_of(&self, outcome: Outcome) -> f64 {
        self.cells
            .iter()
            .filter(|c| c.outcome == outcome)
            .map(Cell::width)
            .sum()
    }
}

/// Partition for a law in canonical order `(0,1), (1,0), (2,0), (0,0)`,
/// breakpoints accumulated from the law's probabilities.
pub fn build_partition(law: &OffspringLaw) -> IntervalPartition {
    let mut breaks = vec![0.0];
    let mut acc = 0.0;
    for outcome in &Outcome::CANONICAL[..3] {
        acc += law.prob(*outcome);
        breaks.push(acc.min(1.0));
    }
    breaks.push(1.0);
    IntervalPartition::from_breakpoints(&Outcome::CANONICAL, &breaks)
}

/// Outcome whose cell contains `u`.
pub fn sample_offspring(partition: &IntervalPartition, u: f64) -> Outcome {
    partition.sample(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: u32, p: f64) -> ModelParams {
        ModelParams::new(d, p).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn ttbp_laws() {
        let l1 = ttbp_law(1, params(4, 1.0)).unwrap();
        assert!(close(l1.two_tips, 0.8) && close(l1.one_interior, 0.2));
        assert_eq!((l1.death, l1.one_tip), (0.0, 0.0));
        let l2 = ttbp_law(2, params(2, 0.0)).unwrap();
        assert_eq!(l2.death, 1.0);
        let l2 = ttbp_law(2, params(4, 1.0)).unwrap();
        assert!(close(l2.one_tip, 0.2) && close(l2.two_tips, 0.6) && close(l2.one_interior, 0.2));
        assert_eq!(ttbp_law(3, params(2, 0.5)), Err(Error::InvalidType(3)));
    }

    #[test]
    fn fmbp_laws() {
        let l = fmbp_law(2, 1, params(4, 1.0)).unwrap();
        assert!(close(l.one_interior, 0.4) && close(l.one_tip, 0.2) && close(l.two_tips, 0.4));
        let l = fmbp_law(1, 1, params(2, 0.5)).unwrap();
        assert!(close(l.death, 0.5));
        for x in [l.one_interior, l.one_tip, l.two_tips] {
            assert!(close(x, 1.0 / 6.0));
        }
        for d in 2..10 {
            let l = fmbp_law(1, d, params(d, 0.7)).unwrap();
            assert!(l.two_tips.abs() < 1e-15);
        }
        assert!(fmbp_law(0, 2, params(3, 0.5)).is_err());
        assert!(fmbp_law(1, 0, params(3, 0.5)).is_err());
        assert!(fmbp_law(3, 1, params(2, 0.5)).is_err());
    }

    #[test]
    fn partition_layouts() {
        let (d, p) = (4u32, 0.9);
        let n = 5.0;
        assert_eq!(IntervalPartition::tip(params(d, p)).breakpoints(), vec![0.0, p / n, p, 1.0]);
        assert!(IntervalPartition::tip(params(d, p)).width_of(Outcome::OneTip) == 0.0);
        assert_eq!(
            IntervalPartition::interior(params(d, p)).breakpoints(),
            vec![0.0, p / n, 2.0 * p / n, p, 1.0]
        );
        let fig = IntervalPartition::frog(2, 1, params(4, 1.0)).unwrap();
        assert_eq!(fig.breakpoints(), vec![0.0, 2.0 / 5.0, 3.0 / 5.0, 1.0, 1.0]);
    }

    #[test]
    fn sampling() {
        let p1 = IntervalPartition::tip(params(4, 1.0));
        assert_eq!(p1.sample(0.1), Outcome::OneInterior);
        assert_eq!(p1.sample(0.5), Outcome::TwoTips);
        let fig = IntervalPartition::frog(2, 1, params(4, 1.0)).unwrap();
        assert_eq!(fig.sample(0.5), Outcome::OneTip);
        assert_eq!(fig.sample(0.0), Outcome::OneInterior);
        for part in [
            IntervalPartition::tip(params(3, 0.4)),
            IntervalPartition::interior(params(3, 0.4)),
            IntervalPartition::frog(1, 2, params(3, 0.4)).unwrap(),
        ] {
            assert_eq!(part.sample(1.0), Outcome::Death);
        }
    }

    #[test]
    fn partitions_match_laws() {
        for d in 2..8u32 {
            for p in [0.0, 0.1, 0.5, 0.77, 1.0] {
                let pr = params(d, p);
                let checks = [
                    (IntervalPartition::tip(pr), ttbp_law(1, pr).unwrap()),
                    (IntervalPartition::interior(pr), ttbp_law(2, pr).unwrap()),
                ];
                for (part, law) in checks {
                    for o in Outcome::CANONICAL {
                        assert!((part.width_of(o) - law.prob(o)).abs() < 4.0 * f64::EPSILON);
                    }
                }
                for a in 1..=d + 1 {
                    for b in 0..=(d + 1 - a) {
                        if a + b < 2 {
                            continue;
                        }
                        let part = IntervalPartition::frog(a, b, pr).unwrap();
                        let law = fmbp_law(a, b, pr).unwrap();
                        for o in Outcome::CANONICAL {
                            assert!((part.width_of(o) - law.prob(o)).abs() < 4.0 * f64::EPSILON);
                        }
                        let built = build_partition(&law);
                        for o in Outcome::CANONICAL {
                            assert!((built.width_of(o) - law.prob(o)).abs() < 4.0 * f64::EPSILON);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn outcome_labels() {
        assert_eq!(Outcome::TwoTips.to_string(), "(2,0)");
        for o in Outcome::CANONICAL {
            let (i, j) = o.counts();
            assert_eq!(Outcome::from_counts(i, j), Some(o));
        }
        assert_eq!(Outcome::from_counts(1, 1), None);
    }
}
