use std::fmt;
use std::sync::Arc;

use crate::matrix::QuatMatrix;
use crate::random::{param_rng, ParamRng};

/// What a named condition measured.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    /// `‖expression‖` compared against `threshold`; passes when not larger.
    Norm { residual: f64, threshold: f64 },
    /// Two ranks that must agree.
    Rank { lhs: usize, rhs: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measure: Measure,
    pub pass: bool,
}

impl Check {
    pub fn norm(name: &'static str, residual: f64, threshold: f64) -> Self {
        Self {
            name,
            measure: Measure::Norm { residual, threshold },
            pass: residual <= threshold,
        }
    }

    pub fn rank(name: &'static str, lhs: usize, rhs: usize) -> Self {
        Self {
            name,
            measure: Measure::Rank { lhs, rhs },
            pass: lhs == rhs,
        }
    }

    /// `(lhs, rhs)` as printable values.
    pub fn sides(&self) -> (String, String) {
        match self.measure {
            Measure::Norm { residual, threshold } => (format!("{residual:.3e}"), format!("<= {threshold:.3e}")),
            Measure::Rank { lhs, rhs } => (lhs.to_string(), rhs.to_string()),
        }
    }
}

/// A matrix equality `lhs = rhs` checked within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualityCheck {
    pub name: &'static str,
    pub lhs: QuatMatrix,
    pub rhs: QuatMatrix,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl EqualityCheck {
    pub(crate) fn new(name: &'static str, lhs: QuatMatrix, rhs: QuatMatrix, threshold: f64) -> Self {
        let residual = (&lhs - &rhs).norm();
        Self {
            name,
            lhs,
            rhs,
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }
}

/// Both condition families side by side: the matrix equalities shared by the
/// two families, the rank equalities, and the projector ("= 0") conditions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankReport {
    pub equalities: Vec<EqualityCheck>,
    pub ranks: Vec<Check>,
    pub projector: Vec<Check>,
}

impl RankReport {
    fn equalities_pass(&self) -> bool {
        self.equalities.iter().all(|e| e.pass)
    }

    /// Equalities plus every rank condition.
    pub fn rank_verdict(&self) -> bool {
        self.equalities_pass() && self.ranks.iter().all(|c| c.pass)
    }

    /// Equalities plus every projector condition.
    pub fn projector_verdict(&self) -> bool {
        self.equalities_pass() && self.projector.iter().all(|c| c.pass)
    }

    /// Every entry of the report passes.
    pub fn all_pass(&self) -> bool {
        self.rank_verdict() && self.projector_verdict()
    }

    pub fn rank(&self, name: &str) -> Option<&Check> {
        self.ranks.iter().find(|c| c.name == name)
    }

    pub fn projector_check(&self, name: &str) -> Option<&Check> {
        self.projector.iter().find(|c| c.name == name)
    }

    pub fn equality(&self, name: &str) -> Option<&EqualityCheck> {
        self.equalities.iter().find(|c| c.name == name)
    }

    pub(crate) fn failed_equalities(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.equalities.iter().filter(|e| !e.pass).map(|e| e.name)
    }
}

pub(crate) type Sampler<S> = Arc<dyn Fn(&mut ParamRng, f64) -> S + Send + Sync>;

/// Verdict, canonical particular solution and a seeded generator of general
/// solutions.
///
/// The particular solution takes every free parameter as zero. `sample`
/// draws each free parameter coefficient uniformly from `[−scale, scale]`
/// with a ChaCha8 stream seeded by `seed`, so equal seeds give equal samples.
#[derive(Clone)]
pub struct SolveOutcome<S> {
    pub solvable: bool,
    /// Names of failing conditions, earliest-stage conditions first.
    pub failed_conditions: Vec<String>,
    /// The conditions the verdict was decided on.
    pub checks: Vec<Check>,
    pub particular: Option<S>,
    /// Rank form of the conditions, where the solver provides one.
    pub rank_report: Option<RankReport>,
    sampler: Option<Sampler<S>>,
}

impl<S> SolveOutcome<S> {
    pub(crate) fn solved(checks: Vec<Check>, particular: S, sampler: Sampler<S>) -> Self {
        Self {
            solvable: true,
            failed_conditions: Vec::new(),
            checks,
            particular: Some(particular),
            rank_report: None,
            sampler: Some(sampler),
        }
    }

    pub(crate) fn unsolvable(checks: Vec<Check>, failed: Vec<String>) -> Self {
        debug_assert!(!failed.is_empty());
        Self {
            solvable: false,
            failed_conditions: failed,
            checks,
            particular: None,
            rank_report: None,
            sampler: None,
        }
    }

    /// Decides from `checks`: solvable iff all pass.
    pub(crate) fn from_checks(checks: Vec<Check>, build: impl FnOnce() -> (S, Sampler<S>)) -> Self {
        let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.to_string()).collect();
        if failed.is_empty() {
            let (particular, sampler) = build();
            Self::solved(checks, particular, sampler)
        } else {
            Self::unsolvable(checks, failed)
        }
    }

    pub(crate) fn with_rank_report(mut self, report: RankReport) -> Self {
        self.rank_report = Some(report);
        self
    }

    /// A general-solution instance, `None` when unsolvable.
    pub fn sample(&self, seed: u64, scale: f64) -> Option<S> {
        let sampler = self.sampler.as_ref()?;
        let mut rng = param_rng(seed);
        Some(sampler(&mut rng, scale))
    }

    pub(crate) fn map<T: 'static>(self, f: impl Fn(S) -> T + Send + Sync + 'static) -> SolveOutcome<T>
    where
        S: 'static,
    {
        let f = Arc::new(f);
        let sampler = self.sampler.map(|s| {
            let f = Arc::clone(&f);
            Arc::new(move |rng: &mut ParamRng, scale: f64| f(s(rng, scale))) as Sampler<T>
        });
        SolveOutcome {
            solvable: self.solvable,
            failed_conditions: self.failed_conditions,
            checks: self.checks,
            particular: self.particular.map(|p| f(p)),
            rank_report: self.rank_report,
            sampler,
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for SolveOutcome<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolveOutcome")
            .field("solvable", &self.solvable)
            .field("failed_conditions", &self.failed_conditions)
            .field("checks", &self.checks)
            .field("particular", &self.particular)
            .field("rank_report", &self.rank_report)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome() -> SolveOutcome<f64> {
        let sampler: Sampler<f64> = Arc::new(|rng: &mut ParamRng, scale: f64| {
            use rand::Rng;
            rng.gen_range(-scale..=scale)
        });
        SolveOutcome::from_checks(vec![Check::norm("z=0", 0.0, 1e-10)], move || (0.0, sampler))
    }

    #[test]
    fn samples_are_seeded() {
        let out = outcome();
        assert!(out.solvable);
        assert_eq!(out.sample(7, 1.0), out.sample(7, 1.0));
        assert_ne!(out.sample(7, 1.0), out.sample(8, 1.0));
        assert_eq!(out.sample(7, 0.0), Some(0.0));
        let doubled = outcome().map(|x| 2.0 * x);
        assert_eq!(doubled.sample(7, 1.0), out.sample(7, 1.0).map(|x| 2.0 * x));
    }

    #[test]
    fn failing_checks_are_named_in_order() {
        let checks = vec![
            Check::norm("first", 1.0, 1e-10),
            Check::rank("second", 1, 1),
            Check::rank("third", 2, 1),
        ];
        let out: SolveOutcome<f64> = SolveOutcome::from_checks(checks, || unreachable!());
        assert!(!out.solvable);
        assert_eq!(out.failed_conditions, vec!["first", "third"]);
        assert_eq!(out.sample(0, 1.0), None);
        assert_eq!(out.checks[2].sides(), ("2".to_string(), "1".to_string()));
    }
}
