use rayon::prelude::*;

use crate::report::{Witness, MAX_WITNESSES};

/// What happened to one checked instance.
#[derive(Clone, Debug)]
pub enum Outcome {
    Pass,
    /// Hypothesis not met.
    Skip,
    Fail(Witness),
    /// The check could not be carried out.
    Error(String),
}

impl Outcome {
    pub fn check(holds: bool, witness: impl FnOnce() -> Witness) -> Self {
        if holds {
            Outcome::Pass
        } else {
            Outcome::Fail(witness())
        }
    }
}

impl From<klimm_core::Error> for Outcome {
    fn from(e: klimm_core::Error) -> Self {
        Outcome::Error(e.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub run: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
    pub errors: Vec<String>,
    pub witnesses: Vec<Witness>,
}

impl Tally {
    pub fn record(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Pass => {
                self.run += 1;
                self.passed += 1;
            }
            Outcome::Skip => self.skipped += 1,
            Outcome::Fail(w) => {
                self.run += 1;
                self.failed += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(w);
                }
            }
            Outcome::Error(e) => self.errors.push(e),
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.run += other.run;
        self.passed += other.passed;
        self.skipped += other.skipped;
        self.failed += other.failed;
        self.errors.extend(other.errors);
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }
}

/// Runs `check` on every case in parallel, one worker state per rayon job
/// from `init`, and folds the outcomes in case order so the tally does not
/// depend on scheduling.
pub fn run_cases<C, S, I, F>(cases: &[C], init: I, check: F) -> Tally
where
    C: Sync,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, &C) -> Vec<Outcome> + Sync + Send,
{
    let outcomes: Vec<Vec<Outcome>> = cases
        .par_iter()
        .enumerate()
        .map_init(&init, |state, (i, case)| check(state, i, case))
        .collect();
    let mut tally = Tally::default();
    for outcome in outcomes.into_iter().flatten() {
        tally.record(outcome);
    }
    tally
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_stable() {
        let cases: Vec<usize> = (0..500).collect();
        let run = || {
            run_cases(
                &cases,
                || (),
                |_, i, &c| {
                    if c % 7 == 3 {
                        vec![Outcome::Fail(Witness::new(format!("{i}"), ""))]
                    } else if c % 11 == 0 {
                        vec![Outcome::Skip]
                    } else {
                        vec![Outcome::Pass]
                    }
                },
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.witnesses, b.witnesses);
        assert_eq!(a.witnesses[0].case, "3");
        assert_eq!(a.witnesses.len(), MAX_WITNESSES);
        assert_eq!(a.run, a.passed + a.failed);
        assert_eq!(a.skipped, 40);
    }
}
