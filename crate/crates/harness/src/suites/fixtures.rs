use anyhow::Result;
use klimm_core::fixtures::worked_examples;

use super::{Suite, SuiteOutput};
use crate::context::Context;
use crate::report::Witness;
use crate::runner::{Outcome, Tally};

/// The worked examples with known answers.
pub struct Fixtures;

impl Suite for Fixtures {
    fn name(&self) -> &'static str {
        "fixtures"
    }

    fn description(&self) -> &'static str {
        "worked examples reproduced exactly"
    }

    fn default_max_n(&self) -> usize {
        10
    }

    fn run(&self, _ctx: &Context, _max_n: usize) -> Result<SuiteOutput> {
        let mut tally = Tally::default();
        for c in worked_examples()? {
            tally.record(Outcome::check(c.passed(), || {
                Witness::new(c.name, format!("expected {:?}, got {:?}", c.expected, c.actual))
            }));
        }
        Ok(SuiteOutput {
            tally,
            notes: vec![],
        })
    }
}
