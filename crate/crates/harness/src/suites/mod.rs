//! Exhaustive or sampled sweeps of the structural and sign statements,
//! registered by name. Each suite also answers to a short alias.

mod combinatorial;
mod fixtures;
mod immanants;
mod kl;
mod signs;

use std::time::Instant;

use anyhow::Result;

use crate::config::DEFAULT_SAMPLES;
use crate::context::Context;
use crate::report::{Parameters, SuiteReport};
use crate::runner::Tally;

/// What a sweep hands back before it is wrapped into a [`SuiteReport`].
#[derive(Default)]
pub struct SuiteOutput {
    pub tally: Tally,
    pub notes: Vec<String>,
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;

    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }

    fn description(&self) -> &'static str;

    fn default_max_n(&self) -> usize;

    /// Whether the suite uses `--max-m`.
    fn uses_labels(&self) -> bool {
        false
    }

    fn run(&self, ctx: &Context, max_n: usize) -> Result<SuiteOutput>;
}

pub(crate) fn registry() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(kl::KlSanity),
        Box::new(combinatorial::GraphInterval),
        Box::new(combinatorial::Squares),
        Box::new(combinatorial::BoxCover),
        Box::new(combinatorial::BoxColors),
        Box::new(immanants::Determinantal),
        Box::new(immanants::LewisCarroll),
        Box::new(immanants::BlockFactor),
        Box::new(immanants::Deletion),
        Box::new(signs::Young),
        Box::new(signs::SignProbe),
        Box::new(signs::MainSquare),
        Box::new(fixtures::Fixtures),
    ]
}

pub fn suite(name: &str) -> Option<Box<dyn Suite>> {
    registry()
        .into_iter()
        .find(|s| s.name() == name || s.aliases().contains(&name))
}

/// `(name, aliases, description)` for every registered suite.
pub fn suite_names() -> Vec<(&'static str, &'static [&'static str], &'static str)> {
    registry()
        .iter()
        .map(|s| (s.name(), s.aliases(), s.description()))
        .collect()
}

/// Runs a suite under `ctx` and assembles its report.
pub fn run_suite(s: &dyn Suite, ctx: &Context) -> Result<SuiteReport> {
    let max_n = ctx.config.max_n_or(s.default_max_n());
    let start = Instant::now();
    let out = s.run(ctx, max_n)?;
    ctx.persist_kl()?;
    Ok(assemble(
        s.name(),
        Parameters {
            max_n,
            max_m: s.uses_labels().then(|| ctx.config.max_m_or_default()),
            k: None,
            seed: ctx.config.seed,
            samples: ctx.config.samples_or(DEFAULT_SAMPLES),
        },
        out,
        start,
    ))
}

pub(crate) fn assemble(name: &str, parameters: Parameters, out: SuiteOutput, start: Instant) -> SuiteReport {
    let SuiteOutput { tally, notes } = out;
    SuiteReport {
        suite: name.to_string(),
        parameters,
        cases_run: tally.run,
        cases_passed: tally.passed,
        skipped: tally.skipped,
        errors: tally.errors,
        counterexamples_total: tally.failed,
        counterexamples: tally.witnesses,
        notes,
        wall_time: start.elapsed(),
    }
}

/// Samples per case for suites.
pub(crate) fn samples(ctx: &Context) -> usize {
    ctx.config.samples_or(DEFAULT_SAMPLES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn names_and_aliases_are_unique() {
        let mut seen = HashSet::new();
        for (name, aliases, _) in suite_names() {
            assert!(seen.insert(name), "{name}");
            for a in aliases {
                assert!(seen.insert(*a), "{a}");
            }
        }
        for id in [
            "main-sq",
            "lemma-2.11",
            "lemma-2.12",
            "lemma-2.16",
            "prop-2.17",
            "prop-3.1",
            "prop-3.2",
            "prop-4.1",
            "deletion",
            "young",
            "sgn-probe",
        ] {
            assert!(suite(id).is_some(), "{id}");
        }
        assert!(suite("nope").is_none());
    }
}
