//! Randomized counterexample searches for the positivity conjectures,
//! registered by name. A search never proves anything: a clean report
//! means no counterexample was found among the sampled cases.

use std::collections::HashMap;
use std::time::Instant;

use anyhow::Result;
use klimm_core::exactmat::{is_k_positive, Rational, RationalMatrix};
use klimm_core::grid::{graph_of_upper_interval, Multiset};
use klimm_core::immanant::{imm_definition, labeled_submatrix, vanishes_identically};
use klimm_core::klpoly::{KlCache, RPolynomialInversion};
use klimm_core::perm::increasing_pattern;
use klimm_core::Permutation;
use num_traits::Signed;
use rand::Rng;

use crate::config::DEFAULT_SEARCH_SAMPLES;
use crate::context::Context;
use crate::labels::random_multiset;
use crate::report::{Parameters, SuiteReport, Witness};
use crate::runner::{run_cases, Outcome};
use crate::suites::{assemble, SuiteOutput};
use crate::verify::imm_by_r_inversion;

pub const DEFAULT_SEARCH_MAX_N: usize = 4;
/// Random evaluations used to decide that `Imm_v X(R, C)` is not
/// identically zero.
pub const NONZERO_TRIALS: usize = 3;

/// One sampled instance: `Imm_v` of `M(R, C)` for a `k`-positive `M`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub v: Permutation,
    pub k: usize,
    pub r: Multiset,
    pub c: Multiset,
    pub matrix: RationalMatrix,
    /// Where the hypothesis on `v` came from.
    pub source: &'static str,
}

/// A conjecture turned into a sampler of instances whose conclusion is
/// "the immanant is positive".
pub trait Conjecture: Send + Sync {
    fn name(&self) -> &'static str;

    fn aliases(&self) -> &'static [&'static str];

    fn statement(&self) -> &'static str;

    /// Whether `R` and `C` are sampled (otherwise both are `[n]`).
    fn uses_labels(&self) -> bool;

    /// Draws instance `index`; `None` when no instance fits the drawn sizes.
    fn sample(&self, ctx: &Context, tables: &Tables, rng: &mut dyn rand::RngCore) -> Option<Instance>;
}

/// Per-`(n, k)` lists of permutations prepared before sampling.
#[derive(Default)]
pub struct Tables {
    avoiding_increasing: HashMap<(usize, usize), Vec<Permutation>>,
    proved: HashMap<(usize, usize), Vec<Permutation>>,
}

impl Tables {
    fn build(max_n: usize) -> Self {
        let mut t = Tables::default();
        for n in 1..=max_n {
            let perms: Vec<Permutation> = Permutation::all(n).collect();
            for k in 1..=n {
                let pattern = increasing_pattern(k + 1);
                t.avoiding_increasing.insert(
                    (n, k),
                    perms.iter().filter(|v| v.avoids(&pattern)).cloned().collect(),
                );
                t.proved.insert(
                    (n, k),
                    perms
                        .iter()
                        .filter(|v| v.avoids_1324_and_2143() && graph_of_upper_interval(v).largest_square() <= k)
                        .cloned()
                        .collect(),
                );
            }
        }
        t
    }
}

fn choose<T: Clone>(items: &[T], rng: &mut dyn rand::RngCore) -> Option<T> {
    (!items.is_empty()).then(|| items[rng.gen_range(0..items.len())].clone())
}

fn max_n(ctx: &Context) -> usize {
    ctx.config.max_n_or(DEFAULT_SEARCH_MAX_N)
}

/// `k` from `--k`, or uniform in `1..n`.
fn draw_k(ctx: &Context, n: usize, rng: &mut dyn rand::RngCore) -> usize {
    ctx.config.k.unwrap_or_else(|| rng.gen_range(1..n.max(2)))
}

fn draw_matrix(ctx: &Context, m: usize, k: usize, rng: &mut dyn rand::RngCore) -> RationalMatrix {
    let pool = ctx.positive_pool(m, k);
    pool[rng.gen_range(0..pool.len())].clone()
}

/// `Imm_v` is positive on `k`-positive matrices when `v` avoids `12…(k+1)`.
pub struct IncreasingAvoiders;

impl Conjecture for IncreasingAvoiders {
    fn name(&self) -> &'static str {
        "increasing-avoiders"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["5.1"]
    }

    fn statement(&self) -> &'static str {
        "v avoids 12...(k+1) => Imm_v(M) > 0 for every k-positive M"
    }

    fn uses_labels(&self) -> bool {
        false
    }

    fn sample(&self, ctx: &Context, tables: &Tables, rng: &mut dyn rand::RngCore) -> Option<Instance> {
        let n = rng.gen_range(2..=max_n(ctx).max(2));
        let k = draw_k(ctx, n, rng).min(n);
        let v = choose(&tables.avoiding_increasing[&(n, k)], rng)?;
        Some(Instance {
            r: Multiset::identity(n),
            c: Multiset::identity(n),
            matrix: draw_matrix(ctx, n, k, rng),
            v,
            k,
            source: "avoids 12...(k+1)",
        })
    }
}

/// If `Imm_v` is positive on `k`-positive matrices, so is `Imm_v X(R, C)`
/// unless it vanishes identically. Positivity of `Imm_v` cannot be decided
/// by sampling, so `v` is drawn from the class where it is known: 1324- and
/// 2143-avoiding with largest square of `Γ[v, w0]` at most `k`.
pub struct Restriction;

impl Conjecture for Restriction {
    fn name(&self) -> &'static str {
        "restriction"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["5.2"]
    }

    fn statement(&self) -> &'static str {
        "Imm_v k-positive and Imm_v X(R,C) not identically zero => Imm_v X(R,C) k-positive"
    }

    fn uses_labels(&self) -> bool {
        true
    }

    fn sample(&self, ctx: &Context, tables: &Tables, rng: &mut dyn rand::RngCore) -> Option<Instance> {
        let n = rng.gen_range(2..=max_n(ctx).max(2));
        let k = draw_k(ctx, n, rng).min(n);
        let v = choose(&tables.proved[&(n, k)], rng)?;
        let m = ctx.config.max_m_or_default().max(1);
        Some(Instance {
            r: random_multiset(n, m, &mut &mut *rng),
            c: random_multiset(n, m, &mut &mut *rng),
            matrix: draw_matrix(ctx, m, k, rng),
            v,
            k,
            source: "1324/2143-avoiding with largest square <= k",
        })
    }
}

/// For `0 < k < n <= m` and `v` avoiding `12…(k+1)`, `Imm_v X(R, C)` is
/// positive on `k`-positive matrices unless it vanishes identically.
pub struct RestrictedAvoiders;

impl Conjecture for RestrictedAvoiders {
    fn name(&self) -> &'static str {
        "restricted-avoiders"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["5.3"]
    }

    fn statement(&self) -> &'static str {
        "0 < k < n <= m, v avoids 12...(k+1), Imm_v X(R,C) not identically zero => Imm_v X(R,C) k-positive"
    }

    fn uses_labels(&self) -> bool {
        true
    }

    fn sample(&self, ctx: &Context, tables: &Tables, rng: &mut dyn rand::RngCore) -> Option<Instance> {
        let n = rng.gen_range(2..=max_n(ctx).max(2));
        let k = draw_k(ctx, n, rng);
        if k >= n {
            return None;
        }
        let v = choose(&tables.avoiding_increasing[&(n, k)], rng)?;
        let m = ctx.config.max_m_or_default().max(n);
        Some(Instance {
            r: random_multiset(n, m, &mut &mut *rng),
            c: random_multiset(n, m, &mut &mut *rng),
            matrix: draw_matrix(ctx, m, k, rng),
            v,
            k,
            source: "avoids 12...(k+1)",
        })
    }
}

fn registry() -> Vec<Box<dyn Conjecture>> {
    vec![
        Box::new(IncreasingAvoiders),
        Box::new(Restriction),
        Box::new(RestrictedAvoiders),
    ]
}

pub fn conjecture(name: &str) -> Option<Box<dyn Conjecture>> {
    registry()
        .into_iter()
        .find(|c| c.name() == name || c.aliases().contains(&name))
}

/// `(name, aliases, statement)` for every registered search.
pub fn conjecture_names() -> Vec<(&'static str, &'static [&'static str], &'static str)> {
    registry()
        .iter()
        .map(|c| (c.name(), c.aliases(), c.statement()))
        .collect()
}

/// What one sampled instance turned into.
enum Verdict {
    Positive,
    IdenticallyZero,
    /// Nonpositive value, confirmed by independent recomputation.
    Confirmed(Rational),
    /// Nonpositive value that did not survive recomputation.
    Unconfirmed(String),
}

fn evaluate(inst: &Instance, kl: &mut KlCache, mut rng: &mut dyn rand::RngCore) -> klimm_core::Result<Verdict> {
    let n = inst.v.n();
    let m = inst.matrix.rows();
    let sub = labeled_submatrix(&inst.v, &inst.r, &inst.c, &inst.matrix)?;
    let value = imm_definition(&inst.v, &sub, kl)?;
    if value.is_positive() {
        return Ok(Verdict::Positive);
    }
    let full_labels = inst.r == Multiset::identity(n) && inst.c == Multiset::identity(n) && m == n;
    if !full_labels && vanishes_identically(&inst.v, &inst.r, &inst.c, m, NONZERO_TRIALS, &mut rng, kl)? {
        return Ok(Verdict::IdenticallyZero);
    }
    let positive = is_k_positive(&inst.matrix, inst.k.min(m))?;
    let again = imm_by_r_inversion(&inst.v, &sub, &mut RPolynomialInversion::default())?;
    Ok(if positive && again == value {
        Verdict::Confirmed(value)
    } else {
        Verdict::Unconfirmed(format!(
            "value {value} but recheck gives k-positive = {positive}, value {again}"
        ))
    })
}

/// Draws `--samples` instances (default 1000) and evaluates them in
/// parallel; instances whose immanant vanishes identically are skipped.
pub fn run_search(conj: &dyn Conjecture, ctx: &Context) -> Result<SuiteReport> {
    let start = Instant::now();
    let max_n = max_n(ctx);
    let trials = ctx.config.samples_or(DEFAULT_SEARCH_SAMPLES);
    let tops = (1..=max_n).flat_map(Permutation::all).map(|v| Permutation::longest_element(v.n()).compose(&v).expect("same n"));
    let kl = ctx.kl_warmed(tops)?;
    let tables = Tables::build(max_n);
    let stream = conj.name();
    let instances: Vec<Option<Instance>> = (0..trials)
        .map(|i| conj.sample(ctx, &tables, &mut ctx.rng(stream, i)))
        .collect();
    let mut sources: HashMap<&str, usize> = HashMap::new();
    for inst in instances.iter().flatten() {
        *sources.entry(inst.source).or_default() += 1;
    }
    let tally = run_cases(
        &instances,
        || kl.clone(),
        |kl, i, inst| {
            let Some(inst) = inst else {
                return vec![Outcome::Skip];
            };
            let mut rng = ctx.rng("identically zero", i);
            vec![match evaluate(inst, kl, &mut rng) {
                Ok(Verdict::Positive) => Outcome::Pass,
                Ok(Verdict::IdenticallyZero) => Outcome::Skip,
                Ok(Verdict::Confirmed(value)) => Outcome::Fail(
                    Witness::new(
                        format!("k = {}, {}", inst.k, inst.source),
                        format!("Imm_v X(R,C) = {value} on a {}-positive matrix", inst.k),
                    )
                    .v(&inst.v)
                    .labels(&inst.r, &inst.c)
                    .matrix(&inst.matrix),
                ),
                Ok(Verdict::Unconfirmed(why)) => Outcome::Error(format!("unconfirmed candidate for {}: {why}", inst.v)),
                Err(e) => e.into(),
            }]
        },
    );
    ctx.persist_kl()?;
    let mut source_counts: Vec<_> = sources.into_iter().collect();
    source_counts.sort();
    let mut notes = vec![conj.statement().to_string()];
    notes.extend(source_counts.iter().map(|(s, c)| format!("hypothesis source \"{s}\": {c} instances")));
    notes.push(if tally.failed == 0 {
        format!("no counterexample found in {trials} trials")
    } else {
        format!("{} counterexamples found in {trials} trials", tally.failed)
    });
    let parameters = Parameters {
        max_n,
        max_m: conj.uses_labels().then(|| ctx.config.max_m_or_default()),
        k: ctx.config.k,
        seed: ctx.config.seed,
        samples: trials,
    };
    Ok(assemble(conj.name(), parameters, SuiteOutput { tally, notes }, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn lookup_by_alias() {
        for id in ["5.1", "5.2", "5.3", "restriction"] {
            assert!(conjecture(id).is_some(), "{id}");
        }
        assert!(conjecture("5.4").is_none());
    }

    #[test]
    fn small_search_is_clean_and_deterministic() {
        let config = Config {
            max_n: Some(3),
            samples: Some(40),
            seed: 9,
            ..Config::default()
        };
        let run = || {
            let ctx = Context::new(config.clone()).unwrap();
            run_search(&*conjecture("5.3").unwrap(), &ctx).unwrap().to_json().unwrap()
        };
        let a = run();
        assert_eq!(a, run());
        assert!(a.contains("\"counterexamples_total\": 0"), "{a}");
    }
}
