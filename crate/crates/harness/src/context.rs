use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use anyhow::{Context as _, Result};
use klimm_core::exactmat::{gen_totally_positive, generator, DEFAULT_GENERATOR};
use klimm_core::exactmat::RationalMatrix;
use klimm_core::klpoly::KlCache;
use klimm_core::Permutation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Config, MAX_N_GUARD};

/// Matrices per `(m, k)` pool.
pub const POOL_SIZE: usize = 12;
const PERTURBATION_BUDGET: usize = 50;
const CORNER_SHIFT_BUDGET: usize = 1_000;

type Pools = HashMap<(usize, usize), Arc<Vec<RationalMatrix>>>;

/// Shared state for one suite run: the configuration, a KL cache that is
/// warmed serially and then cloned into workers, and pools of verified
/// `k`-positive matrices.
pub struct Context {
    pub config: Config,
    kl: Mutex<KlCache>,
    warmed: Mutex<Vec<usize>>,
    pools: Mutex<Pools>,
}

impl Context {
    /// Loads any cache files already present in the configured directory.
    pub fn new(config: Config) -> Result<Self> {
        config.validate()?;
        let mut kl = KlCache::new();
        for n in 1..=MAX_N_GUARD {
            if let Some(path) = config.cache_file(n) {
                if path.exists() {
                    kl.load_into(&path)
                        .with_context(|| format!("reading KL cache {}", path.display()))?;
                }
            }
        }
        Ok(Self {
            config,
            kl: Mutex::new(kl),
            warmed: Mutex::new(Vec::new()),
            pools: Mutex::new(HashMap::new()),
        })
    }

    /// Deterministic generator for case `index` of `stream`. The stream name
    /// must be distinct from other streams within its first 16 bytes.
    pub fn rng(&self, stream: &str, index: usize) -> ChaCha8Rng {
        rng_for(self.config.seed, stream, index)
    }

    /// A cache holding `P_{x, y}` for every `y` in `tops` and every `x`.
    pub fn kl_warmed(&self, tops: impl IntoIterator<Item = Permutation>) -> Result<KlCache> {
        let mut kl = self.kl.lock().expect("kl lock");
        let mut warmed = self.warmed.lock().expect("warmed lock");
        for y in tops {
            for x in Permutation::all(y.n()) {
                kl.polynomial(&x, &y)?;
            }
            if !warmed.contains(&y.n()) {
                warmed.push(y.n());
            }
        }
        Ok(kl.clone())
    }

    /// Writes every `S_n` table touched by this run back to the cache
    /// directory, when one is configured.
    pub fn persist_kl(&self) -> Result<()> {
        let kl = self.kl.lock().expect("kl lock");
        for &n in self.warmed.lock().expect("warmed lock").iter() {
            if let Some(path) = self.config.cache_file(n) {
                kl.save(&path, n)
                    .with_context(|| format!("writing KL cache {}", path.display()))?;
            }
        }
        Ok(())
    }

    /// [`POOL_SIZE`] verified `m × m` matrices that are `k`-positive. For
    /// `k >= m` they are totally positive; otherwise a third are totally
    /// positive and the rest are `k`- but not `(k+1)`-positive.
    pub fn positive_pool(&self, m: usize, k: usize) -> Arc<Vec<RationalMatrix>> {
        let k = k.clamp(1, m.max(1));
        if let Some(pool) = self.pools.lock().expect("pool lock").get(&(m, k)) {
            return pool.clone();
        }
        let seed = self.config.seed;
        let pool: Vec<RationalMatrix> = (0..POOL_SIZE)
            .into_par_iter()
            .map(|i| pool_matrix(seed, m, k, i))
            .collect();
        let pool = Arc::new(pool);
        self.pools.lock().expect("pool lock").insert((m, k), pool.clone());
        pool
    }
}

pub fn rng_for(seed: u64, stream: &str, index: usize) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&(index as u64).to_le_bytes());
    let name = stream.as_bytes();
    let len = name.len().min(16);
    bytes[16..16 + len].copy_from_slice(&name[..len]);
    ChaCha8Rng::from_seed(bytes)
}

fn pool_matrix(seed: u64, m: usize, k: usize, i: usize) -> RationalMatrix {
    let sub_seed = {
        use rand::RngCore;
        rng_for(seed, &format!("pool {m} {k}"), i).next_u64()
    };
    if k >= m || i % 3 == 0 {
        return gen_totally_positive(m, sub_seed);
    }
    let perturbed = (i % 3 == 2)
        .then(|| generator("perturbation").and_then(|g| g.generate(m, k, sub_seed, PERTURBATION_BUDGET)))
        .flatten();
    perturbed
        .or_else(|| {
            generator(DEFAULT_GENERATOR).and_then(|g| g.generate(m, k, sub_seed, CORNER_SHIFT_BUDGET))
        })
        .unwrap_or_else(|| gen_totally_positive(m, sub_seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use klimm_core::exactmat::{is_k_positive, max_positivity_order};
    use rand::Rng;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: u64 = rng_for(1, "alpha", 0).gen();
        assert_eq!(a, rng_for(1, "alpha", 0).gen::<u64>());
        assert_ne!(a, rng_for(1, "alpha", 1).gen::<u64>());
        assert_ne!(a, rng_for(1, "beta", 0).gen::<u64>());
        assert_ne!(a, rng_for(2, "alpha", 0).gen::<u64>());
    }

    #[test]
    fn pools_are_positive_and_cached() {
        let ctx = Context::new(Config::default()).unwrap();
        let pool = ctx.positive_pool(4, 2);
        assert_eq!(pool.len(), POOL_SIZE);
        assert!(pool.iter().all(|m| is_k_positive(m, 2).unwrap()));
        assert!(pool.iter().any(|m| max_positivity_order(m).unwrap() == 2));
        assert!(Arc::ptr_eq(&pool, &ctx.positive_pool(4, 2)));
        let tp = ctx.positive_pool(3, 5);
        assert!(tp.iter().all(|m| max_positivity_order(m).unwrap() == 3));
    }

    #[test]
    fn warmed_cache_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let config = Config {
            kl_cache: Some(dir.path().to_path_buf()),
            ..Config::default()
        };
        let ctx = Context::new(config.clone()).unwrap();
        let top = Permutation::longest_element(4);
        let warm = ctx.kl_warmed([top.clone()]).unwrap();
        assert!(warm.len() >= 24);
        ctx.persist_kl().unwrap();
        let again = Context::new(config).unwrap();
        let mut reloaded = again.kl_warmed([top]).unwrap();
        let before = reloaded.misses();
        reloaded.polynomial(&Permutation::identity(4), &Permutation::longest_element(4)).unwrap();
        assert_eq!(reloaded.misses(), before);
    }
}
