use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::IntPolynomial;
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Dense per-`n` data: every permutation, its length, right multiplication by
/// adjacent transpositions, and the Bruhat relation as bitsets.
#[derive(Clone)]
struct GroupTable {
    n: usize,
    perms: Vec<Permutation>,
    lengths: Vec<u32>,
    // index of w s_i at [w * (n - 1) + (i - 1)]
    right: Vec<u32>,
    words: usize,
    // up[x] = { z : x <= z }, down[v] = { z : z <= v }
    up: Vec<u64>,
    down: Vec<u64>,
}

impl GroupTable {
    fn build(n: usize) -> Self {
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let size = perms.len();
        let lengths = perms.iter().map(|p| p.length() as u32).collect();
        let mut right = Vec::with_capacity(size * n.saturating_sub(1));
        for p in &perms {
            for s in 1..n {
                right.push(p.swap_positions(s).rank() as u32);
            }
        }
        // x <= y iff #{a <= i : x(a) >= j} <= #{a <= i : y(a) >= j} for all i, j
        let counts: Vec<Vec<u8>> = perms
            .iter()
            .map(|p| {
                let mut c = vec![0u8; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let prev = if i > 0 { c[(i - 1) * n + j] } else { 0 };
                        c[i * n + j] = prev + u8::from(p.raw()[i] as usize > j);
                    }
                }
                c
            })
            .collect();
        let words = size.div_ceil(64);
        let mut up = vec![0u64; size * words];
        let mut down = vec![0u64; size * words];
        for x in 0..size {
            for y in 0..size {
                if counts[x].iter().zip(&counts[y]).all(|(a, b)| a <= b) {
                    up[x * words + y / 64] |= 1 << (y % 64);
                    down[y * words + x / 64] |= 1 << (x % 64);
                }
            }
        }
        Self {
            n,
            perms,
            lengths,
            right,
            words,
            up,
            down,
        }
    }

    fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    fn right_mult(&self, w: usize, s: usize) -> usize {
        self.right[w * (self.n - 1) + (s - 1)] as usize
    }

    fn has_descent(&self, w: usize, s: usize) -> bool {
        let raw = self.perms[w].raw();
        raw[s - 1] > raw[s]
    }

    /// Indices `z` with `x <= z <= v`.
    fn interval(&self, x: usize, v: usize) -> Vec<usize> {
        let up = &self.up[x * self.words..(x + 1) * self.words];
        let down = &self.down[v * self.words..(v + 1) * self.words];
        let mut out = Vec::new();
        for (k, (a, b)) in up.iter().zip(down).enumerate() {
            let mut bits = a & b;
            while bits != 0 {
                out.push(k * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

#[derive(Clone)]
struct Table {
    group: GroupTable,
    memo: HashMap<(u32, u32), IntPolynomial>,
}

impl Table {
    fn polynomial(&mut self, x: usize, w: usize, stats: &mut (u64, u64)) -> IntPolynomial {
        if let Some(p) = self.memo.get(&(x as u32, w as u32)) {
            stats.0 += 1;
            return p.clone();
        }
        stats.1 += 1;
        let result = if !self.group.leq(x, w) {
            IntPolynomial::zero()
        } else if x == w {
            IntPolynomial::one()
        } else {
            self.recurse(x, w, stats)
        };
        self.memo.insert((x as u32, w as u32), result.clone());
        result
    }

    // P_{x,w} = q^{1-c} P_{xs,v} + q^c P_{x,v}
    //           - sum_{x <= z < v, zs < z} mu(z,v) q^{(l(w)-l(z))/2} P_{x,z}
    // with s a right descent of w, v = ws, c = [xs < x].
    fn recurse(&mut self, x: usize, w: usize, stats: &mut (u64, u64)) -> IntPolynomial {
        let n = self.group.n;
        let s = (1..n)
            .find(|&s| self.group.has_descent(w, s))
            .expect("w > x has a descent");
        let v = self.group.right_mult(w, s);
        let xs = self.group.right_mult(x, s);
        let c = self.group.has_descent(x, s);
        let p_xs_v = self.polynomial(xs, v, stats);
        let p_x_v = self.polynomial(x, v, stats);
        let mut acc = if c {
            &p_xs_v + &p_x_v.shift(1)
        } else {
            &p_xs_v.shift(1) + &p_x_v
        };
        let len_v = self.group.lengths[v];
        let len_w = self.group.lengths[w];
        for z in self.group.interval(x, v) {
            let len_z = self.group.lengths[z];
            if z == v || !self.group.has_descent(z, s) || (len_v - len_z) % 2 == 0 {
                continue;
            }
            let mu = self
                .polynomial(z, v, stats)
                .coeff(((len_v - len_z - 1) / 2) as usize);
            if mu.is_zero() {
                continue;
            }
            let p_x_z = self.polynomial(x, z, stats);
            acc = &acc - &p_x_z.scale(&mu).shift(((len_w - len_z) / 2) as usize);
        }
        acc
    }
}

/// Memo table for `P_{x,y}` keyed by permutation pairs, with hit/miss
/// counters. Lookups never change returned values.
#[derive(Clone, Default)]
pub struct KlCache {
    tables: HashMap<usize, Table>,
    hits: u64,
    misses: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub n: usize,
    pub format_version: u32,
}

#[derive(Serialize, Deserialize)]
struct CacheDocument {
    header: CacheHeader,
    entries: BTreeMap<String, IntPolynomial>,
}

impl KlCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    /// Number of memoized pairs across all `n`.
    pub fn len(&self) -> usize {
        self.tables.values().map(|t| t.memo.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn table(&mut self, n: usize) -> &mut Table {
        self.tables.entry(n).or_insert_with(|| Table {
            group: GroupTable::build(n),
            memo: HashMap::new(),
        })
    }

    pub fn polynomial(&mut self, x: &Permutation, y: &Permutation) -> Result<IntPolynomial> {
        if x.n() != y.n() {
            return Err(Error::SizeMismatch {
                left: x.n(),
                right: y.n(),
            });
        }
        let mut stats = (self.hits, self.misses);
        let table = self.table(x.n());
        let result = table.polynomial(x.rank(), y.rank(), &mut stats);
        (self.hits, self.misses) = stats;
        Ok(result)
    }

    /// All memoized entries for `S_n`, sorted by key.
    pub fn entries(&self, n: usize) -> BTreeMap<String, IntPolynomial> {
        let Some(table) = self.tables.get(&n) else {
            return BTreeMap::new();
        };
        table
            .memo
            .iter()
            .map(|(&(x, y), p)| {
                let key = format!(
                    "{}|{}",
                    table.group.perms[x as usize].to_compact(),
                    table.group.perms[y as usize].to_compact()
                );
                (key, p.clone())
            })
            .collect()
    }

    /// Writes the `S_n` entries to `path` via a temporary file and rename.
    pub fn save(&self, path: &Path, n: usize) -> Result<()> {
        let doc = CacheDocument {
            header: CacheHeader {
                n,
                format_version: CACHE_FORMAT_VERSION,
            },
            entries: self.entries(n),
        };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer_pretty(&mut tmp, &doc)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Merges the entries of a cache file; returns its header.
    pub fn load_into(&mut self, path: &Path) -> Result<CacheHeader> {
        let text = fs::read_to_string(path)?;
        let doc: CacheDocument = serde_json::from_str(&text)?;
        if doc.header.format_version != CACHE_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported cache format version {}",
                doc.header.format_version
            )));
        }
        let n = doc.header.n;
        let table = self.table(n);
        for (key, poly) in doc.entries {
            let (x, y) = key
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("bad cache key {key:?}")))?;
            let x: Permutation = x.parse()?;
            let y: Permutation = y.parse()?;
            if x.n() != n || y.n() != n {
                return Err(Error::Parse(format!("cache key {key:?} is not in S_{n}")));
            }
            table.memo.insert((x.rank() as u32, y.rank() as u32), poly);
        }
        Ok(doc.header)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut cache = Self::new();
        cache.load_into(path)?;
        Ok(cache)
    }
}
