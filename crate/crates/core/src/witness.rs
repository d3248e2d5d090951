//! Backtracking search for order-property sequences and coding grids in
//! finite relations, with three-valued results so that an exhausted budget
//! is never reported as nonexistence.
//!
//! # Coding grids
//!
//! A coding witness of size `m` in `D ⊆ A^k × A^k × A` is a pair of
//! `m`-sets `X, Y ⊆ A^k` and a set `Z ⊆ A` such that `D ∩ (X × Y × Z)` is
//! the graph of a bijection `X × Y → Z`. Write `P(z) = {(x, y) ∈ X × Y :
//! D(x, y, z)}`. Exactness says `P(z)` is a single pair for every `z ∈ Z`
//! and bijectivity says these pairs are distinct and exhaust `X × Y`. So a
//! witness on `X × Y` exists iff every pair `p` has some `z ∈ A` with
//! `P(z) = {p}`, and then any choice of one such `z` per pair is a valid
//! `Z`; the search takes the least. Only `X` and `Y` are branched on.
//!
//! The condition is inherited by every sub-grid `X' × Y'`, since the
//! profile of `z` there is `P(z) ∩ (X' × Y')`. The search therefore grows
//! `X` and `Y` alternately as increasing sequences and prunes any partial
//! grid that already fails.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest number of cells `a^r` a relation may have.
pub const MAX_RELATION_CELLS: u128 = 1 << 30;

/// `D ⊆ A^r` over `A = 0..a`, stored as a bitset over base-`a` tuple ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinRelation {
    a: u32,
    r: u32,
    bits: FixedBitSet,
}

impl FinRelation {
    pub fn new(a: u32, r: u32) -> Result<FinRelation> {
        if a == 0 || r == 0 {
            return Err(Error::Range(format!("relation needs a >= 1 and r >= 1, got a={a} r={r}")));
        }
        let cells = (a as u128).checked_pow(r).filter(|&c| c <= MAX_RELATION_CELLS);
        let Some(cells) = cells else {
            return Err(Error::capacity(
                "relation cells a^r",
                format!("{a}^{r}"),
                MAX_RELATION_CELLS as u64,
            ));
        };
        Ok(FinRelation {
            a,
            r,
            bits: FixedBitSet::with_capacity(cells as usize),
        })
    }

    pub fn universe(&self) -> u32 {
        self.a
    }

    pub fn arity(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn rank(&self, tuple: &[u32]) -> Result<usize> {
        if tuple.len() != self.r as usize {
            return Err(Error::Range(format!("tuple of length {} for arity {}", tuple.len(), self.r)));
        }
        let mut idx = 0usize;
        for &t in tuple {
            if t >= self.a {
                return Err(Error::Range(format!("entry {t} outside universe 0..{}", self.a)));
            }
            idx = idx * self.a as usize + t as usize;
        }
        Ok(idx)
    }

    fn unrank(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.r as usize];
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.a as usize) as u32;
            idx /= self.a as usize;
        }
        out
    }

    pub fn insert(&mut self, tuple: &[u32]) -> Result<()> {
        let idx = self.rank(tuple)?;
        self.bits.insert(idx);
        Ok(())
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        self.rank(tuple).map(|i| self.bits.contains(i)).unwrap_or(false)
    }

    #[inline]
    fn contains_rank(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    /// Member tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.bits.ones().map(|i| self.unrank(i))
    }

    /// First line `a=<size> r=<arity>`, then one whitespace-separated tuple
    /// per line; `#` comments and blank lines are skipped.
    pub fn parse(text: &str) -> Result<FinRelation> {
        let mut rel: Option<FinRelation> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(rel) = rel.as_mut() else {
                rel = Some(parse_header(line, line_no)?);
                continue;
            };
            let tuple: Vec<u32> = line
                .split_whitespace()
                .map(|f| f.parse().map_err(|_| Error::format(line_no, format!("bad entry {f:?}"))))
                .collect::<Result<_>>()?;
            rel.insert(&tuple).map_err(|e| Error::format(line_no, e.to_string()))?;
        }
        rel.ok_or_else(|| Error::format(1, "missing `a=<size> r=<arity>` header"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("a={} r={}\n", self.a, self.r);
        for t in self.tuples() {
            let fields: Vec<String> = t.iter().map(u32::to_string).collect();
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_header(line: &str, line_no: usize) -> Result<FinRelation> {
    let mut a = None;
    let mut r = None;
    for field in line.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::format(line_no, format!("expected key=value, found {field:?}")))?;
        let value: u32 = value
            .parse()
            .map_err(|_| Error::format(line_no, format!("bad number in {field:?}")))?;
        match key {
            "a" => a = Some(value),
            "r" => r = Some(value),
            _ => return Err(Error::format(line_no, format!("unknown header key {key:?}"))),
        }
    }
    match (a, r) {
        (Some(a), Some(r)) => FinRelation::new(a, r).map_err(|e| match e {
            Error::Capacity { .. } => e,
            other => Error::format(line_no, other.to_string()),
        }),
        _ => Err(Error::format(line_no, "header needs both a= and r=")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<W> {
    Found(W),
    /// The search space was exhausted without a witness.
    None,
    /// The node budget ran out first.
    Indeterminate,
}

impl<W> SearchOutcome<W> {
    pub fn name(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::None => "none",
            SearchOutcome::Indeterminate => "indeterminate",
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport<W> {
    pub outcome: SearchOutcome<W>,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub node_budget: u64,
    /// Split the first branching level across rayon workers. The witness
    /// returned is the same as sequentially; only whether the budget runs
    /// out can differ.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: 50_000_000,
            parallel: false,
        }
    }
}

/// `(a_i, b_j) ∈ D` iff `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

/// `D ∩ (X × Y × Z)` is the graph of `(x_i, y_j) ↦ table[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodingWitness {
    pub x: Vec<Vec<u32>>,
    pub y: Vec<Vec<u32>>,
    pub z: Vec<u32>,
    pub table: Vec<Vec<u32>>,
}

struct Exhausted;

struct Nodes<'a> {
    used: &'a AtomicU64,
    budget: u64,
}

impl Nodes<'_> {
    #[inline]
    fn tick(&self) -> std::result::Result<(), Exhausted> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Exhausted);
        }
        Ok(())
    }
}

/// Runs `branch` over first-level choices in order and keeps the first hit.
fn run_branches<W: Send>(
    first: impl IntoParallelIterator<Item = usize> + IntoIterator<Item = usize>,
    opts: SearchOptions,
    branch: impl Fn(usize, &Nodes) -> std::result::Result<Option<W>, Exhausted> + Sync,
) -> SearchReport<W> {
    let used = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let nodes = Nodes {
        used: &used,
        budget: opts.node_budget,
    };
    let found = if opts.parallel {
        first.into_par_iter().find_map_first(|c| match branch(c, &nodes) {
            Ok(w) => w,
            Err(Exhausted) => {
                exhausted.store(true, Ordering::Relaxed);
                None
            }
        })
    } else {
        let mut hit = None;
        for c in first {
            match branch(c, &nodes) {
                Ok(Some(w)) => {
                    hit = Some(w);
                    break;
                }
                Ok(None) => {}
                Err(Exhausted) => {
                    exhausted.store(true, Ordering::Relaxed);
                    break;
                }
            }
        }
        hit
    };
    let outcome = match found {
        Some(w) => SearchOutcome::Found(w),
        None if exhausted.load(Ordering::Relaxed) => SearchOutcome::Indeterminate,
        None => SearchOutcome::None,
    };
    SearchReport {
        outcome,
        nodes: used.load(Ordering::Relaxed).min(opts.node_budget),
    }
}

/// Sequences `a_0..a_{n-1}`, `b_0..b_{n-1}` in a binary `D` with
/// `(a_i, b_j) ∈ D` iff `i < j`. For `n >= 2` the `a_i` are forced to be
/// distinct, so `n > |A|` has no witness.
pub fn find_order_witness(d: &FinRelation, n: usize, opts: SearchOptions) -> Result<SearchReport<OrderWitness>> {
    if d.arity() != 2 {
        return Err(Error::DomainMismatch(format!("order witness needs arity 2, got {}", d.arity())));
    }
    if n == 0 {
        return Err(Error::Range("order witness needs n >= 1".into()));
    }
    let a = d.universe() as usize;
    if n >= 2 && n > a {
        return Ok(SearchReport {
            outcome: SearchOutcome::None,
            nodes: 0,
        });
    }
    let rel = |x: usize, y: usize| d.contains_rank(x * a + y);

    fn grow(
        rel: &impl Fn(usize, usize) -> bool,
        univ: usize,
        n: usize,
        xs: &mut Vec<usize>,
        ys: &mut Vec<usize>,
        nodes: &Nodes,
    ) -> std::result::Result<bool, Exhausted> {
        if ys.len() == n {
            return Ok(true);
        }
        if xs.len() == ys.len() {
            // a_k sits outside every earlier b_j
            for x in 0..univ {
                if ys.iter().any(|&y| rel(x, y)) {
                    continue;
                }
                nodes.tick()?;
                xs.push(x);
                if grow(rel, univ, n, xs, ys, nodes)? {
                    return Ok(true);
                }
                xs.pop();
            }
        } else {
            let k = ys.len();
            for y in 0..univ {
                if rel(xs[k], y) || !xs[..k].iter().all(|&x| rel(x, y)) {
                    continue;
                }
                nodes.tick()?;
                ys.push(y);
                if grow(rel, univ, n, xs, ys, nodes)? {
                    return Ok(true);
                }
                ys.pop();
            }
        }
        Ok(false)
    }

    Ok(run_branches(0..a, opts, |a0, nodes| {
        nodes.tick()?;
        let mut xs = vec![a0];
        let mut ys = Vec::with_capacity(n);
        Ok(grow(&rel, a, n, &mut xs, &mut ys, nodes)?.then(|| OrderWitness {
            a: xs.iter().map(|&v| v as u32).collect(),
            b: ys.iter().map(|&v| v as u32).collect(),
        }))
    }))
}

/// Per-point profile on the current grid: no pair, exactly one, or more.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Profile {
    Empty,
    One(u16, u16),
    Many,
}

struct Grid<'a, F> {
    member: &'a F,
    cands: usize,
    points: usize,
    m: usize,
}

impl<F: Fn(usize, usize, usize) -> bool> Grid<'_, F> {
    /// Adds one row (`is_x`) or column to the profiles, then checks that
    /// every pair of the grid is the exact profile of some point.
    fn extend(&self, profiles: &mut [Profile], xs: &[usize], ys: &[usize], is_x: bool) -> bool {
        let (i_new, j_new) = (xs.len() - 1, ys.len() - 1);
        for (z, prof) in profiles.iter_mut().enumerate() {
            if *prof == Profile::Many {
                continue;
            }
            let cells: &mut dyn Iterator<Item = (usize, usize)> = if is_x {
                &mut (0..ys.len()).map(|j| (i_new, j))
            } else {
                &mut (0..xs.len()).map(|i| (i, j_new))
            };
            for (i, j) in cells {
                if (self.member)(xs[i], ys[j], z) {
                    if *prof != Profile::Empty {
                        *prof = Profile::Many;
                        break;
                    }
                    *prof = Profile::One(i as u16, j as u16);
                }
            }
        }
        let cells = xs.len() * ys.len();
        let mut covered = FixedBitSet::with_capacity(cells);
        for prof in profiles.iter() {
            if let Profile::One(i, j) = *prof {
                covered.insert(i as usize * ys.len() + j as usize);
            }
        }
        covered.count_ones(..) == cells
    }

    fn grow(
        &self,
        profiles: &[Profile],
        xs: &mut Vec<usize>,
        ys: &mut Vec<usize>,
        nodes: &Nodes,
    ) -> std::result::Result<bool, Exhausted> {
        if ys.len() == self.m {
            return Ok(true);
        }
        let is_x = xs.len() == ys.len();
        let seq_len = if is_x { xs.len() } else { ys.len() };
        let start = if is_x { xs.last() } else { ys.last() }.map_or(0, |&v| v + 1);
        let end = self.cands + 1 - (self.m - seq_len);
        for c in start..end {
            nodes.tick()?;
            if is_x { xs.push(c) } else { ys.push(c) }
            let mut next = profiles.to_vec();
            if self.extend(&mut next, xs, ys, is_x) && self.grow(&next, xs, ys, nodes)? {
                return Ok(true);
            }
            if is_x { xs.pop() } else { ys.pop() };
        }
        Ok(false)
    }

    fn table(&self, xs: &[usize], ys: &[usize]) -> Vec<Vec<u32>> {
        let mut table = vec![vec![0u32; ys.len()]; xs.len()];
        let mut filled = FixedBitSet::with_capacity(xs.len() * ys.len());
        for z in 0..self.points {
            let mut hit = None;
            let mut count = 0;
            for (i, &x) in xs.iter().enumerate() {
                for (j, &y) in ys.iter().enumerate() {
                    if (self.member)(x, y, z) {
                        count += 1;
                        hit = Some((i, j));
                    }
                }
            }
            if let (1, Some((i, j))) = (count, hit) {
                if !filled.put(i * ys.len() + j) {
                    table[i][j] = z as u32;
                }
            }
        }
        table
    }
}

/// Rows, columns and the forced `z` table of a grid.
type GridCells = (Vec<usize>, Vec<usize>, Vec<Vec<u32>>);

fn search_grid<F>(
    member: &F,
    cands: usize,
    points: usize,
    m: usize,
    opts: SearchOptions,
) -> SearchReport<GridCells>
where
    F: Fn(usize, usize, usize) -> bool + Sync,
{
    if m > cands || m * m > points {
        return SearchReport {
            outcome: SearchOutcome::None,
            nodes: 0,
        };
    }
    let grid = Grid {
        member,
        cands,
        points,
        m,
    };
    run_branches(0..cands + 1 - m, opts, |x0, nodes| {
        nodes.tick()?;
        let mut xs = vec![x0];
        let mut ys = Vec::with_capacity(m);
        let profiles = vec![Profile::Empty; points];
        Ok(grid
            .grow(&profiles, &mut xs, &mut ys, nodes)?
            .then(|| {
                let table = grid.table(&xs, &ys);
                (xs, ys, table)
            }))
    })
}

/// Coding grid of size `m` in a ternary `D`: `X, Y ⊆ A` with `|X| = |Y| = m`.
pub fn find_coding_witness(d: &FinRelation, m: usize, opts: SearchOptions) -> Result<SearchReport<CodingWitness>> {
    if d.arity() != 3 {
        return Err(Error::DomainMismatch(format!("coding witness needs arity 3, got {}", d.arity())));
    }
    find_tuple_coding_witness(d, m, 1, opts)
}

/// Coding grid of size `m` in `D ⊆ A^{2k+1}` with `X, Y ⊆ A^k`. Candidate
/// `k`-tuples are ordered by base-`a` rank.
pub fn find_tuple_coding_witness(
    d: &FinRelation,
    m: usize,
    k: usize,
    opts: SearchOptions,
) -> Result<SearchReport<CodingWitness>> {
    if k == 0 {
        return Err(Error::Range("tuple coding needs k >= 1".into()));
    }
    if m == 0 {
        return Err(Error::Range("coding witness needs m >= 1".into()));
    }
    if d.arity() as usize != 2 * k + 1 {
        return Err(Error::DomainMismatch(format!(
            "tuple coding with k={k} needs arity {}, got {}",
            2 * k + 1,
            d.arity()
        )));
    }
    let a = d.universe() as usize;
    let cands = a.pow(k as u32);
    let member = |x: usize, y: usize, z: usize| d.contains_rank((x * cands + y) * a + z);
    let report = search_grid(&member, cands, a, m, opts);
    let decode = |mut idx: usize| -> Vec<u32> {
        let mut t = vec![0u32; k];
        for slot in t.iter_mut().rev() {
            *slot = (idx % a) as u32;
            idx /= a;
        }
        t
    };
    let outcome = match report.outcome {
        SearchOutcome::Found((xs, ys, table)) => SearchOutcome::Found(CodingWitness {
            x: xs.into_iter().map(decode).collect(),
            y: ys.into_iter().map(decode).collect(),
            z: table.iter().flatten().copied().collect(),
            table,
        }),
        SearchOutcome::None => SearchOutcome::None,
        SearchOutcome::Indeterminate => SearchOutcome::Indeterminate,
    };
    Ok(SearchReport {
        outcome,
        nodes: report.nodes,
    })
}

/// Checks witnesses directly against the member tuples of `D`.
pub mod verify {
    use std::collections::HashSet;

    use super::{CodingWitness, FinRelation, OrderWitness};

    fn members(d: &FinRelation) -> HashSet<Vec<u32>> {
        d.tuples().collect()
    }

    pub fn order(d: &FinRelation, w: &OrderWitness) -> bool {
        if d.arity() != 2 || w.a.len() != w.b.len() || w.a.is_empty() {
            return false;
        }
        let set = members(d);
        for (i, &x) in w.a.iter().enumerate() {
            for (j, &y) in w.b.iter().enumerate() {
                if set.contains(&vec![x, y]) != (i < j) {
                    return false;
                }
            }
        }
        true
    }

    pub fn coding(d: &FinRelation, w: &CodingWitness) -> bool {
        let m = w.x.len();
        if m == 0 || w.y.len() != m || w.table.len() != m || w.z.len() != m * m {
            return false;
        }
        let k = w.x[0].len();
        if d.arity() as usize != 2 * k + 1 {
            return false;
        }
        let xs: HashSet<&Vec<u32>> = w.x.iter().collect();
        let ys: HashSet<&Vec<u32>> = w.y.iter().collect();
        let zs: HashSet<u32> = w.z.iter().copied().collect();
        if xs.len() != m || ys.len() != m || zs.len() != m * m {
            return false;
        }
        if w.x.iter().chain(&w.y).any(|t| t.len() != k) {
            return false;
        }
        let mut flat = Vec::with_capacity(m * m);
        for row in &w.table {
            if row.len() != m {
                return false;
            }
            flat.extend(row.iter().copied());
        }
        if flat != w.z {
            return false;
        }
        let set = members(d);
        for (i, x) in w.x.iter().enumerate() {
            for (j, y) in w.y.iter().enumerate() {
                for &z in &w.z {
                    let mut t = x.clone();
                    t.extend(y);
                    t.push(z);
                    if set.contains(&t) != (w.table[i][j] == z) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Relations used as search fixtures.
pub mod fixtures {
    use super::*;

    /// Universe `[m0]^3` with `(p, q, s) ↦ p·m0² + q·m0 + s`, and
    /// `D(u, v, w)` iff `u` and `w` agree in the first coordinate and `v`
    /// and `w` in the second.
    pub fn e1e2(m0: u32) -> Result<FinRelation> {
        let a = m0.checked_pow(3).ok_or_else(|| Error::Range("m0 too large".into()))?;
        let mut d = FinRelation::new(a, 3)?;
        let first = |p: u32| p / (m0 * m0);
        let second = |p: u32| p / m0 % m0;
        for u in 0..a {
            for v in 0..a {
                for w in 0..a {
                    if first(u) == first(w) && second(v) == second(w) {
                        d.insert(&[u, v, w])?;
                    }
                }
            }
        }
        Ok(d)
    }

    /// `x < y` on `0..a`.
    pub fn less_than(a: u32) -> Result<FinRelation> {
        let mut d = FinRelation::new(a, 2)?;
        for x in 0..a {
            for y in x + 1..a {
                d.insert(&[x, y])?;
            }
        }
        Ok(d)
    }

    /// `z = (x·a + y) mod a²` on universe `0..a²`.
    pub fn pairing(a: u32) -> Result<FinRelation> {
        let u = a * a;
        let mut d = FinRelation::new(u, 3)?;
        for x in 0..u {
            for y in 0..u {
                d.insert(&[x, y, (x * a + y) % u])?;
            }
        }
        Ok(d)
    }

    /// On universe `0..4`, `D(x1, x2, y1, y2, z)` iff
    /// `z = 2·((x1 + x2) mod 2) + ((y1 + y2) mod 2)`: a pairing of
    /// parity classes of pairs.
    pub fn pair_parity() -> Result<FinRelation> {
        let mut d = FinRelation::new(4, 5)?;
        for x1 in 0..4 {
            for x2 in 0..4 {
                for y1 in 0..4 {
                    for y2 in 0..4 {
                        let z = 2 * ((x1 + x2) % 2) + (y1 + y2) % 2;
                        d.insert(&[x1, x2, y1, y2, z])?;
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn empty(a: u32, r: u32) -> Result<FinRelation> {
        FinRelation::new(a, r)
    }

    pub fn full(a: u32, r: u32) -> Result<FinRelation> {
        let mut d = FinRelation::new(a, r)?;
        let cells = d.bits.len();
        d.bits.insert_range(..cells);
        Ok(d)
    }

    /// Each tuple independently with probability `p`.
    pub fn random<R: Rng>(a: u32, r: u32, p: f64, rng: &mut R) -> Result<FinRelation> {
        let mut d = FinRelation::new(a, r)?;
        for i in 0..d.bits.len() {
            if rng.gen_bool(p) {
                d.bits.insert(i);
            }
        }
        Ok(d)
    }

    /// The half-graph `H_t` with its `b` side shifted up by one index, as
    /// a relation: `a_i = i`, `b_j = t + j`, and `(a_i, b_j) ∈ D` iff
    /// `i < j`, on universe `2t`.
    pub fn half_graph_relation(t: u32) -> Result<FinRelation> {
        let mut d = FinRelation::new((2 * t).max(1), 2)?;
        for i in 0..t {
            for j in i + 1..t {
                d.insert(&[i, t + j])?;
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    fn order(d: &FinRelation, n: usize) -> SearchOutcome<OrderWitness> {
        let r = find_order_witness(d, n, opts()).unwrap();
        if let SearchOutcome::Found(w) = &r.outcome {
            assert!(verify::order(d, w));
        }
        r.outcome
    }

    fn coding(d: &FinRelation, m: usize) -> SearchOutcome<CodingWitness> {
        let r = find_coding_witness(d, m, opts()).unwrap();
        if let SearchOutcome::Found(w) = &r.outcome {
            assert!(verify::coding(d, w));
        }
        r.outcome
    }

    #[test]
    fn relation_parse_and_text() {
        let d = FinRelation::parse("# lt\na=3 r=2\n0 1\n0 2\n1 2\n").unwrap();
        assert_eq!(d, less_than(3).unwrap());
        assert_eq!(FinRelation::parse(&d.to_text()).unwrap(), d);
        assert!(matches!(FinRelation::parse("a=3 r=2\n0 3\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(FinRelation::parse("a=3 r=2\n0 1 2\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(FinRelation::parse("a=3\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(FinRelation::parse("0 1\n"), Err(Error::Format { line: 1, .. })));
        assert!(FinRelation::parse("a=1000 r=9\n").unwrap_err().is_capacity());
    }

    #[test]
    fn order_examples() {
        let lt = less_than(6).unwrap();
        assert!(matches!(order(&lt, 3), SearchOutcome::Found(_)));
        assert_eq!(order(&empty(6, 2).unwrap(), 2), SearchOutcome::None);
        assert_eq!(order(&full(6, 2).unwrap(), 2), SearchOutcome::None);
        let lt10 = less_than(10).unwrap();
        assert!(matches!(order(&lt10, 10), SearchOutcome::Found(_)));
        assert_eq!(order(&lt10, 11), SearchOutcome::None);
        // n = 1 needs only a non-member pair
        assert!(matches!(order(&empty(1, 2).unwrap(), 1), SearchOutcome::Found(_)));
        assert_eq!(order(&full(3, 2).unwrap(), 1), SearchOutcome::None);
    }

    #[test]
    fn half_graph_duality() {
        for t in 1..=6 {
            let d = half_graph_relation(t).unwrap();
            assert!(matches!(order(&d, t as usize), SearchOutcome::Found(_)), "t = {t}");
            assert_eq!(order(&d, t as usize + 1), SearchOutcome::None, "t = {t}");
        }
    }

    #[test]
    fn order_search_without_the_counting_shortcut() {
        // below the pigeonhole cut-off the search itself must certify none
        let d = half_graph_relation(4).unwrap();
        let r = find_order_witness(&d, 5, opts()).unwrap();
        assert_eq!(r.outcome, SearchOutcome::None);
        assert!(r.nodes > 0);
    }

    #[test]
    fn e1e2_coding() {
        let d = e1e2(3).unwrap();
        for m in 1..=3 {
            assert!(matches!(coding(&d, m), SearchOutcome::Found(_)), "m = {m}");
        }
        // only m0 distinct first coordinates are available for X
        assert_eq!(coding(&d, 4), SearchOutcome::None);
    }

    #[test]
    fn empty_relation_has_no_coding() {
        for m in 1..=3 {
            assert_eq!(coding(&empty(6, 3).unwrap(), m), SearchOutcome::None);
        }
    }

    #[test]
    fn pairing_codes_at_size_a() {
        for a in 2..=3 {
            let d = pairing(a).unwrap();
            let direct = CodingWitness {
                x: (0..a).map(|x| vec![x]).collect(),
                y: (0..a).map(|y| vec![y]).collect(),
                z: (0..a * a).collect(),
                table: (0..a).map(|x| (0..a).map(|y| x * a + y).collect()).collect(),
            };
            assert!(verify::coding(&d, &direct));
            assert!(matches!(coding(&d, a as usize), SearchOutcome::Found(_)));
        }
    }

    #[test]
    fn tuple_coding_on_pair_parity() {
        let d = pair_parity().unwrap();
        let r = find_tuple_coding_witness(&d, 2, 2, opts()).unwrap();
        let SearchOutcome::Found(w) = r.outcome else { panic!("no witness") };
        assert!(verify::coding(&d, &w));
        assert_eq!(w.x[0].len(), 2);
        assert_eq!(find_tuple_coding_witness(&d, 3, 2, opts()).unwrap().outcome, SearchOutcome::None);
    }

    #[test]
    fn arity_is_checked() {
        let d = less_than(3).unwrap();
        assert!(find_coding_witness(&d, 1, opts()).is_err());
        assert!(find_tuple_coding_witness(&pairing(2).unwrap(), 1, 2, opts()).is_err());
        assert!(find_order_witness(&pairing(2).unwrap(), 1, opts()).is_err());
    }

    #[test]
    fn tiny_budget_is_indeterminate() {
        let d = e1e2(3).unwrap();
        let r = find_coding_witness(&d, 3, SearchOptions { node_budget: 10, parallel: false }).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Indeterminate);
        let r = find_coding_witness(&d, 3, SearchOptions { node_budget: 10, parallel: true }).unwrap();
        assert_eq!(r.outcome, SearchOutcome::Indeterminate);
    }

    #[test]
    fn parallel_search_returns_the_sequential_witness() {
        let d = e1e2(3).unwrap();
        let seq = find_coding_witness(&d, 3, opts()).unwrap().outcome;
        let par = find_coding_witness(&d, 3, SearchOptions { parallel: true, ..opts() }).unwrap().outcome;
        assert_eq!(seq, par);
        let lt = less_than(8).unwrap();
        let seq = find_order_witness(&lt, 6, opts()).unwrap().outcome;
        let par = find_order_witness(&lt, 6, SearchOptions { parallel: true, ..opts() }).unwrap().outcome;
        assert_eq!(seq, par);
    }

    #[test]
    fn witnesses_restrict_to_smaller_sizes() {
        for d in [e1e2(3).unwrap(), pairing(3).unwrap()] {
            let mut largest = 0;
            for m in 1..=4 {
                if matches!(coding(&d, m), SearchOutcome::Found(_)) {
                    largest = m;
                }
            }
            for m in 1..=largest {
                assert!(matches!(coding(&d, m), SearchOutcome::Found(_)));
            }
        }
    }

    /// Exhaustive oracle over all `m`-subsets, written from the definition.
    fn brute_coding_exists(d: &FinRelation, m: usize) -> bool {
        let a = d.universe();
        let subsets: Vec<Vec<u32>> = (0u32..1 << a)
            .filter(|s| s.count_ones() as usize == m)
            .map(|s| (0..a).filter(|i| s >> i & 1 == 1).collect())
            .collect();
        for xs in &subsets {
            for ys in &subsets {
                let mut used = std::collections::HashSet::new();
                let ok = xs.iter().all(|&x| {
                    ys.iter().all(|&y| {
                        (0..a).any(|z| {
                            let exact = d.contains(&[x, y, z])
                                && xs.iter().all(|&x2| {
                                    ys.iter().all(|&y2| (x2, y2) == (x, y) || !d.contains(&[x2, y2, z]))
                                });
                            exact && used.insert(z)
                        })
                    })
                });
                if ok {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn sparse_random_relations_match_brute_force() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = 8;
            for p in [1.0 / (a * a) as f64, 0.125] {
                let d = random(a, 3, p, &mut rng).unwrap();
                for m in 1..=3 {
                    let found = matches!(coding(&d, m), SearchOutcome::Found(_));
                    assert_eq!(found, brute_coding_exists(&d, m), "seed {seed}, p {p}, m {m}");
                }
            }
        }
    }

    #[test]
    fn tuple_coding_with_k1_matches_coding() {
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let a = rng.gen_range(2..=7);
            let d = random(a, 3, rng.gen_range(0.05..0.5), &mut rng).unwrap();
            for m in 1..=2 {
                assert_eq!(
                    find_coding_witness(&d, m, opts()).unwrap(),
                    find_tuple_coding_witness(&d, m, 1, opts()).unwrap(),
                );
            }
        }
    }

    #[test]
    fn verifier_rejects_tampering() {
        let d = pairing(2).unwrap();
        let SearchOutcome::Found(mut w) = coding(&d, 2) else { panic!() };
        w.table[0][0] = w.table[0][1];
        w.z = w.table.iter().flatten().copied().collect();
        assert!(!verify::coding(&d, &w));
        let lt = less_than(4).unwrap();
        assert!(!verify::order(&lt, &OrderWitness { a: vec![0, 1], b: vec![0, 0] }));
    }
}
