//! Small simple graphs: half-graphs, flipped disjoint paths and their
//! definable recovery, semi-induced half-graph search, and labelled
//! enumeration of hereditary classes given by generators or forbidden
//! induced subgraphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seq::factorial;

/// Simple undirected graph on `0..v`, optionally vertex-coloured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    v: usize,
    adj: Vec<FixedBitSet>,
    colors: Option<Vec<u8>>,
}

impl Graph {
    pub fn empty(v: usize) -> Self {
        Graph {
            v,
            adj: vec![FixedBitSet::with_capacity(v); v],
            colors: None,
        }
    }

    pub fn complete(v: usize) -> Self {
        let mut g = Graph::empty(v);
        for a in 0..v {
            for b in a + 1..v {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    /// Path `0 - 1 - ... - (k-1)`.
    pub fn path(k: usize) -> Self {
        let mut g = Graph::empty(k);
        for a in 1..k {
            g.add_edge(a - 1, a).unwrap();
        }
        g
    }

    /// `K_{s,t}` with sides `0..s` and `s..s+t`.
    pub fn biclique(s: usize, t: usize) -> Self {
        let mut g = Graph::empty(s + t);
        for a in 0..s {
            for b in s..s + t {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    /// Graph on `0..n` whose edges are the set bits of `mask`, pairs `(i, j)`
    /// with `i < j` taken in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                if mask >> bit & 1 == 1 {
                    g.add_edge(a, b).unwrap();
                }
                bit += 1;
            }
        }
        g
    }

    /// Inverse of [`Graph::from_edge_mask`]; needs at most 11 vertices.
    pub fn edge_mask(&self) -> u64 {
        assert!(self.v <= 11, "edge masks hold at most 55 pairs");
        let mut mask = 0u64;
        let mut bit = 0;
        for a in 0..self.v {
            for b in a + 1..self.v {
                if self.has_edge(a, b) {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        mask
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.v || b >= self.v {
            return Err(Error::Range(format!("edge {a}-{b} outside 0..{}", self.v)));
        }
        if a == b {
            return Err(Error::Range(format!("self-loop at {a}")));
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    fn toggle_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a != b);
        self.adj[a].toggle(b);
        self.adj[b].toggle(a);
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, a: usize) -> &FixedBitSet {
        &self.adj[a]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.v).map(|a| self.degree(a)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.v)
            .flat_map(|a| self.adj[a].ones().filter(move |&b| b > a).map(move |b| (a, b)))
            .collect()
    }

    pub fn colors(&self) -> Option<&[u8]> {
        self.colors.as_deref()
    }

    pub fn set_colors(&mut self, colors: Vec<u8>) -> Result<()> {
        if colors.len() != self.v {
            return Err(Error::Range(format!(
                "{} colours for {} vertices",
                colors.len(),
                self.v
            )));
        }
        self.colors = Some(colors);
        Ok(())
    }

    pub fn without_colors(&self) -> Graph {
        Graph {
            colors: None,
            ..self.clone()
        }
    }

    /// The subgraph induced on `vertices`, relabelled `0..len` in the given
    /// order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        if let Some(c) = &self.colors {
            g.colors = Some(vertices.iter().map(|&a| c[a]).collect());
        }
        g
    }

    /// Edge-list text: `v=<n>`, then `u w` per edge and `color u c` lines.
    pub fn parse(text: &str) -> Result<Graph> {
        parse_graph_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("v={}\n", self.v);
        for (a, b) in self.edges() {
            writeln!(out, "{a} {b}").unwrap();
        }
        if let Some(colors) = &self.colors {
            for (a, c) in colors.iter().enumerate() {
                writeln!(out, "color {a} {c}").unwrap();
            }
        }
        out
    }
}

fn parse_graph_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut colors: Vec<Option<u8>> = Vec::new();
    let mut any_color = false;
    let mut last_line = 0;
    for (line_no, raw) in lines {
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(g) = graph.as_mut() else {
            let n = line
                .strip_prefix("v=")
                .and_then(|n| n.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::format(line_no, "expected `v=<n>` header"))?;
            graph = Some(Graph::empty(n));
            colors = vec![None; n];
            continue;
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::format(line_no, format!("bad number {s:?}")))
        };
        match fields.as_slice() {
            ["color", u, c] => {
                let u = num(u)?;
                let c = num(c)?;
                if u >= g.v || c > u8::MAX as usize {
                    return Err(Error::format(line_no, "colour line out of range"));
                }
                colors[u] = Some(c as u8);
                any_color = true;
            }
            [u, w] => {
                let (u, w) = (num(u)?, num(w)?);
                g.add_edge(u, w).map_err(|e| Error::format(line_no, e.to_string()))?;
            }
            _ => return Err(Error::format(line_no, format!("unrecognised line {line:?}"))),
        }
    }
    let mut g = graph.ok_or_else(|| Error::format(last_line.max(1), "missing `v=<n>` header"))?;
    if any_color {
        let total: Option<Vec<u8>> = colors.into_iter().collect();
        let total = total.ok_or_else(|| Error::format(last_line, "colouring must cover every vertex"))?;
        g.set_colors(total)?;
    }
    Ok(g)
}

/// Half-graph `H_t`: `a_i = i`, `b_j = t + j`, edge `a_i b_j` iff `i <= j`.
pub fn half_graph(t: usize) -> Graph {
    let mut g = Graph::empty(2 * t);
    for i in 0..t {
        for j in i..t {
            g.add_edge(i, t + j).unwrap();
        }
    }
    g
}

/// A symmetric set of part pairs `(i, j)` over `0..t` whose edges get
/// complemented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipSpec {
    t: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl FlipSpec {
    pub fn new(t: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(i, j) in &pairs {
            if i >= t || j >= t {
                return Err(Error::Range(format!("flip pair ({i},{j}) outside 0..{t}")));
            }
            if !pairs.contains(&(j, i)) {
                return Err(Error::Range(format!("flip pairs must be symmetric: ({i},{j}) without ({j},{i})")));
            }
        }
        Ok(FlipSpec { t, pairs })
    }

    pub fn empty(t: usize) -> Self {
        FlipSpec {
            t,
            pairs: BTreeSet::new(),
        }
    }

    /// Spec from a bitmask over unordered pairs `i <= j` in lexicographic
    /// order; there are `t(t+1)/2` of them.
    pub fn from_mask(t: usize, mask: u64) -> Self {
        let mut pairs = BTreeSet::new();
        let mut bit = 0;
        for i in 0..t {
            for j in i..t {
                if mask >> bit & 1 == 1 {
                    pairs.insert((i, j));
                    pairs.insert((j, i));
                }
                bit += 1;
            }
        }
        FlipSpec { t, pairs }
    }

    /// Each unordered pair independently with probability 1/2.
    pub fn random<R: Rng>(t: usize, rng: &mut R) -> Self {
        let mut pairs = BTreeSet::new();
        for i in 0..t {
            for j in i..t {
                if rng.gen_bool(0.5) {
                    pairs.insert((i, j));
                    pairs.insert((j, i));
                }
            }
        }
        FlipSpec { t, pairs }
    }

    pub fn parts(&self) -> usize {
        self.t
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.pairs.iter()
    }
}

/// `copies` disjoint paths on `k` vertices, vertex `(path i, position j)` at
/// index `i * k + j`, with edges complemented between position classes
/// `j, j'` whenever `(j, j')` is in `spec`. Vertices are coloured by path.
pub fn flipped_paths(k: usize, copies: usize, spec: &FlipSpec) -> Result<Graph> {
    if k < 2 {
        return Err(Error::Range(format!("paths need at least 2 vertices, got {k}")));
    }
    if spec.parts() != k {
        return Err(Error::FlipMismatch {
            spec: spec.parts(),
            expected: k,
        });
    }
    if copies > u8::MAX as usize + 1 {
        return Err(Error::Range("too many paths to colour".into()));
    }
    let v = copies * k;
    let mut g = Graph::empty(v);
    for i in 0..copies {
        for j in 1..k {
            g.add_edge(i * k + j - 1, i * k + j).unwrap();
        }
    }
    for x in 0..v {
        for y in x + 1..v {
            if spec.contains(x % k, y % k) {
                g.toggle_edge(x, y);
            }
        }
    }
    g.set_colors((0..v).map(|x| (x / k) as u8).collect())?;
    Ok(g)
}

/// Recovers the unflipped paths from a flipped copy coloured by path,
/// evaluating for each colour `i` (indices mod 3):
///
/// * `pi_i(x, y)`: `x` in `C_i`, `y` in `C_{i+1}`, same neighbourhood in `C_{i+2}`;
/// * `psi_i(x, y)`: `x, y` in `C_i` and some `z` has `pi_i(y, z)` and `E(x, z)`;
/// * `phi(x, y)`: `x != y`, both in some `C_i`, and `psi_i(x, y) <-> !E(x, y)`.
///
/// Returns the graph of `phi`, keeping the colouring.
pub fn flip_recover(h: &Graph) -> Result<Graph> {
    let colors = h.colors().ok_or(Error::MissingColors)?;
    let v = h.vertex_count();
    let mut class = vec![FixedBitSet::with_capacity(v); 3];
    for (x, &c) in colors.iter().enumerate() {
        if c < 3 {
            class[c as usize].insert(x);
        }
    }
    let restricted = |x: usize, c: usize| -> FixedBitSet {
        let mut s = h.neighbors(x).clone();
        s.intersect_with(&class[c]);
        s
    };
    // partners[y] = { z : pi_i(y, z) } for y in C_i
    let mut partners = vec![FixedBitSet::with_capacity(v); v];
    for i in 0..3 {
        let (next, far) = ((i + 1) % 3, (i + 2) % 3);
        for y in class[i].ones() {
            let ny = restricted(y, far);
            for z in class[next].ones() {
                if restricted(z, far) == ny {
                    partners[y].insert(z);
                }
            }
        }
    }
    let mut out = Graph::empty(v);
    for part in &class {
        let members: Vec<usize> = part.ones().collect();
        for (a, &x) in members.iter().enumerate() {
            for &y in &members[a + 1..] {
                let psi_xy = !h.neighbors(x).is_disjoint(&partners[y]);
                let psi_yx = !h.neighbors(y).is_disjoint(&partners[x]);
                debug_assert_eq!(psi_xy, psi_yx, "psi is symmetric on flipped paths");
                if psi_xy != h.has_edge(x, y) {
                    out.add_edge(x, y).unwrap();
                }
            }
        }
    }
    out.colors = Some(colors.to_vec());
    Ok(out)
}

/// Labelled copies of `P_k` on `[k]`: `k!/2` for `k >= 2`.
pub fn labelled_path_count(k: usize) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::Range(format!("labelled path count needs k >= 2, got {k}")));
    }
    Ok(factorial(k) / 2u32)
}

/// Node budget for a single backtracking search.
#[derive(Debug)]
struct NodeCounter {
    used: u64,
    budget: u64,
}

impl NodeCounter {
    fn new(budget: u64) -> Self {
        NodeCounter { used: 0, budget }
    }

    #[inline]
    fn tick(&mut self, what: &'static str) -> Result<()> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::capacity(what, format!("> {}", self.budget), self.budget));
        }
        Ok(())
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Whether `pattern` is isomorphic to an induced subgraph of `target`.
/// Colours are ignored.
pub fn embeds_induced(pattern: &Graph, target: &Graph, node_budget: u64) -> Result<bool> {
    let p = pattern.vertex_count();
    let t = target.vertex_count();
    if p > t {
        return Ok(false);
    }
    if pattern.edge_count() > target.edge_count() {
        return Ok(false);
    }
    let mut search = Embedding {
        pattern,
        target,
        pdeg: (0..p).map(|a| pattern.degree(a)).collect(),
        tdeg: (0..t).map(|a| target.degree(a)).collect(),
        map: vec![usize::MAX; p],
        used: FixedBitSet::with_capacity(t),
        nodes: NodeCounter::new(node_budget),
    };
    search.extend(0)
}

/// Partial injective map from pattern vertices `0..depth` into the target.
struct Embedding<'g> {
    pattern: &'g Graph,
    target: &'g Graph,
    pdeg: Vec<usize>,
    tdeg: Vec<usize>,
    map: Vec<usize>,
    used: FixedBitSet,
    nodes: NodeCounter,
}

impl Embedding<'_> {
    fn extend(&mut self, depth: usize) -> Result<bool> {
        let p = self.map.len();
        if depth == p {
            return Ok(true);
        }
        let t = self.target.vertex_count();
        for cand in 0..t {
            if self.used.contains(cand) {
                continue;
            }
            if self.pdeg[depth] > self.tdeg[cand] || p - 1 - self.pdeg[depth] > t - 1 - self.tdeg[cand] {
                continue;
            }
            let consistent = (0..depth)
                .all(|prev| self.pattern.has_edge(prev, depth) == self.target.has_edge(self.map[prev], cand));
            if !consistent {
                continue;
            }
            self.nodes.tick("induced-subgraph search nodes")?;
            self.map[depth] = cand;
            self.used.insert(cand);
            if self.extend(depth + 1)? {
                return Ok(true);
            }
            self.used.set(cand, false);
        }
        Ok(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassMode {
    /// Graphs isomorphic to an induced subgraph of some generator.
    Generators,
    /// Graphs with no forbidden graph as an induced subgraph.
    Forbidden,
}

/// A hereditary graph class given by a finite list of graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub mode: ClassMode,
    pub graphs: Vec<Graph>,
}

/// Largest `n` for which `2^{C(n,2)}` labelled graphs are enumerated.
pub const MAX_LABELLED_N: usize = 7;

impl ClassSpec {
    pub fn generators(graphs: Vec<Graph>) -> Self {
        ClassSpec {
            mode: ClassMode::Generators,
            graphs,
        }
    }

    pub fn forbidden(graphs: Vec<Graph>) -> Self {
        ClassSpec {
            mode: ClassMode::Forbidden,
            graphs,
        }
    }

    pub fn contains(&self, g: &Graph, node_budget: u64) -> Result<bool> {
        match self.mode {
            ClassMode::Generators => {
                for gen in &self.graphs {
                    if embeds_induced(g, gen, node_budget)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            ClassMode::Forbidden => {
                for f in &self.graphs {
                    if embeds_induced(f, g, node_budget)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn check_n(n: usize) -> Result<()> {
        if n > MAX_LABELLED_N {
            return Err(Error::capacity("labelled graph order", n, MAX_LABELLED_N as u64));
        }
        Ok(())
    }

    /// `l_n` of the class: members with vertex set `[n]`, counted up to
    /// equality. Enumerates all `2^{C(n,2)}` graphs in parallel.
    pub fn count_labelled(&self, n: usize, node_budget: u64) -> Result<BigUint> {
        Self::check_n(n)?;
        let pairs = n * n.saturating_sub(1) / 2;
        let count = (0u64..1 << pairs)
            .into_par_iter()
            .map(|mask| self.contains(&Graph::from_edge_mask(n, mask), node_budget).map(u64::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        Ok(BigUint::from(count))
    }

    /// The members on `[n]` themselves, in edge-mask order.
    pub fn labelled_members(&self, n: usize, node_budget: u64) -> Result<Vec<Graph>> {
        Self::check_n(n)?;
        let pairs = n * n.saturating_sub(1) / 2;
        let mut out = Vec::new();
        for mask in 0u64..1 << pairs {
            let g = Graph::from_edge_mask(n, mask);
            if self.contains(&g, node_budget)? {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// Text form: optional `mode=generators|forbidden` line, then graphs in
    /// edge-list form separated by `---` lines.
    pub fn parse(text: &str) -> Result<ClassSpec> {
        let mut mode = ClassMode::Generators;
        let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
        let mut seen_content = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if !seen_content {
                if let Some(m) = line.strip_prefix("mode=") {
                    mode = match m.trim() {
                        "generators" => ClassMode::Generators,
                        "forbidden" => ClassMode::Forbidden,
                        other => return Err(Error::format(line_no, format!("unknown mode {other:?}"))),
                    };
                    continue;
                }
            }
            if line == "---" {
                blocks.push(Vec::new());
                continue;
            }
            if !line.is_empty() && !line.starts_with('#') {
                seen_content = true;
            }
            blocks.last_mut().unwrap().push((line_no, raw));
        }
        let mut graphs = Vec::new();
        for block in blocks {
            let has_content = block
                .iter()
                .any(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'));
            if has_content {
                graphs.push(parse_graph_lines(block.into_iter())?);
            }
        }
        Ok(ClassSpec { mode, graphs })
    }
}

/// An ordered half-graph witness: `a[i] b[j]` adjacent iff `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfGraphWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Looks for `H_t` semi-induced in `g`: cross pairs must match `H_t`
/// exactly, pairs within a side are unconstrained. With `strict`, all `2t`
/// images are distinct; otherwise only within each side.
pub fn semi_induced_witness(
    g: &Graph,
    t: usize,
    strict: bool,
    node_budget: u64,
) -> Result<Option<HalfGraphWitness>> {
    let mut a = Vec::with_capacity(t);
    let mut b = Vec::with_capacity(t);
    let mut nodes = NodeCounter::new(node_budget);

    fn grow(
        g: &Graph,
        t: usize,
        strict: bool,
        a: &mut Vec<usize>,
        b: &mut Vec<usize>,
        nodes: &mut NodeCounter,
    ) -> Result<bool> {
        let k = a.len();
        if k == t {
            return Ok(true);
        }
        let v = g.vertex_count();
        for x in 0..v {
            if a.contains(&x) || (strict && b.contains(&x)) {
                continue;
            }
            // a_k sees none of the earlier b_j (j < k)
            if b.iter().any(|&y| g.has_edge(x, y)) {
                continue;
            }
            nodes.tick("semi-induced search nodes")?;
            a.push(x);
            for y in 0..v {
                if b.contains(&y) || (strict && a.contains(&y)) {
                    continue;
                }
                // b_k sees every a_i with i <= k
                if !a.iter().all(|&u| u != y && g.has_edge(u, y)) {
                    continue;
                }
                nodes.tick("semi-induced search nodes")?;
                b.push(y);
                if grow(g, t, strict, a, b, nodes)? {
                    return Ok(true);
                }
                b.pop();
            }
            a.pop();
        }
        Ok(false)
    }

    if grow(g, t, strict, &mut a, &mut b, &mut nodes)? {
        Ok(Some(HalfGraphWitness { a, b }))
    } else {
        Ok(None)
    }
}

/// The largest `t` with `H_t` semi-induced in `g`.
pub fn semi_induced_order(g: &Graph, strict: bool, node_budget: u64) -> Result<usize> {
    let mut t = 0;
    while semi_induced_witness(g, t + 1, strict, node_budget)?.is_some() {
        t += 1;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const B: u64 = DEFAULT_NODE_BUDGET;

    #[test]
    fn half_graph_examples() {
        assert_eq!(half_graph(1).edges(), vec![(0, 1)]);
        assert_eq!(half_graph(2).edges(), vec![(0, 2), (0, 3), (1, 3)]);
        let h3 = half_graph(3);
        assert_eq!(h3.edge_count(), 6);
        assert_eq!((0..3).map(|a| h3.degree(a)).collect::<Vec<_>>(), vec![3, 2, 1]);
    }

    #[test]
    fn edge_mask_round_trip() {
        for mask in 0..64 {
            assert_eq!(Graph::from_edge_mask(4, mask).edge_mask(), mask);
        }
    }

    #[test]
    fn text_round_trip_with_colors() {
        let g = flipped_paths(3, 3, &FlipSpec::from_mask(3, 0b101)).unwrap();
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn graph_parse_errors() {
        assert!(matches!(Graph::parse("2 3\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(Graph::parse("v=3\n0 0\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(Graph::parse("v=3\n0 5\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(Graph::parse("v=2\ncolor 0 1\n"), Err(Error::Format { .. })));
        assert!(matches!(Graph::parse("v=2\n0 1 2\n"), Err(Error::Format { line: 2, .. })));
        assert!(Graph::parse("").is_err());
    }

    #[test]
    fn flipped_path_examples() {
        let plain = flipped_paths(4, 3, &FlipSpec::empty(4)).unwrap();
        assert_eq!(plain.edge_count(), 9);
        assert_eq!(plain.colors().unwrap(), &[0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]);

        let spec = FlipSpec::new(3, [(1, 1)]).unwrap();
        let g = flipped_paths(3, 3, &spec).unwrap();
        let base = flipped_paths(3, 3, &FlipSpec::empty(3)).unwrap();
        assert_eq!(g.edge_count(), base.edge_count() + 3);
        for (x, y) in [(1, 4), (1, 7), (4, 7)] {
            assert!(g.has_edge(x, y));
        }

        let spec = FlipSpec::new(4, [(2, 3), (3, 2)]).unwrap();
        let g = flipped_paths(4, 3, &spec).unwrap();
        for i in 0..3 {
            assert!(!g.has_edge(i * 4 + 2, i * 4 + 3));
            for j in 0..3 {
                if i != j {
                    assert!(g.has_edge(i * 4 + 2, j * 4 + 3));
                }
            }
        }
        // 9 path edges - 3 removed + 6 added
        assert_eq!(g.edge_count(), 12);

        assert!(matches!(
            flipped_paths(4, 3, &FlipSpec::empty(3)),
            Err(Error::FlipMismatch { spec: 3, expected: 4 })
        ));
        assert!(FlipSpec::new(3, [(0, 1)]).is_err());
    }

    #[test]
    fn flip_recovery_round_trips() {
        for k in [3, 4] {
            let unflipped = flipped_paths(k, 3, &FlipSpec::empty(k)).unwrap();
            for mask in 0..1u64 << (k * (k + 1) / 2) {
                let h = flipped_paths(k, 3, &FlipSpec::from_mask(k, mask)).unwrap();
                assert_eq!(flip_recover(&h).unwrap(), unflipped, "k = {k}, mask = {mask:#b}");
            }
        }
        let k = 8;
        let unflipped = flipped_paths(k, 3, &FlipSpec::empty(k)).unwrap();
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = flipped_paths(k, 3, &FlipSpec::random(k, &mut rng)).unwrap();
            assert_eq!(flip_recover(&h).unwrap(), unflipped, "seed {seed}");
        }
    }

    #[test]
    fn flip_recovery_needs_colors() {
        assert_eq!(flip_recover(&Graph::path(4)), Err(Error::MissingColors));
    }

    #[test]
    fn semi_induced_examples() {
        for t in 1..=5 {
            assert_eq!(semi_induced_order(&half_graph(t), true, B).unwrap(), t);
        }
        assert_eq!(semi_induced_order(&Graph::empty(10), true, B).unwrap(), 0);
        assert_eq!(semi_induced_order(&Graph::biclique(3, 3), true, B).unwrap(), 1);
        assert_eq!(semi_induced_order(&Graph::biclique(3, 3), false, B).unwrap(), 1);
        // P_4 is H_2 read as a_2 - b_2 - a_1 - b_1
        assert_eq!(semi_induced_order(&Graph::path(4), true, B).unwrap(), 2);
        assert_eq!(semi_induced_order(&Graph::path(3), true, B).unwrap(), 1);
        let w = semi_induced_witness(&half_graph(3), 3, true, B).unwrap().unwrap();
        for (i, &x) in w.a.iter().enumerate() {
            for (j, &y) in w.b.iter().enumerate() {
                assert_eq!(half_graph(3).has_edge(x, y), i <= j);
            }
        }
    }

    #[test]
    fn lax_reading_can_reuse_vertices_across_sides() {
        // in K_3 the required non-edge a_2 b_1 exists only as a_2 = b_1
        let k3 = Graph::complete(3);
        assert_eq!(semi_induced_order(&k3, true, B).unwrap(), 1);
        assert_eq!(semi_induced_order(&k3, false, B).unwrap(), 2);
        for t in 1..=4 {
            let h = half_graph(t);
            assert!(semi_induced_order(&h, false, B).unwrap() >= semi_induced_order(&h, true, B).unwrap());
        }
    }

    #[test]
    fn search_budget_is_a_capacity_error() {
        let err = semi_induced_order(&half_graph(6), true, 5).unwrap_err();
        assert!(err.is_capacity());
    }

    fn is_path(g: &Graph) -> bool {
        let k = g.vertex_count();
        if g.edge_count() != k - 1 || (0..k).any(|a| g.degree(a) > 2) {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(k);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(a) = stack.pop() {
            for b in g.neighbors(a).ones() {
                if !seen.put(b) {
                    stack.push(b);
                }
            }
        }
        seen.count_ones(..) == k
    }

    #[test]
    fn labelled_paths_match_brute_force() {
        assert_eq!(labelled_path_count(2).unwrap(), BigUint::from(1u32));
        assert_eq!(labelled_path_count(3).unwrap(), BigUint::from(3u32));
        assert_eq!(labelled_path_count(4).unwrap(), BigUint::from(12u32));
        for k in 2..=7 {
            let pairs = k * (k - 1) / 2;
            let brute = (0u64..1 << pairs)
                .filter(|&m| is_path(&Graph::from_edge_mask(k, m)))
                .count();
            assert_eq!(labelled_path_count(k).unwrap(), BigUint::from(brute), "k = {k}");
        }
        assert!(labelled_path_count(1).is_err());
    }

    #[test]
    fn induced_embedding_basics() {
        let p3 = Graph::path(3);
        assert!(embeds_induced(&p3, &Graph::path(5), B).unwrap());
        assert!(!embeds_induced(&p3, &Graph::complete(5), B).unwrap());
        assert!(!embeds_induced(&Graph::complete(3), &half_graph(4), B).unwrap());
        assert!(embeds_induced(&Graph::empty(4), &half_graph(4), B).unwrap());
        assert!(!embeds_induced(&Graph::empty(5), &half_graph(4), B).unwrap());
    }

    #[test]
    fn count_labelled_examples() {
        let no_edges = ClassSpec::forbidden(vec![Graph::complete(2)]);
        assert_eq!(no_edges.count_labelled(4, B).unwrap(), BigUint::from(1u32));
        let h6 = ClassSpec::generators(vec![half_graph(6)]);
        assert_eq!(h6.count_labelled(2, B).unwrap(), BigUint::from(2u32));
        // frozen from an independent Python enumeration of all labelled
        // induced subgraphs of H_8
        let h8 = ClassSpec::generators(vec![half_graph(8)]);
        let expected = [1u32, 1, 2, 7, 38, 271];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(h8.count_labelled(n, B).unwrap(), BigUint::from(e), "n = {n}");
        }
        assert!(h8.count_labelled(8, B).unwrap_err().is_capacity());
    }

    #[test]
    fn generator_and_forbidden_modes_agree_on_edgeless_graphs() {
        let by_gen = ClassSpec::generators(vec![Graph::empty(7)]);
        let by_forbid = ClassSpec::forbidden(vec![Graph::complete(2)]);
        for n in 0..=5 {
            assert_eq!(by_gen.count_labelled(n, B).unwrap(), by_forbid.count_labelled(n, B).unwrap());
        }
    }

    #[test]
    fn classes_are_hereditary() {
        let specs = [
            ClassSpec::generators(vec![half_graph(4)]),
            ClassSpec::generators(vec![Graph::path(6), Graph::complete(3)]),
            ClassSpec::forbidden(vec![Graph::path(3)]),
            ClassSpec::forbidden(vec![Graph::complete(3), Graph::empty(3)]),
        ];
        for spec in &specs {
            for n in 1..=5 {
                for g in spec.labelled_members(n, B).unwrap() {
                    for drop in 0..n {
                        let keep: Vec<usize> = (0..n).filter(|&a| a != drop).collect();
                        assert!(spec.contains(&g.induced(&keep), B).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn class_spec_parse() {
        let text = "mode=forbidden\nv=2\n0 1\n---\n# a path\nv=3\n0 1\n1 2\n";
        let spec = ClassSpec::parse(text).unwrap();
        assert_eq!(spec.mode, ClassMode::Forbidden);
        assert_eq!(spec.graphs, vec![Graph::complete(2), Graph::path(3)]);
        let spec = ClassSpec::parse("v=1\n").unwrap();
        assert_eq!(spec.mode, ClassMode::Generators);
        assert!(matches!(ClassSpec::parse("mode=other\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(ClassSpec::parse("v=2\n---\nv=2\n0 9\n"), Err(Error::Format { line: 4, .. })));
    }
}
