//! Brute-force orbit oracle for finite permutation groups.
//!
//! Orbits on tuples are found by reachability in the graph whose edges are
//! generator applications; group elements are only enumerated for the point
//! stabilizer check. Tuples are addressed by a dense rank so the visited set
//! is a plain bitset.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::expr::GroupExpr;

/// A permutation of `0..degree`, stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let k = images.len();
        let mut hit = vec![false; k];
        for &p in &images {
            let p = p as usize;
            if p >= k || hit[p] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{k}"
                )));
            }
            hit[p] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from disjoint cycles over `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                let pu = p as usize;
                if pu >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside 0..{degree}"
                    )));
                }
                if moved[pu] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears twice in cycle notation"
                    )));
                }
                moved[pu] = true;
                images[pu] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, p: u32) -> u32 {
        self.0[p as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `x -> other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&p| other.apply(p)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.0[p] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// The subgroup of `Sym(0..degree)` generated by `generators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPermGroup {
    degree: usize,
    generators: Vec<Perm>,
}

impl FinPermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DomainMismatch(format!(
                    "generator {g} acts on {} points, group degree is {degree}",
                    g.degree()
                )));
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(FinPermGroup { degree, generators })
    }

    pub fn trivial(degree: usize) -> Self {
        FinPermGroup {
            degree,
            generators: Vec::new(),
        }
    }

    /// `S_k` from a transposition and a `k`-cycle.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[vec![0, 1]]).unwrap());
        }
        if degree >= 3 {
            let cycle: Vec<u32> = (0..degree as u32).collect();
            gens.push(Perm::from_cycles(degree, &[cycle]).unwrap());
        }
        FinPermGroup {
            degree,
            generators: gens,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Adds generators, e.g. redundant products of existing ones.
    pub fn with_extra_generators(mut self, extra: Vec<Perm>) -> Result<Self> {
        let mut gens = std::mem::take(&mut self.generators);
        gens.extend(extra);
        FinPermGroup::new(self.degree, gens)
    }

    /// Direct product acting on the disjoint union of the factors' domains,
    /// factor `i` occupying a contiguous block of points.
    pub fn direct_product(factors: &[FinPermGroup]) -> Self {
        let degree: usize = factors.iter().map(|g| g.degree).sum();
        let mut gens = Vec::new();
        let mut offset = 0;
        for g in factors {
            for gen in &g.generators {
                let mut images: Vec<u32> = (0..degree as u32).collect();
                for p in 0..g.degree {
                    images[offset + p] = (offset as u32) + gen.apply(p as u32);
                }
                gens.push(Perm(images));
            }
            offset += g.degree;
        }
        FinPermGroup {
            degree,
            generators: gens,
        }
    }

    /// `base wr S_m` on `m` copies of the base domain; point `(copy c, p)` is
    /// `c * base.degree + p`.
    pub fn wreath_symmetric(base: &FinPermGroup, copies: usize) -> Self {
        let b = base.degree;
        let degree = b * copies;
        let mut gens = Vec::new();
        for gen in &base.generators {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for (p, img) in images.iter_mut().enumerate().take(b) {
                *img = gen.apply(p as u32);
            }
            gens.push(Perm(images));
        }
        let copy_map = |f: &dyn Fn(usize) -> usize| {
            let mut images = vec![0u32; degree];
            for c in 0..copies {
                for p in 0..b {
                    images[c * b + p] = (f(c) * b + p) as u32;
                }
            }
            Perm(images)
        };
        if copies >= 2 && b > 0 {
            gens.push(copy_map(&|c| match c {
                0 => 1,
                1 => 0,
                c => c,
            }));
        }
        if copies >= 3 && b > 0 {
            gens.push(copy_map(&|c| (c + 1) % copies));
        }
        FinPermGroup {
            degree,
            generators: gens,
        }
    }

    /// All group elements by closure under right multiplication by
    /// generators. Fails once more than `budget.elements` are found.
    pub fn elements(&self, budget: &Budget) -> Result<Vec<Perm>> {
        let id = Perm::identity(self.degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let next = out[i].then(g);
                if seen.insert(next.clone()) {
                    out.push(next);
                    if out.len() as u64 > budget.elements {
                        return Err(Error::capacity("group elements", format!("> {}", budget.elements), budget.elements));
                    }
                }
            }
            i += 1;
        }
        Ok(out)
    }
}

/// Resource caps for the oracle. Exceeding one is an error, never a
/// silently wrong count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Size of the tuple space a single orbit count may walk.
    pub tuples: u64,
    /// Group elements enumerated for stabilizer checks.
    pub elements: u64,
    /// Points in a truncated grammar expression.
    pub domain: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            tuples: 100_000_000,
            elements: 1_000_000,
            domain: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCount {
    pub n: usize,
    pub injective: bool,
    pub count: BigUint,
    pub tuples_visited: u64,
}

/// Dense ranking of `n`-tuples over `0..degree`, either all tuples (base
/// `degree` digits) or injective ones (mixed radix `d, d-1, ...` on the
/// index of each entry among the points not used earlier).
#[derive(Clone, Copy, Debug)]
struct TupleSpace {
    degree: u64,
    n: usize,
    injective: bool,
}

impl TupleSpace {
    fn size(&self) -> Option<u128> {
        let mut total: u128 = 1;
        for i in 0..self.n as u64 {
            let radix = if self.injective {
                self.degree.checked_sub(i)?
            } else {
                self.degree
            };
            total = total.checked_mul(radix as u128)?;
        }
        Some(total)
    }

    #[inline]
    fn rank(&self, t: &[u32]) -> u64 {
        let mut r: u64 = 0;
        for i in 0..self.n {
            let (digit, radix) = if self.injective {
                let smaller = t[..i].iter().filter(|&&u| u < t[i]).count() as u64;
                (t[i] as u64 - smaller, self.degree - i as u64)
            } else {
                (t[i] as u64, self.degree)
            };
            r = r * radix + digit;
        }
        r
    }

    /// `used` is scratch space for the sorted prefix of points.
    fn unrank(&self, mut r: u64, out: &mut [u32], used: &mut Vec<u32>) {
        for i in (0..self.n).rev() {
            let radix = if self.injective {
                self.degree - i as u64
            } else {
                self.degree
            };
            out[i] = (r % radix) as u32;
            r /= radix;
        }
        if self.injective {
            // digit i is the index of entry i among the points not used before it
            used.clear();
            for slot in out.iter_mut().take(self.n) {
                let mut p = *slot;
                for &u in used.iter() {
                    if u <= p {
                        p += 1;
                    }
                }
                let at = used.partition_point(|&u| u < p);
                used.insert(at, p);
                *slot = p;
            }
        }
    }
}

fn count_orbits(g: &FinPermGroup, n: usize, injective: bool, budget: &Budget) -> Result<OrbitCount> {
    let space = TupleSpace {
        degree: g.degree as u64,
        n,
        injective,
    };
    let zero = |visited| OrbitCount {
        n,
        injective,
        count: BigUint::from(0u32),
        tuples_visited: visited,
    };
    let total = match space.size() {
        None => return Ok(zero(0)), // injective with n > degree
        Some(0) => return Ok(zero(0)),
        Some(t) => t,
    };
    if total > budget.tuples as u128 {
        return Err(Error::capacity("tuples", total, budget.tuples));
    }
    let total = total as u64;
    let mut seen = FixedBitSet::with_capacity(total as usize);
    let mut stack: Vec<u64> = Vec::new();
    let mut tuple = vec![0u32; n];
    let mut image = vec![0u32; n];
    let mut used = Vec::with_capacity(n);
    let mut orbits: u64 = 0;
    for start in 0..total {
        if seen.contains(start as usize) {
            continue;
        }
        orbits += 1;
        seen.insert(start as usize);
        stack.push(start);
        while let Some(r) = stack.pop() {
            space.unrank(r, &mut tuple, &mut used);
            for gen in &g.generators {
                for (dst, &src) in image.iter_mut().zip(&tuple) {
                    *dst = gen.apply(src);
                }
                let ir = space.rank(&image) as usize;
                if !seen.put(ir) {
                    stack.push(ir as u64);
                }
            }
        }
    }
    Ok(OrbitCount {
        n,
        injective,
        count: BigUint::from(orbits),
        tuples_visited: total,
    })
}

/// Orbits of `g` on injective `n`-tuples. One orbit for `n = 0`, none for
/// `n > degree`.
pub fn count_orbits_injective(g: &FinPermGroup, n: usize, budget: &Budget) -> Result<OrbitCount> {
    count_orbits(g, n, true, budget)
}

/// Orbits of `g` on all `n`-tuples.
pub fn count_orbits_all(g: &FinPermGroup, n: usize, budget: &Budget) -> Result<OrbitCount> {
    count_orbits(g, n, false, budget)
}

/// Number of points in the truncation of `e` at level `m`, or `None` on
/// overflow.
pub fn truncated_degree(e: &GroupExpr, m: usize) -> Option<u64> {
    match e {
        GroupExpr::Finite(g) => Some(g.degree() as u64),
        GroupExpr::Product(children) => children
            .iter()
            .try_fold(0u64, |acc, c| acc.checked_add(truncated_degree(c, m)?)),
        GroupExpr::Wreath(inner) => truncated_degree(inner, m)?.checked_mul(m as u64),
    }
}

/// A finite stand-in for `e`: every `wr S_omega` becomes `wr S_m`.
pub fn truncate_expr(e: &GroupExpr, m: usize, budget: &Budget) -> Result<FinPermGroup> {
    if m == 0 {
        return Err(Error::Range("truncation level must be at least 1".into()));
    }
    let degree = truncated_degree(e, m);
    match degree {
        Some(d) if d <= budget.domain => Ok(build_truncation(e, m)),
        _ => Err(Error::capacity(
            "truncated domain points",
            degree.map_or_else(|| "overflow".to_string(), |d| d.to_string()),
            budget.domain,
        )),
    }
}

fn build_truncation(e: &GroupExpr, m: usize) -> FinPermGroup {
    match e {
        GroupExpr::Finite(g) => g.clone(),
        GroupExpr::Product(children) => {
            let parts: Vec<FinPermGroup> = children.iter().map(|c| build_truncation(c, m)).collect();
            FinPermGroup::direct_product(&parts)
        }
        GroupExpr::Wreath(inner) => FinPermGroup::wreath_symmetric(&build_truncation(inner, m), m),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCheck {
    pub point: usize,
    pub n: usize,
    pub stabilizer_order: usize,
    pub stabilizer_orbits: u64,
    pub orbits_n: BigUint,
    pub orbits_n_plus_1: BigUint,
    /// `l_n(G_a) <= n l_n(G) + l_{n+1}(G)`.
    pub holds: bool,
}

/// Checks `l_n(G_a) <= n l_n(G) + l_{n+1}(G)` for the stabilizer of `point`.
/// The stabilizer is found by filtering the full element list, so this is
/// capped by `budget.elements`.
pub fn stabilizer_bound_check(
    g: &FinPermGroup,
    point: usize,
    n: usize,
    budget: &Budget,
) -> Result<StabilizerCheck> {
    if n + 1 > g.degree || point >= g.degree {
        return Err(Error::Range(format!(
            "need n + 1 <= degree and point < degree (n = {n}, point = {point}, degree = {})",
            g.degree
        )));
    }
    let stab: Vec<Perm> = g
        .elements(budget)?
        .into_iter()
        .filter(|p| p.apply(point as u32) == point as u32)
        .collect();

    let space = TupleSpace {
        degree: g.degree as u64,
        n,
        injective: true,
    };
    let total = space.size().unwrap();
    if total > budget.tuples as u128 {
        return Err(Error::capacity("tuples", total, budget.tuples));
    }
    let mut seen = FixedBitSet::with_capacity(total as usize);
    let mut tuple = vec![0u32; n];
    let mut image = vec![0u32; n];
    let mut used = Vec::with_capacity(n);
    let mut stabilizer_orbits = 0u64;
    for start in 0..total as u64 {
        if seen.contains(start as usize) {
            continue;
        }
        stabilizer_orbits += 1;
        space.unrank(start, &mut tuple, &mut used);
        // the stabilizer is a group, so its orbit is the image set
        for h in &stab {
            for (dst, &src) in image.iter_mut().zip(&tuple) {
                *dst = h.apply(src);
            }
            seen.insert(space.rank(&image) as usize);
        }
    }
    let orbits_n = count_orbits_injective(g, n, budget)?.count;
    let orbits_n_plus_1 = count_orbits_injective(g, n + 1, budget)?.count;
    let holds = BigUint::from(stabilizer_orbits) <= &orbits_n * BigUint::from(n) + &orbits_n_plus_1;
    Ok(StabilizerCheck {
        point,
        n,
        stabilizer_order: stab.len(),
        stabilizer_orbits,
        orbits_n,
        orbits_n_plus_1,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::stirling2_table;

    fn count_inj(g: &FinPermGroup, n: usize) -> u64 {
        let c = count_orbits_injective(g, n, &Budget::default()).unwrap().count;
        u64::try_from(c).unwrap()
    }

    fn count_all(g: &FinPermGroup, n: usize) -> u64 {
        let c = count_orbits_all(g, n, &Budget::default()).unwrap().count;
        u64::try_from(c).unwrap()
    }

    fn s2_wr_s2() -> FinPermGroup {
        FinPermGroup::wreath_symmetric(&FinPermGroup::symmetric(2), 2)
    }

    #[test]
    fn ranks_are_a_bijection() {
        for &(degree, n, injective) in &[(5u64, 3usize, true), (4, 3, false), (6, 0, true), (3, 3, true)] {
            let space = TupleSpace { degree, n, injective };
            let total = space.size().unwrap() as u64;
            let mut t = vec![0u32; n];
            let mut seen = HashSet::new();
            let mut used = Vec::new();
            for r in 0..total {
                space.unrank(r, &mut t, &mut used);
                assert!(t.iter().all(|&p| (p as u64) < degree));
                if injective {
                    let distinct: HashSet<_> = t.iter().collect();
                    assert_eq!(distinct.len(), n);
                }
                assert!(seen.insert(t.clone()));
                assert_eq!(space.rank(&t), r);
            }
        }
    }

    #[test]
    fn perm_validation() {
        assert!(Perm::new(vec![0, 0]).is_err());
        assert!(Perm::new(vec![0, 2]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 3]]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
        let p = Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(p.images(), &[1, 2, 3, 0]);
        assert_eq!(p.to_string(), "(0 1 2 3)");
        assert!(FinPermGroup::new(3, vec![p]).is_err());
    }

    #[test]
    fn injective_examples() {
        let s4 = FinPermGroup::new(
            4,
            vec![
                Perm::from_cycles(4, &[vec![0, 1]]).unwrap(),
                Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(count_inj(&s4, 2), 1);
        assert_eq!(count_inj(&FinPermGroup::trivial(3), 2), 6);
        assert_eq!(count_inj(&s2_wr_s2(), 2), 2);
        assert_eq!(count_inj(&s2_wr_s2(), 3), 3);
        assert_eq!(count_inj(&s4, 0), 1);
        assert_eq!(count_inj(&s4, 5), 0);
    }

    #[test]
    fn all_tuple_examples() {
        assert_eq!(count_all(&FinPermGroup::symmetric(3), 2), 2);
        assert_eq!(count_all(&FinPermGroup::trivial(2), 3), 8);
        assert_eq!(count_all(&FinPermGroup::trivial(2), 0), 1);
    }

    #[test]
    fn stirling_identity_at_the_finite_level() {
        let table = stirling2_table(4);
        let groups = [
            FinPermGroup::symmetric(3),
            FinPermGroup::trivial(3),
            s2_wr_s2(),
            FinPermGroup::wreath_symmetric(&FinPermGroup::trivial(2), 3),
        ];
        for g in &groups {
            for (n, row) in table.iter().enumerate().take(5) {
                let via_stirling: u64 = if n == 0 {
                    count_inj(g, 0)
                } else {
                    (1..=n).map(|k| u64::try_from(&row[k]).unwrap() * count_inj(g, k)).sum()
                };
                assert_eq!(count_all(g, n), via_stirling, "n = {n}");
            }
        }
    }

    #[test]
    fn redundant_generators_do_not_change_counts() {
        let g = s2_wr_s2();
        let gens = g.generators().to_vec();
        let extra = vec![gens[0].then(&gens[1]), gens[1].then(&gens[1])];
        let h = g.clone().with_extra_generators(extra).unwrap();
        for n in 0..=4 {
            assert_eq!(count_inj(&g, n), count_inj(&h, n));
            assert_eq!(count_all(&g, n), count_all(&h, n));
        }
    }

    #[test]
    fn element_enumeration() {
        let b = Budget::default();
        assert_eq!(FinPermGroup::symmetric(4).elements(&b).unwrap().len(), 24);
        assert_eq!(s2_wr_s2().elements(&b).unwrap().len(), 8);
        assert_eq!(FinPermGroup::trivial(5).elements(&b).unwrap().len(), 1);
        let tight = Budget { elements: 10, ..Budget::default() };
        assert!(FinPermGroup::symmetric(4).elements(&tight).unwrap_err().is_capacity());
    }

    #[test]
    fn tuple_budget_is_a_capacity_error() {
        let tight = Budget { tuples: 10, ..Budget::default() };
        let err = count_orbits_injective(&FinPermGroup::symmetric(5), 2, &tight).unwrap_err();
        assert!(err.is_capacity());
    }

    #[test]
    fn stabilizer_examples() {
        let b = Budget::default();
        let c = stabilizer_bound_check(&FinPermGroup::symmetric(4), 0, 1, &b).unwrap();
        assert_eq!(c.stabilizer_orbits, 2);
        assert!(c.holds);

        for a in 0..3 {
            let c = stabilizer_bound_check(&FinPermGroup::trivial(3), a, 1, &b).unwrap();
            assert_eq!(c.stabilizer_orbits, 3);
            assert!(c.holds);
        }

        // G_0 = {id, (2 3)}: 2 fixed pairs plus 5 swapped pairs; bound 2*2 + 3
        let c = stabilizer_bound_check(&s2_wr_s2(), 0, 2, &b).unwrap();
        assert_eq!(c.stabilizer_order, 2);
        assert_eq!(c.stabilizer_orbits, 7);
        assert_eq!(c.orbits_n, BigUint::from(2u32));
        assert_eq!(c.orbits_n_plus_1, BigUint::from(3u32));
        assert!(c.holds);

        assert!(stabilizer_bound_check(&FinPermGroup::trivial(3), 0, 3, &b).is_err());
    }

    #[test]
    fn wreath_of_trivial_is_symmetric() {
        let g = FinPermGroup::wreath_symmetric(&FinPermGroup::trivial(1), 4);
        assert_eq!(g.elements(&Budget::default()).unwrap().len(), 24);
        let inner = FinPermGroup::wreath_symmetric(&FinPermGroup::trivial(1), 3);
        let g = FinPermGroup::wreath_symmetric(&inner, 3);
        assert_eq!(g.degree(), 9);
        assert_eq!(count_inj(&g, 3), 5);
    }
}
