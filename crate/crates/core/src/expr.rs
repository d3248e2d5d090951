//! Expressions for permutation groups built from finite groups by finite
//! direct products and wreath products with `S_omega`, with evaluation of
//! their labelled growth sequences.
//!
//! The text form is parenthesised and whitespace separated:
//!
//! ```text
//! (finite 3)                     trivial group on 3 points
//! (finite 3 full-sym)            S_3
//! (finite 4 gens=[(0 1)(2 3), (0 2)])
//! (prod e1 e2 ...)               direct product
//! (wr e)                         e wr S_omega
//! ```

use std::fmt;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::egf::Egf;
use crate::error::{Error, Result};
use crate::orbit::{count_orbits_injective, Budget, FinPermGroup, Perm};
use crate::seq::{check_bounds, stirling_transform, BoundKind, BoundReport, GridPoint, IntSeq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Finite(FinPermGroup),
    /// At least two factors.
    Product(Vec<GroupExpr>),
    /// `inner wr S_omega`.
    Wreath(Box<GroupExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Finite,
    /// Every wreath node sits over a finite argument.
    Cellular,
    /// Monadically stable, not cellular: some wreath node sits over an
    /// infinite argument, giving a definable equivalence relation with
    /// infinitely many infinite classes.
    Msnc,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Finite => "finite",
            Classification::Cellular => "cellular",
            Classification::Msnc => "msnc",
        }
    }

    /// Output label; cellularity is decided from the syntax alone.
    pub fn label(self) -> &'static str {
        match self {
            Classification::Finite => "finite",
            Classification::Cellular => "syntactic-cellular",
            Classification::Msnc => "msnc",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainSize {
    Finite(usize),
    Infinite,
}

impl GroupExpr {
    pub fn finite(group: FinPermGroup) -> Self {
        GroupExpr::Finite(group)
    }

    /// A one-factor product collapses to its factor.
    pub fn product(mut factors: Vec<GroupExpr>) -> Result<Self> {
        match factors.len() {
            0 => Err(Error::Range("a direct product needs at least one factor".into())),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(GroupExpr::Product(factors)),
        }
    }

    pub fn wreath(inner: GroupExpr) -> Self {
        GroupExpr::Wreath(Box::new(inner))
    }

    /// `S_omega`, i.e. `(wr (finite 1))`.
    pub fn s_omega() -> Self {
        GroupExpr::wreath(GroupExpr::Finite(FinPermGroup::trivial(1)))
    }

    pub fn domain_size(&self) -> DomainSize {
        match self {
            GroupExpr::Finite(g) => DomainSize::Finite(g.degree()),
            GroupExpr::Wreath(_) => DomainSize::Infinite,
            GroupExpr::Product(children) => {
                let mut total = 0;
                for c in children {
                    match c.domain_size() {
                        DomainSize::Finite(k) => total += k,
                        DomainSize::Infinite => return DomainSize::Infinite,
                    }
                }
                DomainSize::Finite(total)
            }
        }
    }

    fn has_wreath(&self) -> bool {
        match self {
            GroupExpr::Finite(_) => false,
            GroupExpr::Wreath(_) => true,
            GroupExpr::Product(children) => children.iter().any(GroupExpr::has_wreath),
        }
    }

    fn wreaths_over_finite_only(&self) -> bool {
        match self {
            GroupExpr::Finite(_) => true,
            GroupExpr::Wreath(inner) => !inner.has_wreath(),
            GroupExpr::Product(children) => children.iter().all(GroupExpr::wreaths_over_finite_only),
        }
    }

    pub fn classify(&self) -> Classification {
        if !self.has_wreath() {
            Classification::Finite
        } else if self.wreaths_over_finite_only() {
            Classification::Cellular
        } else {
            Classification::Msnc
        }
    }

    /// Merges nested products into their parent.
    pub fn flatten(&self) -> GroupExpr {
        match self {
            GroupExpr::Finite(_) => self.clone(),
            GroupExpr::Wreath(inner) => GroupExpr::wreath(inner.flatten()),
            GroupExpr::Product(children) => {
                let mut out = Vec::new();
                for c in children {
                    match c.flatten() {
                        GroupExpr::Product(grand) => out.extend(grand),
                        other => out.push(other),
                    }
                }
                GroupExpr::Product(out)
            }
        }
    }

    /// Height of the tree; a leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            GroupExpr::Finite(_) => 1,
            GroupExpr::Wreath(inner) => 1 + inner.depth(),
            GroupExpr::Product(children) => 1 + children.iter().map(GroupExpr::depth).max().unwrap_or(0),
        }
    }

    /// EGF of the labelled growth sequence up to order `n`.
    pub fn egf(&self, n: usize, budget: &Budget) -> Result<Egf> {
        match self {
            GroupExpr::Finite(g) => {
                let mut values = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    values.push(count_orbits_injective(g, k, budget)?.count);
                }
                Ok(Egf::from_seq(&IntSeq::new("finite", values)))
            }
            GroupExpr::Product(children) => {
                let mut acc = Egf::one(n);
                for c in children {
                    acc = acc.product(&c.egf(n, budget)?)?;
                }
                Ok(acc)
            }
            GroupExpr::Wreath(inner) => inner.egf(n, budget)?.exp_shift(),
        }
    }

    /// `l_0, ..., l_n`: orbits on injective tuples.
    pub fn eval_lseq(&self, n: usize, budget: &Budget) -> Result<IntSeq> {
        if n < 1 {
            return Err(Error::Range("growth sequences are evaluated to order >= 1".into()));
        }
        Ok(self.egf(n, budget)?.to_seq()?.with_label("l"))
    }

    /// `s_0, ..., s_n`: orbits on all tuples.
    pub fn eval_sseq(&self, n: usize, budget: &Budget) -> Result<IntSeq> {
        Ok(stirling_transform(&self.eval_lseq(n, budget)?).with_label("s"))
    }

    /// Bound checks selected by classification: cellular expressions get the
    /// cellular bound over `cellular_grid`; msnc expressions get the Bell
    /// lower bound and a factorial upper bound per entry of `factorial_cs`.
    /// Finite expressions get none.
    pub fn gap_verdict(
        &self,
        n: usize,
        cellular_grid: &[GridPoint],
        factorial_cs: &[BigRational],
        budget: &Budget,
    ) -> Result<Vec<BoundReport>> {
        if n < 10 {
            return Err(Error::Range(format!("gap verdicts need order >= 10, got {n}")));
        }
        let class = self.classify();
        if class == Classification::Finite {
            return Ok(Vec::new());
        }
        let l = self.eval_lseq(n, budget)?;
        let mut reports = Vec::new();
        match class {
            Classification::Cellular => {
                reports.push(check_bounds(&l, &BoundKind::Cellular(cellular_grid.to_vec()))?);
            }
            Classification::Msnc => {
                reports.push(check_bounds(&l, &BoundKind::BellLower)?);
                for c in factorial_cs {
                    reports.push(check_bounds(&l, &BoundKind::FactorialUpper(c.clone()))?);
                }
            }
            Classification::Finite => unreachable!(),
        }
        Ok(reports)
    }

    pub fn parse(text: &str) -> Result<GroupExpr> {
        let mut p = Parser { src: text, pos: 0 };
        p.skip_ws();
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err("trailing input after expression"));
        }
        Ok(e)
    }
}

impl std::str::FromStr for GroupExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupExpr::parse(s)
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Finite(g) => {
                write!(f, "(finite {}", g.degree())?;
                if !g.generators().is_empty() {
                    let gens: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
                    write!(f, " gens=[{}]", gens.join(", "))?;
                }
                write!(f, ")")
            }
            GroupExpr::Product(children) => {
                write!(f, "(prod")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
            GroupExpr::Wreath(inner) => write!(f, "(wr {inner})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' || c == '[' || c == ']' || c == ',' {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let w = self.word();
        w.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("expected a non-negative integer, found {w:?}"),
        })
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        self.expect('(')?;
        let head_pos = self.pos;
        let head = self.word();
        let e = match head {
            "finite" => self.finite()?,
            "wr" => {
                self.skip_ws();
                GroupExpr::wreath(self.expr()?)
            }
            "prod" => {
                let mut factors = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some('(') => factors.push(self.expr()?),
                        _ => break,
                    }
                }
                if factors.is_empty() {
                    return Err(self.err("prod needs at least one factor"));
                }
                GroupExpr::product(factors)?
            }
            other => {
                return Err(Error::Parse {
                    pos: head_pos,
                    msg: format!("unknown form {other:?}; expected finite, prod or wr"),
                })
            }
        };
        self.expect(')')?;
        Ok(e)
    }

    fn finite(&mut self) -> Result<GroupExpr> {
        let k = self.number()? as usize;
        if k == 0 {
            return Err(self.err("a finite leaf needs at least one point"));
        }
        self.skip_ws();
        if self.peek() == Some(')') {
            return Ok(GroupExpr::Finite(FinPermGroup::trivial(k)));
        }
        let opt_pos = self.pos;
        if self.src[self.pos..].starts_with("gens=") {
            self.pos += "gens=".len();
            self.skip_ws();
            let perms = if self.peek() == Some('[') {
                self.pos += 1;
                let mut perms = Vec::new();
                self.skip_ws();
                if self.peek() == Some(']') {
                    self.pos += 1;
                } else {
                    loop {
                        perms.push(self.perm(k)?);
                        self.skip_ws();
                        match self.peek() {
                            Some(',') => self.pos += 1,
                            Some(']') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.err("expected ',' or ']' in generator list")),
                        }
                    }
                }
                perms
            } else {
                vec![self.perm(k)?]
            };
            return FinPermGroup::new(k, perms)
                .map(GroupExpr::Finite)
                .map_err(|e| Error::Parse { pos: opt_pos, msg: e.to_string() });
        }
        match self.word() {
            "full-sym" => Ok(GroupExpr::Finite(FinPermGroup::symmetric(k))),
            other => Err(Error::Parse {
                pos: opt_pos,
                msg: format!("unknown finite option {other:?}; expected gens=... or full-sym"),
            }),
        }
    }

    /// One permutation in cycle notation: `(0 1)(2 3)`, or `()` for identity.
    fn perm(&mut self, degree: usize) -> Result<Perm> {
        self.skip_ws();
        let start = self.pos;
        let mut cycles = Vec::new();
        while self.peek() == Some('(') {
            self.pos += 1;
            let mut cycle = Vec::new();
            loop {
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    break;
                }
                if self.peek().is_none() {
                    return Err(self.err("unterminated cycle"));
                }
                cycle.push(self.number()?);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            // cycles of one permutation may be separated by spaces
            let save = self.pos;
            self.skip_ws();
            if self.peek() != Some('(') {
                self.pos = save;
            }
        }
        if self.pos == start {
            return Err(self.err("expected a permutation in cycle notation"));
        }
        Perm::from_cycles(degree, &cycles).map_err(|e| Error::Parse {
            pos: start,
            msg: e.to_string(),
        })
    }
}

/// A random expression of depth at most `max_depth` whose finite leaves act
/// on at most `max_leaf_degree` points.
pub fn random_expr<R: Rng>(rng: &mut R, max_depth: usize, max_leaf_degree: usize) -> GroupExpr {
    assert!(max_depth >= 1 && max_leaf_degree >= 1);
    if max_depth == 1 || rng.gen_bool(0.25) {
        return GroupExpr::Finite(random_leaf(rng, max_leaf_degree));
    }
    if rng.gen_bool(0.5) {
        GroupExpr::wreath(random_expr(rng, max_depth - 1, max_leaf_degree))
    } else {
        let factors = (0..2).map(|_| random_expr(rng, max_depth - 1, max_leaf_degree)).collect();
        GroupExpr::Product(factors)
    }
}

fn random_leaf<R: Rng>(rng: &mut R, max_degree: usize) -> FinPermGroup {
    let k = rng.gen_range(1..=max_degree);
    match rng.gen_range(0..3) {
        0 => FinPermGroup::trivial(k),
        1 => FinPermGroup::symmetric(k),
        _ => {
            let gens = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let mut images: Vec<u32> = (0..k as u32).collect();
                    images.shuffle(rng);
                    Perm::new(images).unwrap()
                })
                .collect();
            FinPermGroup::new(k, gens).unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{bell_prefix, parse_ratio};

    fn parse(s: &str) -> GroupExpr {
        GroupExpr::parse(s).unwrap()
    }

    fn lseq(s: &str, n: usize) -> Vec<u64> {
        parse(s)
            .eval_lseq(n, &Budget::default())
            .unwrap()
            .values()
            .iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect()
    }

    fn sseq(s: &str, n: usize) -> Vec<u64> {
        parse(s)
            .eval_sseq(n, &Budget::default())
            .unwrap()
            .values()
            .iter()
            .map(|v| u64::try_from(v).unwrap())
            .collect()
    }

    const E_REL: &str = "(wr (wr (finite 1)))";

    #[test]
    fn parse_examples() {
        assert_eq!(parse("(wr (finite 1))"), GroupExpr::s_omega());
        assert_eq!(parse(E_REL), GroupExpr::wreath(GroupExpr::s_omega()));
        assert_eq!(
            parse("(prod (wr (finite 1)) (wr (finite 1)))"),
            GroupExpr::Product(vec![GroupExpr::s_omega(), GroupExpr::s_omega()])
        );
        let g = parse("(finite 4 gens=[(0 1)(2 3), (0 2)])");
        match g {
            GroupExpr::Finite(g) => assert_eq!(g.generators().len(), 2),
            _ => panic!(),
        }
        assert_eq!(parse("(finite 2 gens=(0 1))"), parse("(finite 2 full-sym)"));
        assert_eq!(parse("(prod (finite 2))"), parse("(finite 2)"));
        assert_eq!(parse("  ( wr\n (finite 1) )  "), GroupExpr::s_omega());
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "(finite)",
            "(finite 0)",
            "(finite 2 gens=[(0 2)])",
            "(finite 3 gens=[(0 1)(1 2)])",
            "(prod)",
            "(wr)",
            "(sym 3)",
            "(finite 2) x",
            "(finite 2 colour)",
            "(wr (finite 1)",
        ] {
            assert!(matches!(GroupExpr::parse(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
        match GroupExpr::parse("(wr (sym 3))") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            E_REL,
            "(prod (finite 3 gens=[(0 1 2)]) (wr (finite 2 full-sym)) (finite 1))",
            "(finite 4 gens=[(0 1)(2 3)])",
        ] {
            let e = parse(s);
            assert_eq!(parse(&e.to_string()), e);
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(parse("(finite 3 full-sym)").classify(), Classification::Finite);
        assert_eq!(parse("(wr (finite 2 gens=[(0 1)]))").classify(), Classification::Cellular);
        assert_eq!(parse(E_REL).classify(), Classification::Msnc);
        assert_eq!(
            parse("(prod (wr (finite 2)) (finite 3))").classify(),
            Classification::Cellular
        );
        assert_eq!(parse("(wr (prod (finite 2) (finite 1)))").classify(), Classification::Cellular);
        assert_eq!(
            parse("(prod (finite 1) (wr (prod (finite 1) (wr (finite 1)))))").classify(),
            Classification::Msnc
        );
    }

    #[test]
    fn classify_ignores_flattening_and_order() {
        let e = parse("(prod (prod (wr (finite 1)) (finite 2)) (wr (wr (finite 1))))");
        let flat = e.flatten();
        assert_eq!(
            flat,
            parse("(prod (wr (finite 1)) (finite 2) (wr (wr (finite 1))))")
        );
        assert_eq!(e.classify(), flat.classify());
        let swapped = parse("(prod (wr (wr (finite 1))) (prod (finite 2) (wr (finite 1))))");
        assert_eq!(e.classify(), swapped.classify());
        let b = Budget::default();
        assert_eq!(e.eval_lseq(6, &b).unwrap(), swapped.eval_lseq(6, &b).unwrap());
    }

    #[test]
    fn lseq_examples() {
        assert_eq!(lseq("(wr (finite 1))", 5), vec![1; 6]);
        assert_eq!(lseq(E_REL, 5), vec![1, 1, 2, 5, 15, 52]);
        assert_eq!(lseq("(wr (finite 2 full-sym))", 5), vec![1, 1, 2, 4, 10, 26]);
        assert_eq!(lseq("(finite 3 full-sym)", 10), vec![1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lseq("(finite 1)", 3), vec![1, 1, 0, 0]);
        assert_eq!(
            lseq("(prod (wr (finite 1)) (wr (finite 1)))", 4),
            vec![1, 2, 4, 8, 16]
        );
        assert!(parse(E_REL).eval_lseq(0, &Budget::default()).is_err());
    }

    #[test]
    fn sseq_examples() {
        assert_eq!(sseq(E_REL, 4), vec![1, 1, 3, 12, 60]);
        assert_eq!(sseq("(wr (finite 1))", 3), vec![1, 1, 2, 5]);
        assert_eq!(sseq("(finite 2)", 3), vec![1, 2, 4, 8]);
    }

    #[test]
    fn bell_from_grammar_to_fifty() {
        let l = parse(E_REL).eval_lseq(50, &Budget::default()).unwrap();
        assert_eq!(l.values(), bell_prefix(50).values());
    }

    #[test]
    fn gap_verdict_examples() {
        let b = Budget::default();
        let two = parse_ratio("2").unwrap();
        let reports = parse(E_REL).gap_verdict(50, &[], std::slice::from_ref(&two), &b).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.verdict.passed()));
        assert!(reports[0].tight);
        assert_eq!(reports[1].n0, Some(35));

        let grid = vec![GridPoint::new(parse_ratio("1").unwrap(), parse_ratio("3/5").unwrap())];
        let reports = parse("(wr (finite 2 full-sym))").gap_verdict(30, &grid, std::slice::from_ref(&two), &b).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].verdict.passed());

        let reports = parse("(finite 3 full-sym)").gap_verdict(10, &grid, std::slice::from_ref(&two), &b).unwrap();
        assert!(reports.is_empty());

        assert!(parse(E_REL).gap_verdict(9, &grid, &[two], &b).is_err());
    }

    #[test]
    fn domain_sizes() {
        assert_eq!(parse("(prod (finite 2) (finite 3))").domain_size(), DomainSize::Finite(5));
        assert_eq!(parse("(prod (finite 2) (wr (finite 3)))").domain_size(), DomainSize::Infinite);
        assert_eq!(parse(E_REL).depth(), 3);
    }
}
