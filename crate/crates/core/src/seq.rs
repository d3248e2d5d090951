//! Integer sequence kernel: Stirling numbers of the second kind, Bell and
//! second-order Bell numbers, the Stirling transform between injective and
//! all-tuple orbit counts, and exact growth-bound checks.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite prefix `a_0, ..., a_N` of a non-negative integer sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeq {
    values: Vec<BigUint>,
    label: String,
}

impl IntSeq {
    /// Panics if `values` is empty.
    pub fn new(label: impl Into<String>, values: Vec<BigUint>) -> Self {
        assert!(!values.is_empty(), "an IntSeq holds at least a_0");
        IntSeq {
            values,
            label: label.into(),
        }
    }

    pub fn from_u64s(label: impl Into<String>, values: &[u64]) -> Self {
        Self::new(label, values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigUint> {
        self.values
    }

    /// Highest index `N` held.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    /// Shortens the prefix to `a_0..=a_n`; no-op when already shorter.
    pub fn truncated(&self, n: usize) -> IntSeq {
        let end = (n + 1).min(self.values.len());
        IntSeq::new(self.label.clone(), self.values[..end].to_vec())
    }

    /// Whether `a_from <= a_{from+1} <= ...` holds. Growth sequences of
    /// infinite structures satisfy this from index 1.
    pub fn is_nondecreasing_from(&self, from: usize) -> bool {
        self.values
            .iter()
            .skip(from)
            .zip(self.values.iter().skip(from + 1))
            .all(|(a, b)| a <= b)
    }

    /// Comma separated decimal values.
    pub fn to_csv_line(&self) -> String {
        self.values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl std::ops::Index<usize> for IntSeq {
    type Output = BigUint;

    fn index(&self, n: usize) -> &BigUint {
        &self.values[n]
    }
}

impl fmt::Display for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.to_csv_line())
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Rows `0..=n_max` of the Stirling triangle of the second kind; row `n`
/// has entries for `k = 0..=n`.
pub fn stirling2_table(n_max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![BigUint::one()]);
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![BigUint::zero(); n + 1];
        for k in 1..=n {
            // S(n, k) = k S(n-1, k) + S(n-1, k-1)
            let mut v = prev[k - 1].clone();
            if k < n {
                v += &prev[k] * BigUint::from(k);
            }
            row[k] = v;
        }
        rows.push(row);
    }
    rows
}

/// Number of partitions of an `n`-set into exactly `k` non-empty blocks.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    stirling2_table(n).swap_remove(n).swap_remove(k)
}

pub fn bell(n: usize) -> BigUint {
    bell_prefix(n).into_values().pop().unwrap()
}

/// `B_0, ..., B_n` as row sums of the Stirling triangle.
pub fn bell_prefix(n: usize) -> IntSeq {
    let table = stirling2_table(n);
    let values = table.iter().map(|row| row.iter().sum()).collect();
    IntSeq::new("bell", values)
}

pub fn bell2(n: usize) -> BigUint {
    bell2_prefix(n).into_values().pop().unwrap()
}

/// Second-order Bell numbers: pairs of partitions `(P, Q)` of `[n]` with
/// `P` refining `Q`. Computed as `sum_k S(n, k) B_k`.
pub fn bell2_prefix(n: usize) -> IntSeq {
    stirling_transform(&bell_prefix(n)).with_label("bell2")
}

/// Maps injective-tuple orbit counts `l` to all-tuple orbit counts:
/// `s_0 = l_0`, `s_n = sum_{k=1}^n S(n, k) l_k`.
pub fn stirling_transform(l: &IntSeq) -> IntSeq {
    let table = stirling2_table(l.order());
    let mut values = Vec::with_capacity(l.len());
    values.push(l[0].clone());
    for (n, row) in table.iter().enumerate().skip(1) {
        let s: BigUint = (1..=n).map(|k| &row[k] * &l[k]).sum();
        values.push(s);
    }
    IntSeq::new(format!("stirling({})", l.label()), values)
}

/// Natural logarithm of a positive big integer, good to about 1e-15 relative.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Parses `p/q`, `p`, or a decimal like `0.6` into an exact rational.
pub fn parse_ratio(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("not a rational number: {text:?}"),
    };
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let digits = format!("{whole}{frac}");
        let p: BigInt = digits.parse().map_err(|_| bad())?;
        let q = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(p, q));
    }
    let p: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Splits a positive rational into unsigned numerator and denominator.
fn positive_parts(r: &BigRational, what: &str) -> Result<(BigUint, BigUint)> {
    if !r.is_positive() {
        return Err(Error::Range(format!("{what} must be positive, got {r}")));
    }
    let num = r.numer().to_biguint().unwrap();
    let den = r.denom().to_biguint().unwrap();
    Ok((num, den))
}

/// One point `(c, d)` of a cellular-bound grid: test `l_n <= c n^{d n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub c: BigRational,
    pub d: BigRational,
}

impl GridPoint {
    pub fn new(c: BigRational, d: BigRational) -> Self {
        GridPoint { c, d }
    }
}

/// Which bound to check, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `l_n <= c n^{d n}` for `1 <= n <= N`; passes if some grid point with
    /// `d < 1` verifies every index.
    Cellular(Vec<GridPoint>),
    /// `l_n >= B_n` for `1 <= n <= N`.
    BellLower,
    /// `l_n <= n! / c^n` on a terminal segment `n0..=N`.
    FactorialUpper(BigRational),
}

impl BoundKind {
    pub fn tag(&self) -> BoundTag {
        match self {
            BoundKind::Cellular(_) => BoundTag::Cellular,
            BoundKind::BellLower => BoundTag::BellLower,
            BoundKind::FactorialUpper(_) => BoundTag::FactorialUpper,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundTag {
    Cellular,
    BellLower,
    FactorialUpper,
}

impl BoundTag {
    pub fn name(self) -> &'static str {
        match self {
            BoundTag::Cellular => "cellular-bound",
            BoundTag::BellLower => "bell-lower",
            BoundTag::FactorialUpper => "factorial-upper",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// `index` is the first violating index (cellular, bell-lower) or the
    /// last one (factorial-upper, where only a terminal segment matters).
    Fail { index: usize },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundTag,
    pub c: Option<BigRational>,
    pub d: Option<BigRational>,
    pub n0: Option<usize>,
    pub verified_range: RangeInclusive<usize>,
    pub verdict: Verdict,
    /// Bell-lower only: `l_n = B_n` at every checked index.
    pub tight: bool,
    /// Cellular only: `max_{2<=n<=N} ln(l_n) / (n ln n)`. Informational;
    /// verdicts never consult it.
    pub d_estimate: Option<f64>,
}

pub const MIN_BOUND_ORDER: usize = 5;

/// Runs one bound check over the whole prefix of `l`. Every comparison is an
/// exact integer comparison.
pub fn check_bounds(l: &IntSeq, kind: &BoundKind) -> Result<BoundReport> {
    let big_n = l.order();
    if big_n < MIN_BOUND_ORDER {
        return Err(Error::Range(format!(
            "bound checks need a prefix to index {MIN_BOUND_ORDER}, got {big_n}"
        )));
    }
    match kind {
        BoundKind::Cellular(grid) => check_cellular(l, grid),
        BoundKind::BellLower => Ok(check_bell_lower(l)),
        BoundKind::FactorialUpper(c) => check_factorial_upper(l, c),
    }
}

fn cellular_d_estimate(l: &IntSeq) -> Option<f64> {
    (2..=l.order())
        .filter(|&n| !l[n].is_zero())
        .map(|n| ln_big(&l[n]) / (n as f64 * (n as f64).ln()))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
}

/// First index in `1..=N` where `l_n <= c n^{dn}` fails, checked as
/// `l_n^q b^q <= a^q n^{p n}` with `c = a/b`, `d = p/q`.
fn cellular_first_failure(l: &IntSeq, point: &GridPoint) -> Result<Option<usize>> {
    let (a, b) = positive_parts(&point.c, "c")?;
    if point.d.is_negative() {
        return Err(Error::Range(format!("d must be non-negative, got {}", point.d)));
    }
    let p = point.d.numer().to_biguint().unwrap();
    let q = point.d.denom().to_u32().ok_or_else(|| {
        Error::Range(format!("denominator of d too large: {}", point.d))
    })?;
    let p = p
        .to_u32()
        .ok_or_else(|| Error::Range(format!("numerator of d too large: {}", point.d)))?;
    let aq = a.pow(q);
    let bq = b.pow(q);
    for n in 1..=l.order() {
        let lhs = l[n].pow(q) * &bq;
        let exp = p
            .checked_mul(n as u32)
            .ok_or_else(|| Error::Range("exponent overflow in n^{dn}".into()))?;
        let rhs = &aq * BigUint::from(n).pow(exp);
        if lhs > rhs {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn check_cellular(l: &IntSeq, grid: &[GridPoint]) -> Result<BoundReport> {
    let big_n = l.order();
    let one = BigRational::one();
    let mut best_pass: Option<&GridPoint> = None;
    let mut best_fail: Option<(&GridPoint, usize)> = None;
    for point in grid.iter().filter(|p| p.d < one) {
        match cellular_first_failure(l, point)? {
            None => {
                let better = best_pass.is_none_or(|b| (&point.d, &point.c) < (&b.d, &b.c));
                if better {
                    best_pass = Some(point);
                }
            }
            Some(idx) => {
                if best_fail.is_none_or(|(_, i)| idx > i) {
                    best_fail = Some((point, idx));
                }
            }
        }
    }
    let d_estimate = cellular_d_estimate(l);
    let (point, verdict) = match (best_pass, best_fail) {
        (Some(p), _) => (Some(p), Verdict::Pass),
        (None, Some((p, idx))) => (Some(p), Verdict::Fail { index: idx }),
        // empty grid (or no d < 1): nothing verifies, fail at the first index
        (None, None) => (None, Verdict::Fail { index: 1 }),
    };
    Ok(BoundReport {
        kind: BoundTag::Cellular,
        c: point.map(|p| p.c.clone()),
        d: point.map(|p| p.d.clone()),
        n0: None,
        verified_range: 1..=big_n,
        verdict,
        tight: false,
        d_estimate,
    })
}

fn check_bell_lower(l: &IntSeq) -> BoundReport {
    let bells = bell_prefix(l.order());
    let mut tight = true;
    let mut verdict = Verdict::Pass;
    for n in 1..=l.order() {
        if l[n] < bells[n] {
            verdict = Verdict::Fail { index: n };
            tight = false;
            break;
        }
        if l[n] != bells[n] {
            tight = false;
        }
    }
    BoundReport {
        kind: BoundTag::BellLower,
        c: None,
        d: None,
        n0: None,
        verified_range: 1..=l.order(),
        verdict,
        tight,
        d_estimate: None,
    }
}

fn check_factorial_upper(l: &IntSeq, c: &BigRational) -> Result<BoundReport> {
    let (a, b) = positive_parts(c, "c")?;
    let big_n = l.order();
    let holds = |n: usize| -> bool {
        let n32 = n as u32;
        &l[n] * a.pow(n32) <= factorial(n) * b.pow(n32)
    };
    let mut n0 = None;
    for n in (0..=big_n).rev() {
        if holds(n) {
            n0 = Some(n);
        } else {
            break;
        }
    }
    let verdict = match n0 {
        Some(_) => Verdict::Pass,
        None => Verdict::Fail { index: big_n },
    };
    Ok(BoundReport {
        kind: BoundTag::FactorialUpper,
        c: Some(c.clone()),
        d: None,
        n0,
        verified_range: 0..=big_n,
        verdict,
        tight: false,
        d_estimate: None,
    })
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn ratio_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.numer().sign() == Sign::Minus { "-" } else { "" };
        format!("{sign}{}/{}", r.numer().magnitude(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::SetPartitions;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ratio(s: &str) -> BigRational {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(3, 3), big(1));
        assert_eq!(stirling2(4, 1), big(1));
        assert_eq!(stirling2(4, 2), big(7));
        assert_eq!(stirling2(0, 0), big(1));
        assert_eq!(stirling2(3, 0), big(0));
        assert_eq!(stirling2(2, 5), big(0));
    }

    #[test]
    fn stirling_matches_block_count_enumeration() {
        for n in 0..=8 {
            let mut by_blocks = vec![0u64; n + 1];
            for p in SetPartitions::new(n) {
                by_blocks[p.block_count()] += 1;
            }
            for (k, &count) in by_blocks.iter().enumerate() {
                assert_eq!(stirling2(n, k), big(count), "S({n},{k})");
            }
        }
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell(0), big(1));
        assert_eq!(bell(3), big(5));
        assert_eq!(bell(4), big(15));
    }

    #[test]
    fn bell_and_bell2_match_brute_force() {
        for n in 0..=8 {
            let parts: Vec<_> = SetPartitions::new(n).collect();
            assert_eq!(bell(n), big(parts.len() as u64));
            let refinements = parts
                .iter()
                .flat_map(|p| parts.iter().map(move |q| (p, q)))
                .filter(|(p, q)| p.refines(q))
                .count();
            assert_eq!(bell2(n), big(refinements as u64), "B2({n})");
        }
        assert_eq!(bell2(1), big(1));
        assert_eq!(bell2(3), big(12));
        assert_eq!(bell2(4), big(60));
    }

    #[test]
    fn stirling_transform_examples() {
        let ones = IntSeq::from_u64s("ones", &[1, 1, 1, 1, 1]);
        assert_eq!(stirling_transform(&ones).values(), IntSeq::from_u64s("", &[1, 1, 2, 5, 15]).values());
        let unit = IntSeq::from_u64s("", &[1, 0, 0, 0]);
        assert_eq!(stirling_transform(&unit).values(), unit.values());
        let bells = IntSeq::from_u64s("", &[1, 1, 2, 5]);
        assert_eq!(stirling_transform(&bells).values(), IntSeq::from_u64s("", &[1, 1, 3, 12]).values());
    }

    #[test]
    fn transform_identities_to_twenty() {
        let n = 20;
        let ones = IntSeq::new("ones", vec![big(1); n + 1]);
        assert_eq!(stirling_transform(&ones).values(), bell_prefix(n).values());
        assert_eq!(stirling_transform(&bell_prefix(n)).values(), bell2_prefix(n).values());
        let table = stirling2_table(n);
        for (row, b) in table.iter().zip(bell_prefix(n).values()) {
            assert_eq!(&row.iter().sum::<BigUint>(), b);
        }
    }

    #[test]
    fn short_prefix_is_a_range_error() {
        let l = IntSeq::from_u64s("", &[1, 1, 2, 5]);
        assert!(matches!(check_bounds(&l, &BoundKind::BellLower), Err(Error::Range(_))));
    }

    #[test]
    fn bell_prefix_bounds() {
        let l = bell_prefix(50);
        let r = check_bounds(&l, &BoundKind::BellLower).unwrap();
        assert!(r.verdict.passed());
        assert!(r.tight);

        // n0 = 35 for c = 2, frozen from an independent Python run that
        // built B_n from the Bell triangle and compared B_n 2^n with n!.
        let r = check_bounds(&l, &BoundKind::FactorialUpper(ratio("2"))).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.n0, Some(35));

        // c = 10 would need a much longer prefix
        let r = check_bounds(&l, &BoundKind::FactorialUpper(ratio("10"))).unwrap();
        assert_eq!(r.verdict, Verdict::Fail { index: 50 });
        assert_eq!(r.n0, None);
    }

    #[test]
    fn bell_lower_reports_first_failure() {
        let l = IntSeq::from_u64s("", &[1, 1, 2, 4, 10, 26]);
        let r = check_bounds(&l, &BoundKind::BellLower).unwrap();
        assert_eq!(r.verdict, Verdict::Fail { index: 3 });
        assert!(r.verified_range.contains(&3));
    }

    fn involutions(n: usize) -> IntSeq {
        let mut v = vec![big(1), big(1)];
        for k in 2..=n {
            let next = &v[k - 1] + &v[k - 2] * BigUint::from(k - 1);
            v.push(next);
        }
        v.truncate(n + 1);
        IntSeq::new("involutions", v)
    }

    #[test]
    fn involution_cellular_bound() {
        let l = involutions(30);
        let grid = vec![GridPoint::new(ratio("1"), ratio("3/5"))];
        let r = check_bounds(&l, &BoundKind::Cellular(grid)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.d, Some(ratio("3/5")));
        let est = r.d_estimate.unwrap();
        assert!(est > 0.3 && est < 0.6, "{est}");
    }

    #[test]
    fn cellular_grid_picks_smallest_d_and_ignores_d_at_least_one() {
        let l = involutions(30);
        let grid = vec![
            GridPoint::new(ratio("1"), ratio("1")),
            GridPoint::new(ratio("1"), ratio("4/5")),
            GridPoint::new(ratio("1"), ratio("3/5")),
            GridPoint::new(ratio("1"), ratio("1/10")),
        ];
        let r = check_bounds(&l, &BoundKind::Cellular(grid)).unwrap();
        assert_eq!(r.d, Some(ratio("3/5")));

        let only_one = vec![GridPoint::new(ratio("100"), ratio("1"))];
        let r = check_bounds(&l, &BoundKind::Cellular(only_one)).unwrap();
        assert!(!r.verdict.passed());
    }

    #[test]
    fn bell_numbers_are_not_cellular_on_grid() {
        let l = bell_prefix(60);
        let grid = vec![GridPoint::new(ratio("1"), ratio("1/2"))];
        let r = check_bounds(&l, &BoundKind::Cellular(grid)).unwrap();
        match r.verdict {
            Verdict::Fail { index } => assert!(r.verified_range.contains(&index)),
            Verdict::Pass => panic!("Bell numbers beat n^(n/2)"),
        }
    }

    #[test]
    fn parse_ratio_forms() {
        assert_eq!(ratio("3/5"), BigRational::new(3.into(), 5.into()));
        assert_eq!(ratio("0.6"), BigRational::new(3.into(), 5.into()));
        assert_eq!(ratio("2"), BigRational::from_integer(2.into()));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
        assert_eq!(ratio_to_string(&ratio("6/10")), "3/5");
    }

    #[test]
    fn nondecreasing() {
        assert!(IntSeq::from_u64s("", &[1, 1, 2, 2, 5]).is_nondecreasing_from(1));
        assert!(!IntSeq::from_u64s("", &[1, 2, 1]).is_nondecreasing_from(1));
        assert!(IntSeq::from_u64s("", &[1, 2, 1]).is_nondecreasing_from(2));
    }
}
