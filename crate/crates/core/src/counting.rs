//! Exact cardinality formulas and growth comparison.
//!
//! Everything here is exact integer or rational arithmetic. Binomials and
//! factorials are memoized in process-wide write-once tables.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::relmodel::GraphClassLabel;

pub type BigCount = BigUint;
pub type BigRatio = BigRational;

/// Least n from which the Latin-square lower bound for T6 exceeds the T1
/// count, checked exactly for every n up to 20.
pub const LATIN_CROSSOVER: usize = 8;

static FACTORIALS: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());
static PASCAL: Mutex<Vec<Vec<BigUint>>> = Mutex::new(Vec::new());

pub fn factorial(n: usize) -> BigCount {
    let mut table = FACTORIALS.lock().expect("factorial table poisoned");
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= n {
        let next = table.last().unwrap() * BigUint::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let mut rows = PASCAL.lock().expect("binomial table poisoned");
    while rows.len() <= n {
        let row = match rows.last() {
            None => vec![BigUint::one()],
            Some(prev) => {
                let mut row = Vec::with_capacity(prev.len() + 1);
                row.push(BigUint::one());
                for w in prev.windows(2) {
                    row.push(&w[0] + &w[1]);
                }
                row.push(BigUint::one());
                row
            }
        };
        rows.push(row);
    }
    rows[n][k].clone()
}

fn pow(base: usize, exp: usize) -> BigCount {
    BigUint::from(base).pow(exp)
}

/// Number of k×k boolean matrices without a zero row or zero column.
pub fn a_k(k: usize) -> BigCount {
    let mut acc = BigInt::zero();
    for i in 0..=k {
        let row_choices = pow(2, k - i) - BigUint::one();
        let term = BigInt::from(binomial(k, i) * row_choices.pow(k));
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("inclusion-exclusion count is nonnegative")
}

/// Number of involutions on a k-element set.
pub fn involutions(k: usize) -> BigCount {
    (0..=k / 2)
        .map(|m| factorial(k) / (pow(2, m) * factorial(m) * factorial(k - 2 * m)))
        .sum()
}

/// A class with a closed-form cardinality function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaLabel {
    Binary(GraphClassLabel),
    /// Ternary relation with the first column as key.
    T1,
}

impl FormulaLabel {
    pub const ALL: [FormulaLabel; 10] = [
        FormulaLabel::Binary(GraphClassLabel::DIGRAPH),
        FormulaLabel::Binary(GraphClassLabel::SOURCE_FREE),
        FormulaLabel::Binary(GraphClassLabel::SOURCE_SINK_FREE),
        FormulaLabel::Binary(GraphClassLabel::SYMM),
        FormulaLabel::Binary(GraphClassLabel::OUTDEG_LE1),
        FormulaLabel::Binary(GraphClassLabel::CYCLES),
        FormulaLabel::Binary(GraphClassLabel::OUTDEG1),
        FormulaLabel::Binary(GraphClassLabel::SYMM_DEG1),
        FormulaLabel::Binary(GraphClassLabel::PATHS_CYCLES),
        FormulaLabel::T1,
    ];

    /// Short formula name: `F0`, `F1`, ..., `F15`, or `T1`.
    pub fn formula_name(self) -> &'static str {
        use GraphClassLabel::*;
        match self {
            FormulaLabel::Binary(DIGRAPH) => "F0",
            FormulaLabel::Binary(SOURCE_FREE) => "F1",
            FormulaLabel::Binary(SOURCE_SINK_FREE) => "F3",
            FormulaLabel::Binary(SYMM) => "F4",
            FormulaLabel::Binary(OUTDEG_LE1) => "F5",
            FormulaLabel::Binary(CYCLES) => "F6",
            FormulaLabel::Binary(OUTDEG1) => "F7",
            FormulaLabel::Binary(SYMM_DEG1) => "F9",
            FormulaLabel::Binary(PATHS_CYCLES) => "F15",
            FormulaLabel::T1 => "T1",
        }
    }

    pub fn schema_name(self) -> &'static str {
        match self {
            FormulaLabel::Binary(c) => c.representative(),
            FormulaLabel::T1 => "T1",
        }
    }

    pub fn formula_text(self) -> &'static str {
        use GraphClassLabel::*;
        match self {
            FormulaLabel::Binary(DIGRAPH) => "2^(n^2)",
            FormulaLabel::Binary(SOURCE_FREE) => "sum_k C(n,k) (2^k - 1)^k",
            FormulaLabel::Binary(SOURCE_SINK_FREE) => "sum_k C(n,k) a_k",
            FormulaLabel::Binary(SYMM) => "2^(C(n,2) + n)",
            FormulaLabel::Binary(OUTDEG_LE1) => "(n + 1)^n",
            FormulaLabel::Binary(CYCLES) => "sum_k C(n,k) k!",
            FormulaLabel::Binary(OUTDEG1) => "sum_k C(n,k) k^k",
            FormulaLabel::Binary(SYMM_DEG1) => "sum_k C(n,k) I_k",
            FormulaLabel::Binary(PATHS_CYCLES) => "sum_k C(n,k)^2 k!",
            FormulaLabel::T1 => "(1 + n^2)^n",
        }
    }
}

impl fmt::Display for FormulaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaLabel::Binary(c) => write!(f, "{c}"),
            FormulaLabel::T1 => f.write_str("T1"),
        }
    }
}

impl FromStr for FormulaLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("T1") {
            return Ok(FormulaLabel::T1);
        }
        if let Some(l) = FormulaLabel::ALL
            .into_iter()
            .find(|l| l.formula_name().eq_ignore_ascii_case(t) || l.schema_name().eq_ignore_ascii_case(t))
        {
            return Ok(l);
        }
        t.parse::<GraphClassLabel>()
            .map(FormulaLabel::Binary)
            .map_err(|_| Error::usage(format!("no cardinality formula for {s:?}")))
    }
}

impl From<GraphClassLabel> for FormulaLabel {
    fn from(c: GraphClassLabel) -> Self {
        FormulaLabel::Binary(c)
    }
}

fn sum_over_k(n: usize, term: impl Fn(usize) -> BigCount) -> BigCount {
    (0..=n).map(|k| binomial(n, k) * term(k)).sum()
}

pub fn formula_count(label: FormulaLabel, n: usize) -> BigCount {
    use GraphClassLabel::*;
    match label {
        FormulaLabel::Binary(DIGRAPH) => pow(2, n * n),
        FormulaLabel::Binary(SOURCE_FREE) => sum_over_k(n, |k| (pow(2, k) - BigUint::one()).pow(k)),
        FormulaLabel::Binary(SOURCE_SINK_FREE) => sum_over_k(n, a_k),
        FormulaLabel::Binary(SYMM) => pow(2, n * n.saturating_sub(1) / 2 + n),
        FormulaLabel::Binary(OUTDEG_LE1) => pow(n + 1, n),
        FormulaLabel::Binary(CYCLES) => sum_over_k(n, factorial),
        FormulaLabel::Binary(OUTDEG1) => sum_over_k(n, |k| pow(k, k)),
        FormulaLabel::Binary(SYMM_DEG1) => sum_over_k(n, involutions),
        FormulaLabel::Binary(PATHS_CYCLES) => sum_over_k(n, |k| binomial(n, k) * factorial(k)),
        FormulaLabel::T1 => pow(1 + n * n, n),
    }
}

/// The exact rational `(n!)^(2n) / n^(n^2)`.
pub fn latin_lower_bound(n: usize) -> Result<BigRatio> {
    if n == 0 {
        return Err(Error::usage("the Latin-square bound is defined for n >= 1"));
    }
    let num = BigInt::from(factorial(n).pow(2 * n));
    let den = BigInt::from(pow(n, n * n));
    Ok(BigRational::new(num, den))
}

/// Least `c <= n_max` with `latin_lower_bound(n) > F_T1(n)` for every
/// `c <= n <= n_max`.
pub fn latin_crossover(n_max: usize) -> Option<usize> {
    let mut c = None;
    for n in (1..=n_max).rev() {
        let t1 = BigRational::from_integer(BigInt::from(formula_count(FormulaLabel::T1, n)));
        if latin_lower_bound(n).expect("n >= 1") > t1 {
            c = Some(n);
        } else {
            break;
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: usize,
    pub fa: BigCount,
    pub fb: BigCount,
    pub sign: Ordering,
}

/// Pointwise comparison of two cardinality functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub class_a: FormulaLabel,
    pub class_b: FormulaLabel,
    pub rows: Vec<GrowthRow>,
    /// Least c with `F_A(n) > F_B(n)` for every tested `n >= c`.
    pub minimal_c: Option<usize>,
}

impl GrowthReport {
    /// Recomputes every row and the threshold.
    pub fn is_consistent(&self) -> bool {
        let fresh = compare_growth(self.class_a, self.class_b, self.rows.len().saturating_sub(1));
        fresh == *self
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("n,{},{},sign\n", self.class_a.formula_name(), self.class_b.formula_name());
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n, r.fa, r.fb, sign_str(r.sign)));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} ({}) vs {} ({})\n",
            self.class_a,
            self.class_a.formula_name(),
            self.class_b,
            self.class_b.formula_name()
        );
        for r in &self.rows {
            out.push_str(&format!("  n={:<3} {:>24} {} {}\n", r.n, r.fa, sign_char(r.sign), r.fb));
        }
        match self.minimal_c {
            Some(c) => out.push_str(&format!("  strictly greater for all tested n >= {c}\n")),
            None => out.push_str("  no strict threshold within the tested range\n"),
        }
        out
    }
}

fn sign_str(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "-1",
        Ordering::Equal => "0",
        Ordering::Greater => "1",
    }
}

fn sign_char(o: Ordering) -> char {
    match o {
        Ordering::Less => '<',
        Ordering::Equal => '=',
        Ordering::Greater => '>',
    }
}

pub fn compare_growth(a: FormulaLabel, b: FormulaLabel, n_max: usize) -> GrowthReport {
    let rows: Vec<GrowthRow> = (0..=n_max)
        .map(|n| {
            let fa = formula_count(a, n);
            let fb = formula_count(b, n);
            let sign = fa.cmp(&fb);
            GrowthRow { n, fa, fb, sign }
        })
        .collect();
    let minimal_c = rows
        .iter()
        .rev()
        .take_while(|r| r.sign == Ordering::Greater)
        .last()
        .map(|r| r.n);
    GrowthReport {
        class_a: a,
        class_b: b,
        rows,
        minimal_c,
    }
}

/// Cardinality table for the nine binary classes, one column per n.
pub fn cardinality_table(n_max: usize) -> String {
    let mut out = format!("{:<6} {:<18} {:<28}", "F", "class", "formula");
    for n in 0..=n_max {
        out.push_str(&format!(" {:>10}", format!("n={n}")));
    }
    out.push('\n');
    for label in FormulaLabel::ALL.iter().filter(|l| **l != FormulaLabel::T1) {
        out.push_str(&format!("{:<6} {:<18} {:<28}", label.formula_name(), label.to_string(), label.formula_text()));
        for n in 0..=n_max {
            out.push_str(&format!(" {:>10}", formula_count(*label, n)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use GraphClassLabel::*;

    fn f(c: GraphClassLabel, n: usize) -> u64 {
        formula_count(c.into(), n).try_into().unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(f(DIGRAPH, 2), 16);
        assert_eq!(f(OUTDEG_LE1, 3), 64);
        assert_eq!(f(SOURCE_SINK_FREE, 2), 10);
        assert_eq!(formula_count(FormulaLabel::T1, 2), BigUint::from(25u32));
        assert_eq!(f(SOURCE_FREE, 2), 12);
        assert_eq!(f(SYMM, 3), 64);
        assert_eq!(f(CYCLES, 3), 16);
        assert_eq!(f(OUTDEG1, 3), 43);
        assert_eq!(f(SYMM_DEG1, 3), 14);
        assert_eq!(f(PATHS_CYCLES, 3), 34);
        assert_eq!(f(DIGRAPH, 4), 65536);
    }

    #[test]
    fn sub_sequences() {
        let a: Vec<u64> = (0..3).map(|k| a_k(k).try_into().unwrap()).collect();
        assert_eq!(a, vec![1, 1, 7]);
        assert_eq!(involutions(0), BigUint::from(1u32));
        assert_eq!(involutions(2), BigUint::from(2u32));
        assert_eq!(involutions(3), BigUint::from(4u32));
    }

    #[test]
    fn latin_bound_values() {
        assert_eq!(latin_lower_bound(1).unwrap(), BigRational::one());
        assert_eq!(latin_lower_bound(2).unwrap(), BigRational::one());
        assert_eq!(
            latin_lower_bound(3).unwrap(),
            BigRational::new(BigInt::from(46656), BigInt::from(19683))
        );
        assert!(latin_lower_bound(0).is_err());
    }

    #[test]
    fn latin_crossover_is_frozen() {
        assert_eq!(latin_crossover(16), Some(LATIN_CROSSOVER));
        assert_eq!(latin_crossover(20), Some(LATIN_CROSSOVER));
        assert_eq!(latin_crossover(7), None);
    }

    #[test]
    fn growth_examples() {
        let r = compare_growth(SYMM.into(), OUTDEG_LE1.into(), 6);
        let signs: Vec<Ordering> = r.rows.iter().map(|r| r.sign).collect();
        use Ordering::*;
        assert_eq!(signs, vec![Equal, Equal, Less, Equal, Greater, Greater, Greater]);
        assert_eq!(r.minimal_c, Some(4));
        assert!(r.is_consistent());

        let r = compare_growth(OUTDEG1.into(), PATHS_CYCLES.into(), 6);
        assert_eq!(r.rows[2].fa, BigUint::from(7u32));
        assert_eq!(r.rows[2].sign, Equal);
        assert!(r.rows[3..].iter().all(|row| row.sign == Greater));
        assert_eq!(r.minimal_c, Some(3));

        let r = compare_growth(CYCLES.into(), CYCLES.into(), 6);
        assert!(r.rows.iter().all(|row| row.sign == Equal));
        assert_eq!(r.minimal_c, None);
    }

    #[test]
    fn labels_parse() {
        assert_eq!("F15".parse::<FormulaLabel>().unwrap(), PATHS_CYCLES.into());
        assert_eq!("symm".parse::<FormulaLabel>().unwrap(), SYMM.into());
        assert_eq!("S5".parse::<FormulaLabel>().unwrap(), OUTDEG_LE1.into());
        assert_eq!("t1".parse::<FormulaLabel>().unwrap(), FormulaLabel::T1);
        assert!("F2".parse::<FormulaLabel>().is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = compare_growth(SYMM.into(), OUTDEG_LE1.into(), 2).to_csv();
        assert_eq!(csv, "n,F4,F5,sign\n0,1,1,0\n1,2,2,0\n2,8,9,-1\n");
    }
}
