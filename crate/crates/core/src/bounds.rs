//! Query-count bounds.
//!
//! Bounds of the form `c + Σ aᵢ·log₂ xᵢ` with rational `c`, `xᵢ` and integer `aᵢ`
//! are compared against integer query counts exactly; the rest are evaluated in
//! floating point.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// `constant + Σ coef · log₂(arg)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogExpr {
    constant: BigRational,
    logs: Vec<(u64, Ratio<BigUint>)>,
}

impl LogExpr {
    pub fn constant(c: BigRational) -> LogExpr {
        LogExpr { constant: c, logs: Vec::new() }
    }

    pub fn integer(c: i64) -> LogExpr {
        LogExpr::constant(BigRational::from_integer(c.into()))
    }

    /// Adds `coef · log₂(num / den)`.
    pub fn plus_log(mut self, coef: u64, num: BigUint, den: BigUint) -> LogExpr {
        assert!(!num.is_zero() && !den.is_zero(), "logarithm of a non-positive value");
        if coef == 0 || num == den {
            return self;
        }
        let arg = Ratio::new(num, den);
        match (power_of_two(arg.numer()), power_of_two(arg.denom())) {
            (Some(a), Some(b)) => self.constant += BigRational::from_integer(BigInt::from(coef) * (a - b)),
            _ => self.logs.push((coef, arg)),
        }
        self
    }

    pub fn to_f64(&self) -> f64 {
        let c = ratio_f64(&self.constant);
        self.logs.iter().fold(c, |acc, (coef, arg)| acc + *coef as f64 * log2_ratio(arg))
    }

    /// Exact test of `queries ≤ self`.
    pub fn admits(&self, queries: u64) -> bool {
        let approx = self.to_f64();
        let q = queries as f64;
        let slack = 1e-6 * approx.abs().max(1.0);
        if q < approx - slack {
            return true;
        }
        if q > approx + slack {
            return false;
        }
        // q - c ≤ log₂ X  ⇔  2^p ≤ X^s  where q - c = p / s
        let diff = BigRational::from_integer(BigInt::from(queries)) - &self.constant;
        let s = diff.denom().to_u32().expect("small denominator");
        let p = diff.numer().clone();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (coef, arg) in &self.logs {
            let e = u32::try_from(*coef * s as u64).expect("exponent fits in u32");
            num *= arg.numer().pow(e);
            den *= arg.denom().pow(e);
        }
        let shift = p.abs().to_usize().expect("shift fits");
        if p.is_negative() {
            den <= num << shift
        } else {
            den << shift <= num
        }
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }
}

fn power_of_two(x: &BigUint) -> Option<i64> {
    let tz = x.trailing_zeros()?;
    (x >> tz).is_one().then_some(tz as i64)
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap().log2()
    } else {
        let shift = bits - 60;
        (x >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

fn log2_ratio(r: &Ratio<BigUint>) -> f64 {
    log2_big(r.numer()) - log2_big(r.denom())
}

/// A bound on a query count.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryBound {
    Exact(LogExpr),
    Approx(f64),
}

impl QueryBound {
    pub fn value(&self) -> f64 {
        match self {
            QueryBound::Exact(e) => e.to_f64(),
            QueryBound::Approx(v) => *v,
        }
    }

    /// Whether `queries` is at most the bound.
    pub fn admits(&self, queries: u64) -> bool {
        match self {
            QueryBound::Exact(e) => e.admits(queries),
            QueryBound::Approx(v) => queries as f64 <= *v,
        }
    }

    pub fn plus(self, other: QueryBound) -> QueryBound {
        match (self, other) {
            (QueryBound::Exact(mut a), QueryBound::Exact(b)) => {
                a.constant += b.constant;
                a.logs.extend(b.logs);
                QueryBound::Exact(a)
            }
            (a, b) => QueryBound::Approx(a.value() + b.value()),
        }
    }
}

impl fmt::Display for QueryBound {
    /// Terminating rationals print exactly; other values print to six decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let QueryBound::Exact(e) = self {
            if e.is_rational() {
                if let Some(s) = terminating_decimal(&e.constant) {
                    return f.write_str(&s);
                }
            }
        }
        write!(f, "{:.6}", self.value())
    }
}

fn terminating_decimal(r: &BigRational) -> Option<String> {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    let digits = twos.max(fives);
    let scale = BigInt::from(10).pow(digits as u32);
    if !den.is_one() {
        return None;
    }
    let scaled = r * BigRational::from_integer(scale.clone());
    debug_assert!(scaled.is_integer());
    let v = scaled.to_integer();
    let neg = v.is_negative();
    let mut s = v.abs().to_string();
    if digits > 0 {
        while s.len() <= digits {
            s.insert(0, '0');
        }
        s.insert(s.len() - digits, '.');
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    Some(if neg { format!("-{s}") } else { s })
}

fn big(v: usize) -> BigUint {
    BigUint::from(v)
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `2qn`, for one chain-merge build over `q` chains and `n` elements.
pub fn chainmerge_bound(q: usize, n: usize) -> QueryBound {
    QueryBound::Exact(LogExpr::integer((2 * q * n) as i64))
}

/// `4·w·n·log₂ n`.
pub fn bin_insertion_bound(n: usize, w: usize) -> QueryBound {
    let e = LogExpr::integer(0);
    let e = if n > 1 { e.plus_log((4 * w * n) as u64, big(n), big(1)) } else { e };
    QueryBound::Exact(e)
}

/// `2·w·n·log₂(n/w)`, or zero when `n ≤ w`.
pub fn mergesort_recursion_bound(n: usize, w: usize) -> QueryBound {
    let e = LogExpr::integer(0);
    let e = if n > w { e.plus_log((2 * w * n) as u64, big(n), big(w)) } else { e };
    QueryBound::Exact(e)
}

/// `2·w·n`.
pub fn mergesort_final_bound(n: usize, w: usize) -> QueryBound {
    QueryBound::Exact(LogExpr::integer((2 * w * n) as i64))
}

pub fn mergesort_bound(n: usize, w: usize) -> QueryBound {
    mergesort_recursion_bound(n, w).plus(mergesort_final_bound(n, w))
}

/// `2·log₂ N + 4·w·n`, where `N` counts the width-`w` posets on `n` elements.
pub fn entropy_sort_bound(n_posets: &BigUint, n: usize, w: usize) -> QueryBound {
    let e = LogExpr::integer((4 * w * n) as i64);
    let e = if n_posets > &BigUint::one() { e.plus_log(2, n_posets.clone(), big(1)) } else { e };
    QueryBound::Exact(e)
}

/// Sum of mergesort bounds over the attempted width guesses.
pub fn unknown_width_bound(n: usize, attempts: &[usize]) -> QueryBound {
    attempts.iter().fold(QueryBound::Exact(LogExpr::integer(0)), |acc, &b| acc.plus(mergesort_bound(n, b)))
}

/// `2·n·w`, the queries spent recovering a transitive relation from a sorted poset.
pub fn transitive_recovery_bound(n: usize, w: usize) -> QueryBound {
    QueryBound::Exact(LogExpr::integer((2 * n * w) as i64))
}

/// `w·n`.
pub fn minimals_det_bound(n: usize, w: usize) -> QueryBound {
    QueryBound::Exact(LogExpr::integer((w * n) as i64))
}

/// Expected-query bound for randomized minimal finding, natural logarithms.
pub fn minimals_rand_expected(n: usize, w: usize) -> QueryBound {
    let (nf, wf) = (n as f64, w as f64);
    let tail = if n > w { (wf * wf - wf) / 2.0 * (nf.ln() - wf.ln()) } else { 0.0 };
    QueryBound::Approx((wf + 1.0) * nf / 2.0 + tail)
}

/// `8·w·n·log₂(2k)`.
pub fn kselect_det_bound(n: usize, w: usize, k: usize) -> QueryBound {
    QueryBound::Exact(LogExpr::integer(0).plus_log((8 * w * n) as u64, big(2 * k.max(1)), big(1)))
}

/// `w·n + 16·k·w²·log₂ n·log₂(2k)`, a bound on the expected count.
pub fn kselect_rand_expected(n: usize, w: usize, k: usize) -> QueryBound {
    let (nf, wf, kf) = (n as f64, w as f64, k.max(1) as f64);
    QueryBound::Approx(wf * nf + 16.0 * kf * wf * wf * nf.max(1.0).log2() * (2.0 * kf).log2())
}

/// `4·n·(log₂ n + w)`, the envelope for the mean ternary-tree weight.
pub fn ternary_weight_envelope(n: usize, w: usize) -> QueryBound {
    let e = LogExpr::integer((4 * n * w) as i64);
    let e = if n > 1 { e.plus_log(4 * n as u64, big(n), big(1)) } else { e };
    QueryBound::Exact(e)
}

/// `4·w·n·log₂ n`, the envelope for computing heights from a linear extension.
pub fn heights_envelope(n: usize, w: usize) -> QueryBound {
    bin_insertion_bound(n, w)
}

/// `(w+1)n/2 − w`, forced by the minimal-element adversary.
pub fn lower_bound_min(n: usize, w: usize) -> QueryBound {
    let c = rat(((w + 1) * n) as i64, 2) - rat(w as i64, 1);
    QueryBound::Exact(LogExpr::constant(c))
}

/// `⌈(w+1)n/2 − w⌉` as an integer.
pub fn lower_bound_min_ceil(n: usize, w: usize) -> u64 {
    let c = rat(((w + 1) * n) as i64, 2) - rat(w as i64, 1);
    c.ceil().to_integer().to_i64().unwrap().max(0) as u64
}

/// `log₂ C(x, m)` for real `x ≥ m − 1`, via the falling factorial.
pub fn log2_binomial(x: f64, m: usize) -> Result<f64> {
    if m == 0 {
        return Ok(0.0);
    }
    if x - (m as f64 - 1.0) <= 0.0 {
        return Err(Error::Domain(format!("binomial C({x}, {m}) is not positive")));
    }
    let mut s = 0.0;
    for i in 0..m {
        s += (x - i as f64).log2() - ((i + 1) as f64).log2();
    }
    Ok(s)
}

/// Lower bound on k-selection queries, defined for `k ≤ n / (2w − 1)`.
pub fn lower_bound_ksel(n: usize, w: usize, k: usize) -> Result<f64> {
    if w == 0 || k == 0 {
        return Err(Error::Domain("width and k must be positive".into()));
    }
    let (nf, wf, kf) = (n as f64, w as f64, k as f64);
    let r = nf / (2.0 * wf - 1.0);
    if kf > r {
        return Err(Error::Domain(format!("k = {k} exceeds n/(2w-1) = {r}")));
    }
    let base = (wf + 1.0) * nf / 2.0 - wf * (kf + kf.log2()) - wf.powi(3) / 8.0;
    let first = (wf - 1.0) * log2_binomial(r, k - 1)? + log2_binomial(r * wf, k - 1)?;
    let second = nf * (r - kf) * (wf - 1.0) / (2.0 * r) + log2_binomial(nf - (wf - 1.0) * kf, k - 1)?;
    Ok(base + first.min(second))
}

/// Lower bound on the expected queries of randomized k-selection.
pub fn random_ksel_bound(n: usize, w: usize, k: usize) -> Result<f64> {
    if w == 0 || k == 0 {
        return Err(Error::Domain("width and k must be positive".into()));
    }
    let (nf, wf, kf) = (n as f64, w as f64, k as f64);
    let binom = log2_binomial(nf / (2.0 * wf), k - 1)?;
    Ok((wf + 3.0) * nf / 4.0 - wf * kf + wf * (1.0 - (-nf / (8.0 * wf)).exp()) * binom)
}

/// The classical total-order selection bound `n − k + log₂ C(n, k − 1)`, for reports.
pub fn total_order_ksel_bound(n: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    Ok(n as f64 - k as f64 + log2_binomial(n as f64, k - 1)?)
}
