use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Rational;

/// Exact binomial tails against `exp(-2 ε² n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoeffdingReport {
    pub n: u64,
    /// `P(Bin(n, p) >= (p + ε) n)`, exact.
    #[serde(serialize_with = "ser_ratio")]
    pub exact_upper: Rational,
    /// `P(Bin(n, p) <= (p - ε) n)`, exact.
    #[serde(serialize_with = "ser_ratio")]
    pub exact_lower: Rational,
    /// `exp(-2 ε² n)` rounded to `f64` for display only.
    pub bound: f64,
    pub upper_holds: bool,
    pub lower_holds: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl HoeffdingReport {
    pub fn holds(&self) -> bool {
        self.upper_holds && self.lower_holds
    }
}

/// Upper and lower fixed-point bounds (scaled by `2^bits`) on `exp(x)` for
/// a rational `x >= 0`.
fn exp_bounds(x: &Rational, bits: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits;
    let whole = x.floor().to_integer().to_u64().expect("exponent fits");
    let frac = x - Rational::from_integer(BigInt::from(whole));
    let terms = (bits / 2).max(40);
    // Taylor sum of exp(t) for t in [0, 1] in fixed point, every term rounded
    // in the requested direction, plus a remainder of at most 3 t^N / N!.
    let taylor = |t: &Rational, up: bool| -> BigInt {
        let (num, den) = (t.numer(), t.denom());
        let mut sum = BigInt::zero();
        let mut term = one.clone();
        for i in 0..terms {
            sum += &term;
            let (q, r) = (&term * num).div_rem(&(den * BigInt::from(i + 1)));
            term = if up && !r.is_zero() { q + 1 } else { q };
        }
        if up {
            sum + term * 3
        } else {
            sum
        }
    };
    let e_lo = taylor(&Rational::one(), false);
    let e_hi = taylor(&Rational::one(), true);
    let f_lo = taylor(&frac, false);
    let f_hi = taylor(&frac, true);

    let mul_up = |a: &BigInt, b: &BigInt| -> BigInt {
        let (q, r) = (a * b).div_rem(&one);
        if r.is_zero() {
            q
        } else {
            q + 1
        }
    };
    let mul_down = |a: &BigInt, b: &BigInt| -> BigInt { (a * b) >> bits };
    let pow = |base: &BigInt, mut e: u64, mul: &dyn Fn(&BigInt, &BigInt) -> BigInt| -> BigInt {
        let mut acc = one.clone();
        let mut b = base.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &b);
            }
            b = mul(&b, &b);
            e >>= 1;
        }
        acc
    };
    let hi = mul_up(&pow(&e_hi, whole, &mul_up), &f_hi);
    let lo = mul_down(&pow(&e_lo, whole, &mul_down), &f_lo);
    (lo, hi)
}

/// Decides `tail <= exp(-x)` exactly, refining precision until the bounds
/// separate.
fn tail_within(tail: &Rational, x: &Rational) -> bool {
    if tail.is_zero() {
        return true;
    }
    let mut bits = 256;
    loop {
        let (lo, hi) = exp_bounds(x, bits);
        // tail * exp(x) <= 1  <=>  numer * e_fixed <= denom * 2^bits
        let scaled_den = tail.denom() << bits;
        if tail.numer() * &hi <= scaled_den {
            return true;
        }
        if tail.numer() * &lo > scaled_den {
            return false;
        }
        bits *= 2;
        assert!(bits <= 1 << 16, "exp bounds failed to separate");
    }
}

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for j in 0..n {
        let next = &row[j as usize] * BigInt::from(n - j) / BigInt::from(j + 1);
        row.push(next);
    }
    row
}

/// Exact binomial tails for `p = a/b`, `epsilon >= 0`, `n <= 10^4`, and
/// both Hoeffding inequalities decided without rounding.
pub fn hoeffding_check(n: u64, p: &Rational, epsilon: &Rational) -> Result<HoeffdingReport> {
    if n == 0 || n > 10_000 {
        return Err(Error::InvalidArgument(format!("n={n} not in 1..=10000")));
    }
    if p.is_negative() || *p > Rational::one() || epsilon.is_negative() {
        return Err(Error::InvalidArgument(format!("need 0 <= p <= 1 and epsilon >= 0, got p={p}, epsilon={epsilon}")));
    }
    let nr = Rational::from_integer(BigInt::from(n));
    let a = p.numer().clone();
    let b = p.denom().clone();
    let rest = &b - &a;
    let row = binomial_row(n);
    // weight of j successes, scaled by b^n
    let weight = |j: u64| -> BigInt { &row[j as usize] * a.pow(j as u32) * rest.pow((n - j) as u32) };
    let total = b.pow(n as u32);

    let hi_cut = ((p + epsilon) * &nr).ceil().to_integer();
    let upper_num: BigInt = match hi_cut.to_u64() {
        Some(t) if t <= n => (t..=n).map(weight).sum(),
        Some(_) => BigInt::zero(),
        None if hi_cut.is_negative() => total.clone(),
        None => BigInt::zero(),
    };
    let lo_cut = ((p - epsilon) * &nr).floor().to_integer();
    let lower_num: BigInt = if lo_cut.is_negative() {
        BigInt::zero()
    } else {
        let t = lo_cut.to_u64().expect("cut fits").min(n);
        (0..=t).map(weight).sum()
    };
    let exact_upper = Rational::new(upper_num, total.clone());
    let exact_lower = Rational::new(lower_num, total);

    let x = epsilon * epsilon * BigInt::from(2) * &nr;
    let bound = (-x.to_f64().unwrap_or(f64::INFINITY)).exp();
    Ok(HoeffdingReport {
        n,
        upper_holds: tail_within(&exact_upper, &x),
        lower_holds: tail_within(&exact_lower, &x),
        exact_upper,
        exact_lower,
        bound,
    })
}
