//! Polynomials with rational coefficients: evaluation, derivative, exact
//! rational roots and Sturm root counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest |integer| whose divisors are enumerated when searching for
/// rational roots.
const DIVISOR_SEARCH_LIMIT: u64 = 1 << 40;

/// `coeffs[k]` is the coefficient of `x^k`; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(BigRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let lead = divisor.leading().expect("division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Distinct rational roots, ascending. Fails only when the integer
    /// coefficients are too large to enumerate candidate divisors.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        let mut ints = self.integer_coeffs();
        let mut roots = Vec::new();
        // factor out x^k
        let lowest = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if lowest > 0 {
            roots.push(BigRational::zero());
            ints.drain(..lowest);
        }
        if ints.len() > 1 {
            let ps = divisors(&ints[0].abs())?;
            let qs = divisors(&ints[ints.len() - 1].abs())?;
            let p = Polynomial::new(ints.iter().map(|c| BigRational::from_integer(c.clone())).collect());
            for num in &ps {
                for den in &qs {
                    for sign in [1, -1] {
                        let r = BigRational::new(num * BigInt::from(sign), den.clone());
                        if p.eval(&r).is_zero() {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Some(roots)
    }

    /// The same polynomial scaled to coprime integer coefficients.
    fn integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            ints
        } else {
            ints.into_iter().map(|c| c / &g).collect()
        }
    }

    /// Removes the factor `(x - r)` as often as it divides.
    pub fn deflate(&self, r: &BigRational) -> Self {
        let linear = Polynomial::new(vec![-r.clone(), BigRational::one()]);
        let mut p = self.clone();
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&linear).0;
        }
        p
    }

    fn sturm_sequence(&self) -> Vec<Polynomial> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq[seq.len() - 1].is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.neg());
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots in the open interval `(a, b)`; `a` and
    /// `b` must not be roots.
    pub fn count_roots_between(&self, a: &BigRational, b: &BigRational) -> usize {
        debug_assert!(!self.eval(a).is_zero() && !self.eval(b).is_zero());
        let seq = self.sturm_sequence();
        let variations = |x: &BigRational| {
            let signs: Vec<bool> = seq
                .iter()
                .map(|p| p.eval(x))
                .filter(|v| !v.is_zero())
                .map(|v| v.is_positive())
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        variations(a).saturating_sub(variations(b))
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64().filter(|&n| n <= DIVISOR_SEARCH_LIMIT)?;
    if n == 0 {
        return Some(vec![BigInt::one()]);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let coeff = if a.is_integer() { a.to_integer().to_string() } else { format!("({a})") };
            match (k, a.is_one()) {
                (0, _) => f.write_str(&coeff)?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{coeff}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{coeff}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(cs: &[(i64, i64)]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let p = poly(&[(1, 1), (-3, 1), (2, 1)]); // 2x^2 - 3x + 1
        assert_eq!(p.eval(&q(1, 2)), q(0, 1));
        assert_eq!(p.derivative(), poly(&[(-3, 1), (4, 1)]));
        assert_eq!(Polynomial::x().pow(3).eval(&q(1, 2)), q(1, 8));
        let (quot, rem) = p.div_rem(&poly(&[(-1, 1), (1, 1)]));
        assert_eq!(quot, poly(&[(-1, 1), (2, 1)]));
        assert!(rem.is_zero());
        assert_eq!(p.to_string(), "2*x^2 - 3*x + 1");
    }

    #[test]
    fn rational_roots_found() {
        let p = poly(&[(1, 1), (-3, 1), (2, 1)]);
        assert_eq!(p.rational_roots().unwrap(), vec![q(1, 2), q(1, 1)]);
        let p = poly(&[(0, 1), (0, 1), (1, 3), (-1, 1)]); // -x^3 + x^2/3
        assert_eq!(p.rational_roots().unwrap(), vec![q(0, 1), q(1, 3)]);
        assert!(poly(&[(-2, 1), (0, 1), (1, 1)]).rational_roots().unwrap().is_empty());
    }

    #[test]
    fn sturm_counts_irrational_roots() {
        let p = poly(&[(-2, 1), (0, 1), (1, 1)]); // x^2 - 2
        assert_eq!(p.count_roots_between(&q(0, 1), &q(2, 1)), 1);
        assert_eq!(p.count_roots_between(&q(-2, 1), &q(2, 1)), 2);
        assert_eq!(p.count_roots_between(&q(3, 2), &q(2, 1)), 0);
        let sq = p.mul(&p);
        assert_eq!(sq.count_roots_between(&q(0, 1), &q(2, 1)), 1);
    }

    #[test]
    fn deflation_removes_repeated_factors() {
        let p = poly(&[(-1, 1), (1, 1)]).pow(3).mul(&poly(&[(1, 1), (0, 1), (1, 1)]));
        assert_eq!(p.deflate(&q(1, 1)), poly(&[(1, 1), (0, 1), (1, 1)]));
    }
}
