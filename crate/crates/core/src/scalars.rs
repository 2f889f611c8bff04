//! Exact rationals and univariate polynomials in the loop value `δ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational number. Always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("polynomial {poly} does not vanish at {root}")]
    NotDivisible { poly: String, root: String },
}

pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let err = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Polynomial in `δ` with rational coefficients, dense, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DeltaPoly {
    coeffs: Vec<Rational>,
}

impl DeltaPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn delta() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `δ - root`
    pub fn linear(root: Rational) -> Self {
        Self::new(vec![-root, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::int(1), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Substitutes `δ = x` (Horner).
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Exact quotient by `δ - root`.
    pub fn divide_linear(&self, root: &Rational) -> Result<DeltaPoly, ScalarError> {
        if !self.eval(root).is_zero() {
            return Err(ScalarError::NotDivisible {
                poly: self.to_string(),
                root: format_rational(root),
            });
        }
        if self.coeffs.is_empty() {
            return Ok(Self::default());
        }
        // synthetic division from the top coefficient down
        let n = self.coeffs.len();
        let mut q = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (1..n).rev() {
            carry = &self.coeffs[i] + carry * root;
            q[i - 1] = carry.clone();
        }
        Ok(Self::new(q))
    }
}

impl Zero for DeltaPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for DeltaPoly {
    fn one() -> Self {
        Self::int(1)
    }
}

impl<'a> Add<&'a DeltaPoly> for &'a DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, rhs: &DeltaPoly) -> DeltaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        DeltaPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Add for DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, rhs: DeltaPoly) -> DeltaPoly {
        &self + &rhs
    }
}

impl AddAssign<&DeltaPoly> for DeltaPoly {
    fn add_assign(&mut self, rhs: &DeltaPoly) {
        *self = &*self + rhs;
    }
}

impl Neg for &DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        DeltaPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        -&self
    }
}

impl<'a> Sub<&'a DeltaPoly> for &'a DeltaPoly {
    type Output = DeltaPoly;
    fn sub(self, rhs: &DeltaPoly) -> DeltaPoly {
        self + &(-rhs)
    }
}

impl Sub for DeltaPoly {
    type Output = DeltaPoly;
    fn sub(self, rhs: DeltaPoly) -> DeltaPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a DeltaPoly> for &'a DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, rhs: &DeltaPoly) -> DeltaPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return DeltaPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DeltaPoly::new(out)
    }
}

impl Mul for DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, rhs: DeltaPoly) -> DeltaPoly {
        &self * &rhs
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "δ")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeltaPoly({self})")
    }
}

impl Serialize for DeltaPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for DeltaPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self::new(rational_vec::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> DeltaPoly {
        DeltaPoly::from_ints(c)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[-7, 1]).eval(&rat(7)), rat(0));
        assert_eq!(p(&[1, -1]).eval(&rat(7)), rat(-6));
        assert_eq!(p(&[-4, 1]).eval(&rat(3)), rat(-1));
    }

    #[test]
    fn divide_linear_examples() {
        assert_eq!(p(&[0, -7, 1]).divide_linear(&rat(7)).unwrap(), p(&[0, 1]));
        assert_eq!(p(&[-7, 1]).divide_linear(&rat(7)).unwrap(), p(&[1]));
        assert!(matches!(
            p(&[-3, 1]).divide_linear(&rat(7)),
            Err(ScalarError::NotDivisible { .. })
        ));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        assert_eq!(p(&[1, 0, 0]).coeffs().len(), 1);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(&p(&[0, 1]) - &p(&[0, 1]), DeltaPoly::zero());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1]).to_string(), "-δ+1");
        assert_eq!(p(&[-4, 1]).to_string(), "δ-4");
        assert_eq!(DeltaPoly::new(vec![frac(1, 2), rat(0), rat(3)]).to_string(), "3δ^2+1/2");
        assert_eq!(DeltaPoly::zero().to_string(), "0");
    }

    #[test]
    fn parse_and_serde() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("5").unwrap(), rat(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let q = DeltaPoly::new(vec![frac(1, 6), rat(-1)]);
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, r#"["1/6","-1"]"#);
        assert_eq!(serde_json::from_str::<DeltaPoly>(&js).unwrap(), q);
    }

    fn small_poly() -> impl Strategy<Value = DeltaPoly> {
        prop::collection::vec((-5i64..=5, 1i64..=4), 0..5)
            .prop_map(|v| DeltaPoly::new(v.into_iter().map(|(a, b)| frac(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn eval_is_homomorphism(a in small_poly(), b in small_poly(), x in -6i64..6) {
            let x = rat(x);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        }

        #[test]
        fn divide_linear_roundtrip(q in small_poly(), r in -6i64..6) {
            let root = rat(r);
            let prod = &DeltaPoly::linear(root.clone()) * &q;
            let back = prod.divide_linear(&root).unwrap();
            prop_assert_eq!(&DeltaPoly::linear(root) * &back, prod);
            prop_assert_eq!(back, q);
        }
    }
}
