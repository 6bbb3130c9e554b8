//! Exact scalars over ℚ, 𝔽_p and ℚ(q).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{rational_from_i64, Poly};
use super::KernelError;

/// Which exact field the scalars live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
    /// Rational functions in one indeterminate `q` over ℚ.
    RationalFunctions,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, KernelError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(KernelError::NotPrime(p))
        }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        match *self {
            Field::Prime(p) if !is_prime(p) => Err(KernelError::NotPrime(p)),
            _ => Ok(()),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Prime(p) => p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(rational_from_i64(n)),
            Field::Prime(p) => Scalar::Residue { value: n.rem_euclid(p as i64) as u64, modulus: p },
            Field::RationalFunctions => Scalar::Function(RatFunc::from_poly(Poly::constant(rational_from_i64(n)))),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, KernelError> {
        match *self {
            Field::Rationals => Ok(Scalar::Rational(r.clone())),
            Field::RationalFunctions => Ok(Scalar::Function(RatFunc::from_poly(Poly::constant(r.clone())))),
            Field::Prime(p) => {
                let reduce = |x: &BigInt| -> u64 {
                    let m = BigInt::from(p);
                    x.mod_floor(&m).to_u64().unwrap()
                };
                let num = self.from_i64(0).with_residue(reduce(r.numer()));
                let den = self.from_i64(0).with_residue(reduce(r.denom()));
                num.div(&den)
            }
        }
    }

    /// The indeterminate `q`; only defined over ℚ(q).
    pub fn indeterminate(&self) -> Result<Scalar, KernelError> {
        match self {
            Field::RationalFunctions => Ok(Scalar::Function(RatFunc::from_poly(Poly::monomial(BigRational::one(), 1)))),
            other => Err(KernelError::NoIndeterminate(*other)),
        }
    }

    /// Parse the string form used in job files: `"3/4"`, `"2"`, `"(q^2-1)/(q)"`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, KernelError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match self {
            Field::Rationals => Ok(Scalar::Rational(parse_rational(&s)?)),
            Field::Prime(_) => self.from_rational(&parse_rational(&s)?),
            Field::RationalFunctions => Ok(Scalar::Function(parse_ratfunc(&s)?)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
            Field::RationalFunctions => write!(f, "Qq"),
        }
    }
}

impl FromStr for Field {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Q" => Ok(Field::Rationals),
            "Qq" => Ok(Field::RationalFunctions),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| KernelError::Parse(format!("unknown field '{other}'")))?;
                Field::prime(p)
            }
        }
    }
}

/// A reduced fraction of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Builds `num/den` in canonical form; `den` must be nonzero.
    pub fn new(num: Poly, den: Poly) -> Result<Self, KernelError> {
        if den.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lead = den.leading().unwrap().clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return RatFunc { num, den: Poly::one() };
            }
            return Self::normalize(num, self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den))
    }

    fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::from_poly(Poly::zero());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc { num: self.num.mul(&other.num), den: Poly::one() };
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let num = self.num.div_exact(&g1).mul(&other.num.div_exact(&g2));
        let den = self.den.div_exact(&g2).mul(&other.den.div_exact(&g1));
        Self::normalize(num, den)
    }

    fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalize(self.den.clone(), self.num.clone()))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// An element of one of the supported fields, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
    Function(RatFunc),
}

fn mismatch(a: &Scalar, b: &Scalar) -> KernelError {
    KernelError::FieldMismatch { left: a.field(), right: b.field() }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
            Scalar::Function(_) => Field::RationalFunctions,
        }
    }

    fn with_residue(&self, value: u64) -> Scalar {
        match self {
            Scalar::Residue { modulus, .. } => Scalar::Residue { value, modulus: *modulus },
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Function(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::Function(f) => f.num.is_one() && f.den.is_one(),
        }
    }

    pub fn zero_like(&self) -> Scalar {
        self.field().zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.field().one()
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, KernelError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: p2 }) if p == p2 => {
                Scalar::Residue { value: (a + b) % p, modulus: *p }
            }
            (Scalar::Function(a), Scalar::Function(b)) => Scalar::Function(a.add(b)),
            _ => return Err(mismatch(self, other)),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, KernelError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, KernelError> {
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: p2 }) if p == p2 => {
                Scalar::Residue { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            (Scalar::Function(a), Scalar::Function(b)) => Scalar::Function(a.mul(b)),
            _ => return Err(mismatch(self, other)),
        })
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus },
            Scalar::Function(a) => Scalar::Function(a.neg()),
        }
    }

    pub fn inv(&self) -> Result<Scalar, KernelError> {
        if self.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Residue { value, modulus } => {
                let p = *modulus as i128;
                let (mut r0, mut r1) = (p, *value as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                Scalar::Residue { value: s0.rem_euclid(p) as u64, modulus: *modulus }
            }
            Scalar::Function(a) => Scalar::Function(a.inv().unwrap()),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, KernelError> {
        if self.field() != other.field() {
            return Err(mismatch(self, other));
        }
        self.checked_mul(&other.inv()?)
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Scalar, KernelError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        if let Scalar::Function(f) = &base {
            // powers of a reduced fraction stay reduced
            return Ok(Scalar::Function(RatFunc { num: f.num.pow(e), den: f.den.pow(e) }));
        }
        let mut acc = self.one_like();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Least `n <= bound` with `self^n = 1`, or `None`.
    pub fn multiplicative_order(&self, bound: u64) -> Result<Option<u64>, KernelError> {
        if self.is_zero() {
            return Err(KernelError::ZeroInput);
        }
        match self {
            Scalar::Function(f) if !f.is_constant() => return Ok(None),
            Scalar::Rational(_) | Scalar::Function(_) => {
                // only ±1 have finite order in ℚ^×
                let minus_one = self.one_like().neg_ref();
                return Ok(if self.is_one() && bound >= 1 {
                    Some(1)
                } else if *self == minus_one && bound >= 2 {
                    Some(2)
                } else {
                    None
                });
            }
            Scalar::Residue { .. } => {}
        }
        let mut acc = self.clone();
        for n in 1..=bound {
            if acc.is_one() {
                return Ok(Some(n));
            }
            acc = &acc * self;
        }
        Ok(None)
    }

    /// Small integer value if this scalar is one; used for compact display.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(r) if r.is_integer() => r.numer().to_i64(),
            Scalar::Residue { value, .. } => Some(*value as i64),
            Scalar::Function(f) if f.is_constant() && f.den.is_one() => {
                let c = f.num.constant_term();
                if c.is_integer() {
                    c.numer().to_i64()
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Function(r) => write!(f, "{r}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar field mismatch")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn parse_rational(s: &str) -> Result<BigRational, KernelError> {
    let bad = || KernelError::Parse(format!("bad rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(KernelError::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

/// Polynomial in `q` such as `3/2*q^2-q+1`.
fn parse_poly(s: &str) -> Result<Poly, KernelError> {
    let bad = || KernelError::Parse(format!("bad polynomial '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut acc = Poly::zero();
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (coef, power) = match body.find('q') {
            None => (parse_rational(body)?, 0usize),
            Some(pos) => {
                let coef_str = body[..pos].trim_end_matches('*');
                let coef = if coef_str.is_empty() { BigRational::one() } else { parse_rational(coef_str)? };
                let rest = &body[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|e| e.parse::<usize>().ok()).ok_or_else(bad)?
                };
                (coef, power)
            }
        };
        let coef = if neg { -coef } else { coef };
        acc = acc.add(&Poly::monomial(coef, power));
    }
    Ok(acc)
}

fn parse_ratfunc(s: &str) -> Result<RatFunc, KernelError> {
    if let Some(rest) = s.strip_prefix('(') {
        let close = matching_paren(rest).ok_or_else(|| KernelError::Parse(format!("unbalanced '{s}'")))?;
        let num = parse_poly(&rest[..close])?;
        let tail = &rest[close + 1..];
        if tail.is_empty() {
            return RatFunc::new(num, Poly::one());
        }
        let den_str = tail
            .strip_prefix("/(")
            .and_then(|d| d.strip_suffix(')'))
            .ok_or_else(|| KernelError::Parse(format!("bad rational function '{s}'")))?;
        return RatFunc::new(num, parse_poly(den_str)?);
    }
    RatFunc::new(parse_poly(s)?, Poly::one())
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_add() {
        let f = Field::Rationals;
        let a = f.parse_scalar("1/2").unwrap();
        let b = f.parse_scalar("1/3").unwrap();
        assert_eq!((&a + &b).to_string(), "5/6");
    }

    #[test]
    fn inverse_of_q_minus_one_has_monic_denominator() {
        let f = Field::RationalFunctions;
        let q = f.indeterminate().unwrap();
        let x = (&q - &f.one()).inv().unwrap();
        match &x {
            Scalar::Function(r) => {
                assert!(r.numerator().is_one());
                assert_eq!(r.denominator().to_string(), "q-1");
            }
            _ => unreachable!(),
        }
        assert_eq!(x.to_string(), "(1)/(q-1)");
    }

    #[test]
    fn pow_in_f5() {
        // brute force: 2*2*2*2 = 16 = 1 mod 5
        let f = Field::Prime(5);
        let two = f.from_i64(2);
        let mut brute = f.one();
        for _ in 0..4 {
            brute = &brute * &two;
        }
        assert_eq!(brute, f.one());
        assert_eq!(two.pow(4).unwrap(), brute);
        assert_eq!(two.pow(-1).unwrap(), f.from_i64(3));
    }

    #[test]
    fn multiplicative_orders() {
        assert_eq!(Field::Prime(5).from_i64(2).multiplicative_order(10).unwrap(), Some(4));
        assert_eq!(Field::Rationals.one().multiplicative_order(10).unwrap(), Some(1));
        let q = Field::RationalFunctions.indeterminate().unwrap();
        assert_eq!(q.multiplicative_order(100).unwrap(), None);
        assert!(matches!(Field::Rationals.zero().multiplicative_order(3), Err(KernelError::ZeroInput)));
    }

    #[test]
    fn errors() {
        let z = Field::Rationals.zero();
        assert!(matches!(z.inv(), Err(KernelError::DivisionByZero)));
        let a = Field::Rationals.one();
        let b = Field::Prime(3).one();
        assert!(matches!(a.checked_add(&b), Err(KernelError::FieldMismatch { .. })));
        assert!(matches!(Field::prime(9), Err(KernelError::NotPrime(9))));
    }

    #[test]
    fn ratfunc_parse_roundtrip() {
        let f = Field::RationalFunctions;
        for s in ["(q^2-1)/(q)", "3/2*q^3-q+7", "(1)/(q-1)", "-q", "0"] {
            let x = f.parse_scalar(s).unwrap();
            let y = f.parse_scalar(&x.to_string()).unwrap();
            assert_eq!(x, y, "{s}");
        }
        // (q^2-1)/(q-1) reduces to q+1
        assert_eq!(f.parse_scalar("(q^2-1)/(q-1)").unwrap().to_string(), "q+1");
    }

    #[test]
    fn prime_field_parse_fraction() {
        let f = Field::Prime(7);
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_i64(4));
        assert_eq!(f.parse_scalar("-1").unwrap(), f.from_i64(6));
    }
}
