//! Exact scalars: big rationals, Gaussian rationals, and integer-vector helpers.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number.
pub type Q = BigRational;
/// Arbitrary precision integer.
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

pub fn z(n: i64) -> Z {
    Z::from(n)
}

pub fn zq(n: &Z) -> Q {
    Q::from_integer(n.clone())
}

/// Field of exact scalars usable as series coefficients.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_q(v: Q) -> Self;
    fn parse_scalar(s: &str) -> Result<Self>;
}

impl Scalar for Q {
    fn from_q(v: Q) -> Self {
        v
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        parse_q(s)
    }
}

fn normalize_minus(s: &str) -> String {
    s.trim().replace('\u{2212}', "-").replace(' ', "")
}

/// Parses "3/2", "-7", "−13/240" (unicode minus accepted).
pub fn parse_q(s: &str) -> Result<Q> {
    let t = normalize_minus(s);
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        Some((n, d)) => {
            let n = Z::from_str(n).map_err(|_| bad())?;
            let d = Z::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(Z::from_str(&t).map_err(|_| bad())?)),
    }
}

pub fn fmt_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Rational numbers adjoined i with i² = −1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianQ {
    pub re: Q,
    pub im: Q,
}

impl GaussianQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussianQ { re, im }
    }
    pub fn i() -> Self {
        GaussianQ::new(Q::zero(), Q::one())
    }
    pub fn real(re: Q) -> Self {
        GaussianQ::new(re, Q::zero())
    }
    pub fn conj(&self) -> Self {
        GaussianQ::new(self.re.clone(), -self.im.clone())
    }
    pub fn norm(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
    pub fn scale(&self, k: &Q) -> Self {
        GaussianQ::new(&self.re * k, &self.im * k)
    }
}

impl Zero for GaussianQ {
    fn zero() -> Self {
        GaussianQ::new(Q::zero(), Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianQ {
    fn one() -> Self {
        GaussianQ::real(Q::one())
    }
}

impl Add for GaussianQ {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianQ::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianQ {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianQ::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianQ {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        GaussianQ::new(re, im)
    }
}

impl Div for GaussianQ {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        let c = o.conj();
        let p = self * c;
        GaussianQ::new(p.re / &n, p.im / n)
    }
}

impl Neg for GaussianQ {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianQ::new(-self.re, -self.im)
    }
}

impl AddAssign for GaussianQ {
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign for GaussianQ {
    fn sub_assign(&mut self, o: Self) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl MulAssign for GaussianQ {
    fn mul_assign(&mut self, o: Self) {
        *self = self.clone() * o;
    }
}

fn fmt_imag(im: &Q) -> String {
    // 1 -> "i", -1 -> "-i", 3/2 -> "3i/2", -1/4 -> "-i/4"
    let n = im.numer();
    let d = im.denom();
    let sign = if n.is_negative() { "-" } else { "" };
    let a = n.abs();
    let head = if a.is_one() {
        format!("{sign}i")
    } else {
        format!("{sign}{a}i")
    };
    if d.is_one() {
        head
    } else {
        format!("{head}/{d}")
    }
}

impl fmt::Display for GaussianQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_q(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}", fmt_imag(&self.im));
        }
        let im = fmt_imag(&self.im);
        if im.starts_with('-') {
            write!(f, "{}{}", fmt_q(&self.re), im)
        } else {
            write!(f, "{}+{}", fmt_q(&self.re), im)
        }
    }
}

/// Parses "3/2", "i/4", "3i/2", "-i", "1+2i", "1/2-3i/4".
pub fn parse_gaussian(s: &str) -> Result<GaussianQ> {
    let t = normalize_minus(s);
    if t.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    // split into signed terms at +/- that are not leading and not after '/'
    let bytes: Vec<char> = t.chars().collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for k in 1..bytes.len() {
        if (bytes[k] == '+' || bytes[k] == '-') && bytes[k - 1] != '/' {
            terms.push(bytes[start..k].iter().collect::<String>());
            start = k;
        }
    }
    terms.push(bytes[start..].iter().collect::<String>());
    let mut out = GaussianQ::zero();
    for term in terms {
        let term = term.trim_start_matches('+').to_string();
        if term.contains('i') {
            let mut r = term.replacen('i', "", 1);
            if r.is_empty() || r == "-" || r.starts_with('/') || r.starts_with("-/") {
                r = r.replacen('/', "1/", 1);
                if r.is_empty() || r == "-" {
                    r.push('1');
                }
            }
            out.im += parse_q(&r)?;
        } else {
            out.re += parse_q(&term)?;
        }
    }
    Ok(out)
}

impl Scalar for GaussianQ {
    fn from_q(v: Q) -> Self {
        GaussianQ::real(v)
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        parse_gaussian(s)
    }
}

/// gcd of the entries (non-negative); 0 for the zero vector.
pub fn content(v: &[Z]) -> Z {
    v.iter().fold(Z::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[Z]) -> bool {
    content(v).is_one()
}

/// Primitive integer vector on the ray through a nonzero rational vector.
pub fn primitive_of_rational(v: &[Q]) -> Option<Vec<Z>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let l = v.iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Z> = v.iter().map(|x| (x * zq(&l)).to_integer()).collect();
    let g = content(&ints);
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Primitive vector and the lattice multiple: v = k · prim.
pub fn primitive_split(v: &[Q]) -> Option<(Vec<Z>, Q)> {
    let p = primitive_of_rational(v)?;
    let (i, pi) = p.iter().enumerate().find(|(_, x)| !x.is_zero())?;
    Some((p.clone(), &v[i] / zq(pi)))
}

pub fn to_q_vec(v: &[Z]) -> Vec<Q> {
    v.iter().map(zq).collect()
}

pub fn zvec(v: &[i64]) -> Vec<Z> {
    v.iter().map(|&x| Z::from(x)).collect()
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |s, (x, y)| s + x * y)
}

pub fn dot_z(a: &[Z], b: &[Z]) -> Z {
    a.iter().zip(b).fold(Z::zero(), |s, (x, y)| s + x * y)
}

pub fn add_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_q(a: &[Q], k: &Q) -> Vec<Q> {
    a.iter().map(|x| x * k).collect()
}

pub fn factorial(n: u64) -> Z {
    (1..=n).fold(Z::one(), |acc, k| acc * Z::from(k))
}

/// Serde helpers: exact scalars travel as strings.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(v))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let raw = StrOrInt::deserialize(d)?;
        raw.to_q().map_err(serde::de::Error::custom)
    }

    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    pub(crate) enum StrOrInt {
        S(String),
        I(i64),
    }
    impl StrOrInt {
        pub(crate) fn to_q(&self) -> Result<Q> {
            match self {
                StrOrInt::S(s) => parse_q(s),
                StrOrInt::I(i) => Ok(q(*i)),
            }
        }
    }
}

pub mod serde_qvec {
    use super::serde_q::StrOrInt;
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let raw: Vec<StrOrInt> = Vec::deserialize(d)?;
        raw.iter()
            .map(|r| r.to_q().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_zvec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Z], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            match i64::try_from(x) {
                Ok(i) => seq.serialize_element(&i)?,
                Err(_) => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Z>, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum E {
            I(i64),
            S(String),
        }
        let raw: Vec<E> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|e| match e {
                E::I(i) => Ok(Z::from(i)),
                E::S(s) => Z::from_str(&normalize_minus(&s)).map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

pub mod serde_zvecs {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "super::serde_zvec")] Vec<Z>);

    pub fn serialize<S: Serializer>(v: &[Vec<Z>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<W> = v.iter().map(|x| W(x.clone())).collect();
        w.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Z>>, D::Error> {
        let w: Vec<W> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|x| x.0).collect())
    }
}

pub mod serde_qvecs {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "super::serde_qvec")] Vec<Q>);

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<W> = v.iter().map(|x| W(x.clone())).collect();
        w.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
        let w: Vec<W> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|x| x.0).collect())
    }
}
