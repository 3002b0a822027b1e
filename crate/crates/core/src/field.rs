//! Coefficient fields.
//!
//! Everything in the crate is exact. The workhorse field is [`Rat`]; the
//! rational function field [`RatFunc`] = ℚ(t) is used to reason about the
//! generic fiber of one-parameter families.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rat = BigRational;

/// A field of characteristic zero with exact arithmetic.
///
/// `Ord` is only used to produce canonical orderings of clusters, it carries
/// no algebraic meaning.
pub trait Field:
    Clone
    + fmt::Debug
    + Eq
    + Ord
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rat(r: &Rat) -> Self;

    /// Scalar by which a nonzero coefficient vector is divided to reach its
    /// canonical representative. Returns one for the all-zero vector.
    fn normalizer(coeffs: &[Self]) -> Self;

    /// Monic gcd of two polynomials over this field.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        a.euclid_gcd(b)
    }
}

impl Field for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    /// Signed content: dividing by it yields coprime integers whose first
    /// nonzero entry is positive.
    fn normalizer(coeffs: &[Self]) -> Self {
        let Some(first) = coeffs.iter().find(|c| !c.is_zero()) else {
            return Rat::one();
        };
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let content = Rat::new(num_gcd, den_lcm);
        if first.is_negative() {
            -content
        } else {
            content
        }
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        crate::poly::modular_gcd(a, b)
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders a rational as `"num/den"`, or `"num"` when integral.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// A rational carried through JSON as a `"num/den"` string. Bare JSON integers
/// are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rat);

impl serde::Serialize for RatStr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(&self.0))
    }
}

impl<'de> serde::Deserialize<'de> for RatStr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(RatStr(int(n))),
            Raw::Text(s) => parse_rat(&s)
                .map(RatStr)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))),
        }
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Element of ℚ(t), kept as `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly<Rat>,
    den: Poly<Rat>,
}

impl RatFunc {
    pub fn new(num: Poly<Rat>, den: Poly<Rat>) -> Self {
        assert!(!den.is_zero(), "zero denominator in rational function");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().clone();
        RatFunc {
            num: num.scale(&(Rat::one() / lead.clone())),
            den: den.scale(&(Rat::one() / lead)),
        }
    }

    pub fn from_poly(p: Poly<Rat>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::new(vec![Rat::zero(), Rat::one()]))
    }

    pub fn numer(&self) -> &Poly<Rat> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Rat> {
        &self.den
    }

    /// Value at `t = t0`, or `None` at a pole.
    pub fn eval(&self, t0: &Rat) -> Option<Rat> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t0) / d)
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den);
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den }
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero in ℚ(t)");
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .coeffs()
            .cmp(other.num.coeffs())
            .then_with(|| self.den.coeffs().cmp(other.den.coeffs()))
    }
}

impl Field for RatFunc {
    fn from_rat(r: &Rat) -> Self {
        RatFunc::from_poly(Poly::constant(r.clone()))
    }

    /// Makes the first nonzero entry equal to one.
    fn normalizer(coeffs: &[Self]) -> Self {
        coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(RatFunc::one)
    }

    /// Euclid over ℚ(t) pays a ℚ[t] gcd for every coefficient operation, so
    /// this runs a primitive pseudo-remainder sequence over ℚ[t] instead.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        let (mut f, mut g) = (primitive(clear_denominators(a)), primitive(clear_denominators(b)));
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        while !g.is_empty() {
            let r = primitive(pseudo_rem(&f, &g));
            f = g;
            g = r;
        }
        let lead = match f.last() {
            Some(l) => l.clone(),
            None => return Poly::zero(),
        };
        Poly::new(f.into_iter().map(|c| RatFunc::new(c, lead.clone())).collect())
    }
}

/// Coefficients in ℚ[t] of a nonzero multiple of `p`, lowest x-power first;
/// empty for the zero polynomial.
fn clear_denominators(p: &Poly<RatFunc>) -> Vec<Poly<Rat>> {
    let mut l = Poly::one();
    for c in p.coeffs() {
        let g = l.gcd(&c.den);
        l = l.mul(&c.den.div_rem(&g).0);
    }
    p.coeffs().iter().map(|c| c.num.mul(&l.div_rem(&c.den).0)).collect()
}

fn primitive(mut p: Vec<Poly<Rat>>) -> Vec<Poly<Rat>> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let mut content = Poly::zero();
    for c in &p {
        content = content.gcd(c);
        if content.degree() == Some(0) {
            break;
        }
    }
    if p.is_empty() || content.degree() == Some(0) {
        return p;
    }
    p.iter().map(|c| c.div_rem(&content).0).collect()
}

/// Pseudo-remainder of `f` by `g` over ℚ[t]; `g` nonzero with trimmed top.
fn pseudo_rem(f: &[Poly<Rat>], g: &[Poly<Rat>]) -> Vec<Poly<Rat>> {
    let lc = g.last().expect("nonzero divisor");
    let dg = g.len() - 1;
    let mut r: Vec<Poly<Rat>> = f.to_vec();
    while r.len() > dg {
        let top = r.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let k = r.len() - dg;
        for c in r.iter_mut() {
            *c = c.mul(lc);
        }
        for (j, gj) in g[..dg].iter().enumerate() {
            r[k + j] = r[k + j].sub(&top.mul(gj));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}
